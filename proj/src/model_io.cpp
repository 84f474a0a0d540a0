#include "oomlab/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include "oomlab/errors.hpp"

namespace oomlab {
namespace {

namespace fs = std::filesystem;

void check_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& context) {
  if (!j.is_object()) throw SchemaError(context + ": expected a JSON object");
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items()) {
    if (!ok.count(key)) throw SchemaError(context + ": unknown field '" + key + "'");
  }
}

const Json& require(const Json& j, const char* key, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(context + ": missing field '" + key + "'");
  return *it;
}

double as_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw SchemaError("field '" + field + "' must be a number");
  return j.get<double>();
}

std::size_t as_count(const Json& j, const std::string& field) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw SchemaError("field '" + field + "' must be a nonnegative integer");
  }
  return j.get<std::size_t>();
}

std::string as_string(const Json& j, const std::string& field) {
  if (!j.is_string()) throw SchemaError("field '" + field + "' must be a string");
  return j.get<std::string>();
}

Complex as_complex(const Json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw SchemaError("field '" + field + "' must hold complex numbers as [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Eigen::MatrixXd as_real_matrix(const Json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) {
    throw SchemaError("field '" + field + "' must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw SchemaError("field '" + field + "' must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    for (std::size_t k = 0; k < n; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = as_number(j[i][k], field);
    }
  }
  return m;
}

Eigen::MatrixXcd as_complex_matrix(const Json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) {
    throw SchemaError("field '" + field + "' must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
  }
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) {
      throw SchemaError("field '" + field + "' must be a " + std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    for (std::size_t k = 0; k < n; ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = as_complex(j[i][k], field);
    }
  }
  return m;
}

Eigen::VectorXd as_real_vector(const Json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) {
    throw SchemaError("field '" + field + "' must be an array of length " + std::to_string(n));
  }
  Eigen::VectorXd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = as_number(j[i], field);
  return v;
}

Eigen::VectorXcd as_complex_vector(const Json& j, std::size_t n, const std::string& field) {
  if (!j.is_array() || j.size() != n) {
    throw SchemaError("field '" + field + "' must be an array of length " + std::to_string(n));
  }
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = as_complex(j[i], field);
  return v;
}

Alphabet as_alphabet(const Json& j) {
  if (!j.is_array()) throw SchemaError("field 'alphabet' must be an array of strings");
  std::vector<std::string> labels;
  for (const auto& s : j) labels.push_back(as_string(s, "alphabet"));
  try {
    return Alphabet(std::move(labels));
  } catch (const ValidationError& e) {
    throw SchemaError(std::string("field 'alphabet': ") + e.what());
  }
}

std::size_t positive_dim(const Json& j, const char* field) {
  const std::size_t n = as_count(j, field);
  if (n == 0) throw SchemaError(std::string("field '") + field + "' must be >= 1");
  return n;
}

// Symbol-keyed matrices must name every symbol exactly once.
std::vector<Eigen::MatrixXd> per_symbol_matrices(const Json& j, const Alphabet& alphabet, std::size_t n,
                                                 const char* field) {
  if (!j.is_object()) throw SchemaError(std::string("field '") + field + "' must map symbols to matrices");
  for (const auto& [key, value] : j.items()) alphabet.index_of(key);
  std::vector<Eigen::MatrixXd> out;
  for (const auto& label : alphabet.labels()) {
    auto it = j.find(label);
    if (it == j.end()) throw SchemaError(std::string("field '") + field + "' has no entry for symbol '" + label + "'");
    out.push_back(as_real_matrix(*it, n, std::string(field) + "." + label));
  }
  return out;
}

Json real_matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json complex_matrix_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(complex_json(m(i, k)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string residual_summary(const ValidationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "OOM validation failed: |l(v)-1| = " << r.init_residual << ", |l*sum(T)-l|_inf = " << r.eval_residual
     << ", min word probability = " << r.min_probability << " (depth " << r.depth << ")";
  return os.str();
}

std::string residual_summary(const NcValidationReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "NC-OOM validation failed: |l(v)-1| = " << r.init_residual << ", |l*T_1-l|_inf = " << r.unit_residual
     << ", worst negative value = " << r.worst_negative << ", worst imaginary part = " << r.worst_imaginary;
  return os.str();
}

LoadedModel parse_ref(const Json& j, const fs::path& base_dir, bool validate) {
  if (j.is_string()) return parse_model_file(base_dir / j.get<std::string>(), validate);
  return parse_model(j, base_dir, validate);
}

LoadedModel parse_mixture(const Json& j, const fs::path& base_dir, bool validate) {
  const Json& parts_json = require(j, "parts", "mixture");
  if (!parts_json.is_array() || parts_json.empty()) throw SchemaError("field 'parts' must be a non-empty array");
  std::vector<std::pair<double, OomModel>> classical;
  std::vector<std::pair<double, NcOomModel>> nc;
  for (const auto& part : parts_json) {
    check_keys(part, {"weight", "model"}, "mixture part");
    const double w = as_number(require(part, "weight", "mixture part"), "weight");
    const LoadedModel sub = parse_ref(require(part, "model", "mixture part"), base_dir, validate);
    if (const auto* ncm = std::get_if<NcOomModel>(&sub.model)) {
      nc.emplace_back(w, *ncm);
    } else {
      classical.emplace_back(w, as_oom(sub.model));
    }
  }
  if (!classical.empty() && !nc.empty()) throw SchemaError("mixture mixes classical and NC-OOM parts");
  LoadedModel out{OomModel(bernoulli_oom(0.5)), {}, {}};
  if (nc.empty()) {
    out.model = mixture_direct_sum(classical);
  } else {
    out.model = nc_mixture_direct_sum(nc);
  }
  return out;
}

std::string format_double(double x) {
  if (!std::isfinite(x)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

bool is_scalar(const Json& j) { return !j.is_array() && !j.is_object(); }

void write_json(std::ostringstream& os, const Json& j, int indent, int level) {
  const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(indent * level), ' ');
  if (j.is_object()) {
    if (j.empty()) {
      os << "{}";
      return;
    }
    os << "{\n";
    bool first = true;
    for (const auto& [key, value] : j.items()) {
      if (!first) os << ",\n";
      first = false;
      os << pad << Json(key).dump() << ": ";
      write_json(os, value, indent, level + 1);
    }
    os << "\n" << close_pad << "}";
  } else if (j.is_array()) {
    // Arrays of scalars, and arrays of arrays of scalars, stay on one line.
    bool flat = true;
    for (const auto& e : j) {
      if (e.is_object()) flat = false;
      if (e.is_array()) {
        for (const auto& inner : e) flat = flat && (is_scalar(inner) || (inner.is_array() && std::all_of(
                                                                           inner.begin(), inner.end(), is_scalar)));
      }
    }
    if (flat) {
      os << "[";
      bool first = true;
      for (const auto& e : j) {
        if (!first) os << ", ";
        first = false;
        write_json(os, e, 0, 0);
      }
      os << "]";
      return;
    }
    os << "[\n";
    bool first = true;
    for (const auto& e : j) {
      if (!first) os << ",\n";
      first = false;
      os << pad;
      write_json(os, e, indent, level + 1);
    }
    os << "\n" << close_pad << "]";
  } else if (j.is_number_float()) {
    os << format_double(j.get<double>());
  } else {
    os << j.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::size_t spec_count(const Json& j, const char* key, std::size_t fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_count(*it, key);
}

double spec_number(const Json& j, const char* key, double fallback) {
  auto it = j.find(key);
  return it == j.end() ? fallback : as_number(*it, key);
}

std::vector<double> spec_grid(const Json& j) {
  const Json& g = require(j, "grid", "semicontinuity experiment");
  if (!g.is_array()) throw SchemaError("field 'grid' must be an array of numbers");
  std::vector<double> out;
  for (const auto& t : g) out.push_back(as_number(t, "grid"));
  return out;
}

HmmModel as_hmm(const AnyModel& m, const char* field) {
  if (const auto* h = std::get_if<HmmModel>(&m)) return *h;
  throw SchemaError(std::string("field '") + field + "' must reference an HMM model");
}

FamilySpec parse_family(const Json& j, const std::vector<double>& grid, const fs::path& base_dir) {
  const std::string kind = as_string(require(j, "kind", "family"), "kind");
  if (kind == "mixture_weight") {
    check_keys(j, {"kind", "base", "other"}, "family");
    return mixture_weight_family(as_oom(parse_ref(require(j, "base", "family"), base_dir, true).model),
                                 as_oom(parse_ref(require(j, "other", "family"), base_dir, true).model), grid);
  }
  if (kind == "hmm_interpolation") {
    check_keys(j, {"kind", "limit", "far"}, "family");
    return hmm_interpolation_family(as_hmm(parse_ref(require(j, "limit", "family"), base_dir, true).model, "limit"),
                                    as_hmm(parse_ref(require(j, "far", "family"), base_dir, true).model, "far"), grid);
  }
  if (kind == "bernoulli_coalescing") {
    check_keys(j, {"kind", "center"}, "family");
    return bernoulli_coalescing_family(as_number(require(j, "center", "family"), "center"), grid);
  }
  if (kind == "constant") {
    check_keys(j, {"kind", "model"}, "family");
    return constant_family(as_oom(parse_ref(require(j, "model", "family"), base_dir, true).model), grid);
  }
  throw SchemaError("unknown family kind '" + kind + "'");
}

}  // namespace

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("cannot open '" + path.string() + "'");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // Translate the byte offset into line/column.
    std::size_t line = 1;
    std::size_t col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) + ": parse error");
  }
}

LoadedModel parse_model(const Json& j, const fs::path& base_dir, bool validate) {
  if (!j.is_object()) throw SchemaError("model must be a JSON object");
  const std::string type = as_string(require(j, "type", "model"), "type");
  LoadedModel out{OomModel(bernoulli_oom(0.5)), {}, {}};
  if (type == "oom") {
    check_keys(j, {"type", "name", "description", "alphabet", "dim", "operators", "init", "eval"}, "oom model");
    const Alphabet alphabet = as_alphabet(require(j, "alphabet", "oom model"));
    const std::size_t n = positive_dim(require(j, "dim", "oom model"), "dim");
    auto ops = per_symbol_matrices(require(j, "operators", "oom model"), alphabet, n, "operators");
    auto init = as_real_vector(require(j, "init", "oom model"), n, "init");
    Eigen::RowVectorXd eval = as_real_vector(require(j, "eval", "oom model"), n, "eval").transpose();
    OomModel m(alphabet, std::move(ops), std::move(init), std::move(eval));
    if (validate) {
      const ValidationReport r = validate_oom(m);
      if (!r.passed) throw ValidationError(residual_summary(r));
    }
    out.model = std::move(m);
  } else if (type == "hmm") {
    check_keys(j, {"type", "name", "description", "alphabet", "n_states", "transition_emission", "init"}, "hmm model");
    const Alphabet alphabet = as_alphabet(require(j, "alphabet", "hmm model"));
    const std::size_t n = positive_dim(require(j, "n_states", "hmm model"), "n_states");
    auto te = per_symbol_matrices(require(j, "transition_emission", "hmm model"), alphabet, n, "transition_emission");
    auto init = as_real_vector(require(j, "init", "hmm model"), n, "init");
    out.model = HmmModel(alphabet, std::move(te), std::move(init));
  } else if (type == "ncoom") {
    check_keys(j, {"type", "name", "description", "algebra", "dim", "op_per_basis", "init", "eval"}, "ncoom model");
    const Json& alg_json = require(j, "algebra", "ncoom model");
    check_keys(alg_json, {"blocks"}, "algebra");
    const Json& blocks = require(alg_json, "blocks", "algebra");
    if (!blocks.is_array()) throw SchemaError("field 'algebra.blocks' must be an array of integers");
    std::vector<int> dims;
    for (const auto& b : blocks) {
      if (!b.is_number_integer()) throw SchemaError("field 'algebra.blocks' must be an array of integers");
      dims.push_back(b.get<int>());
    }
    CStarAlgebra alg = [&] {
      try {
        return CStarAlgebra(dims);
      } catch (const ValidationError& e) {
        throw SchemaError(std::string("field 'algebra.blocks': ") + e.what());
      }
    }();
    const std::size_t n = positive_dim(require(j, "dim", "ncoom model"), "dim");
    const Json& ops_json = require(j, "op_per_basis", "ncoom model");
    if (!ops_json.is_array() || ops_json.size() != alg.total_dim()) {
      throw SchemaError("field 'op_per_basis' must list " + std::to_string(alg.total_dim()) + " matrices");
    }
    std::vector<Eigen::MatrixXcd> ops;
    for (const auto& op : ops_json) ops.push_back(as_complex_matrix(op, n, "op_per_basis"));
    auto init = as_complex_vector(require(j, "init", "ncoom model"), n, "init");
    Eigen::RowVectorXcd eval = as_complex_vector(require(j, "eval", "ncoom model"), n, "eval").transpose();
    NcOomModel m(alg, std::move(ops), std::move(init), std::move(eval));
    if (validate) {
      const NcValidationReport r = validate_ncoom(m);
      if (!r.passed) throw ValidationError(residual_summary(r));
    }
    out.model = std::move(m);
  } else if (type == "mixture") {
    check_keys(j, {"type", "name", "description", "parts"}, "mixture model");
    out = parse_mixture(j, base_dir, validate);
  } else {
    throw SchemaError("unknown model type '" + type + "'");
  }
  if (auto it = j.find("name"); it != j.end()) out.name = as_string(*it, "name");
  if (auto it = j.find("description"); it != j.end()) out.description = as_string(*it, "description");
  return out;
}

LoadedModel parse_model_file(const fs::path& path, bool validate) {
  const Json j = read_json_file(path);
  try {
    return parse_model(j, path.parent_path(), validate);
  } catch (const SchemaError& e) {
    throw SchemaError(path.string() + ": " + e.what());
  }
}

Json serialize_model(const OomModel& m) {
  Json j;
  j["type"] = "oom";
  j["alphabet"] = m.alphabet().labels();
  j["dim"] = m.dim();
  Json ops = Json::object();
  for (Symbol d = 0; d < m.alphabet().size(); ++d) ops[m.alphabet().label(d)] = real_matrix_json(m.op(d));
  j["operators"] = std::move(ops);
  j["init"] = std::vector<double>(m.init().begin(), m.init().end());
  j["eval"] = std::vector<double>(m.eval().begin(), m.eval().end());
  return j;
}

Json serialize_model(const HmmModel& m) {
  Json j;
  j["type"] = "hmm";
  j["alphabet"] = m.alphabet().labels();
  j["n_states"] = m.n_states();
  Json te = Json::object();
  for (Symbol d = 0; d < m.alphabet().size(); ++d) {
    te[m.alphabet().label(d)] = real_matrix_json(m.transition_emission()[d]);
  }
  j["transition_emission"] = std::move(te);
  j["init"] = std::vector<double>(m.init().begin(), m.init().end());
  return j;
}

Json serialize_model(const NcOomModel& m) {
  Json j;
  j["type"] = "ncoom";
  j["algebra"] = Json{{"blocks", m.algebra().block_dims()}};
  j["dim"] = m.dim();
  Json ops = Json::array();
  for (const auto& t : m.op_per_basis()) ops.push_back(complex_matrix_json(t));
  j["op_per_basis"] = std::move(ops);
  Json init = Json::array();
  for (Eigen::Index i = 0; i < m.init().size(); ++i) init.push_back(complex_json(m.init()(i)));
  Json eval = Json::array();
  for (Eigen::Index i = 0; i < m.eval().size(); ++i) eval.push_back(complex_json(m.eval()(i)));
  j["init"] = std::move(init);
  j["eval"] = std::move(eval);
  return j;
}

Json serialize_model(const AnyModel& m) {
  return std::visit([](const auto& model) { return serialize_model(model); }, m);
}

AlgebraElement parse_element(const Json& j, const CStarAlgebra& algebra) {
  if (!j.is_array() || j.size() != algebra.num_blocks()) {
    throw SchemaError("algebra element must list " + std::to_string(algebra.num_blocks()) + " blocks");
  }
  std::vector<Eigen::MatrixXcd> blocks;
  for (std::size_t k = 0; k < algebra.num_blocks(); ++k) {
    blocks.push_back(as_complex_matrix(j[k], algebra.block_dims()[k], "element block " + std::to_string(k)));
  }
  return AlgebraElement(algebra, std::move(blocks));
}

Json serialize_element(const AlgebraElement& a) {
  Json j = Json::array();
  for (const auto& b : a.blocks()) j.push_back(complex_matrix_json(b));
  return j;
}

OomModel as_oom(const AnyModel& m) {
  if (const auto* o = std::get_if<OomModel>(&m)) return *o;
  if (const auto* h = std::get_if<HmmModel>(&m)) return hmm_to_oom(*h);
  throw SchemaError("expected a classical model (oom, hmm or mixture), got an NC-OOM");
}

ExperimentReport run_experiment_file(const fs::path& path, std::uint64_t seed) {
  const Json j = read_json_file(path);
  const fs::path base = path.parent_path();
  const std::string kind = as_string(require(j, "experiment", "experiment spec"), "experiment");
  ExperimentReport r;
  if (kind == "additivity") {
    check_keys(j, {"experiment", "name", "description", "seed", "parts", "max_level", "tol_rel"}, "experiment spec");
    const Json& parts_json = require(j, "parts", "experiment spec");
    if (!parts_json.is_array() || parts_json.empty()) throw SchemaError("field 'parts' must be a non-empty array");
    std::vector<std::pair<double, OomModel>> parts;
    for (const auto& part : parts_json) {
      check_keys(part, {"weight", "model"}, "experiment part");
      parts.emplace_back(as_number(require(part, "weight", "experiment part"), "weight"),
                         as_oom(parse_ref(require(part, "model", "experiment part"), base, true).model));
    }
    r = run_additivity(parts, spec_count(j, "max_level", parts.size() + 1), spec_number(j, "tol_rel", kDefaultRankTol));
  } else if (kind == "semicontinuity") {
    check_keys(j, {"experiment", "name", "description", "seed", "family", "grid", "max_level", "tol_rel"},
               "experiment spec");
    const FamilySpec family = parse_family(require(j, "family", "experiment spec"), spec_grid(j), base);
    r = run_semicontinuity(family, spec_count(j, "max_level", 4), spec_number(j, "tol_rel", kDefaultRankTol));
  } else if (kind == "upperbound") {
    check_keys(j,
               {"experiment", "name", "description", "seed", "model", "past_len", "horizon", "max_level", "tol_rel",
                "cluster_tol"},
               "experiment spec");
    UpperBoundOptions o;
    o.past_len = spec_count(j, "past_len", o.past_len);
    o.horizon = spec_count(j, "horizon", o.horizon);
    o.max_level = spec_count(j, "max_level", o.max_level);
    o.tol_rel = spec_number(j, "tol_rel", o.tol_rel);
    o.cluster_tol = spec_number(j, "cluster_tol", o.cluster_tol);
    const LoadedModel m = parse_ref(require(j, "model", "experiment spec"), base, true);
    if (const auto* h = std::get_if<HmmModel>(&m.model)) {
      r = run_upperbound(ProcessOracle(*h), o);
    } else {
      r = run_upperbound(ProcessOracle(as_oom(m.model)), o);
    }
  } else {
    throw SchemaError("unknown experiment '" + kind + "'");
  }
  if (auto it = j.find("seed"); it != j.end()) seed = as_count(*it, "seed");
  if (auto it = j.find("name"); it != j.end()) r.name = as_string(*it, "name");
  r.seed = seed;
  return r;
}

Json report_to_json(const ExperimentReport& r, bool include_runtime) {
  Json j;
  j["name"] = r.name;
  j["verdict"] = std::string(to_string(r.verdict));
  j["predicate"] = r.predicate;
  j["note"] = r.note;
  j["seed"] = r.seed;
  Json tol = Json::object();
  for (const auto& [k, v] : r.tolerances) tol[k] = v;
  j["tolerances"] = std::move(tol);
  Json points = Json::array();
  for (const auto& p : r.points) {
    Json row;
    row["label"] = p.label;
    for (const auto& [k, v] : p.values) row[k] = v;
    points.push_back(std::move(row));
  }
  j["points"] = std::move(points);
  if (include_runtime) j["runtime_seconds"] = r.runtime_seconds;
  return j;
}

std::string report_to_csv(const ExperimentReport& r) {
  std::vector<std::string> columns;
  for (const auto& p : r.points) {
    for (const auto& [k, v] : p.values) {
      if (std::find(columns.begin(), columns.end(), k) == columns.end()) columns.push_back(k);
    }
  }
  std::ostringstream os;
  os << "label";
  for (const auto& c : columns) os << "," << csv_field(c);
  os << "\n";
  for (const auto& p : r.points) {
    os << csv_field(p.label);
    for (const auto& c : columns) {
      os << ",";
      for (const auto& [k, v] : p.values) {
        if (k == c && std::isfinite(v)) os << format_double(v);
      }
    }
    os << "\n";
  }
  return os.str();
}

std::string dump_json(const Json& j, int indent) {
  std::ostringstream os;
  write_json(os, j, indent, 0);
  return os.str();
}

}  // namespace oomlab
