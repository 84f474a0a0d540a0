#include "oomlab/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "oomlab/causal.hpp"
#include "oomlab/dimension.hpp"
#include "oomlab/errors.hpp"
#include "oomlab/experiments.hpp"
#include "oomlab/model_io.hpp"
#include "oomlab/ncoom.hpp"

namespace oomlab {
namespace {

namespace fs = std::filesystem;

struct Options {
  std::string model;
  std::string word;
  std::string basis;
  std::string factors;
  std::string spec;
  std::string out_dir = ".";
  std::string out_file;
  std::size_t max_level = 4;
  std::size_t depth = kDefaultValidationDepth;
  std::size_t nc_depth = 4;
  std::size_t samples = 200;
  std::size_t past_len = 3;
  std::size_t horizon = 2;
  std::size_t length = 100;
  std::size_t jobs = 1;
  double tol_rel = kDefaultRankTol;
  double neg_tol = kDefaultNegTol;
  double cluster_tol = kDefaultClusterTol;
  std::uint64_t seed = 0;
  bool csv = false;
  bool timing = false;
};

std::uint64_t default_seed() {
  if (const char* env = std::getenv("OOMLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("OOMLAB_SEED must be a nonnegative integer");
    }
  }
  return 0;
}

void flatten(const Json& j, const std::string& prefix, std::ostream& os) {
  for (const auto& [key, value] : j.items()) {
    const std::string name = prefix.empty() ? key : prefix + "." + key;
    if (value.is_object()) {
      flatten(value, name, os);
    } else if (!value.is_array()) {
      os << name << "," << (value.is_string() ? value.get<std::string>() : dump_json(value)) << "\n";
    }
  }
}

void emit(const Json& j, const Options& o, std::ostream& out) {
  if (o.csv) {
    out << "key,value\n";
    flatten(j, "", out);
  } else {
    out << dump_json(j) << "\n";
  }
}

Json dimension_json(const DimensionReport& r) {
  Json j;
  Json ranks = Json::object();
  for (const auto& [level, rank] : r.rank_by_level) ranks[std::to_string(level)] = rank;
  j["rank_by_level"] = std::move(ranks);
  j["stabilized"] = r.stabilized;
  j["dimension"] = r.dimension ? Json(*r.dimension) : Json(nullptr);
  j["stable_from"] = r.stable_from;
  j["tol_rel"] = r.tol_rel;
  return j;
}

NcOomModel as_nc(const AnyModel& m) {
  if (const auto* nc = std::get_if<NcOomModel>(&m)) return *nc;
  return embed_classical(as_oom(m));
}

int cmd_validate(const Options& o, std::ostream& out) {
  const LoadedModel lm = parse_model_file(o.model, false);
  Json j;
  bool passed = false;
  if (const auto* nc = std::get_if<NcOomModel>(&lm.model)) {
    const NcValidationReport r = validate_ncoom(*nc, o.nc_depth, o.samples, o.seed, o.neg_tol);
    j["type"] = "ncoom";
    j["init_residual"] = r.init_residual;
    j["unit_residual"] = r.unit_residual;
    j["worst_negative"] = r.worst_negative;
    j["worst_imaginary"] = r.worst_imaginary;
    j["depth"] = r.depth;
    j["samples"] = r.samples;
    j["seed"] = r.seed;
    passed = r.passed;
  } else {
    const OomModel m = as_oom(lm.model);
    const ValidationReport r = validate_oom(m, o.depth, o.neg_tol);
    j["type"] = "oom";
    j["init_residual"] = r.init_residual;
    j["eval_residual"] = r.eval_residual;
    j["min_probability"] = r.min_probability;
    j["worst_word"] = m.alphabet().format(r.worst_word);
    j["depth"] = r.depth;
    passed = r.passed;
    if (passed) j["kolmogorov_residual"] = kolmogorov_residual(m, o.depth);
  }
  j["passed"] = passed;
  emit(j, o, out);
  return passed ? kExitOk : kExitFail;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const LoadedModel lm = parse_model_file(o.model);
  if (std::holds_alternative<NcOomModel>(lm.model)) throw CLI::ValidationError("eval", "NC-OOM models need nc-eval");
  const OomModel m = as_oom(lm.model);
  const Word w = m.alphabet().parse(o.word);
  Json j;
  j["word"] = m.alphabet().format(w);
  j["probability"] = word_probability(m, w, o.neg_tol);
  emit(j, o, out);
  return kExitOk;
}

int cmd_dim(const Options& o, std::ostream& out, bool nc) {
  const LoadedModel lm = parse_model_file(o.model);
  DimensionReport r;
  if (nc || std::holds_alternative<NcOomModel>(lm.model)) {
    r = nc_process_dimension(as_nc(lm.model), o.max_level, o.tol_rel, o.jobs);
  } else if (const auto* h = std::get_if<HmmModel>(&lm.model)) {
    r = process_dimension(ProcessOracle(*h), o.max_level, o.tol_rel, o.jobs);
  } else {
    r = process_dimension(as_oom(lm.model), o.max_level, o.tol_rel, o.jobs);
  }
  if (o.csv) {
    out << "level,rank\n";
    for (const auto& [level, rank] : r.rank_by_level) out << level << "," << rank << "\n";
  } else {
    out << dump_json(dimension_json(r)) << "\n";
  }
  return r.stabilized ? kExitOk : kExitInconclusive;
}

int cmd_minimize(const Options& o, std::ostream& out) {
  const LoadedModel lm = parse_model_file(o.model);
  const OomModel m = as_oom(lm.model);
  const OomModel reduced = minimize_oom(m, o.tol_rel);
  // Check length dim_1 + dim_2, capped so the word count stays manageable.
  std::size_t check_len = m.dim() + reduced.dim();
  while (check_len > 0 && count_words(m.alphabet().size(), 0, check_len) > 2'000'000) --check_len;
  Json j;
  j["original_dim"] = m.dim();
  j["minimized_dim"] = reduced.dim();
  j["check_length"] = check_len;
  j["max_deviation"] = max_word_deviation(m, reduced, check_len);
  j["model"] = serialize_model(reduced);
  if (!o.out_file.empty()) {
    std::ofstream f(o.out_file);
    if (!f) throw SchemaError("cannot write '" + o.out_file + "'");
    f << dump_json(serialize_model(reduced)) << "\n";
  }
  emit(j, o, out);
  return kExitOk;
}

int cmd_causal(const Options& o, std::ostream& out) {
  const LoadedModel lm = parse_model_file(o.model);
  const ProcessOracle p = [&]() -> ProcessOracle {
    if (const auto* h = std::get_if<HmmModel>(&lm.model)) return ProcessOracle(*h);
    return ProcessOracle(as_oom(lm.model));
  }();
  const CausalStatePartition c = enumerate_causal_states(p, o.past_len, o.horizon, o.cluster_tol);
  Json j;
  j["past_len"] = c.past_len;
  j["horizon"] = c.horizon;
  j["cluster_tol"] = c.cluster_tol;
  j["surrogate"] = "pasts of exact length past_len stand in for infinite pasts";
  Json states = Json::array();
  for (const auto& s : c.states) {
    Json st;
    st["weight"] = s.weight;
    Json members = Json::array();
    for (const auto& w : s.members) members.push_back(p.alphabet().format(w));
    st["members"] = std::move(members);
    st["representative"] = std::vector<double>(s.representative.begin(), s.representative.end());
    states.push_back(std::move(st));
  }
  j["num_states"] = c.states.size();
  j["states"] = std::move(states);
  j["statistical_complexity_bits"] = statistical_complexity(c);
  j["topological_complexity_bits"] = topological_complexity(c);
  j["span_rank"] = causal_span_rank(c, o.tol_rel);
  emit(j, o, out);
  return kExitOk;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoul(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--basis", "expected comma-separated basis indices");
    }
  }
  return out;
}

int cmd_nc_eval(const Options& o, std::ostream& out) {
  const LoadedModel lm = parse_model_file(o.model);
  const NcOomModel m = as_nc(lm.model);
  Complex value;
  if (!o.factors.empty()) {
    Json f;
    try {
      f = Json::parse(o.factors);
    } catch (const nlohmann::json::parse_error&) {
      throw CLI::ValidationError("--factors", "not valid JSON");
    }
    if (!f.is_array()) throw CLI::ValidationError("--factors", "expected a JSON list of elements");
    Tensor t;
    for (const auto& e : f) t.push_back(parse_element(e, m.algebra()));
    value = nc_evaluate(m, t);
  } else {
    const std::vector<std::size_t> idx = parse_indices(o.basis);
    for (std::size_t b : idx) {
      if (b >= m.algebra().total_dim()) throw CLI::ValidationError("--basis", "basis index out of range");
    }
    value = nc_evaluate_basis(m, Word(idx.begin(), idx.end()));
  }
  Json j;
  j["re"] = value.real();
  j["im"] = value.imag();
  emit(j, o, out);
  return kExitOk;
}

int cmd_sample(const Options& o, std::ostream& out) {
  const LoadedModel lm = parse_model_file(o.model);
  const OomModel m = as_oom(lm.model);
  const Word w = sample_trajectory(m, o.length, o.seed, o.neg_tol);
  Json j;
  j["seed"] = o.seed;
  j["length"] = o.length;
  j["word"] = m.alphabet().format(w);
  emit(j, o, out);
  return kExitOk;
}

int cmd_experiment(const Options& o, std::ostream& out) {
  const ExperimentReport r = run_experiment_file(o.spec, o.seed);
  const fs::path dir(o.out_dir);
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "report.json");
    if (!f) throw SchemaError("cannot write '" + (dir / "report.json").string() + "'");
    f << dump_json(report_to_json(r, o.timing)) << "\n";
  }
  {
    std::ofstream f(dir / "points.csv");
    if (!f) throw SchemaError("cannot write '" + (dir / "points.csv").string() + "'");
    f << report_to_csv(r);
  }
  if (o.csv) {
    out << report_to_csv(r);
  } else {
    out << dump_json(report_to_json(r, o.timing)) << "\n";
  }
  switch (r.verdict) {
    case Verdict::kPass:
      return kExitOk;
    case Verdict::kFail:
      return kExitFail;
    case Verdict::kInconclusive:
      return kExitInconclusive;
  }
  return kExitInconclusive;
}

}  // namespace

std::vector<std::string> cli_commands() {
  return {"validate", "eval", "dim", "minimize", "causal", "nc-eval", "nc-dim", "experiment", "sample"};
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"oomlab: observable operator models, process dimension and causal states"};
  app.require_subcommand(1);
  Options o;
  try {
    o.seed = default_seed();
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  app.add_flag("--csv", o.csv, "Emit CSV instead of JSON");
  app.fallthrough();

  auto model_opt = [&](CLI::App* sub) { sub->add_option("--model", o.model, "Model file (JSON)")->required(); };
  auto rank_opts = [&](CLI::App* sub) {
    sub->add_option("--max-level", o.max_level, "Largest Hankel level L")->check(CLI::PositiveNumber);
    sub->add_option("--tol-rel", o.tol_rel, "Relative singular value threshold");
    sub->add_option("--jobs", o.jobs, "Threads for the Hankel fill")->check(CLI::PositiveNumber);
  };

  auto* validate = app.add_subcommand("validate", "Check the model conditions");
  model_opt(validate);
  validate->add_option("--depth", o.depth, "Word length for the nonnegativity check");
  validate->add_option("--nc-depth", o.nc_depth, "Tensor length for NC positivity sampling");
  validate->add_option("--samples", o.samples, "Random positive tensors per length (NC-OOMs)");
  validate->add_option("--neg-tol", o.neg_tol, "Tolerance for negative probabilities");
  validate->add_option("--seed", o.seed, "Sampling seed");

  auto* eval = app.add_subcommand("eval", "Probability of a word");
  model_opt(eval);
  eval->add_option("--word", o.word, "Word, e.g. 101")->required();
  eval->add_option("--neg-tol", o.neg_tol, "Tolerance for negative probabilities");

  auto* dim = app.add_subcommand("dim", "Process dimension from Hankel ranks");
  model_opt(dim);
  rank_opts(dim);

  auto* minimize = app.add_subcommand("minimize", "Minimal equivalent OOM");
  model_opt(minimize);
  minimize->add_option("--tol-rel", o.tol_rel, "Relative span threshold");
  minimize->add_option("--out", o.out_file, "Also write the minimized model here");

  auto* causal = app.add_subcommand("causal", "Finite-horizon causal states");
  model_opt(causal);
  causal->add_option("--past-len", o.past_len, "Past length");
  causal->add_option("--horizon", o.horizon, "Future horizon");
  causal->add_option("--cluster-tol", o.cluster_tol, "Total-variation clustering tolerance");
  causal->add_option("--tol-rel", o.tol_rel, "Relative threshold for the span rank");

  auto* nc_eval = app.add_subcommand("nc-eval", "Evaluate the generated state on an elementary tensor");
  model_opt(nc_eval);
  auto* basis_opt = nc_eval->add_option("--basis", o.basis, "Comma-separated matrix-unit indices");
  auto* factors_opt = nc_eval->add_option("--factors", o.factors, "JSON list of algebra elements");
  basis_opt->excludes(factors_opt);

  auto* nc_dim = app.add_subcommand("nc-dim", "NC process dimension");
  model_opt(nc_dim);
  rank_opts(nc_dim);

  auto* experiment = app.add_subcommand("experiment", "Run verification experiments");
  experiment->require_subcommand(1);
  auto* run = experiment->add_subcommand("run", "Run an experiment spec file");
  run->add_option("spec", o.spec, "Experiment spec (JSON)")->required();
  run->add_option("--out-dir", o.out_dir, "Directory for report.json and points.csv");
  run->add_option("--seed", o.seed, "Seed recorded in the report");
  run->add_flag("--timing", o.timing, "Include runtime in the report");

  auto* sample = app.add_subcommand("sample", "Sample a trajectory");
  model_opt(sample);
  sample->add_option("--length", o.length, "Number of symbols");
  sample->add_option("--seed", o.seed, "Seed (default: $OOMLAB_SEED or 0)");
  sample->add_option("--neg-tol", o.neg_tol, "Tolerance for negative probabilities");

  std::vector<std::string> argv_store{"oomlab"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, out);
    if (eval->parsed()) return cmd_eval(o, out);
    if (dim->parsed()) return cmd_dim(o, out, false);
    if (minimize->parsed()) return cmd_minimize(o, out);
    if (causal->parsed()) return cmd_causal(o, out);
    if (nc_eval->parsed()) {
      if (o.basis.empty() && o.factors.empty()) throw CLI::ValidationError("nc-eval", "need --basis or --factors");
      return cmd_nc_eval(o, out);
    }
    if (nc_dim->parsed()) return cmd_dim(o, out, true);
    if (run->parsed()) return cmd_experiment(o, out);
    if (sample->parsed()) return cmd_sample(o, out);
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnknownSymbolError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitFail;
  }
  err << "error: no command given\n";
  return kExitUsage;
}

}  // namespace oomlab
