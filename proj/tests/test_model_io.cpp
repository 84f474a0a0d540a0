#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "oomlab/errors.hpp"
#include "oomlab/model_io.hpp"
#include "support/oracles.hpp"

using namespace oomlab;
namespace fs = std::filesystem;

namespace {

const fs::path kFixtures = OOMLAB_FIXTURE_DIR;

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("oomlab_io_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name) << text;
    return path / name;
  }
};

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "";
}

const char* kBernoulli =
    R"({"type":"oom","alphabet":["0","1"],"dim":1,"operators":{"0":[[0.5]],"1":[[0.5]]},"init":[1.0],"eval":[1.0]})";

}  // namespace

TEST_CASE("parse a Bernoulli model") {
  const auto lm = parse_model(Json::parse(kBernoulli), ".");
  const auto& m = std::get<OomModel>(lm.model);
  CHECK(m.dim() == 1);
  CHECK(word_probability(m, Word{1, 0, 1}) == 0.125);
}

TEST_CASE("schema errors name the field") {
  auto j = Json::parse(kBernoulli);
  j["init"] = Json::array({1.0, 0.0});
  CHECK(error_of([&] { parse_model(j, "."); }).find("'init'") != std::string::npos);
  CHECK_THROWS_AS(parse_model(j, "."), SchemaError);

  j = Json::parse(kBernoulli);
  j["colour"] = "red";
  CHECK(error_of([&] { parse_model(j, "."); }).find("'colour'") != std::string::npos);

  j = Json::parse(kBernoulli);
  j["operators"].erase("1");
  CHECK(error_of([&] { parse_model(j, "."); }).find("'1'") != std::string::npos);

  j = Json::parse(kBernoulli);
  j["operators"]["2"] = Json::parse("[[0.1]]");
  CHECK_THROWS_AS(parse_model(j, "."), UnknownSymbolError);

  j = Json::parse(kBernoulli);
  j["type"] = "quantum";
  CHECK_THROWS_AS(parse_model(j, "."), SchemaError);

  j = Json::parse(kBernoulli);
  j["dim"] = 0;
  CHECK_THROWS_AS(parse_model(j, "."), SchemaError);
}

TEST_CASE("invalid models fail validation with residuals") {
  auto j = Json::parse(kBernoulli);
  j["eval"] = Json::array({2.0});
  const std::string msg = error_of([&] { parse_model(j, "."); });
  CHECK(msg.find("|l(v)-1| = 1") != std::string::npos);
  CHECK_THROWS_AS(parse_model(j, "."), ValidationError);
  CHECK_NOTHROW(parse_model(j, ".", false));
}

TEST_CASE("parse errors report line and column") {
  TempDir dir;
  const auto p = dir.write("bad.json", "{\n  \"type\": \"oom\",\n  \"dim\": ,\n}\n");
  const std::string msg = error_of([&] { parse_model_file(p); });
  CHECK(msg.find("bad.json:3:") != std::string::npos);
  CHECK_THROWS_AS(parse_model_file(dir.path / "missing.json"), SchemaError);
}

TEST_CASE("mixture files resolve relative paths") {
  const auto lm = parse_model_file(kFixtures / "models" / "mixture_2bern.json");
  const auto& m = std::get<OomModel>(lm.model);
  CHECK(m.dim() == 2);
  CHECK(lm.name == "mixture_2bern");
  CHECK(word_probability(m, Word{1}) == doctest::Approx(0.4 * 0.2 + 0.6 * 0.7).epsilon(1e-15));
}

TEST_CASE("HMM files load as HMMs") {
  const auto lm = parse_model_file(kFixtures / "models" / "markov2.json");
  const auto& h = std::get<HmmModel>(lm.model);
  CHECK(h.n_states() == 2);
  CHECK(as_oom(lm.model).dim() == 2);
}

TEST_CASE("NC models and mixtures") {
  const auto q = parse_model_file(kFixtures / "models" / "qubit_product.json");
  const auto& m = std::get<NcOomModel>(q.model);
  CHECK(m.algebra().total_dim() == 4);
  CHECK_THROWS_AS(as_oom(q.model), SchemaError);

  const auto mix = parse_model_file(kFixtures / "models" / "qubit_mixture.json");
  CHECK(std::get<NcOomModel>(mix.model).dim() == 2);

  TempDir dir;
  fs::copy(kFixtures / "models" / "qubit_product.json", dir.path / "q.json");
  fs::copy(kFixtures / "models" / "bernoulli_05.json", dir.path / "b.json");
  const auto p = dir.write("bad_mix.json",
                           R"({"type":"mixture","parts":[{"weight":0.5,"model":"q.json"},{"weight":0.5,"model":"b.json"}]})");
  CHECK_THROWS_AS(parse_model_file(p), SchemaError);
}

TEST_CASE("serialization round trips") {
  const auto oom = oracle::similarity_transform(hmm_to_oom(oracle::random_hmm(3, 2, 4)), 5);
  const auto back = parse_model(Json::parse(dump_json(serialize_model(oom))), ".");
  CHECK(std::get<OomModel>(back.model) == oom);

  const auto h = oracle::random_hmm(2, 3, 1);
  CHECK(std::get<HmmModel>(parse_model(Json::parse(dump_json(serialize_model(h))), ".").model) == h);

  const auto nc = std::get<NcOomModel>(parse_model_file(kFixtures / "models" / "block_markov.json").model);
  CHECK(std::get<NcOomModel>(parse_model(Json::parse(dump_json(serialize_model(nc))), ".").model) == nc);
}

TEST_CASE("algebra elements round trip") {
  const CStarAlgebra alg({2, 1});
  Eigen::VectorXcd c(5);
  c << Complex(1, 2), Complex(-0.5, 0), Complex(0, 0.25), Complex(3, -1), Complex(0.1, 0.2);
  const auto a = AlgebraElement::from_coefficients(alg, c);
  CHECK(parse_element(serialize_element(a), alg) == a);
  CHECK_THROWS_AS(parse_element(Json::parse("[[[[1,0]]]]"), alg), SchemaError);
}

TEST_CASE("dump_json formatting") {
  Json j;
  j["x"] = 0.1;
  j["n"] = 3;
  j["v"] = Json::array({1.5, 2.0});
  j["nan"] = std::nan("");
  const std::string s = dump_json(j);
  CHECK(s == "{\n  \"x\": 0.10000000000000001,\n  \"n\": 3,\n  \"v\": [1.5, 2],\n  \"nan\": null\n}");
}

TEST_CASE("experiment files") {
  const auto r = run_experiment_file(kFixtures / "experiments" / "additivity_2bern.json", 0);
  CHECK(r.verdict == Verdict::kPass);
  CHECK(r.name == "additivity_2bern");

  const auto again = run_experiment_file(kFixtures / "experiments" / "additivity_2bern.json", 0);
  CHECK(dump_json(report_to_json(r)) == dump_json(report_to_json(again)));
  CHECK(report_to_csv(r) == report_to_csv(again));
  CHECK_FALSE(report_to_json(r).contains("runtime_seconds"));
  CHECK(report_to_json(r, true).contains("runtime_seconds"));

  const std::string csv = report_to_csv(r);
  CHECK(csv.rfind("label,weight,model_dim,dimension,stabilized\n", 0) == 0);
  CHECK(csv.find("mixture,1,2,2,1\n") != std::string::npos);

  TempDir dir;
  const auto p = dir.write("x.json", R"({"experiment":"telepathy"})");
  CHECK_THROWS_AS(run_experiment_file(p, 0), SchemaError);
  const auto q = dir.write("y.json", R"({"experiment":"upperbound","model":"m.json","colour":1})");
  CHECK_THROWS_AS(run_experiment_file(q, 0), SchemaError);
}

TEST_CASE("a seed in the experiment file overrides the caller's") {
  TempDir dir;
  fs::copy(kFixtures / "models" / "bernoulli_02.json", dir.path / "b.json");
  const auto p = dir.write("u.json", R"({"experiment":"upperbound","model":"b.json","seed":42})");
  CHECK(run_experiment_file(p, 7).seed == 42);
  const auto q = dir.write("v.json", R"({"experiment":"upperbound","model":"b.json"})");
  CHECK(run_experiment_file(q, 7).seed == 7);
}

TEST_CASE("every shipped fixture parses") {
  std::size_t count = 0;
  for (const auto& e : fs::directory_iterator(kFixtures / "models")) {
    CHECK_NOTHROW(parse_model_file(e.path()));
    ++count;
  }
  CHECK(count >= 15);
  for (const auto& e : fs::directory_iterator(kFixtures / "experiments")) {
    const auto r = run_experiment_file(e.path(), 0);
    INFO(e.path().string());
    CHECK(r.verdict == Verdict::kPass);
  }
}
