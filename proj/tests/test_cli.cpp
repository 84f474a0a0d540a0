#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "oomlab/cli.hpp"
#include "oomlab/model_io.hpp"

using namespace oomlab;
namespace fs = std::filesystem;

namespace {

const fs::path kModels = fs::path(OOMLAB_FIXTURE_DIR) / "models";
const fs::path kExperiments = fs::path(OOMLAB_FIXTURE_DIR) / "experiments";

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string model(const char* name) { return (kModels / name).string(); }

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("oomlab_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("dim on a Bernoulli model") {
  const auto r = run({"dim", "--model", model("bernoulli_05.json"), "--max-level", "4"});
  CHECK(r.code == kExitOk);
  const auto j = r.json();
  CHECK(j["dimension"] == 1);
  CHECK(j["stabilized"] == true);
  CHECK(j["rank_by_level"]["4"] == 1);
  CHECK(j["tol_rel"] == 1e-9);
}

TEST_CASE("dim: unstable ladder exits INCONCLUSIVE") {
  const auto r = run({"dim", "--model", model("mixture_markov_period.json"), "--max-level", "2"});
  CHECK(r.code == kExitInconclusive);
  CHECK(r.json()["dimension"].is_null());
}

TEST_CASE("dim routes NC models to the NC ladder") {
  const auto r = run({"dim", "--model", model("qubit_mixture.json"), "--max-level", "3"});
  CHECK(r.code == kExitOk);
  CHECK(r.json()["dimension"] == 2);
  const auto n = run({"nc-dim", "--model", model("bernoulli_02.json"), "--max-level", "3"});
  CHECK(n.code == kExitOk);
  CHECK(n.json()["dimension"] == 1);
}

TEST_CASE("eval") {
  const auto r = run({"eval", "--model", model("bernoulli_05.json"), "--word", "101"});
  CHECK(r.code == kExitOk);
  CHECK(r.json()["probability"] == 0.125);
  const auto bad = run({"eval", "--model", model("bernoulli_05.json"), "--word", "102"});
  CHECK(bad.code == kExitUsage);
  CHECK(bad.err.find("error:") == 0);
}

TEST_CASE("validate") {
  const auto ok = run({"validate", "--model", model("markov3.json")});
  CHECK(ok.code == kExitOk);
  CHECK(ok.json()["passed"] == true);
  CHECK(ok.json()["kolmogorov_residual"].get<double>() <= 1e-10);

  TempDir dir;
  std::ofstream(dir.path / "bad.json")
      << R"({"type":"oom","alphabet":["0","1"],"dim":1,"operators":{"0":[[0.5]],"1":[[0.6]]},"init":[1.0],"eval":[1.0]})";
  const auto bad = run({"validate", "--model", (dir.path / "bad.json").string()});
  CHECK(bad.code == kExitFail);
  CHECK(bad.json()["passed"] == false);

  const auto nc = run({"validate", "--model", model("qubit_product.json"), "--samples", "20"});
  CHECK(nc.code == kExitOk);
  CHECK(nc.json()["samples"] == 20);
}

TEST_CASE("minimize") {
  TempDir dir;
  const auto out = (dir.path / "min.json").string();
  const auto r = run({"minimize", "--model", model("merged2.json"), "--out", out});
  CHECK(r.code == kExitOk);
  const auto j = r.json();
  CHECK(j["original_dim"] == 2);
  CHECK(j["minimized_dim"] == 1);
  CHECK(j["max_deviation"].get<double>() <= 1e-12);
  CHECK(std::get<OomModel>(parse_model_file(out).model).dim() == 1);
}

TEST_CASE("causal") {
  const auto r = run({"causal", "--model", model("mixture_2bern.json"), "--past-len", "3", "--horizon", "2"});
  CHECK(r.code == kExitOk);
  const auto j = r.json();
  CHECK(j["num_states"] == 4);
  CHECK(j["span_rank"] == 2);
  CHECK(j["topological_complexity_bits"] == 2.0);
}

TEST_CASE("nc-eval") {
  const auto z = run({"nc-eval", "--model", model("qubit_product.json"), "--factors",
                      "[[[[[1,0],[0,0]],[[0,0],[-1,0]]]], [[[[1,0],[0,0]],[[0,0],[-1,0]]]]]"});
  CHECK(z.code == kExitOk);
  CHECK(std::abs(z.json()["re"].get<double>() - 0.36) <= 1e-15);
  CHECK(z.json()["im"] == 0.0);

  // Classical models are embedded automatically; basis indices are symbols.
  const auto b = run({"nc-eval", "--model", model("bernoulli_05.json"), "--basis", "1,0,1"});
  CHECK(b.code == kExitOk);
  CHECK(b.json()["re"] == 0.125);

  CHECK(run({"nc-eval", "--model", model("qubit_product.json")}).code == kExitUsage);
  CHECK(run({"nc-eval", "--model", model("qubit_product.json"), "--basis", "0", "--factors", "[]"}).code ==
        kExitUsage);
}

TEST_CASE("sample is reproducible and honours OOMLAB_SEED") {
  const auto a = run({"sample", "--model", model("markov3.json"), "--length", "40", "--seed", "5"});
  const auto b = run({"sample", "--model", model("markov3.json"), "--length", "40", "--seed", "5"});
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.json()["word"].get<std::string>().size() == 40);

  setenv("OOMLAB_SEED", "5", 1);
  const auto env = run({"sample", "--model", model("markov3.json"), "--length", "40"});
  setenv("OOMLAB_SEED", "oops", 1);
  const auto bad = run({"sample", "--model", model("markov3.json")});
  unsetenv("OOMLAB_SEED");
  CHECK(env.out == a.out);
  CHECK(bad.code == kExitUsage);
}

TEST_CASE("experiment run writes report and CSV") {
  TempDir dir;
  const auto r = run({"experiment", "run", (kExperiments / "additivity_2bern.json").string(), "--out-dir",
                      dir.path.string()});
  CHECK(r.code == kExitOk);
  const auto report = Json::parse(slurp(dir.path / "report.json"));
  CHECK(report["verdict"] == "PASS");
  CHECK(slurp(dir.path / "points.csv").rfind("label,", 0) == 0);

  // Byte-identical on a second run.
  TempDir other;
  run({"experiment", "run", (kExperiments / "additivity_2bern.json").string(), "--out-dir", other.path.string()});
  CHECK(slurp(dir.path / "report.json") == slurp(other.path / "report.json"));
  CHECK(slurp(dir.path / "points.csv") == slurp(other.path / "points.csv"));

  TempDir timed;
  run({"experiment", "run", (kExperiments / "additivity_2bern.json").string(), "--out-dir", timed.path.string(),
       "--timing"});
  CHECK(Json::parse(slurp(timed.path / "report.json")).contains("runtime_seconds"));
}

TEST_CASE("experiment verdict maps to the exit code") {
  TempDir dir;
  std::ofstream(dir.path / "short.json") << R"({"experiment":"additivity","max_level":1,"parts":[)"
                                          << R"({"weight":0.5,"model":")" << model("bernoulli_02.json") << R"("},)"
                                          << R"({"weight":0.5,"model":")" << model("bernoulli_07.json") << R"("}]})";
  const auto r = run({"experiment", "run", (dir.path / "short.json").string(), "--out-dir", dir.path.string()});
  CHECK(r.code == kExitInconclusive);

  std::ofstream(dir.path / "same.json") << R"({"experiment":"additivity","parts":[)"
                                         << R"({"weight":0.5,"model":")" << model("bernoulli_02.json") << R"("},)"
                                         << R"({"weight":0.5,"model":")" << model("bernoulli_02.json") << R"("}]})";
  const auto same = run({"experiment", "run", (dir.path / "same.json").string(), "--out-dir", dir.path.string()});
  CHECK(same.code == kExitFail);
  CHECK(same.err.find("distinct") != std::string::npos);
}

TEST_CASE("CSV output") {
  const auto r = run({"--csv", "dim", "--model", model("markov2.json")});
  CHECK(r.code == kExitOk);
  CHECK(r.out == "level,rank\n1,2\n2,2\n3,2\n4,2\n");
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"dim"}).code == kExitUsage);
  CHECK(run({"dim", "--model", model("markov2.json"), "--max-level", "0"}).code == kExitUsage);
  CHECK(run({"dim", "--model", "/nonexistent.json"}).code == kExitFail);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("every command is reachable") {
  const std::vector<std::string> expected{"validate", "eval",   "dim",        "minimize", "causal",
                                          "nc-eval",  "nc-dim", "experiment", "sample"};
  CHECK(cli_commands() == expected);
  const auto help = run({"--help"}).out;
  for (const auto& c : cli_commands()) {
    CHECK(help.find(c) != std::string::npos);
    CHECK(run({c, "--help"}).code == kExitOk);
  }
}
