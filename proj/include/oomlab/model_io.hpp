#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <json.hpp>

#include "oomlab/experiments.hpp"
#include "oomlab/ncoom.hpp"
#include "oomlab/oom.hpp"

namespace oomlab {

using Json = nlohmann::ordered_json;
using AnyModel = std::variant<OomModel, HmmModel, NcOomModel>;

struct LoadedModel {
  AnyModel model;
  std::string name;
  std::string description;
};

/// Reads a JSON document; parse errors are reported as SchemaError with line and column.
Json read_json_file(const std::filesystem::path& path);

/// Decodes a model object. Relative paths inside mixtures resolve against `base_dir`.
/// With `validate`, OOMs go through validate_oom and NC-OOMs through validate_ncoom
/// with default settings; failures raise ValidationError carrying the residuals.
LoadedModel parse_model(const Json& j, const std::filesystem::path& base_dir, bool validate = true);

LoadedModel parse_model_file(const std::filesystem::path& path, bool validate = true);

Json serialize_model(const OomModel& m);
Json serialize_model(const HmmModel& m);
Json serialize_model(const NcOomModel& m);
Json serialize_model(const AnyModel& m);

/// Element as a list of blocks, each a row-major matrix of [re, im] pairs.
AlgebraElement parse_element(const Json& j, const CStarAlgebra& algebra);
Json serialize_element(const AlgebraElement& a);

/// Classical process view of a classical model; throws SchemaError for NC-OOMs.
OomModel as_oom(const AnyModel& m);

/// Experiment spec files: {"experiment": "additivity" | "semicontinuity" | "upperbound", ...}.
ExperimentReport run_experiment_file(const std::filesystem::path& path, std::uint64_t seed);

Json report_to_json(const ExperimentReport& r, bool include_runtime = false);
std::string report_to_csv(const ExperimentReport& r);

/// JSON text with doubles printed to 17 significant digits; byte-identical for identical input.
std::string dump_json(const Json& j, int indent = 2);

}  // namespace oomlab
