#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "oomlab/causal.hpp"
#include "oomlab/dimension.hpp"
#include "oomlab/oom.hpp"

namespace oomlab {

enum class Verdict { kPass, kFail, kInconclusive };

std::string_view to_string(Verdict v);

/// One row of per-point measurements; column order is insertion order.
struct Measurement {
  std::string label;
  std::vector<std::pair<std::string, double>> values;
};

struct ExperimentReport {
  std::string name;
  std::vector<Measurement> points;
  Verdict verdict = Verdict::kInconclusive;
  /// Machine-checkable statement the verdict was computed from.
  std::string predicate;
  std::string note;
  std::vector<std::pair<std::string, double>> tolerances;
  std::uint64_t seed = 0;
  double runtime_seconds = 0.0;
};

/// max_{|w| <= max_len} |P(w) - Q(w)|. Throws ValidationError on alphabet mismatch.
double cylinder_distance(const ProcessOracle& p, const ProcessOracle& q, std::size_t max_len);

/// Checks dim(Σ ν_k P_k) == Σ dim(P_k).
///
/// Parts must be stationary and pairwise non-equivalent (the computable stand-in
/// for distinct ergodic components); otherwise PreconditionError is thrown.
/// Any non-stabilised rank ladder gives INCONCLUSIVE.
ExperimentReport run_additivity(const std::vector<std::pair<double, OomModel>>& parts, std::size_t max_level,
                                double tol_rel = kDefaultRankTol);

/// Parametric family t ↦ P_t on a grid t_1 > t_2 > ... > 0 with limit P_0 = generator(0).
struct FamilySpec {
  std::string description;
  std::vector<double> grid;
  std::function<OomModel(double)> generator;
};

/// PASS iff dim(P_0) <= min_i dim(P_{t_i}). INCONCLUSIVE if any ladder fails to
/// stabilise or the cylinder distance to the limit does not decrease along the grid.
/// Throws ValidationError if the grid is not strictly decreasing and positive or a
/// grid point fails validate_oom.
ExperimentReport run_semicontinuity(const FamilySpec& family, std::size_t max_level, double tol_rel = kDefaultRankTol);

struct UpperBoundOptions {
  std::size_t past_len = 3;
  std::size_t horizon = 2;
  std::size_t max_level = 4;
  double tol_rel = kDefaultRankTol;
  double cluster_tol = kDefaultClusterTol;
  std::size_t stationarity_depth = 6;
};

/// PASS iff log2(dim) <= log2(#causal states). Also records whether the span
/// rank of the causal states equals the dimension. Throws PreconditionError if
/// the process is not stationary.
ExperimentReport run_upperbound(const ProcessOracle& p, const UpperBoundOptions& options = {});

// Families used by the semicontinuity experiments.

/// (1 - t) base ⊕ t other; the limit is `base` itself.
FamilySpec mixture_weight_family(OomModel base, OomModel other, std::vector<double> grid);

/// HMM with parameters (1 - t) limit + t far, elementwise.
FamilySpec hmm_interpolation_family(HmmModel limit, HmmModel far, std::vector<double> grid);

/// ½ Bernoulli(center - t) ⊕ ½ Bernoulli(center + t); the limit is Bernoulli(center).
FamilySpec bernoulli_coalescing_family(double center, std::vector<double> grid);

FamilySpec constant_family(OomModel model, std::vector<double> grid);

}  // namespace oomlab
