#pragma once

#include "qcorr/ensembles.hpp"

#include <functional>
#include <optional>

namespace qcorr {

struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 2000;   // objective-evaluation budget per restart
  double step_tolerance = 1e-8;
  double value_tolerance = 1e-9;
  std::uint64_t seed = 0;
  // Overrides the default decomposition size / outcome count. Must be at
  // least the rank (or measured dimension); only raising it makes the
  // search space larger.
  std::optional<int> cardinality;

  void validate() const;
};

// Heuristic estimates are one-sided: a minimization that stalls can only
// overshoot, a maximization can only undershoot.
enum class BoundDirection { kUpperBoundOfMin, kLowerBoundOfMax };

const char* to_string(BoundDirection d);

struct OptimizationReport {
  double value = 0.0;
  BoundDirection direction = BoundDirection::kUpperBoundOfMin;

  // Exactly one certificate is set, and value is the public objective
  // re-evaluated on it.
  std::optional<Ensemble> ensemble_certificate;
  std::optional<RankOneMeasurement> measurement_certificate;

  std::vector<double> restart_values;  // one entry per restart, in order
  bool converged = false;
  bool analytic_shortcut = false;
  int cardinality_used = 0;
  std::vector<std::string> notes;

  // Distance from the best restart to the nearest distinctly different
  // restart value; zero when every restart agreed. A scatter here means the
  // landscape has competing basins and the estimate deserves extra slack.
  double optimizer_gap() const;
};

// Minimum of sum_i p_i^q S_q(member_i marginal on a_side) over pure
// decompositions of s. Upper-bound estimate; rank-1 inputs short-circuit
// to the exact marginal entropy.
OptimizationReport estimate_qE(const MultipartiteState& s, Mask a_side,
                               QValue q, const OptimizerConfig& cfg);

// Maximum of the same objective (entanglement of assistance flavor).
// Lower-bound estimate.
OptimizationReport estimate_qEOA(const MultipartiteState& s, Mask a_side,
                                 QValue q, const OptimizerConfig& cfg);

// Maximum q-difference over rank-1 measurements on the measured parties.
// Lower-bound estimate.
OptimizationReport estimate_qCC(const MultipartiteState& s, Mask measured,
                                QValue q, const OptimizerConfig& cfg);

// Minimum q-difference over rank-1 measurements. Upper-bound estimate.
OptimizationReport estimate_qUE(const MultipartiteState& s, Mask measured,
                                QValue q, const OptimizerConfig& cfg);

// Certificate re-evaluation through the public ensemble path.
double ensemble_objective(const Ensemble& e, Mask a_side, QValue q);
double measurement_objective(const MultipartiteState& s, Mask measured,
                             const RankOneMeasurement& m, QValue q);

// Plain random search over Haar isometries with the same objectives.
// Deliberately optimizer-free so tests can cross-check stagnation.
double random_search_decomposition(const MultipartiteState& s, Mask a_side,
                                   QValue q, int samples, std::uint64_t seed,
                                   bool maximize,
                                   std::optional<int> cardinality = {});
double random_search_measurement(const MultipartiteState& s, Mask measured,
                                 QValue q, int samples, std::uint64_t seed,
                                 bool maximize,
                                 std::optional<int> cardinality = {});

// FNV-1a over raw bytes; the report digests hash certificate payloads with
// it so two runs can be compared without embedding full matrices.
std::uint64_t fnv1a64(const void* data, std::size_t len);

// 16-hex-char digest of the attached certificate (weights and kets, or
// measurement kets). Empty string when the report carries none.
std::string certificate_digest(const OptimizationReport& rep);

struct NelderMeadOptions {
  double initial_step = 0.6;
  int max_evaluations = 2000;
  double step_tolerance = 1e-8;
  double value_tolerance = 1e-9;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int evaluations = 0;
  bool converged = false;
};

// Textbook Nelder-Mead on R^n, minimizing.
NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, const NelderMeadOptions& opts);

// exp(iH) for the Hermitian H packed as m diagonal entries followed by
// (re, im) pairs for the upper triangle, row by row. Expects m*m parameters.
Matrix unitary_from_params(std::span<const double> params, int m);

}  // namespace qcorr
