#pragma once

#include "qcorr/state.hpp"

#include <span>

namespace qcorr {

// Everything q-dependent switches to the natural-log (q -> 1) limit inside
// this window around q = 1.
inline constexpr double kQOneWindow = 1e-6;

// Tsallis deformation parameter. Must be finite and >= 0.
class QValue {
 public:
  explicit QValue(double q);

  double value() const { return q_; }
  bool near_one() const;

  // Throws when q < 1 (the polygamy results need q >= 1).
  void require_at_least_one(const char* operation) const;

 private:
  double q_;
};

// Deformed logarithm (x^{1-q} - 1)/(1 - q); natural log near q = 1.
// x must be positive.
double q_log(double x, QValue q);

// (1 - sum p^q)/(q - 1) over the positive entries; Shannon form near q = 1.
// Entries are assumed cleaned (no negatives) and summing to 1.
double tsallis_entropy_of_probs(std::span<const double> probs, QValue q);

double tsallis_entropy(const MultipartiteState& s, QValue q);

// Same quantity computed as -tr(rho^q ln_q rho) through explicit matrix
// functions. Slower; kept as an independent numerical route for tests.
double tsallis_entropy_trace_form(const MultipartiteState& s, QValue q);

// S_q(s) - S_q(marginal on the conditioning parties). The conditioning mask
// must be a proper nonempty subset.
double q_conditional_entropy(const MultipartiteState& s, Mask conditioning,
                             QValue q);

// S_q(first group) + S_q(rest) - S_q(whole) for the declared bipartition.
double q_mutual_entropy(const MultipartiteState& s, Mask first_group, QValue q);

// Tsallis entropy of the maximally mixed qubit, (1 - 2^{1-q})/(q - 1).
// This is the ceiling for any single-qubit entropy at q >= 1. Requires q >= 1.
double max_qubit_entropy(QValue q);

// Weighted set of states on a common system. kets runs parallel to members
// when the ensemble is pure by construction, otherwise stays empty.
struct Ensemble {
  std::vector<double> weights;
  std::vector<MultipartiteState> members;
  std::vector<PureState> kets;

  bool has_kets() const { return !kets.empty(); }
  MultipartiteState mixture() const;

  // Checks weight positivity/normalization and, when a parent is supplied,
  // that the mixture reproduces it within tolerance.
  void validate(const MultipartiteState* parent = nullptr) const;
};

struct QDifference {
  double value = 0.0;
  // Concavity guarantees nonnegativity only for q >= 1; callers at q < 1
  // get the value with this flag cleared instead of an error.
  bool nonnegativity_guaranteed = false;
};

// S_q(mixture) - sum_i w_i^q S_q(member_i), the q-expected entropy drop.
QDifference q_difference(const Ensemble& e, QValue q);

}  // namespace qcorr
