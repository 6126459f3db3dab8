#pragma once

#include "qcorr/correlations.hpp"

namespace qcorr {

// Non-empty proper subset of the n assisting parties B_1..B_n, as a bitmask
// over [0, n).
struct SubsetMask {
  int n = 0;
  Mask bits = 0;

  Mask complement() const { return full_mask(n) ^ bits; }
  int size() const { return popcount(bits); }
};

// All 2^n - 2 non-empty proper subsets, ascending by bits. The result is
// closed under complement. n must be >= 2.
std::vector<SubsetMask> enumerate_proper_subsets(int n);

struct SuperadditivityResult {
  bool holds = false;
  double margin = 0.0;  // I_q(XY:AB) - I_q(X:AB) - I_q(Y:AB) on the ccq state
};

// Builds the four-party ccq extension of the bipartite input and checks
// superadditivity of the q-mutual entropy across its classical registers.
SuperadditivityResult superadditivity_check(const MultipartiteState& bipartite,
                                            QValue q);

// One estimated term of a polygamy chain.
struct SubsetTerm {
  SubsetMask subset;  // over the assisting parties
  std::string label;  // concatenated party labels, e.g. "B1B3"
  double value = 0.0;
  BoundDirection direction = BoundDirection::kLowerBoundOfMax;
  double gap = 0.0;
  bool converged = false;
  std::string digest;  // certificate digest of the estimate behind the value
};

struct ConditionMargin {
  std::string cut;  // e.g. "A|B1B3"
  double margin = 0.0;
  bool holds = false;
};

// Chain verdicts: "strict" (margin >= 1e-3), "holds" (margin >= 0),
// "inconclusive" (negative within slack), "optimizer-gap" (beyond slack).
struct PolygamyReport {
  double q = 1.0;
  double left = 0.0;    // full-split term
  double middle = 0.0;  // subset average, per-subset sum / (2^{n-1} - 1)
  double right = 0.0;   // sum over single assisting parties
  bool left_analytic = false;
  bool left_exact = false;  // pure input: left is a plain entropy, no search
  std::vector<SubsetTerm> subset_terms;
  std::vector<SubsetTerm> singleton_terms;  // the popcount-1 rows, repeated
  std::vector<ConditionMargin> condition_margins;
  bool condition_all_hold = false;
  double margin_first = 0.0;   // middle - left
  double margin_second = 0.0;  // right - middle
  double slack_first = 0.0;
  double slack_second = 0.0;
  std::string verdict_first;
  std::string verdict_second;
  std::vector<std::string> notes;
};

// Strong polygamy chain of the q-expected entanglement of assistance:
// left (full split A : everything else) vs subset average vs singleton sum.
// Party 0 is the distinguished A; at least two assisting parties required.
// q >= 1 required. More than five assisting parties needs allow_large.
PolygamyReport verify_strong_polygamy_entanglement(const LoadedState& s,
                                                   QValue q,
                                                   const OptimizerConfig& cfg,
                                                   bool allow_large = false);

// Same chain for the unlocalizable q-discord; pure input only (the left
// term uses the pure-state shortcut). Each per-subset term measures the
// assisting group of its marginal.
PolygamyReport verify_strong_polygamy_discord(const LoadedState& s, QValue q,
                                              const OptimizerConfig& cfg,
                                              bool allow_large = false);

struct SubsetResidual {
  std::string label;            // the subset X
  double assistance = 0.0;      // E^a estimate on rho_{AX}
  double discord = 0.0;         // udelta estimate on rho_{AX^c}
  double conditional = 0.0;     // S_q(A|X^c)
  double residual = 0.0;        // assistance - discord - conditional
};

// The entanglement/discord equivalence diagnostics for a pure state:
// the conditional-entropy complement sum (asserted ~0), the subset-summed
// assistance vs unlocalizable-discord residual, and per-subset balances.
struct EquivalenceReport {
  double q = 1.0;
  double conditional_entropy_sum = 0.0;
  double sum_assistance = 0.0;
  double sum_unlocalizable_discord = 0.0;
  double sum_residual = 0.0;  // sum_assistance - sum_unlocalizable_discord
  std::vector<SubsetResidual> per_subset;
  double optimizer_slack = 0.0;
  std::vector<std::string> notes;
};

EquivalenceReport verify_equivalence(const PureState& psi, QValue q,
                                     const OptimizerConfig& cfg,
                                     bool allow_large = false);

// Closed forms for the n-qubit GHZ chain (one distinguished party plus
// n - 1 assisting qubits): xi_q, the interval for the common per-subset
// value, the predicted term shapes, and strictness flags.
struct GhzAnalytic {
  int n = 0;        // total qubits
  int b_count = 0;  // assisting qubits, n - 1
  double q = 1.0;
  double xi_q = 0.0;        // maximally mixed qubit entropy
  double xi_lower = 0.0;    // 2^{1-q} xi_q, lower end for the common value
  double left = 0.0;        // xi_q
  int subset_count = 0;     // 2^{b_count} - 2
  double middle_coefficient = 2.0;  // middle = 2 * common value
  double right_coefficient = 0.0;   // right = b_count * common value
  double middle_lower_bound = 0.0;  // 2^{2-q} xi_q
  bool strict_first_predicted = false;   // needs 1 <= q < 2
  bool strict_second_predicted = false;  // needs b_count >= 3
};

GhzAnalytic ghz_analytic_report(int n, QValue q);

}  // namespace qcorr
