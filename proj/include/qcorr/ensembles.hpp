#pragma once

#include "qcorr/entropy.hpp"

namespace qcorr {

// Decomposition and measurement sizes default to the square of the rank or
// subsystem dimension, capped here. The square is an engineering choice, not
// a proven sufficient cardinality; reports carry the cap that was used.
inline constexpr int kCardinalityCap = 16;

int default_decomposition_size(int rank);
int default_outcome_count(int measured_dim);

// Rank-1 POVM: operators kets[x] kets[x]^dagger summing to the identity.
// The kets are subnormalized vectors, not unit vectors.
struct RankOneMeasurement {
  std::string subsystem;
  std::vector<Vector> kets;

  int outcomes() const { return static_cast<int>(kets.size()); }
  int dim() const { return kets.empty() ? 0 : static_cast<int>(kets[0].size()); }
  std::vector<Matrix> operators() const;

  // Completeness within 1e-10; every operator rank 1 by construction.
  void validate() const;
};

// Rows of an n x d isometry-transposed matrix w define the measurement
// kets: ket_x = conj(w row x). Column orthonormality of w is exactly the
// completeness condition.
RankOneMeasurement measurement_from_isometry(const Matrix& w,
                                             std::string subsystem);

// Pure decompositions of s from an m x r isometric mixer applied to the
// weighted eigenvectors: member_i = sum_j mixer(i,j) sqrt(lam_j) e_j.
// Members with weight below 1e-12 are dropped and weights renormalized.
Ensemble hjw_ensemble(const MultipartiteState& s, const Matrix& mixer);

// Ensemble of post-measurement states on the unmeasured parties, weighted
// by outcome probabilities. Outcomes with probability below 1e-12 drop out.
Ensemble induced_ensemble(const MultipartiteState& s, Mask measured,
                          const RankOneMeasurement& m);

// Unnormalized conditional matrix tr_measured[(1 (x) ket ket^dagger) rho] on
// the unmeasured parties. split must have been built with the measured
// parties selected. Shared kernel of induced_ensemble and the measurement
// optimizers, so certificates re-evaluate through identical arithmetic.
Matrix conditional_unnormalized(const Matrix& rho, const IndexSplit& split,
                                const Vector& ket);

// Same, but for a pure input the conditional states stay pure; members come
// back as kets on the unmeasured parties.
Ensemble post_measurement_pure_states(const PureState& psi, Mask measured,
                                      const RankOneMeasurement& m);

// Classical-classical-quantum extension of a bipartite state: two classical
// d-level registers recording which shift/clock power was applied to the
// second party. Party order (X, Y, A, B); the applied operators are built in
// the eigenbasis of the second marginal, so the construction is reproducible
// even when that marginal is degenerate.
struct CcqState {
  MultipartiteState state;
  int register_dim = 0;
};

CcqState build_ccq(const MultipartiteState& bipartite);

}  // namespace qcorr
