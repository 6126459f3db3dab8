#pragma once

#include "qcorr/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qcorr {

void validate_density(const std::vector<int>& dims,
                      const std::vector<std::string>& labels,
                      const Matrix& matrix);

// Density matrix on an ordered list of parties. Row-major basis: party 0 is
// the slowest index. The normal constructor validates (Hermitian within
// 1e-10, unit trace within 1e-10, eigenvalues >= -1e-10); trusted() skips
// the checks for states an internal operation produced.
class MultipartiteState {
 public:
  MultipartiteState(std::vector<int> dims, std::vector<std::string> labels,
                    Matrix matrix);

  static MultipartiteState trusted(std::vector<int> dims,
                                   std::vector<std::string> labels,
                                   Matrix matrix);

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Matrix& matrix() const { return matrix_; }
  int dim() const { return static_cast<int>(matrix_.rows()); }
  int party_count() const { return static_cast<int>(dims_.size()); }

  Mask all_parties() const { return full_mask(party_count()); }

  // Mask of the named parties; unknown or duplicate names throw.
  Mask label_mask(const std::vector<std::string>& names) const;

  void validate() const { validate_density(dims_, labels_, matrix_); }

 private:
  struct Trusted {};
  MultipartiteState(Trusted, std::vector<int> dims,
                    std::vector<std::string> labels, Matrix matrix);

  std::vector<int> dims_;
  std::vector<std::string> labels_;
  Matrix matrix_;
};

class PureState {
 public:
  PureState(std::vector<int> dims, std::vector<std::string> labels, Vector vec);

  static PureState trusted(std::vector<int> dims,
                           std::vector<std::string> labels, Vector vec);

  const std::vector<int>& dims() const { return dims_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Vector& vec() const { return vec_; }
  int dim() const { return static_cast<int>(vec_.size()); }
  int party_count() const { return static_cast<int>(dims_.size()); }

  MultipartiteState density() const;

 private:
  struct Trusted {};
  PureState(Trusted, std::vector<int> dims, std::vector<std::string> labels,
            Vector vec);

  std::vector<int> dims_;
  std::vector<std::string> labels_;
  Vector vec_;
};

// Shift/clock pair on a d-dimensional subsystem, built in a supplied
// orthonormal basis: clock multiplies basis vector j by omega^j, shift maps
// basis vector j to basis vector j+1 mod d.
struct PauliPair {
  int d = 0;
  cx omega;
  Matrix clock;
  Matrix shift;
};

// basis: d x d matrix whose columns are the orthonormal basis vectors.
PauliPair generalized_paulis(int d, const Matrix& basis);

// Spectrum cleanup for unit-trace PSD matrices: eigenvalues in [-1e-10, 0)
// and below 1e-12 become 0, values above 1 clamp to 1, a single surviving
// eigenvalue snaps to exactly 1 (so pure states get entropy exactly zero),
// and the spectrum is renormalized when the total drifts past 1e-12.
// Values below -1e-10 throw.
RealVector clip_spectrum(RealVector descending);

struct Eigensystem {
  RealVector values;  // descending, cleaned by clip_spectrum
  Matrix vectors;     // orthonormal columns, phases fixed deterministically
  int rank() const;
};

// Deterministic Hermitian eigendecomposition: descending eigenvalues,
// each eigenvector's first nonzero component made real positive, exact
// eigenvalue ties ordered lexicographically by vector components.
Eigensystem eig_hermitian(const MultipartiteState& s);

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b);
PureState tensor(const PureState& a, const PureState& b);

MultipartiteState partial_trace(const MultipartiteState& s, Mask keep);
MultipartiteState partial_trace(const PureState& s, Mask keep);

// Same state viewed as two merged parties [selected, rest], with the basis
// permuted so the selected group comes first.
MultipartiteState regroup_bipartite(const MultipartiteState& s, Mask first_group);

// Appends an environment party of dimension rank(s) and returns a pure state
// whose marginal on the original parties reproduces s.
PureState purify(const MultipartiteState& s);

struct LoadedState {
  std::optional<PureState> pure;
  MultipartiteState density;
  std::string source;

  bool is_pure() const { return pure.has_value(); }
};

// Named state factory. Accepted descriptors:
//   ghz:N            N-qubit GHZ state (N >= 2)
//   w:N              N-qubit W state (N >= 2)
//   bell:+  bell:-   the two phase Bell states
//   product:SPEC     qubit product state, SPEC over {0,1,+,-}
//   haar:N:seed=S    Haar-random N-qubit pure state
//   mixed:N:rank=R:seed=S   random N-qubit density matrix of rank R
// seed and rank segments are optional (seed=0, rank=full).
LoadedState make_named_state(const std::string& descriptor);

std::vector<std::string> default_labels(int n_parties);

}  // namespace qcorr
