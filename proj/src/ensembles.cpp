#include "qcorr/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcorr {

int default_decomposition_size(int rank) {
  if (rank < 1) throw std::invalid_argument("rank must be >= 1");
  return std::max(rank, std::min(rank * rank, kCardinalityCap));
}

int default_outcome_count(int measured_dim) {
  if (measured_dim < 1) throw std::invalid_argument("dimension must be >= 1");
  return std::max(measured_dim,
                  std::min(measured_dim * measured_dim, kCardinalityCap));
}

std::vector<Matrix> RankOneMeasurement::operators() const {
  std::vector<Matrix> ops;
  ops.reserve(kets.size());
  for (const auto& v : kets) ops.push_back(v * v.adjoint());
  return ops;
}

void RankOneMeasurement::validate() const {
  if (kets.empty()) throw std::invalid_argument("measurement has no outcomes");
  const int d = dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const auto& v : kets) {
    if (v.size() != d)
      throw std::invalid_argument("measurement kets have mixed dimensions");
    sum += v * v.adjoint();
  }
  if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > tol::isometry)
    throw std::invalid_argument("measurement operators do not sum to identity");
}

RankOneMeasurement measurement_from_isometry(const Matrix& w,
                                             std::string subsystem) {
  if (!is_isometry(w))
    throw std::invalid_argument("measurement matrix is not an isometry");
  RankOneMeasurement m;
  m.subsystem = std::move(subsystem);
  m.kets.reserve(w.rows());
  for (Eigen::Index x = 0; x < w.rows(); ++x)
    m.kets.push_back(w.row(x).adjoint());
  return m;
}

Ensemble hjw_ensemble(const MultipartiteState& s, const Matrix& mixer) {
  if (!is_isometry(mixer))
    throw std::invalid_argument("mixer is not an isometry");
  Eigensystem es = eig_hermitian(s);
  const int r = es.rank();
  if (mixer.cols() != r)
    throw std::invalid_argument("mixer column count must equal the state rank");
  const int d = s.dim();
  const int m = static_cast<int>(mixer.rows());

  // Weighted eigenvector columns sqrt(lam_j) e_j.
  Matrix c(d, r);
  for (int j = 0; j < r; ++j) c.col(j) = std::sqrt(es.values[j]) * es.vectors.col(j);

  Ensemble out;
  double total = 0.0;
  for (int i = 0; i < m; ++i) {
    Vector unnorm = Vector::Zero(d);
    for (int j = 0; j < r; ++j) unnorm += mixer(i, j) * c.col(j);
    double p = unnorm.squaredNorm();
    if (p < tol::weight_floor) continue;
    Vector ket = unnorm / std::sqrt(p);
    out.weights.push_back(p);
    out.kets.push_back(PureState::trusted(s.dims(), s.labels(), ket));
    out.members.push_back(out.kets.back().density());
    total += p;
  }
  if (out.weights.empty())
    throw std::runtime_error("all decomposition members fell below the weight floor");
  for (double& w : out.weights) w /= total;
  return out;
}

Matrix conditional_unnormalized(const Matrix& rho, const IndexSplit& split,
                                const Vector& ket) {
  const int a = split.rest_dim();  // unmeasured
  const int b = split.sel_dim();   // measured
  Matrix out(a, a);
  for (int i = 0; i < a; ++i)
    for (int j = 0; j < a; ++j) {
      cx acc{0.0, 0.0};
      for (int bi = 0; bi < b; ++bi) {
        cx inner{0.0, 0.0};
        for (int bj = 0; bj < b; ++bj)
          inner += rho(split.fuse(bi, i), split.fuse(bj, j)) * ket[bj];
        acc += std::conj(ket[bi]) * inner;
      }
      out(i, j) = acc;
    }
  return out;
}

Ensemble induced_ensemble(const MultipartiteState& s, Mask measured,
                          const RankOneMeasurement& m) {
  if (measured == 0 || measured == s.all_parties())
    throw std::invalid_argument("measured parties must be a proper nonempty subset");
  IndexSplit split(s.dims(), measured);
  if (m.dim() != split.sel_dim())
    throw std::invalid_argument("measurement dimension does not match measured parties");

  std::vector<int> kept_dims;
  std::vector<std::string> kept_labels;
  for (int p = 0; p < s.party_count(); ++p)
    if (!(measured & (Mask{1} << p))) {
      kept_dims.push_back(s.dims()[p]);
      kept_labels.push_back(s.labels()[p]);
    }

  Ensemble out;
  double total = 0.0;
  for (const auto& ket : m.kets) {
    Matrix block = conditional_unnormalized(s.matrix(), split, ket);
    double p = block.trace().real();
    if (p < tol::weight_floor) continue;
    out.weights.push_back(p);
    out.members.push_back(
        MultipartiteState::trusted(kept_dims, kept_labels, block / p));
    total += p;
  }
  if (out.weights.empty())
    throw std::runtime_error("every measurement outcome fell below the weight floor");
  for (double& w : out.weights) w /= total;
  return out;
}

Ensemble post_measurement_pure_states(const PureState& psi, Mask measured,
                                      const RankOneMeasurement& m) {
  if (measured == 0 || measured == full_mask(psi.party_count()))
    throw std::invalid_argument("measured parties must be a proper nonempty subset");
  IndexSplit split(psi.dims(), measured);
  if (m.dim() != split.sel_dim())
    throw std::invalid_argument("measurement dimension does not match measured parties");

  std::vector<int> kept_dims;
  std::vector<std::string> kept_labels;
  for (int p = 0; p < psi.party_count(); ++p)
    if (!(measured & (Mask{1} << p))) {
      kept_dims.push_back(psi.dims()[p]);
      kept_labels.push_back(psi.labels()[p]);
    }

  Ensemble out;
  double total = 0.0;
  for (const auto& ket : m.kets) {
    // <ket| psi> contracted over the measured digits only.
    Vector cond = Vector::Zero(split.rest_dim());
    for (int r = 0; r < split.rest_dim(); ++r) {
      cx acc{0.0, 0.0};
      for (int b = 0; b < split.sel_dim(); ++b)
        acc += std::conj(ket[b]) * psi.vec()[split.fuse(b, r)];
      cond[r] = acc;
    }
    double p = cond.squaredNorm();
    if (p < tol::weight_floor) continue;
    out.weights.push_back(p);
    out.kets.push_back(
        PureState::trusted(kept_dims, kept_labels, cond / std::sqrt(p)));
    out.members.push_back(out.kets.back().density());
    total += p;
  }
  if (out.weights.empty())
    throw std::runtime_error("every measurement outcome fell below the weight floor");
  for (double& w : out.weights) w /= total;
  return out;
}

CcqState build_ccq(const MultipartiteState& bipartite) {
  if (bipartite.party_count() != 2)
    throw std::invalid_argument("ccq construction needs exactly two parties");
  const int da = bipartite.dims()[0];
  const int d = bipartite.dims()[1];

  // Shift/clock operators in the deterministic eigenbasis of the second
  // marginal; eig_hermitian pins the basis even for degenerate marginals.
  Eigensystem marginal = eig_hermitian(partial_trace(bipartite, Mask{1} << 1));
  PauliPair pauli = generalized_paulis(d, marginal.vectors);

  std::vector<Matrix> shift_pow(d), clock_pow(d);
  shift_pow[0] = clock_pow[0] = Matrix::Identity(d, d);
  for (int k = 1; k < d; ++k) {
    shift_pow[k] = pauli.shift * shift_pow[k - 1];
    clock_pow[k] = pauli.clock * clock_pow[k - 1];
  }

  const int dim_ab = da * d;
  const int dim_total = d * d * dim_ab;
  Matrix omega = Matrix::Zero(dim_total, dim_total);
  const double weight = 1.0 / static_cast<double>(d * d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      Matrix u = shift_pow[x] * clock_pow[y];
      Matrix embedded = embed_operator(bipartite.dims(), Mask{1} << 1, u);
      Matrix block = weight * (embedded * bipartite.matrix() * embedded.adjoint());
      const int off = (x * d + y) * dim_ab;
      omega.block(off, off, dim_ab, dim_ab) = block;
    }

  CcqState out{
      MultipartiteState::trusted({d, d, da, d}, {"X", "Y", "A", "B"},
                                 std::move(omega)),
      d};
  return out;
}

}  // namespace qcorr
