#include "qcorr/linalg.hpp"

#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcorr {

std::uint64_t Rng::next_u64() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform();
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // 1 - u keeps the log argument strictly positive.
  double r = std::sqrt(-2.0 * std::log(1.0 - uniform()));
  double t = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

cx Rng::complex_normal() {
  double re = normal();
  double im = normal();
  return {re, im};
}

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream) {
  // One splitmix64 scramble of the pair; cheap and collision-unfriendly.
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

int popcount(Mask m) { return std::popcount(m); }

Mask full_mask(int n_parties) {
  if (n_parties < 0 || n_parties > 20)
    throw std::invalid_argument("party count out of range");
  return (Mask{1} << n_parties) - 1;
}

int dim_product(std::span<const int> dims) {
  long long d = 1;
  for (int x : dims) {
    if (x < 1) throw std::invalid_argument("subsystem dimension must be >= 1");
    d *= x;
    if (d > kMaxDimension)
      throw std::invalid_argument("total dimension exceeds dense limit");
  }
  return static_cast<int>(d);
}

int masked_dim(std::span<const int> dims, Mask sel) {
  long long d = 1;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (sel & (Mask{1} << i)) d *= dims[i];
  return static_cast<int>(d);
}

IndexSplit::IndexSplit(const std::vector<int>& dims, Mask sel) {
  const int n = static_cast<int>(dims.size());
  if (sel >= (Mask{1} << n))
    throw std::invalid_argument("party mask refers to nonexistent parties");
  const int full = dim_product(dims);
  sel_dim_ = masked_dim(dims, sel);
  rest_dim_ = full / sel_dim_;
  sel_of_.resize(full);
  rest_of_.resize(full);
  full_of_.resize(full);
  for (int idx = 0; idx < full; ++idx) {
    int rem = idx, s = 0, r = 0;
    // Decompose row-major digits, party 0 first (slowest).
    for (int p = 0; p < n; ++p) {
      int stride = 1;
      for (int t = p + 1; t < n; ++t) stride *= dims[t];
      int digit = rem / stride;
      rem %= stride;
      if (sel & (Mask{1} << p))
        s = s * dims[p] + digit;
      else
        r = r * dims[p] + digit;
    }
    sel_of_[idx] = s;
    rest_of_[idx] = r;
    full_of_[s * rest_dim_ + r] = idx;
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i)
    out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix embed_operator(const std::vector<int>& dims, Mask sel, const Matrix& op) {
  IndexSplit split(dims, sel);
  if (op.rows() != split.sel_dim() || op.cols() != split.sel_dim())
    throw std::invalid_argument("operator dimension does not match selected parties");
  const int full = split.full_dim();
  Matrix out = Matrix::Zero(full, full);
  for (int si = 0; si < split.sel_dim(); ++si)
    for (int sj = 0; sj < split.sel_dim(); ++sj) {
      if (op(si, sj) == cx{0.0, 0.0}) continue;
      for (int r = 0; r < split.rest_dim(); ++r)
        out(split.fuse(si, r), split.fuse(sj, r)) = op(si, sj);
    }
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& m) {
  const Eigen::Index n = m.rows();
  if (n == 1) {
    RealVector v(1);
    v[0] = m(0, 0).real();
    return v;
  }
  if (n == 2) {
    double a = m(0, 0).real();
    double d = m(1, 1).real();
    double mean = 0.5 * (a + d);
    double disc = std::sqrt(std::max(0.25 * (a - d) * (a - d) + std::norm(m(0, 1)), 0.0));
    RealVector v(2);
    v[0] = mean + disc;
    v[1] = mean - disc;
    return v;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("hermitian eigenvalue computation failed");
  return solver.eigenvalues().reverse();
}

Matrix haar_isometry(int rows, int cols, Rng& rng) {
  if (cols < 1 || rows < cols)
    throw std::invalid_argument("isometry needs rows >= cols >= 1");
  Matrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(rows, cols);
  Matrix r = qr.matrixQR().topRows(cols);
  for (int j = 0; j < cols; ++j) {
    cx d = r(j, j);
    double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

bool is_isometry(const Matrix& w, double tolerance) {
  if (w.rows() < w.cols()) return false;
  Matrix gram = w.adjoint() * w;
  return (gram - Matrix::Identity(w.cols(), w.cols())).cwiseAbs().maxCoeff() <= tolerance;
}

}  // namespace qcorr
