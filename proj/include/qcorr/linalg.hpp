#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace qcorr {

using cx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Bit i set means party i is selected. Party 0 is the slowest (leftmost)
// index in the row-major basis ordering.
using Mask = std::uint32_t;

// Everything here is dense; refuse absurd dimensions early.
inline constexpr int kMaxDimension = 4096;

namespace tol {
inline constexpr double hermitian = 1e-10;
inline constexpr double trace_one = 1e-10;
inline constexpr double psd = 1e-10;
inline constexpr double pure_norm = 1e-12;
inline constexpr double isometry = 1e-10;
inline constexpr double weight_floor = 1e-12;
inline constexpr double rank_cut = 1e-12;
}  // namespace tol

// Deterministic splitmix64 stream. Self-contained on purpose: std::mt19937
// plus the standard distributions would tie results to a particular library
// implementation, and seeded runs here must reproduce bit-for-bit anywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller.
  double normal();

  // Complex standard normal (independent N(0,1) parts).
  cx complex_normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Derives an independent stream seed, so that restart k of a run with master
// seed s is the same no matter how many restarts surround it.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t stream);

int popcount(Mask m);
Mask full_mask(int n_parties);
int dim_product(std::span<const int> dims);

// Product of the dimensions of the selected parties.
int masked_dim(std::span<const int> dims, Mask sel);

// Splits row-major basis indices into (selected, rest) digit groups for a
// fixed party mask. All maps are precomputed tables.
class IndexSplit {
 public:
  IndexSplit(const std::vector<int>& dims, Mask sel);

  int full_dim() const { return static_cast<int>(sel_of_.size()); }
  int sel_dim() const { return sel_dim_; }
  int rest_dim() const { return rest_dim_; }

  int sel_of(int full) const { return sel_of_[full]; }
  int rest_of(int full) const { return rest_of_[full]; }
  int fuse(int sel, int rest) const { return full_of_[sel * rest_dim_ + rest]; }

 private:
  int sel_dim_ = 1;
  int rest_dim_ = 1;
  std::vector<int> sel_of_;
  std::vector<int> rest_of_;
  std::vector<int> full_of_;
};

Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

// Operator acting as op on the selected parties and as identity on the rest.
Matrix embed_operator(const std::vector<int>& dims, Mask sel, const Matrix& op);

// Eigenvalues of a Hermitian matrix, descending, no cleanup applied.
// Closed form for 1x1 and 2x2, which dominate the optimizer inner loops.
RealVector hermitian_eigenvalues(const Matrix& m);

// Haar-distributed rows x cols isometry (Gaussian matrix, QR, then the
// R-diagonal phase fix that makes the distribution actually uniform).
Matrix haar_isometry(int rows, int cols, Rng& rng);

bool is_isometry(const Matrix& w, double tolerance = tol::isometry);

}  // namespace qcorr
