#include "qcorr/state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>

namespace qcorr {

namespace {

void check_shape(const std::vector<int>& dims,
                 const std::vector<std::string>& labels, Eigen::Index rows) {
  if (dims.empty()) throw std::invalid_argument("state needs at least one party");
  if (labels.size() != dims.size())
    throw std::invalid_argument("label count does not match party count");
  std::set<std::string> seen(labels.begin(), labels.end());
  if (seen.size() != labels.size())
    throw std::invalid_argument("party labels must be unique");
  if (dim_product(dims) != rows)
    throw std::invalid_argument("matrix dimension does not match party dimensions");
}

}  // namespace

void validate_density(const std::vector<int>& dims,
                      const std::vector<std::string>& labels,
                      const Matrix& matrix) {
  if (matrix.rows() != matrix.cols())
    throw std::invalid_argument("density matrix must be square");
  check_shape(dims, labels, matrix.rows());
  if (!matrix.allFinite())
    throw std::invalid_argument("density matrix has non-finite entries");
  if ((matrix - matrix.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian)
    throw std::invalid_argument("density matrix is not Hermitian within tolerance");
  if (std::abs(matrix.trace().real() - 1.0) > tol::trace_one ||
      std::abs(matrix.trace().imag()) > tol::trace_one)
    throw std::invalid_argument("density matrix trace is not 1 within tolerance");
  RealVector ev = hermitian_eigenvalues(matrix);
  if (ev.minCoeff() < -tol::psd)
    throw std::invalid_argument("density matrix has a negative eigenvalue beyond tolerance");
}

MultipartiteState::MultipartiteState(std::vector<int> dims,
                                     std::vector<std::string> labels,
                                     Matrix matrix)
    : dims_(std::move(dims)), labels_(std::move(labels)), matrix_(std::move(matrix)) {
  validate_density(dims_, labels_, matrix_);
}

MultipartiteState::MultipartiteState(Trusted, std::vector<int> dims,
                                     std::vector<std::string> labels,
                                     Matrix matrix)
    : dims_(std::move(dims)), labels_(std::move(labels)), matrix_(std::move(matrix)) {}

MultipartiteState MultipartiteState::trusted(std::vector<int> dims,
                                             std::vector<std::string> labels,
                                             Matrix matrix) {
  return MultipartiteState(Trusted{}, std::move(dims), std::move(labels),
                           std::move(matrix));
}

Mask MultipartiteState::label_mask(const std::vector<std::string>& names) const {
  Mask m = 0;
  for (const auto& name : names) {
    auto it = std::find(labels_.begin(), labels_.end(), name);
    if (it == labels_.end())
      throw std::invalid_argument("unknown party label: " + name);
    Mask bit = Mask{1} << (it - labels_.begin());
    if (m & bit) throw std::invalid_argument("party label repeated: " + name);
    m |= bit;
  }
  return m;
}

PureState::PureState(std::vector<int> dims, std::vector<std::string> labels,
                     Vector vec)
    : dims_(std::move(dims)), labels_(std::move(labels)), vec_(std::move(vec)) {
  check_shape(dims_, labels_, vec_.size());
  if (!vec_.allFinite())
    throw std::invalid_argument("state vector has non-finite entries");
  if (std::abs(vec_.norm() - 1.0) > tol::pure_norm)
    throw std::invalid_argument("state vector is not normalized within tolerance");
}

PureState::PureState(Trusted, std::vector<int> dims,
                     std::vector<std::string> labels, Vector vec)
    : dims_(std::move(dims)), labels_(std::move(labels)), vec_(std::move(vec)) {}

PureState PureState::trusted(std::vector<int> dims,
                             std::vector<std::string> labels, Vector vec) {
  return PureState(Trusted{}, std::move(dims), std::move(labels), std::move(vec));
}

MultipartiteState PureState::density() const {
  return MultipartiteState::trusted(dims_, labels_, vec_ * vec_.adjoint());
}

PauliPair generalized_paulis(int d, const Matrix& basis) {
  if (d < 2) throw std::invalid_argument("pauli pair needs dimension >= 2");
  if (basis.rows() != d || basis.cols() != d)
    throw std::invalid_argument("basis matrix must be d x d");
  if (!is_isometry(basis))
    throw std::invalid_argument("basis columns are not orthonormal within tolerance");
  PauliPair p;
  p.d = d;
  p.omega = std::polar(1.0, 2.0 * std::numbers::pi / d);
  p.clock = Matrix::Zero(d, d);
  p.shift = Matrix::Zero(d, d);
  cx phase{1.0, 0.0};
  for (int j = 0; j < d; ++j) {
    p.clock += phase * basis.col(j) * basis.col(j).adjoint();
    p.shift += basis.col((j + 1) % d) * basis.col(j).adjoint();
    phase *= p.omega;
  }
  return p;
}

RealVector clip_spectrum(RealVector v) {
  double low = v.size() ? v.minCoeff() : 0.0;
  if (low < -tol::psd)
    throw std::runtime_error("spectrum has a negative eigenvalue beyond tolerance");
  int nonzero = 0;
  int last = -1;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (v[i] < tol::rank_cut) {
      v[i] = 0.0;
    } else {
      if (v[i] > 1.0) v[i] = 1.0;
      ++nonzero;
      last = static_cast<int>(i);
      sum += v[i];
    }
  }
  if (nonzero == 0)
    throw std::runtime_error("spectrum vanished after cleanup; input was not unit trace");
  if (nonzero == 1) {
    v[last] = 1.0;
    return v;
  }
  if (std::abs(sum - 1.0) > 1e-12) v /= sum;
  return v;
}

int Eigensystem::rank() const {
  int r = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values[i] > 0.0) ++r;
  return r;
}

Eigensystem eig_hermitian(const MultipartiteState& s) {
  const Matrix& m = s.matrix();
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::hermitian)
    throw std::invalid_argument("matrix is not Hermitian within tolerance");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(0.5 * (m + m.adjoint()));
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed");

  const int n = s.dim();
  RealVector raw(n);
  Matrix vectors(n, n);
  for (int i = 0; i < n; ++i) {
    raw[i] = solver.eigenvalues()[n - 1 - i];
    vectors.col(i) = solver.eigenvectors().col(n - 1 - i);
  }

  // Fix each eigenvector's global phase: first component of significant
  // magnitude becomes real positive. A unit vector always has one.
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      cx c = vectors(k, i);
      if (std::abs(c) > 1e-8) {
        vectors.col(i) *= std::conj(c) / std::abs(c);
        break;
      }
    }
  }

  // Order exact eigenvalue ties lexicographically by vector components so
  // degenerate subspaces come out the same way on every run.
  auto lex_less = [&](int a, int b) {
    for (int k = 0; k < n; ++k) {
      cx ca = vectors(k, a), cb = vectors(k, b);
      if (ca.real() != cb.real()) return ca.real() < cb.real();
      if (ca.imag() != cb.imag()) return ca.imag() < cb.imag();
    }
    return false;
  };
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (raw[a] != raw[b]) return raw[a] > raw[b];
    return lex_less(a, b);
  });

  Eigensystem out;
  out.values = RealVector(n);
  out.vectors = Matrix(n, n);
  for (int i = 0; i < n; ++i) {
    out.values[i] = raw[order[i]];
    out.vectors.col(i) = vectors.col(order[i]);
  }
  out.values = clip_spectrum(std::move(out.values));
  return out;
}

MultipartiteState tensor(const MultipartiteState& a, const MultipartiteState& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return MultipartiteState::trusted(std::move(dims), std::move(labels),
                                    kron(a.matrix(), b.matrix()));
}

PureState tensor(const PureState& a, const PureState& b) {
  std::vector<int> dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  std::vector<std::string> labels = a.labels();
  labels.insert(labels.end(), b.labels().begin(), b.labels().end());
  return PureState::trusted(std::move(dims), std::move(labels),
                            kron(a.vec(), b.vec()));
}

namespace {

std::pair<std::vector<int>, std::vector<std::string>> kept_parts(
    const std::vector<int>& dims, const std::vector<std::string>& labels,
    Mask keep) {
  std::vector<int> kd;
  std::vector<std::string> kl;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (keep & (Mask{1} << i)) {
      kd.push_back(dims[i]);
      kl.push_back(labels[i]);
    }
  return {kd, kl};
}

void check_keep_mask(Mask keep, int n_parties) {
  if (keep == 0) throw std::invalid_argument("partial trace keeps no parties");
  if (keep >= (Mask{1} << n_parties))
    throw std::invalid_argument("party mask refers to nonexistent parties");
}

}  // namespace

MultipartiteState partial_trace(const MultipartiteState& s, Mask keep) {
  check_keep_mask(keep, s.party_count());
  auto [kd, kl] = kept_parts(s.dims(), s.labels(), keep);
  if (keep == s.all_parties())
    return MultipartiteState::trusted(kd, kl, s.matrix());
  IndexSplit split(s.dims(), keep);
  const int sd = split.sel_dim(), rd = split.rest_dim();
  Matrix out = Matrix::Zero(sd, sd);
  for (int i = 0; i < sd; ++i)
    for (int j = 0; j < sd; ++j) {
      cx acc{0.0, 0.0};
      for (int r = 0; r < rd; ++r) acc += s.matrix()(split.fuse(i, r), split.fuse(j, r));
      out(i, j) = acc;
    }
  return MultipartiteState::trusted(std::move(kd), std::move(kl), std::move(out));
}

MultipartiteState partial_trace(const PureState& s, Mask keep) {
  check_keep_mask(keep, s.party_count());
  auto [kd, kl] = kept_parts(s.dims(), s.labels(), keep);
  if (keep == full_mask(s.party_count()))
    return s.density();
  IndexSplit split(s.dims(), keep);
  const int sd = split.sel_dim(), rd = split.rest_dim();
  Matrix out = Matrix::Zero(sd, sd);
  for (int i = 0; i < sd; ++i)
    for (int j = 0; j <= i; ++j) {
      cx acc{0.0, 0.0};
      for (int r = 0; r < rd; ++r)
        acc += s.vec()[split.fuse(i, r)] * std::conj(s.vec()[split.fuse(j, r)]);
      out(i, j) = acc;
      out(j, i) = std::conj(acc);
    }
  return MultipartiteState::trusted(std::move(kd), std::move(kl), std::move(out));
}

MultipartiteState regroup_bipartite(const MultipartiteState& s, Mask first_group) {
  if (first_group == 0 || first_group == s.all_parties())
    throw std::invalid_argument("regroup needs a proper nonempty party subset");
  if (first_group >= (Mask{1} << s.party_count()))
    throw std::invalid_argument("party mask refers to nonexistent parties");
  IndexSplit split(s.dims(), first_group);
  const int sd = split.sel_dim(), rd = split.rest_dim();
  Matrix out(sd * rd, sd * rd);
  for (int i = 0; i < sd; ++i)
    for (int r = 0; r < rd; ++r)
      for (int j = 0; j < sd; ++j)
        for (int t = 0; t < rd; ++t)
          out(i * rd + r, j * rd + t) = s.matrix()(split.fuse(i, r), split.fuse(j, t));
  std::string first_label, rest_label;
  for (int p = 0; p < s.party_count(); ++p) {
    if (first_group & (Mask{1} << p))
      first_label += s.labels()[p];
    else
      rest_label += s.labels()[p];
  }
  return MultipartiteState::trusted({sd, rd}, {first_label, rest_label},
                                    std::move(out));
}

PureState purify(const MultipartiteState& s) {
  Eigensystem es = eig_hermitian(s);
  const int r = es.rank();
  const int d = s.dim();
  Vector psi = Vector::Zero(d * r);
  for (int e = 0; e < r; ++e) {
    double w = std::sqrt(es.values[e]);
    for (int i = 0; i < d; ++i) psi[i * r + e] = w * es.vectors(i, e);
  }
  std::vector<int> dims = s.dims();
  dims.push_back(r);
  std::vector<std::string> labels = s.labels();
  std::string env = "E";
  for (int k = 2; std::find(labels.begin(), labels.end(), env) != labels.end(); ++k)
    env = "E" + std::to_string(k);
  labels.push_back(env);
  return PureState::trusted(std::move(dims), std::move(labels), std::move(psi));
}

std::vector<std::string> default_labels(int n_parties) {
  std::vector<std::string> out;
  out.reserve(n_parties);
  out.push_back("A");
  for (int i = 1; i < n_parties; ++i) out.push_back("B" + std::to_string(i));
  return out;
}

namespace {

std::vector<std::string> split_string(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

int parse_int(const std::string& s, const char* what) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(what);
    return v;
  } catch (...) {
    throw std::invalid_argument(std::string("could not parse ") + what + ": " + s);
  }
}

std::uint64_t parse_u64(const std::string& s) {
  try {
    std::size_t used = 0;
    std::uint64_t v = std::stoull(s, &used);
    if (used != s.size()) throw std::invalid_argument("seed");
    return v;
  } catch (...) {
    throw std::invalid_argument("could not parse seed: " + s);
  }
}

LoadedState from_pure(PureState psi, std::string source) {
  MultipartiteState rho = psi.density();
  return LoadedState{std::move(psi), std::move(rho), std::move(source)};
}

const char* kDescriptorHelp =
    "known state descriptors: ghz:N, w:N, bell:+, bell:-, product:SPEC, "
    "haar:N[:seed=S], mixed:N[:rank=R][:seed=S], or a path to a state JSON file";

}  // namespace

LoadedState make_named_state(const std::string& descriptor) {
  auto parts = split_string(descriptor, ':');
  const std::string& kind = parts[0];

  std::uint64_t seed = 0;
  int rank = -1;
  for (std::size_t i = 2; i < parts.size(); ++i) {
    if (parts[i].rfind("seed=", 0) == 0)
      seed = parse_u64(parts[i].substr(5));
    else if (parts[i].rfind("rank=", 0) == 0)
      rank = parse_int(parts[i].substr(5), "rank");
    else
      throw std::invalid_argument("unknown descriptor segment: " + parts[i] +
                                  "; " + kDescriptorHelp);
  }

  if (kind == "ghz" || kind == "w" || kind == "haar" || kind == "mixed") {
    if (parts.size() < 2)
      throw std::invalid_argument("descriptor needs a party count; " +
                                  std::string(kDescriptorHelp));
    int n = parse_int(parts[1], "party count");
    if (n < 2 && kind != "mixed")
      throw std::invalid_argument("need at least 2 parties in " + descriptor);
    if (n < 1 || n > 12)
      throw std::invalid_argument("party count out of range in " + descriptor);
    const int d = 1 << n;

    if (kind == "ghz") {
      Vector v = Vector::Zero(d);
      v[0] = v[d - 1] = 1.0 / std::numbers::sqrt2;
      return from_pure(PureState(std::vector<int>(n, 2), default_labels(n), v),
                       descriptor);
    }
    if (kind == "w") {
      Vector v = Vector::Zero(d);
      double a = 1.0 / std::sqrt(static_cast<double>(n));
      for (int j = 0; j < n; ++j) v[std::size_t{1} << j] = a;
      return from_pure(PureState(std::vector<int>(n, 2), default_labels(n), v),
                       descriptor);
    }
    if (kind == "haar") {
      Rng rng(mix_seed(seed, 0x9a57u));
      Vector v(d);
      for (int i = 0; i < d; ++i) v[i] = rng.complex_normal();
      v /= v.norm();
      return from_pure(PureState(std::vector<int>(n, 2), default_labels(n), v),
                       descriptor);
    }
    // mixed
    int r = rank < 0 ? d : rank;
    if (r < 1 || r > d)
      throw std::invalid_argument("rank out of range in " + descriptor);
    Rng rng(mix_seed(seed, 0x3176u));
    Matrix g(d, r);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < r; ++j) g(i, j) = rng.complex_normal();
    Matrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    return LoadedState{std::nullopt,
                       MultipartiteState(std::vector<int>(n, 2),
                                         default_labels(n), std::move(rho)),
                       descriptor};
  }

  if (kind == "bell") {
    if (parts.size() != 2 || (parts[1] != "+" && parts[1] != "-"))
      throw std::invalid_argument("bell descriptor must be bell:+ or bell:-; " +
                                  std::string(kDescriptorHelp));
    Vector v = Vector::Zero(4);
    v[0] = 1.0 / std::numbers::sqrt2;
    v[3] = (parts[1] == "+" ? 1.0 : -1.0) / std::numbers::sqrt2;
    return from_pure(PureState({2, 2}, default_labels(2), v), descriptor);
  }

  if (kind == "product") {
    if (parts.size() != 2 || parts[1].empty())
      throw std::invalid_argument("product descriptor needs qubit characters; " +
                                  std::string(kDescriptorHelp));
    const std::string& spec = parts[1];
    if (spec.size() > 12)
      throw std::invalid_argument("party count out of range in " + descriptor);
    Vector v(1);
    v[0] = 1.0;
    for (char c : spec) {
      Vector site(2);
      switch (c) {
        case '0': site << 1.0, 0.0; break;
        case '1': site << 0.0, 1.0; break;
        case '+': site << 1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2; break;
        case '-': site << 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2; break;
        default:
          throw std::invalid_argument(
              std::string("product characters must be 0, 1, + or -, got ") + c);
      }
      v = kron(v, site);
    }
    int n = static_cast<int>(spec.size());
    return from_pure(PureState(std::vector<int>(n, 2), default_labels(n), v),
                     descriptor);
  }

  throw std::invalid_argument("unknown state descriptor: " + descriptor + "; " +
                              kDescriptorHelp);
}

}  // namespace qcorr
