#include "qcorr/entropy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qcorr {

QValue::QValue(double q) : q_(q) {
  if (!std::isfinite(q) || q < 0.0)
    throw std::invalid_argument("q must be finite and >= 0");
}

bool QValue::near_one() const { return std::abs(q_ - 1.0) < kQOneWindow; }

void QValue::require_at_least_one(const char* operation) const {
  if (q_ < 1.0 && !near_one())
    throw std::invalid_argument(std::string(operation) + " requires q >= 1");
}

double q_log(double x, QValue q) {
  if (x <= 0.0) throw std::invalid_argument("q_log needs a positive argument");
  if (q.near_one()) return std::log(x);
  return (std::pow(x, 1.0 - q.value()) - 1.0) / (1.0 - q.value());
}

double tsallis_entropy_of_probs(std::span<const double> probs, QValue q) {
  if (q.near_one()) {
    double s = 0.0;
    for (double p : probs)
      if (p > 0.0) s -= p * std::log(p);
    return s;
  }
  double sum_pq = 0.0;
  for (double p : probs)
    if (p > 0.0) sum_pq += std::pow(p, q.value());
  return (1.0 - sum_pq) / (q.value() - 1.0);
}

double tsallis_entropy(const MultipartiteState& s, QValue q) {
  RealVector probs = clip_spectrum(hermitian_eigenvalues(s.matrix()));
  return tsallis_entropy_of_probs({probs.data(), static_cast<std::size_t>(probs.size())}, q);
}

double tsallis_entropy_trace_form(const MultipartiteState& s, QValue q) {
  Eigensystem es = eig_hermitian(s);
  const int n = s.dim();
  // rho^q ln_q rho assembled in one pass: the scalar lam^q ln_q(lam) is
  // bounded even when ln_q(lam) alone blows up at small lam, so combining
  // per eigenvalue keeps the projector roundoff from being amplified.
  Matrix prod = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double lam = es.values[i];
    if (lam <= 0.0) continue;  // 0^q ln_q 0 contributes nothing
    double w = (q.near_one() ? lam : std::pow(lam, q.value())) * q_log(lam, q);
    prod += w * (es.vectors.col(i) * es.vectors.col(i).adjoint());
  }
  return -prod.trace().real();
}

namespace {

void check_proper_subset(Mask m, int n_parties, const char* what) {
  if (m == 0)
    throw std::invalid_argument(std::string(what) + ": no parties selected");
  if (m >= (Mask{1} << n_parties))
    throw std::invalid_argument(std::string(what) +
                                ": mask refers to nonexistent parties");
  if (m == full_mask(n_parties))
    throw std::invalid_argument(std::string(what) + ": all parties selected");
}

}  // namespace

double q_conditional_entropy(const MultipartiteState& s, Mask conditioning,
                             QValue q) {
  check_proper_subset(conditioning, s.party_count(), "conditional entropy");
  return tsallis_entropy(s, q) - tsallis_entropy(partial_trace(s, conditioning), q);
}

double q_mutual_entropy(const MultipartiteState& s, Mask first_group, QValue q) {
  check_proper_subset(first_group, s.party_count(), "mutual entropy");
  Mask rest = s.all_parties() & ~first_group;
  return tsallis_entropy(partial_trace(s, first_group), q) +
         tsallis_entropy(partial_trace(s, rest), q) - tsallis_entropy(s, q);
}

double max_qubit_entropy(QValue q) {
  q.require_at_least_one("max_qubit_entropy");
  if (q.near_one()) return std::numbers::ln2;
  return (1.0 - std::pow(2.0, 1.0 - q.value())) / (q.value() - 1.0);
}

MultipartiteState Ensemble::mixture() const {
  if (members.empty()) throw std::invalid_argument("empty ensemble");
  Matrix acc = Matrix::Zero(members[0].dim(), members[0].dim());
  for (std::size_t i = 0; i < members.size(); ++i)
    acc += weights[i] * members[i].matrix();
  return MultipartiteState::trusted(members[0].dims(), members[0].labels(),
                                    std::move(acc));
}

void Ensemble::validate(const MultipartiteState* parent) const {
  if (members.empty()) throw std::invalid_argument("empty ensemble");
  if (weights.size() != members.size())
    throw std::invalid_argument("ensemble weight/member count mismatch");
  if (!kets.empty() && kets.size() != members.size())
    throw std::invalid_argument("ensemble ket/member count mismatch");
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw std::invalid_argument("ensemble weight is negative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > tol::trace_one)
    throw std::invalid_argument("ensemble weights do not sum to 1");
  for (const auto& m : members)
    if (m.dim() != members[0].dim())
      throw std::invalid_argument("ensemble members live on different spaces");
  if (parent != nullptr) {
    if (parent->dim() != members[0].dim())
      throw std::invalid_argument("ensemble does not match its parent state");
    if ((mixture().matrix() - parent->matrix()).cwiseAbs().maxCoeff() > 1e-10)
      throw std::invalid_argument("ensemble mixture does not reproduce the parent");
  }
}

QDifference q_difference(const Ensemble& e, QValue q) {
  e.validate();
  QDifference out;
  out.nonnegativity_guaranteed = q.value() >= 1.0 || q.near_one();
  double drop = tsallis_entropy(e.mixture(), q);
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    double w = e.weights[i];
    if (w <= 0.0) continue;
    drop -= std::pow(w, q.value()) * tsallis_entropy(e.members[i], q);
  }
  out.value = drop;
  return out;
}

}  // namespace qcorr
