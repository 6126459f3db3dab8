#include "qcorr/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <stdexcept>

namespace qcorr {

void OptimizerConfig::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be >= 1");
  if (max_iterations < 30)
    throw std::invalid_argument("max_iterations must be >= 30");
  if (!(step_tolerance > 0.0) || !(value_tolerance > 0.0))
    throw std::invalid_argument("tolerances must be positive");
  if (cardinality && *cardinality < 1)
    throw std::invalid_argument("cardinality must be >= 1");
}

const char* to_string(BoundDirection d) {
  return d == BoundDirection::kUpperBoundOfMin ? "upper-bound-of-min"
                                               : "lower-bound-of-max";
}

double OptimizationReport::optimizer_gap() const {
  if (restart_values.size() < 2) return 0.0;
  double best = direction == BoundDirection::kUpperBoundOfMin
                    ? *std::min_element(restart_values.begin(), restart_values.end())
                    : *std::max_element(restart_values.begin(), restart_values.end());
  double gap = 0.0;
  bool found = false;
  for (double v : restart_values) {
    double d = std::abs(v - best);
    if (d > 1e-9 && (!found || d < gap)) {
      gap = d;
      found = true;
    }
  }
  return found ? gap : 0.0;
}

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

void hash_double(std::uint64_t& h, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  for (int i = 0; i < 8; ++i) {
    h ^= (bits >> (8 * i)) & 0xFF;
    h *= 0x100000001B3ULL;
  }
}

void hash_vector(std::uint64_t& h, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    hash_double(h, v[i].real());
    hash_double(h, v[i].imag());
  }
}

}  // namespace

std::string certificate_digest(const OptimizationReport& rep) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  if (rep.ensemble_certificate) {
    const Ensemble& e = *rep.ensemble_certificate;
    for (double w : e.weights) hash_double(h, w);
    if (e.has_kets()) {
      for (const PureState& k : e.kets) hash_vector(h, k.vec());
    } else {
      for (const MultipartiteState& m : e.members)
        for (Eigen::Index c = 0; c < m.matrix().cols(); ++c)
          hash_vector(h, m.matrix().col(c));
    }
  } else if (rep.measurement_certificate) {
    for (const Vector& ket : rep.measurement_certificate->kets)
      hash_vector(h, ket);
  } else {
    return "";
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

Matrix unitary_from_params(std::span<const double> params, int m) {
  if (static_cast<int>(params.size()) != m * m)
    throw std::invalid_argument("parameter vector must have m*m entries");
  Matrix h(m, m);
  std::size_t k = 0;
  for (int i = 0; i < m; ++i) h(i, i) = params[k++];
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      double re = params[k++];
      double im = params[k++];
      h(i, j) = cx{re, im};
      h(j, i) = cx{re, -im};
    }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed in unitary_from_params");
  Vector phases(m);
  for (int i = 0; i < m; ++i) phases[i] = std::polar(1.0, solver.eigenvalues()[i]);
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

NelderMeadResult nelder_mead(
    const std::function<double(std::span<const double>)>& f,
    std::span<const double> x0, const NelderMeadOptions& opts) {
  const int n = static_cast<int>(x0.size());
  if (n < 1) throw std::invalid_argument("nelder_mead needs at least one parameter");

  NelderMeadResult result;
  std::vector<std::vector<double>> pts(n + 1, std::vector<double>(x0.begin(), x0.end()));
  std::vector<double> fv(n + 1);
  auto eval = [&](const std::vector<double>& x) {
    ++result.evaluations;
    return f(std::span<const double>(x));
  };
  for (int i = 0; i < n; ++i) pts[i + 1][i] += opts.initial_step;
  for (int i = 0; i <= n; ++i) fv[i] = eval(pts[i]);

  std::vector<int> order(n + 1);
  std::vector<double> centroid(n), xr(n), xe(n), xc(n);

  while (true) {
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fv[a] < fv[b]; });
    const int best = order[0], second_worst = order[n - 1], worst = order[n];

    // The optimum typically sits on a flat manifold (free unitary phases),
    // where the simplex keeps drifting at constant objective; value spread
    // is the criterion that can actually trigger there.
    double fspread = fv[worst] - fv[best];
    double xspread = 0.0;
    for (int i = 0; i <= n; ++i)
      for (int k = 0; k < n; ++k)
        xspread = std::max(xspread, std::abs(pts[i][k] - pts[best][k]));
    if (fspread <= opts.value_tolerance || xspread <= opts.step_tolerance) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= opts.max_evaluations) break;

    for (int k = 0; k < n; ++k) {
      double acc = 0.0;
      for (int i = 0; i <= n; ++i)
        if (i != worst) acc += pts[i][k];
      centroid[k] = acc / n;
    }

    for (int k = 0; k < n; ++k) xr[k] = 2.0 * centroid[k] - pts[worst][k];
    double fr = eval(xr);

    if (fr < fv[best]) {
      for (int k = 0; k < n; ++k) xe[k] = centroid[k] + 2.0 * (xr[k] - centroid[k]);
      double fe = eval(xe);
      if (fe < fr) {
        pts[worst] = xe;
        fv[worst] = fe;
      } else {
        pts[worst] = xr;
        fv[worst] = fr;
      }
      continue;
    }
    if (fr < fv[second_worst]) {
      pts[worst] = xr;
      fv[worst] = fr;
      continue;
    }
    bool shrink = false;
    if (fr < fv[worst]) {
      for (int k = 0; k < n; ++k) xc[k] = centroid[k] + 0.5 * (xr[k] - centroid[k]);
      double fc = eval(xc);
      if (fc <= fr) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    } else {
      for (int k = 0; k < n; ++k)
        xc[k] = centroid[k] + 0.5 * (pts[worst][k] - centroid[k]);
      double fc = eval(xc);
      if (fc < fv[worst]) {
        pts[worst] = xc;
        fv[worst] = fc;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (int i = 0; i <= n; ++i) {
        if (i == best) continue;
        for (int k = 0; k < n; ++k)
          pts[i][k] = pts[best][k] + 0.5 * (pts[i][k] - pts[best][k]);
        fv[i] = eval(pts[i]);
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i)
    if (fv[i] < fv[best]) best = i;
  result.x = pts[best];
  result.value = fv[best];
  return result;
}

namespace {

void check_proper(Mask m, int n_parties, const char* what) {
  if (m == 0) throw std::invalid_argument(std::string(what) + ": empty party mask");
  if (m >= (Mask{1} << n_parties))
    throw std::invalid_argument(std::string(what) +
                                ": mask refers to nonexistent parties");
  if (m == full_mask(n_parties))
    throw std::invalid_argument(std::string(what) + ": mask covers every party");
}

double entropy_of_scaled_spectrum(const RealVector& mu, double p, QValue q) {
  std::vector<double> probs;
  probs.reserve(mu.size());
  for (Eigen::Index i = 0; i < mu.size(); ++i) probs.push_back(mu[i] / p);
  return tsallis_entropy_of_probs(probs, q);
}

// Pure-decomposition objective data for one (state, cut) pair.
struct DecompProblem {
  std::vector<int> dims;
  std::vector<std::string> labels;
  IndexSplit split;  // selects the a side
  Matrix c;          // d x rank, columns sqrt(lambda_j) e_j
  int rank = 0;
  QValue q;

  DecompProblem(const MultipartiteState& s, Mask a_side, QValue q_in)
      : dims(s.dims()), labels(s.labels()), split(s.dims(), a_side), q(q_in) {
    Eigensystem es = eig_hermitian(s);
    rank = es.rank();
    c = Matrix(s.dim(), rank);
    for (int j = 0; j < rank; ++j)
      c.col(j) = std::sqrt(es.values[j]) * es.vectors.col(j);
  }

  // sum_i p_i^q S_q of the a-side marginal over members C w^T.
  double eval(const Matrix& w) const {
    const int a_dim = split.sel_dim();
    const int b_dim = split.rest_dim();
    Matrix members = c * w.transpose();
    double obj = 0.0;
    Matrix b(a_dim, b_dim);
    for (Eigen::Index i = 0; i < members.cols(); ++i) {
      double p = members.col(i).squaredNorm();
      if (p < tol::weight_floor) continue;
      for (int ai = 0; ai < a_dim; ++ai)
        for (int bi = 0; bi < b_dim; ++bi)
          b(ai, bi) = members(split.fuse(ai, bi), i);
      Matrix gram = a_dim <= b_dim ? Matrix(b * b.adjoint()) : Matrix(b.adjoint() * b);
      RealVector mu = hermitian_eigenvalues(gram);
      obj += std::pow(p, q.value()) * entropy_of_scaled_spectrum(mu, p, q);
    }
    return obj;
  }
};

// Rank-1 measurement objective data.
struct MeasProblem {
  Matrix rho;
  IndexSplit split;  // selects the measured parties
  double marginal_entropy = 0.0;
  QValue q;

  MeasProblem(const MultipartiteState& s, Mask measured, QValue q_in)
      : rho(s.matrix()), split(s.dims(), measured), q(q_in) {
    Mask keep = s.all_parties() & ~measured;
    marginal_entropy = tsallis_entropy(partial_trace(s, keep), q);
  }

  // q-difference of the ensemble induced by the rows of w (n x d).
  double eval(const Matrix& w) const {
    double acc = 0.0;
    for (Eigen::Index x = 0; x < w.rows(); ++x) {
      Vector ket = w.row(x).adjoint();
      Matrix block = conditional_unnormalized(rho, split, ket);
      double p = block.trace().real();
      if (p < tol::weight_floor) continue;
      RealVector mu = hermitian_eigenvalues(block);
      acc += std::pow(p, q.value()) * entropy_of_scaled_spectrum(mu, p, q);
    }
    return marginal_entropy - acc;
  }
};

struct SearchOutcome {
  Matrix best_w;
  std::vector<double> values;
  bool converged = false;
};

// Multi-start staged Nelder-Mead over the isometry parameterization.
// Restart 0 always starts from theta = 0 (the identity unitary: eigenbasis
// decomposition or basis measurement), the rest from seeded random points.
// Each restart re-runs with shrinking simplexes to polish the endpoint well
// past what a single descent reaches.
SearchOutcome multistart_isometry(int space_dim, int cols,
                                  const std::function<double(const Matrix&)>& objective,
                                  bool maximize, const OptimizerConfig& cfg) {
  const int nparams = space_dim * space_dim;
  auto f_min = [&](std::span<const double> theta) {
    double v = objective(unitary_from_params(theta, space_dim).leftCols(cols));
    return maximize ? -v : v;
  };

  const double steps[3] = {0.7, 1e-3, 1e-5};
  const int budgets[3] = {std::max(20, (cfg.max_iterations * 6) / 10),
                          std::max(20, cfg.max_iterations / 4),
                          std::max(20, (cfg.max_iterations * 3) / 20)};

  SearchOutcome out;
  double best_internal = std::numeric_limits<double>::infinity();
  std::vector<double> best_theta;
  for (int restart = 0; restart < cfg.restarts; ++restart) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(restart)));
    std::vector<double> x(nparams, 0.0);
    if (restart > 0)
      for (double& v : x) v = rng.uniform(-2.0, 2.0);
    double val = 0.0;
    bool conv = false;
    for (int stage = 0; stage < 3; ++stage) {
      NelderMeadOptions o;
      o.initial_step = steps[stage];
      o.max_evaluations = budgets[stage];
      o.step_tolerance = cfg.step_tolerance;
      o.value_tolerance = cfg.value_tolerance;
      NelderMeadResult res = nelder_mead(f_min, x, o);
      x = std::move(res.x);
      val = res.value;
      conv = res.converged;
    }
    out.values.push_back(maximize ? -val : val);
    if (val < best_internal) {
      best_internal = val;
      best_theta = x;
      out.converged = conv;
    }
  }
  out.best_w = unitary_from_params(best_theta, space_dim).leftCols(cols);
  return out;
}

OptimizationReport decomposition_estimate(const MultipartiteState& s, Mask a_side,
                                          QValue q, const OptimizerConfig& cfg,
                                          bool maximize) {
  cfg.validate();
  check_proper(a_side, s.party_count(), "decomposition estimate");

  OptimizationReport rep;
  rep.direction = maximize ? BoundDirection::kLowerBoundOfMax
                           : BoundDirection::kUpperBoundOfMin;
  if (q.value() < 1.0 && !q.near_one())
    rep.notes.push_back("q < 1 is outside the proven regime; value reported as-is");

  Eigensystem es = eig_hermitian(s);
  if (es.rank() == 1) {
    rep.analytic_shortcut = true;
    rep.converged = true;
    rep.cardinality_used = 1;
    Ensemble cert;
    cert.weights = {1.0};
    cert.kets = {PureState::trusted(s.dims(), s.labels(), es.vectors.col(0))};
    cert.members = {cert.kets[0].density()};
    rep.ensemble_certificate = std::move(cert);
    rep.value = ensemble_objective(*rep.ensemble_certificate, a_side, q);
    rep.notes.push_back("rank-1 input: the only decomposition is the state itself");
    return rep;
  }

  DecompProblem problem(s, a_side, q);
  int m = cfg.cardinality.value_or(default_decomposition_size(problem.rank));
  if (m < problem.rank)
    throw std::invalid_argument("cardinality is below the state rank");
  rep.cardinality_used = m;
  rep.notes.push_back("decomposition size " + std::to_string(m) +
                      "; larger ensembles are not explored");

  auto objective = [&](const Matrix& w) { return problem.eval(w); };
  SearchOutcome outcome = multistart_isometry(m, problem.rank, objective, maximize, cfg);
  rep.restart_values = std::move(outcome.values);
  rep.converged = outcome.converged;
  rep.ensemble_certificate = hjw_ensemble(s, outcome.best_w);
  rep.value = ensemble_objective(*rep.ensemble_certificate, a_side, q);
  return rep;
}

OptimizationReport measurement_estimate(const MultipartiteState& s, Mask measured,
                                        QValue q, const OptimizerConfig& cfg,
                                        bool maximize) {
  cfg.validate();
  check_proper(measured, s.party_count(), "measurement estimate");

  OptimizationReport rep;
  rep.direction = maximize ? BoundDirection::kLowerBoundOfMax
                           : BoundDirection::kUpperBoundOfMin;
  if (q.value() < 1.0 && !q.near_one())
    rep.notes.push_back("q < 1 is outside the proven regime; value reported as-is");

  MeasProblem problem(s, measured, q);
  const int d = problem.split.sel_dim();
  int n = cfg.cardinality.value_or(default_outcome_count(d));
  if (n < d)
    throw std::invalid_argument("cardinality is below the measured dimension");
  rep.cardinality_used = n;
  rep.notes.push_back("rank-1 measurements with " + std::to_string(n) +
                      " outcomes; sufficiency of this cap is unproven");

  std::string label;
  for (int p = 0; p < s.party_count(); ++p)
    if (measured & (Mask{1} << p)) label += s.labels()[p];

  auto objective = [&](const Matrix& w) { return problem.eval(w); };
  SearchOutcome outcome = multistart_isometry(n, d, objective, maximize, cfg);
  rep.restart_values = std::move(outcome.values);
  rep.converged = outcome.converged;
  rep.measurement_certificate = measurement_from_isometry(outcome.best_w, label);
  rep.value = measurement_objective(s, measured, *rep.measurement_certificate, q);
  return rep;
}

}  // namespace

OptimizationReport estimate_qE(const MultipartiteState& s, Mask a_side, QValue q,
                               const OptimizerConfig& cfg) {
  return decomposition_estimate(s, a_side, q, cfg, false);
}

OptimizationReport estimate_qEOA(const MultipartiteState& s, Mask a_side,
                                 QValue q, const OptimizerConfig& cfg) {
  return decomposition_estimate(s, a_side, q, cfg, true);
}

OptimizationReport estimate_qCC(const MultipartiteState& s, Mask measured,
                                QValue q, const OptimizerConfig& cfg) {
  return measurement_estimate(s, measured, q, cfg, true);
}

OptimizationReport estimate_qUE(const MultipartiteState& s, Mask measured,
                                QValue q, const OptimizerConfig& cfg) {
  return measurement_estimate(s, measured, q, cfg, false);
}

double ensemble_objective(const Ensemble& e, Mask a_side, QValue q) {
  if (e.members.empty()) throw std::invalid_argument("empty ensemble");
  check_proper(a_side, e.members[0].party_count(), "ensemble objective");
  double acc = 0.0;
  for (std::size_t i = 0; i < e.members.size(); ++i) {
    double w = e.weights[i];
    if (w <= 0.0) continue;
    MultipartiteState marginal = e.has_kets()
                                     ? partial_trace(e.kets[i], a_side)
                                     : partial_trace(e.members[i], a_side);
    acc += std::pow(w, q.value()) * tsallis_entropy(marginal, q);
  }
  return acc;
}

double measurement_objective(const MultipartiteState& s, Mask measured,
                             const RankOneMeasurement& m, QValue q) {
  return q_difference(induced_ensemble(s, measured, m), q).value;
}

double random_search_decomposition(const MultipartiteState& s, Mask a_side,
                                   QValue q, int samples, std::uint64_t seed,
                                   bool maximize, std::optional<int> cardinality) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  check_proper(a_side, s.party_count(), "random search");
  DecompProblem problem(s, a_side, q);
  if (problem.rank == 1) {
    Matrix one = Matrix::Identity(1, 1);
    return problem.eval(one);
  }
  int m = cardinality.value_or(default_decomposition_size(problem.rank));
  if (m < problem.rank)
    throw std::invalid_argument("cardinality is below the state rank");
  Rng rng(mix_seed(seed, 0x6F7261636CULL));
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    double v = problem.eval(haar_isometry(m, problem.rank, rng));
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

double random_search_measurement(const MultipartiteState& s, Mask measured,
                                 QValue q, int samples, std::uint64_t seed,
                                 bool maximize, std::optional<int> cardinality) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  check_proper(measured, s.party_count(), "random search");
  MeasProblem problem(s, measured, q);
  const int d = problem.split.sel_dim();
  int n = cardinality.value_or(default_outcome_count(d));
  if (n < d)
    throw std::invalid_argument("cardinality is below the measured dimension");
  Rng rng(mix_seed(seed, 0x6F7261636CULL));
  double best = maximize ? -std::numeric_limits<double>::infinity()
                         : std::numeric_limits<double>::infinity();
  for (int k = 0; k < samples; ++k) {
    double v = problem.eval(haar_isometry(n, d, rng));
    best = maximize ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace qcorr
