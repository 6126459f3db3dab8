// Acceptance gate: seven numbered criteria, each printing a single PASS or
// FAIL line. Run all with no arguments or one with --criterion N. Exit 0
// only when every requested criterion passes, including its time budget.

#include "qcorr/reporting.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "test_support.hpp"

using namespace qcorr;
using qcorr::testing::matrix_distance;
using qcorr::testing::random_pure;

namespace {

int g_failures = 0;

void detail(int id, const char* fmt, ...) {
  std::printf("criterion %d detail: ", id);
  va_list args;
  va_start(args, fmt);
  std::vprintf(fmt, args);
  va_end(args);
  std::printf("\n");
  ++g_failures;
}

double xi_closed_form(double q) {
  if (std::abs(q - 1.0) < 1e-12) return std::numbers::ln2;
  return (1.0 - std::pow(2.0, 1.0 - q)) / (q - 1.0);
}

OptimizerConfig standard_config() {
  OptimizerConfig cfg;
  cfg.restarts = 64;
  cfg.seed = 7;
  return cfg;
}

// four-qubit cap chain against the closed forms
bool criterion1() {
  LoadedState s = make_named_state("ghz:4");
  if (std::abs(xi_closed_form(1.5) - 0.5857864) > 5e-8)
    detail(1, "frozen value drifted at q=1.5");
  if (std::abs(xi_closed_form(1.0) - 0.6931472) > 5e-8)
    detail(1, "frozen value drifted at q=1");

  for (double q : {1.0, 1.2, 1.5, 1.9}) {
    PolygamyReport rep =
        verify_strong_polygamy_entanglement(s, QValue(q), standard_config());
    double xi = xi_closed_form(q);
    double lower = std::pow(2.0, 1.0 - q) * xi;

    if (std::abs(rep.left - xi) > 1e-9)
      detail(1, "q=%.2f left %.12f vs %.12f", q, rep.left, xi);
    if (rep.subset_terms.size() != 6)
      detail(1, "q=%.2f expected 6 subset terms", q);
    for (const SubsetTerm& t : rep.subset_terms) {
      if (t.value < lower - 1e-9 || t.value > xi + 1e-9)
        detail(1, "q=%.2f subset %s value %.12f outside [%.12f, %.12f]", q,
               t.label.c_str(), t.value, lower, xi);
    }
    if (rep.middle < 2.0 * lower - 2e-4)
      detail(1, "q=%.2f middle %.12f below %.12f", q, rep.middle,
             2.0 * lower - 2e-4);
    if (rep.margin_first < 1e-3 || rep.verdict_first != "strict")
      detail(1, "q=%.2f first inequality not strict (margin %.3e, %s)", q,
             rep.margin_first, rep.verdict_first.c_str());
    if (rep.margin_second < 1e-3 || rep.verdict_second != "strict")
      detail(1, "q=%.2f second inequality not strict (margin %.3e, %s)", q,
             rep.margin_second, rep.verdict_second.c_str());
  }
  return true;
}

// entropy layer exactness across forms and dimensions
bool criterion2() {
  for (int i = 0; i < 100; ++i) {
    int n = 1 + i % 4;
    int dim = 1 << n;
    int rank = 1 + (i / 4) % dim;
    std::string name = "mixed:" + std::to_string(n) +
                       ":rank=" + std::to_string(rank) +
                       ":seed=" + std::to_string(1000 + i);
    MultipartiteState st = make_named_state(name).density;
    for (double q : {1.0, 1.5, 2.0, 2.7}) {
      double spectral = tsallis_entropy(st, QValue(q));
      double traced = tsallis_entropy_trace_form(st, QValue(q));
      if (std::abs(spectral - traced) > 1e-12)
        detail(2, "%s q=%.2f spectral %.15f vs traced %.15f", name.c_str(), q,
               spectral, traced);
    }
    const Matrix& rho = st.matrix();
    double s2 = 1.0 - (rho * rho).trace().real();
    if (std::abs(tsallis_entropy(st, QValue(2.0)) - s2) > 1e-12)
      detail(2, "%s quadratic trace route mismatch", name.c_str());
    double s3 = 0.5 * (1.0 - (rho * rho * rho).trace().real());
    if (std::abs(tsallis_entropy(st, QValue(3.0)) - s3) > 1e-12)
      detail(2, "%s cubic trace route mismatch", name.c_str());
  }

  for (int k = 2; k <= 4; ++k) {
    LoadedState pure =
        make_named_state("haar:" + std::to_string(k) + ":seed=77");
    for (double q : {1.0, 1.8})
      if (tsallis_entropy(pure.density, QValue(q)) != 0.0)
        detail(2, "pure %d-qubit entropy not exactly zero at q=%.1f", k, q);
  }

  if (std::abs(max_qubit_entropy(QValue(2.0)) - 0.5) > 1e-12)
    detail(2, "ceiling at q=2 drifted");
  if (std::abs(max_qubit_entropy(QValue(1.0)) - std::numbers::ln2) > 1e-12)
    detail(2, "ceiling at q=1 drifted");
  return true;
}

// exact identities: complement sums, measurement coupling, reconstructions
bool criterion3() {
  std::vector<PureState> states;
  states.push_back(*make_named_state("ghz:3").pure);
  states.push_back(*make_named_state("ghz:4").pure);
  states.push_back(*make_named_state("w:3").pure);
  for (int i = 0; i < 50; ++i)
    states.push_back(
        *make_named_state("haar:3:seed=" + std::to_string(2000 + i)).pure);

  for (const PureState& psi : states) {
    MultipartiteState rho = psi.density();
    int b_count = psi.party_count() - 1;
    auto subsets = enumerate_proper_subsets(b_count);
    for (double q : {1.0, 1.5, 2.0}) {
      double sum = 0.0;
      for (const SubsetMask& x : subsets) {
        Mask ax = Mask{1} | (x.bits << 1);
        double joint = tsallis_entropy(partial_trace(rho, ax), QValue(q));
        double cond =
            tsallis_entropy(partial_trace(rho, x.bits << 1), QValue(q));
        sum += joint - cond;
      }
      if (std::abs(sum) > 1e-9)
        detail(3, "complement sum %.3e at q=%.2f on a %d-party state", sum, q,
               psi.party_count());
    }
  }

  const std::vector<std::vector<int>> shapes{
      {2, 2, 2}, {2, 2, 3}, {2, 3, 2}, {3, 2, 2}};
  for (int i = 0; i < 100; ++i) {
    const std::vector<int>& dims = shapes[i % shapes.size()];
    PureState psi = random_pure(dims, 5000 + i);
    MultipartiteState rho = psi.density();
    int d_meas = dims[2];
    int outcomes = (i % 2 == 0) ? d_meas : d_meas * d_meas;
    Rng rng(mix_seed(6000 + i, 1));
    RankOneMeasurement m = measurement_from_isometry(
        haar_isometry(outcomes, d_meas, rng), psi.labels()[2]);

    Ensemble post = post_measurement_pure_states(psi, Mask{4}, m);
    MultipartiteState pair = partial_trace(rho, Mask{5});
    Ensemble induced = induced_ensemble(pair, Mask{2}, m);
    double q = (i % 3 == 0) ? 1.0 : (i % 3 == 1 ? 1.35 : 2.0);
    QValue qv(q);

    double coupled = 0.0;
    for (std::size_t x = 0; x < post.weights.size(); ++x)
      coupled += std::pow(post.weights[x], q) *
                 tsallis_entropy(partial_trace(post.members[x], Mask{1}), qv);
    double chi = q_difference(induced, qv).value;
    double marginal = tsallis_entropy(partial_trace(rho, Mask{1}), qv);
    if (std::abs(coupled + chi - marginal) > 1e-10)
      detail(3, "coupling residual %.3e on pair %d", coupled + chi - marginal,
             i);

    if (matrix_distance(post.mixture().matrix(),
                        partial_trace(rho, Mask{3}).matrix()) > 1e-10)
      detail(3, "post-measurement mixture drifted on pair %d", i);
    if (matrix_distance(induced.mixture().matrix(),
                        partial_trace(rho, Mask{1}).matrix()) > 1e-10)
      detail(3, "induced mixture drifted on pair %d", i);
  }

  for (int i = 0; i < 20; ++i) {
    MultipartiteState st =
        make_named_state("mixed:2:rank=" + std::to_string(1 + i % 4) +
                         ":seed=" + std::to_string(7000 + i))
            .density;
    Eigensystem es = eig_hermitian(st);
    Rng rng(mix_seed(7100 + i, 2));
    Ensemble e = hjw_ensemble(
        st, haar_isometry(es.rank() + 2 + i % 3, es.rank(), rng));
    if (matrix_distance(e.mixture().matrix(), st.matrix()) > 1e-10)
      detail(3, "mixer reconstruction drifted on state %d", i);

    OptimizerConfig cfg;
    cfg.restarts = 4;
    cfg.seed = 11;
    OptimizationReport rep = estimate_qE(st, Mask{1}, QValue(1.5), cfg);
    if (!rep.ensemble_certificate.has_value() ||
        matrix_distance(rep.ensemble_certificate->mixture().matrix(),
                        st.matrix()) > 1e-10)
      detail(3, "certificate reconstruction drifted on state %d", i);
  }
  return true;
}

// register superadditivity where it is guaranteed
bool criterion4() {
  for (int i = 0; i < 50; ++i) {
    std::string name = "mixed:2:rank=" + std::to_string(1 + i % 4) +
                       ":seed=" + std::to_string(3000 + i);
    MultipartiteState st = make_named_state(name).density;
    SuperadditivityResult r = superadditivity_check(st, QValue(1.0));
    if (r.margin < -1e-9)
      detail(4, "%s margin %.3e", name.c_str(), r.margin);
  }
  return true;
}

// balance identities in the recovered q = 1 regime, diagnostics above it
bool criterion5() {
  OptimizerConfig cfg = standard_config();
  for (int i = 0; i < 20; ++i) {
    std::string name = "haar:3:seed=" + std::to_string(100 + i);
    PureState psi = *make_named_state(name).pure;

    auto [first, second] = check_tradeoff_entanglement(psi, QValue(1.0), cfg);
    if (std::abs(first.residual) > 5e-3)
      detail(5, "%s first balance residual %.3e", name.c_str(), first.residual);
    if (std::abs(second.residual) > 5e-3)
      detail(5, "%s second balance residual %.3e", name.c_str(),
             second.residual);

    TradeoffReport disc = check_tradeoff_discord(psi, QValue(1.0), cfg);
    if (std::abs(disc.residual) > 5e-3)
      detail(5, "%s discord balance residual %.3e", name.c_str(),
             disc.residual);

    EquivalenceReport eq = verify_equivalence(psi, QValue(1.0), cfg);
    if (std::abs(eq.conditional_entropy_sum) > 1e-9)
      detail(5, "%s conditional sum %.3e", name.c_str(),
             eq.conditional_entropy_sum);
    if (std::abs(eq.sum_residual) > 5e-3)
      detail(5, "%s equivalence residual %.3e", name.c_str(), eq.sum_residual);
  }

  // heuristic optimization cannot certify these balances beyond q = 1;
  // log the residuals without judging them
  for (int i = 0; i < 3; ++i) {
    std::string name = "haar:3:seed=" + std::to_string(100 + i);
    PureState psi = *make_named_state(name).pure;
    auto [first, second] = check_tradeoff_entanglement(psi, QValue(1.5), cfg);
    TradeoffReport disc = check_tradeoff_discord(psi, QValue(1.5), cfg);
    std::printf(
        "criterion 5 diagnostic: q=1.5 %s residuals %+.3e %+.3e %+.3e "
        "(recorded, not asserted)\n",
        name.c_str(), first.residual, second.residual, disc.residual);
  }
  return true;
}

// optimizer honesty: certificates, restart monotonicity, random-search floor
bool criterion6() {
  for (int i = 0; i < 10; ++i) {
    std::string name = "mixed:2:rank=" + std::to_string(2 + i % 2) +
                       ":seed=" + std::to_string(4000 + i);
    MultipartiteState st = make_named_state(name).density;
    QValue q(1.4);
    OptimizerConfig cfg;
    cfg.restarts = 8;
    cfg.seed = 5;

    OptimizationReport reports[4] = {
        estimate_qE(st, Mask{1}, q, cfg), estimate_qEOA(st, Mask{1}, q, cfg),
        estimate_qCC(st, Mask{2}, q, cfg), estimate_qUE(st, Mask{2}, q, cfg)};
    for (const OptimizationReport& rep : reports) {
      double again = rep.ensemble_certificate.has_value()
                         ? ensemble_objective(*rep.ensemble_certificate,
                                              Mask{1}, q)
                         : measurement_objective(
                               st, Mask{2}, *rep.measurement_certificate, q);
      if (std::abs(again - rep.value) > 1e-10)
        detail(6, "%s certificate re-evaluation off by %.3e", name.c_str(),
               again - rep.value);
    }
  }

  for (std::uint64_t seed : {42, 43, 44}) {
    MultipartiteState st = make_named_state(
                               "mixed:2:rank=3:seed=" + std::to_string(seed))
                               .density;
    QValue q(1.3);
    double prev_min = std::numeric_limits<double>::infinity();
    double prev_max = -std::numeric_limits<double>::infinity();
    for (int r : {1, 2, 4, 8, 16, 32}) {
      OptimizerConfig cfg;
      cfg.restarts = r;
      cfg.seed = 9;
      double vmin = estimate_qE(st, Mask{1}, q, cfg).value;
      double vmax = estimate_qEOA(st, Mask{1}, q, cfg).value;
      if (vmin > prev_min + 1e-14)
        detail(6, "seed %llu: min rose to %.15f at %d restarts",
               static_cast<unsigned long long>(seed), vmin, r);
      if (vmax < prev_max - 1e-14)
        detail(6, "seed %llu: max fell to %.15f at %d restarts",
               static_cast<unsigned long long>(seed), vmax, r);
      prev_min = vmin;
      prev_max = vmax;
    }
  }

  // the estimates are one-sided; a plain random search over the same space
  // must never land on the better side by more than the shared tolerance
  for (int i = 0; i < 10; ++i) {
    std::string name = "mixed:2:rank=2:seed=" + std::to_string(200 + i);
    MultipartiteState st = make_named_state(name).density;
    QValue q(1.0);
    OptimizerConfig cfg;
    cfg.restarts = 32;
    cfg.seed = 5;
    double nm_lo = estimate_qE(st, Mask{1}, q, cfg).value;
    double nm_hi = estimate_qEOA(st, Mask{1}, q, cfg).value;
    double rs_lo = random_search_decomposition(st, Mask{1}, q, 3000, 77, false);
    double rs_hi = random_search_decomposition(st, Mask{1}, q, 3000, 77, true);
    if (rs_lo < nm_lo - 1e-3)
      detail(6, "%s random search undercut the minimum by %.3e", name.c_str(),
             nm_lo - rs_lo);
    if (rs_hi > nm_hi + 1e-3)
      detail(6, "%s random search overtook the maximum by %.3e", name.c_str(),
             rs_hi - nm_hi);
  }
  return true;
}

// two full chain runs must emit identical bytes
bool criterion7() {
  auto emit = [] {
    std::string all;
    for (double q : {1.0, 1.2, 1.5, 1.9}) {
      RunSpec spec;
      spec.command = "polygamy";
      spec.state = "ghz:4";
      spec.q = q;
      spec.optimizer = standard_config();
      RunResult r = run_command(spec);
      all += r.report_json;
      all += '\n';
    }
    return all;
  };
  std::string a = emit();
  std::string b = emit();
  if (a != b) detail(7, "reports differ between identical runs");
  return true;
}

struct Criterion {
  int id;
  const char* label;
  bool (*fn)();
  double budget_seconds;
};

const Criterion kCriteria[] = {
    {1, "four-qubit cap chain matches its closed forms", criterion1, 300.0},
    {2, "entropy forms agree to 1e-12 up to dimension 16", criterion2, 10.0},
    {3, "exact identities hold to their pinned tolerances", criterion3, 60.0},
    {4, "register superadditivity holds at q = 1", criterion4, 60.0},
    {5, "q = 1 balance identities close within 5e-3", criterion5, 600.0},
    {6, "optimizer honesty checks", criterion6, 600.0},
    {7, "chain reports are byte-reproducible", criterion7, 600.0},
};

bool run_one(const Criterion& c) {
  g_failures = 0;
  auto start = std::chrono::steady_clock::now();
  bool ran = c.fn();
  double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  bool in_budget = elapsed <= c.budget_seconds;
  if (!in_budget)
    std::printf("criterion %d detail: %.1fs exceeded the %.0fs budget\n", c.id,
                elapsed, c.budget_seconds);
  bool pass = ran && g_failures == 0 && in_budget;
  std::printf("criterion %d: %s (%.1fs) %s\n", c.id, pass ? "PASS" : "FAIL",
              elapsed, c.label);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  int which = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      which = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 1;
    }
  }
  if (which < 0 || which > 7) {
    std::fprintf(stderr, "criterion must be between 1 and 7\n");
    return 1;
  }

  bool all_pass = true;
  try {
    for (const Criterion& c : kCriteria)
      if (which == 0 || c.id == which) all_pass = all_pass && run_one(c);
  } catch (const std::exception& e) {
    std::printf("acceptance aborted: %s\n", e.what());
    return 1;
  }
  return all_pass ? 0 : 1;
}
