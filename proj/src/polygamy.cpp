#include "qcorr/polygamy.hpp"

#include <cmath>
#include <stdexcept>

namespace qcorr {

std::vector<SubsetMask> enumerate_proper_subsets(int n) {
  if (n < 2)
    throw std::invalid_argument(
        "subset enumeration needs at least two assisting parties");
  if (n >= 31) throw std::invalid_argument("too many assisting parties");
  std::vector<SubsetMask> out;
  out.reserve((std::size_t{1} << n) - 2);
  for (Mask bits = 1; bits < full_mask(n); ++bits)
    out.push_back(SubsetMask{n, bits});
  return out;
}

SuperadditivityResult superadditivity_check(const MultipartiteState& bipartite,
                                            QValue q) {
  CcqState ccq = build_ccq(bipartite);
  const MultipartiteState& omega = ccq.state;
  // Parties of the ccq state: X, Y, A, B at indices 0..3.
  double both = q_mutual_entropy(omega, Mask{0b0011}, q);
  MultipartiteState no_y = partial_trace(omega, Mask{0b1101});
  MultipartiteState no_x = partial_trace(omega, Mask{0b1110});
  double x_only = q_mutual_entropy(no_y, Mask{1}, q);
  double y_only = q_mutual_entropy(no_x, Mask{1}, q);
  SuperadditivityResult r;
  r.margin = both - x_only - y_only;
  r.holds = r.margin >= -1e-9;
  return r;
}

namespace {

constexpr double kStrictMargin = 1e-3;
constexpr double kBaseSlack = 1e-6;

std::string chain_verdict(double margin, double slack) {
  if (margin >= kStrictMargin) return "strict";
  if (margin >= 0.0) return "holds";
  if (margin >= -slack) return "inconclusive";
  return "optimizer-gap";
}

// Mask of the full-state parties for a subset of the assisting ones
// (assisting party i sits at state index i + 1).
Mask state_mask(const SubsetMask& sm) { return sm.bits << 1; }

std::string subset_label(const MultipartiteState& s, const SubsetMask& sm) {
  std::string out;
  for (int i = 0; i < sm.n; ++i)
    if (sm.bits & (Mask{1} << i)) out += s.labels()[i + 1];
  return out;
}

struct ChainSetup {
  int b_count = 0;
  std::vector<SubsetMask> subsets;
  std::vector<MultipartiteState> marginals;  // rho_{A X}, parallel to subsets
  int denominator = 0;
};

ChainSetup chain_setup(const MultipartiteState& density, bool allow_large) {
  ChainSetup setup;
  setup.b_count = density.party_count() - 1;
  if (setup.b_count < 2)
    throw std::invalid_argument(
        "polygamy chain needs at least two assisting parties");
  if (setup.b_count > 5 && !allow_large)
    throw std::invalid_argument(
        "more than five assisting parties; pass allow_large to override");
  setup.subsets = enumerate_proper_subsets(setup.b_count);
  setup.marginals.reserve(setup.subsets.size());
  for (const SubsetMask& sm : setup.subsets)
    setup.marginals.push_back(partial_trace(density, Mask{1} | state_mask(sm)));
  setup.denominator = static_cast<int>(Mask{1} << (setup.b_count - 1)) - 1;
  return setup;
}

// Superadditivity margins for every A vs merged-subset cut that the chain
// touches. Cuts whose ccq extension would blow past the dimension cap are
// skipped with a note.
void attach_conditions(PolygamyReport& rep, const MultipartiteState& density,
                       const ChainSetup& setup, QValue q) {
  bool all_hold = true;
  std::string skipped;
  for (std::size_t i = 0; i < setup.subsets.size(); ++i) {
    const MultipartiteState& marginal = setup.marginals[i];
    MultipartiteState cut = marginal.party_count() == 2
                                ? marginal
                                : regroup_bipartite(marginal, Mask{1});
    std::string name =
        density.labels()[0] + "|" + subset_label(density, setup.subsets[i]);
    long d_a = cut.dims()[0], d_b = cut.dims()[1];
    if (d_a * d_b * d_b * d_b > kMaxDimension) {
      if (!skipped.empty()) skipped += ", ";
      skipped += name;
      continue;
    }
    SuperadditivityResult sr = superadditivity_check(cut, q);
    rep.condition_margins.push_back(ConditionMargin{name, sr.margin, sr.holds});
    all_hold = all_hold && sr.holds;
  }
  rep.condition_all_hold = all_hold;
  if (!skipped.empty())
    rep.notes.push_back("superadditivity not checked on oversized cuts: " +
                        skipped);
  if (!all_hold)
    rep.notes.push_back(
        "superadditivity condition failed on at least one cut; the chain is "
        "not guaranteed there");
  if (q.near_one())
    rep.notes.push_back("q = 1: the chain needs no superadditivity condition");
}

void finish_chain(PolygamyReport& rep, double left_gap, double subset_gap_sum,
                  double singleton_gap_sum, const ChainSetup& setup) {
  double sum = 0.0;
  for (const SubsetTerm& t : rep.subset_terms) sum += t.value;
  rep.middle = sum / setup.denominator;
  rep.right = 0.0;
  for (const SubsetTerm& t : rep.singleton_terms) rep.right += t.value;

  rep.margin_first = rep.middle - rep.left;
  rep.margin_second = rep.right - rep.middle;
  double scaled = subset_gap_sum / setup.denominator;
  rep.slack_first = kBaseSlack + left_gap + scaled;
  rep.slack_second = kBaseSlack + scaled + singleton_gap_sum;
  rep.verdict_first = chain_verdict(rep.margin_first, rep.slack_first);
  rep.verdict_second = chain_verdict(rep.margin_second, rep.slack_second);
}

bool is_ghz(const LoadedState& s) {
  return s.is_pure() && s.source.rfind("ghz:", 0) == 0;
}

}  // namespace

PolygamyReport verify_strong_polygamy_entanglement(const LoadedState& s,
                                                   QValue q,
                                                   const OptimizerConfig& cfg,
                                                   bool allow_large) {
  q.require_at_least_one("strong polygamy verification");
  const MultipartiteState& density = s.density;
  ChainSetup setup = chain_setup(density, allow_large);

  PolygamyReport rep;
  rep.q = q.value();

  double left_gap = 0.0;
  if (is_ghz(s)) {
    rep.left = max_qubit_entropy(q);
    rep.left_analytic = true;
    rep.left_exact = true;
    rep.notes.push_back("left term from the GHZ closed form");
  } else if (s.is_pure()) {
    rep.left = tsallis_entropy(partial_trace(density, Mask{1}), q);
    rep.left_exact = true;
    rep.notes.push_back("pure input: left term is the exact marginal entropy");
  } else {
    OptimizationReport est = estimate_qEOA(density, Mask{1}, q, cfg);
    rep.left = est.value;
    left_gap = est.optimizer_gap();
    rep.notes.push_back("mixed input: left term is itself an estimate");
  }

  double subset_gap_sum = 0.0, singleton_gap_sum = 0.0;
  for (std::size_t i = 0; i < setup.subsets.size(); ++i) {
    OptimizationReport est = estimate_qEOA(setup.marginals[i], Mask{1}, q, cfg);
    SubsetTerm term{setup.subsets[i], subset_label(density, setup.subsets[i]),
                    est.value, BoundDirection::kLowerBoundOfMax,
                    est.optimizer_gap(), est.converged,
                    certificate_digest(est)};
    subset_gap_sum += term.gap;
    if (setup.subsets[i].size() == 1) {
      singleton_gap_sum += term.gap;
      rep.singleton_terms.push_back(term);
    }
    rep.subset_terms.push_back(std::move(term));
  }

  attach_conditions(rep, density, setup, q);
  finish_chain(rep, left_gap, subset_gap_sum, singleton_gap_sum, setup);
  return rep;
}

PolygamyReport verify_strong_polygamy_discord(const LoadedState& s, QValue q,
                                              const OptimizerConfig& cfg,
                                              bool allow_large) {
  q.require_at_least_one("strong polygamy verification");
  if (!s.is_pure())
    throw std::invalid_argument(
        "the discord chain is defined here for pure input only");
  const MultipartiteState& density = s.density;
  ChainSetup setup = chain_setup(density, allow_large);

  PolygamyReport rep;
  rep.q = q.value();
  rep.left_exact = true;
  if (is_ghz(s)) {
    rep.left = max_qubit_entropy(q);
    rep.left_analytic = true;
    rep.notes.push_back("left term from the GHZ closed form");
  } else {
    Mask b_mask = density.all_parties() & ~Mask{1};
    rep.left = pure_qUD_shortcut(*s.pure, b_mask, q);
    rep.notes.push_back("left term via the pure-state shortcut");
  }

  double subset_gap_sum = 0.0, singleton_gap_sum = 0.0;
  for (std::size_t i = 0; i < setup.subsets.size(); ++i) {
    const MultipartiteState& marginal = setup.marginals[i];
    Mask measured = marginal.all_parties() & ~Mask{1};
    DiscordReport dr = q_unlocalizable_discord_report(marginal, measured, q, cfg);
    SubsetTerm term{setup.subsets[i], subset_label(density, setup.subsets[i]),
                    dr.value, BoundDirection::kLowerBoundOfMax,
                    dr.inner.optimizer_gap(), dr.inner.converged,
                    certificate_digest(dr.inner)};
    subset_gap_sum += term.gap;
    if (setup.subsets[i].size() == 1) {
      singleton_gap_sum += term.gap;
      rep.singleton_terms.push_back(term);
    }
    rep.subset_terms.push_back(std::move(term));
  }

  attach_conditions(rep, density, setup, q);
  finish_chain(rep, 0.0, subset_gap_sum, singleton_gap_sum, setup);
  return rep;
}

EquivalenceReport verify_equivalence(const PureState& psi, QValue q,
                                     const OptimizerConfig& cfg,
                                     bool allow_large) {
  MultipartiteState density = psi.density();
  ChainSetup setup = chain_setup(density, allow_large);

  EquivalenceReport rep;
  rep.q = q.value();

  std::vector<double> assistance(setup.subsets.size());
  std::vector<double> discord(setup.subsets.size());
  std::vector<double> conditional(setup.subsets.size());
  std::vector<double> gaps(setup.subsets.size(), 0.0);

  for (std::size_t i = 0; i < setup.subsets.size(); ++i) {
    const MultipartiteState& marginal = setup.marginals[i];
    Mask x_in_marginal = marginal.all_parties() & ~Mask{1};
    conditional[i] = q_conditional_entropy(marginal, x_in_marginal, q);
    OptimizationReport ea = estimate_qEOA(marginal, Mask{1}, q, cfg);
    DiscordReport ud =
        q_unlocalizable_discord_report(marginal, x_in_marginal, q, cfg);
    assistance[i] = ea.value;
    discord[i] = ud.value;
    gaps[i] = ea.optimizer_gap() + ud.inner.optimizer_gap();
    rep.sum_assistance += ea.value;
    rep.sum_unlocalizable_discord += ud.value;
    rep.conditional_entropy_sum += conditional[i];
    rep.optimizer_slack += gaps[i];
  }
  rep.sum_residual = rep.sum_assistance - rep.sum_unlocalizable_discord;

  // Complement pairing makes the conditional entropies cancel exactly for
  // pure input; a visible remainder means the entropy layer is broken.
  if (std::abs(rep.conditional_entropy_sum) > 1e-9)
    throw std::logic_error(
        "conditional-entropy complement sum did not vanish on pure input");

  for (std::size_t i = 0; i < setup.subsets.size(); ++i) {
    Mask comp_bits = setup.subsets[i].complement();
    std::size_t ci = 0;
    for (; ci < setup.subsets.size(); ++ci)
      if (setup.subsets[ci].bits == comp_bits) break;
    SubsetResidual row;
    row.label = subset_label(density, setup.subsets[i]);
    row.assistance = assistance[i];
    row.discord = discord[ci];
    row.conditional = conditional[ci];
    row.residual = row.assistance - row.discord - row.conditional;
    rep.per_subset.push_back(std::move(row));
  }

  if (q.value() > 1.0 && !q.near_one())
    rep.notes.push_back(
        "q > 1: residuals are diagnostic, the balances are not asserted");
  return rep;
}

GhzAnalytic ghz_analytic_report(int n, QValue q) {
  q.require_at_least_one("GHZ analytics");
  if (n < 3)
    throw std::invalid_argument(
        "GHZ analytics need at least three qubits in total");
  GhzAnalytic a;
  a.n = n;
  a.b_count = n - 1;
  a.q = q.value();
  a.xi_q = max_qubit_entropy(q);
  a.xi_lower = std::pow(2.0, 1.0 - q.value()) * a.xi_q;
  a.left = a.xi_q;
  a.subset_count = static_cast<int>((Mask{1} << a.b_count) - 2);
  a.middle_coefficient = 2.0;
  a.right_coefficient = a.b_count;
  a.middle_lower_bound = std::pow(2.0, 2.0 - q.value()) * a.xi_q;
  a.strict_first_predicted = q.value() < 2.0;
  a.strict_second_predicted = a.b_count >= 3;
  return a;
}

}  // namespace qcorr
