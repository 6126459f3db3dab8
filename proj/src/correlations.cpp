#include "qcorr/correlations.hpp"

#include <numeric>
#include <stdexcept>

namespace qcorr {

namespace {

double mutual_for_measured(const MultipartiteState& s, Mask measured, QValue q) {
  Mask unmeasured = s.all_parties() & ~measured;
  return q_mutual_entropy(s, unmeasured, q);
}

}  // namespace

DiscordReport q_discord_report(const MultipartiteState& s, Mask measured,
                               QValue q, const OptimizerConfig& cfg) {
  DiscordReport rep;
  rep.inner = estimate_qCC(s, measured, q, cfg);
  rep.mutual = mutual_for_measured(s, measured, q);
  rep.value = rep.mutual - rep.inner.value;
  return rep;
}

DiscordReport q_unlocalizable_discord_report(const MultipartiteState& s,
                                             Mask measured, QValue q,
                                             const OptimizerConfig& cfg) {
  DiscordReport rep;
  rep.inner = estimate_qUE(s, measured, q, cfg);
  rep.mutual = mutual_for_measured(s, measured, q);
  rep.value = rep.mutual - rep.inner.value;
  return rep;
}

double q_discord(const MultipartiteState& s, Mask measured, QValue q,
                 const OptimizerConfig& cfg) {
  return q_discord_report(s, measured, q, cfg).value;
}

double q_unlocalizable_discord(const MultipartiteState& s, Mask measured,
                               QValue q, const OptimizerConfig& cfg) {
  return q_unlocalizable_discord_report(s, measured, q, cfg).value;
}

double pure_qUD_shortcut(const PureState& psi, Mask measured, QValue q) {
  if (measured == 0 || measured >= (Mask{1} << psi.party_count()) ||
      measured == full_mask(psi.party_count()))
    throw std::invalid_argument(
        "pure_qUD_shortcut: measured mask must be a proper nonempty subset");
  return tsallis_entropy(partial_trace(psi, measured), q);
}

double TradeoffReport::rhs_sum() const {
  double acc = 0.0;
  for (const auto& [name, v] : rhs_terms) acc += v;
  return acc;
}

namespace {

MultipartiteState two_party_marginal(const PureState& psi, int keep_a,
                                     int keep_b) {
  Mask keep = (Mask{1} << keep_a) | (Mask{1} << keep_b);
  return partial_trace(psi, keep);
}

void require_three_parties(const PureState& psi, const char* what) {
  if (psi.party_count() != 3)
    throw std::invalid_argument(std::string(what) +
                                " needs exactly three parties");
}

void add_diagnostic_caveat(TradeoffReport& rep, QValue q) {
  if (q.value() > 1.0 && !q.near_one())
    rep.caveats.push_back(
        "q > 1: residual is diagnostic, the balance is not asserted");
}

}  // namespace

std::pair<TradeoffReport, TradeoffReport> check_tradeoff_entanglement(
    const PureState& psi, QValue q, const OptimizerConfig& cfg) {
  require_three_parties(psi, "check_tradeoff_entanglement");
  const auto& lab = psi.labels();
  MultipartiteState rho_ab = two_party_marginal(psi, 0, 1);
  MultipartiteState rho_ac = two_party_marginal(psi, 0, 2);
  double s_a = tsallis_entropy(partial_trace(psi, Mask{1}), q);

  OptimizationReport cc = estimate_qCC(rho_ab, Mask{2}, q, cfg);
  OptimizationReport e = estimate_qE(rho_ac, Mask{1}, q, cfg);
  TradeoffReport first;
  first.lhs = s_a;
  first.rhs_terms = {
      {"classical_q_correlation_" + lab[0] + lab[1], cc.value},
      {"q_expected_entanglement_" + lab[0] + lab[2], e.value},
  };
  first.residual = first.lhs - first.rhs_sum();
  first.optimizer_slack = cc.optimizer_gap() + e.optimizer_gap();
  first.digests = {
      {first.rhs_terms[0].first, certificate_digest(cc)},
      {first.rhs_terms[1].first, certificate_digest(e)},
  };
  first.caveats.push_back("classical_q_correlation is a lower-bound estimate");
  first.caveats.push_back("q_expected_entanglement is an upper-bound estimate");
  add_diagnostic_caveat(first, q);

  OptimizationReport ue = estimate_qUE(rho_ab, Mask{2}, q, cfg);
  OptimizationReport ea = estimate_qEOA(rho_ac, Mask{1}, q, cfg);
  TradeoffReport second;
  second.lhs = s_a;
  second.rhs_terms = {
      {"unlocalizable_q_entanglement_" + lab[0] + lab[1], ue.value},
      {"q_expected_entanglement_of_assistance_" + lab[0] + lab[2], ea.value},
  };
  second.residual = second.lhs - second.rhs_sum();
  second.optimizer_slack = ue.optimizer_gap() + ea.optimizer_gap();
  second.digests = {
      {second.rhs_terms[0].first, certificate_digest(ue)},
      {second.rhs_terms[1].first, certificate_digest(ea)},
  };
  second.caveats.push_back(
      "unlocalizable_q_entanglement is an upper-bound estimate");
  second.caveats.push_back(
      "q_expected_entanglement_of_assistance is a lower-bound estimate");
  add_diagnostic_caveat(second, q);

  return {std::move(first), std::move(second)};
}

TradeoffReport check_tradeoff_discord(const PureState& psi, QValue q,
                                      const OptimizerConfig& cfg) {
  require_three_parties(psi, "check_tradeoff_discord");
  const auto& lab = psi.labels();
  MultipartiteState rho_ab = two_party_marginal(psi, 0, 1);
  MultipartiteState rho_ac = two_party_marginal(psi, 0, 2);

  // Both marginals keep party A at index 0; the arrow means both terms
  // measure A, written below with A listed second.
  DiscordReport ud = q_unlocalizable_discord_report(rho_ab, Mask{1}, q, cfg);
  OptimizationReport ue = estimate_qUE(rho_ac, Mask{1}, q, cfg);

  TradeoffReport rep;
  rep.lhs = tsallis_entropy(partial_trace(psi, Mask{1}), q);
  rep.rhs_terms = {
      {"unlocalizable_q_discord_" + lab[1] + lab[0], ud.value},
      {"unlocalizable_q_entanglement_" + lab[2] + lab[0], ue.value},
  };
  rep.residual = rep.lhs - rep.rhs_sum();
  rep.optimizer_slack = ud.inner.optimizer_gap() + ue.optimizer_gap();
  rep.digests = {
      {rep.rhs_terms[0].first, certificate_digest(ud.inner)},
      {rep.rhs_terms[1].first, certificate_digest(ue)},
  };
  rep.caveats.push_back(
      "unlocalizable_q_discord is a lower-bound estimate (its inner "
      "minimization is an upper bound)");
  rep.caveats.push_back("unlocalizable_q_entanglement is an upper-bound estimate");
  add_diagnostic_caveat(rep, q);
  return rep;
}

}  // namespace qcorr
