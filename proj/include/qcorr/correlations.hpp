#pragma once

#include "qcorr/optimize.hpp"

#include <utility>

namespace qcorr {

// A discord value together with the mutual entropy and the measurement
// estimate it was built from, so callers can surface gaps and certificates.
struct DiscordReport {
  double value = 0.0;
  double mutual = 0.0;
  OptimizationReport inner;
};

// I_q(s) - classical q-correlation, measuring the parties in `measured`.
// The inner estimate is a lower bound of a max, so value over-estimates the
// true discord.
DiscordReport q_discord_report(const MultipartiteState& s, Mask measured,
                               QValue q, const OptimizerConfig& cfg);

// I_q(s) - unlocalizable q-entanglement. The inner estimate is an upper
// bound of a min, so value under-estimates the true quantity.
DiscordReport q_unlocalizable_discord_report(const MultipartiteState& s,
                                             Mask measured, QValue q,
                                             const OptimizerConfig& cfg);

double q_discord(const MultipartiteState& s, Mask measured, QValue q,
                 const OptimizerConfig& cfg);
double q_unlocalizable_discord(const MultipartiteState& s, Mask measured,
                               QValue q, const OptimizerConfig& cfg);

// For a pure state the unlocalizable q-discord across the cut collapses to
// the marginal entropy on the measured group; no optimization involved.
double pure_qUD_shortcut(const PureState& psi, Mask measured, QValue q);

// One entropy balance S_q(rho_A) vs a sum of estimated correlation terms.
// residual = lhs - sum(rhs_terms), exactly as stored. The caveats record
// which side each estimate can err on; optimizer_slack aggregates the
// restart gaps of the terms.
struct TradeoffReport {
  double lhs = 0.0;
  std::vector<std::pair<std::string, double>> rhs_terms;
  double residual = 0.0;
  std::vector<std::string> caveats;
  double optimizer_slack = 0.0;
  // Certificate digests keyed like rhs_terms, for report attachment.
  std::vector<std::pair<std::string, std::string>> digests;

  double rhs_sum() const;
};

// For a pure three-party state (parties in listed order A, B, C):
//   first:  S_q(rho_A) vs J^<-(rho_AB) + E_q(rho_AC)
//   second: S_q(rho_A) vs uE^<-(rho_AB) + E^a_q(rho_AC)
// Both measure party B in the AB marginal and cut at A in the AC marginal.
// Diagnostic: residuals are recorded, not asserted, for q > 1.
std::pair<TradeoffReport, TradeoffReport> check_tradeoff_entanglement(
    const PureState& psi, QValue q, const OptimizerConfig& cfg);

// S_q(rho_A) vs udelta^<-(rho_BA) + uE^<-(rho_CA). The arrow points at the
// second-listed party, so both terms measure party A.
TradeoffReport check_tradeoff_discord(const PureState& psi, QValue q,
                                      const OptimizerConfig& cfg);

}  // namespace qcorr
