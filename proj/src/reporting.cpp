#include "qcorr/reporting.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace qcorr {

using ordered = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

double report_round(double v) {
  if (v == 0.0) return 0.0;
  return std::strtod(format_double(v).c_str(), nullptr);
}

namespace {

const char* const kVersion = "0.1.0";

const char* const kAllCommands[] = {
    "entropy",  "qe",         "qeoa",     "qcc",
    "que",      "qdiscord",   "qud",      "ccq-check",
    "tradeoff", "polygamy",   "polygamy-discord",
    "equivalence", "ghz-analytic", "sweep"};

bool known_command(const std::string& c) {
  for (const char* k : kAllCommands)
    if (c == k) return true;
  return false;
}

bool needs_q_at_least_one(const std::string& c) {
  return c == "polygamy" || c == "polygamy-discord" || c == "ghz-analytic";
}

ordered state_block(const std::string& descriptor, const std::vector<int>& dims,
                    const std::vector<std::string>& labels, bool pure) {
  ordered j;
  j["descriptor"] = descriptor;
  j["dims"] = dims;
  j["labels"] = labels;
  j["kind"] = pure ? "pure" : "density";
  return j;
}

ordered config_block(const RunSpec& spec) {
  ordered j;
  j["restarts"] = spec.optimizer.restarts;
  j["max_iterations"] = spec.optimizer.max_iterations;
  j["step_tolerance"] = report_round(spec.optimizer.step_tolerance);
  j["value_tolerance"] = report_round(spec.optimizer.value_tolerance);
  j["seed"] = spec.optimizer.seed;
  if (spec.optimizer.cardinality)
    j["cardinality"] = *spec.optimizer.cardinality;
  else
    j["cardinality"] = nullptr;
  j["a_side"] = spec.a_side;
  j["measured"] = spec.measured;
  j["allow_large"] = spec.allow_large;
  return j;
}

ordered versions_block() {
  ordered j;
  j["qcorr"] = kVersion;
  j["schema"] = "1";
  return j;
}

Mask a_side_mask(const MultipartiteState& s, const RunSpec& spec) {
  if (spec.a_side.empty()) return Mask{1};
  return s.label_mask(spec.a_side);
}

Mask measured_mask(const MultipartiteState& s, const RunSpec& spec) {
  if (spec.measured.empty()) return s.all_parties() & ~Mask{1};
  return s.label_mask(spec.measured);
}

ordered subset_term_array(const std::vector<SubsetTerm>& terms) {
  ordered arr = ordered::array();
  for (const SubsetTerm& t : terms) {
    ordered j;
    j["label"] = t.label;
    j["value"] = report_round(t.value);
    j["direction"] = to_string(t.direction);
    j["optimizer_gap"] = report_round(t.gap);
    j["converged"] = t.converged;
    j["certificate_digest"] = t.digest;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered condition_array(const std::vector<ConditionMargin>& margins) {
  ordered arr = ordered::array();
  for (const ConditionMargin& c : margins) {
    ordered j;
    j["cut"] = c.cut;
    j["margin"] = report_round(c.margin);
    j["holds"] = c.holds;
    arr.push_back(std::move(j));
  }
  return arr;
}

ordered tradeoff_block(const std::string& name, const TradeoffReport& t) {
  ordered j;
  j["name"] = name;
  j["lhs"] = report_round(t.lhs);
  ordered rhs;
  for (const auto& [k, v] : t.rhs_terms) rhs[k] = report_round(v);
  j["rhs"] = std::move(rhs);
  j["residual"] = report_round(t.residual);
  j["optimizer_slack"] = report_round(t.optimizer_slack);
  j["caveats"] = t.caveats;
  ordered digests;
  for (const auto& [k, v] : t.digests) digests[k] = v;
  j["certificates"] = std::move(digests);
  return j;
}

int exit_from_verdicts(const ordered& verdicts) {
  for (const auto& [key, value] : verdicts.items()) {
    (void)key;
    if (value == "inconclusive" || value == "optimizer-gap") return 2;
  }
  return 0;
}

// Verdict for a residual-style diagnostic: asserted only in the q -> 1
// regime, reported as diagnostic elsewhere.
std::string residual_verdict(double residual, double slack, QValue q) {
  if (!q.near_one()) return "diagnostic";
  return std::abs(residual) <= 5e-3 + slack ? "balanced" : "inconclusive";
}

struct Built {
  ordered report;
  int exit_code = 0;
};

ordered polygamy_body(const PolygamyReport& rep, ordered& terms,
                      ordered& bounds, ordered& verdicts) {
  terms["left"] = report_round(rep.left);
  terms["middle"] = report_round(rep.middle);
  terms["right"] = report_round(rep.right);
  terms["margin_first"] = report_round(rep.margin_first);
  terms["margin_second"] = report_round(rep.margin_second);
  terms["slack_first"] = report_round(rep.slack_first);
  terms["slack_second"] = report_round(rep.slack_second);
  terms["max_qubit_entropy"] = report_round(max_qubit_entropy(QValue(rep.q)));
  bounds["left"] = rep.left_exact ? "exact" : "lower-bound-of-max";
  bounds["middle"] = "lower-bound-of-max";
  bounds["right"] = "lower-bound-of-max";
  verdicts["first_inequality"] = rep.verdict_first;
  verdicts["second_inequality"] = rep.verdict_second;
  verdicts["condition"] = rep.condition_all_hold ? "holds" : "fails";

  ordered extra;
  extra["left_analytic"] = rep.left_analytic;
  extra["subset_terms"] = subset_term_array(rep.subset_terms);
  extra["singleton_terms"] = subset_term_array(rep.singleton_terms);
  return extra;
}

Built build_single(const RunSpec& spec, double q_raw) {
  const std::string& cmd = spec.command;
  QValue q(q_raw);

  ordered terms = ordered::object();
  ordered bounds = ordered::object();
  ordered verdicts = ordered::object();
  ordered conditions = ordered::array();
  ordered extras = ordered::object();  // appended after verdicts
  std::vector<std::string> notes;
  ordered certificates = ordered::object();
  int exit_code = 0;

  ordered state_json;

  if (cmd == "ghz-analytic") {
    GhzAnalytic a = ghz_analytic_report(spec.ghz_n, q);
    state_json = state_block("ghz:" + std::to_string(spec.ghz_n),
                             std::vector<int>(spec.ghz_n, 2),
                             default_labels(spec.ghz_n), true);
    terms["max_qubit_entropy"] = report_round(a.xi_q);
    terms["common_value_min"] = report_round(a.xi_lower);
    terms["common_value_max"] = report_round(a.xi_q);
    terms["left"] = report_round(a.left);
    terms["middle_lower_bound"] = report_round(a.middle_lower_bound);
    terms["middle_coefficient"] = report_round(a.middle_coefficient);
    terms["right_coefficient"] = report_round(a.right_coefficient);
    terms["subset_count"] = a.subset_count;
    verdicts["strict_first_predicted"] =
        a.strict_first_predicted ? "yes" : "no";
    verdicts["strict_second_predicted"] =
        a.strict_second_predicted ? "yes" : "no";
  } else {
    LoadedState loaded = resolve_state(spec.state);
    const MultipartiteState& density = loaded.density;
    state_json = state_block(loaded.source, density.dims(), density.labels(),
                             loaded.is_pure());

    if (cmd == "entropy") {
      terms["tsallis_entropy"] = report_round(tsallis_entropy(density, q));
    } else if (cmd == "qe" || cmd == "qeoa") {
      Mask cut = a_side_mask(density, spec);
      OptimizationReport est = cmd == "qe"
                                   ? estimate_qE(density, cut, q, spec.optimizer)
                                   : estimate_qEOA(density, cut, q, spec.optimizer);
      const char* name = cmd == "qe" ? "q_expected_entanglement"
                                     : "q_expected_entanglement_of_assistance";
      terms[name] = report_round(est.value);
      terms["optimizer_gap"] = report_round(est.optimizer_gap());
      bounds[name] = to_string(est.direction);
      certificates[name] = certificate_digest(est);
      extras["optimizer"] = ordered{{"converged", est.converged},
                                    {"analytic_shortcut", est.analytic_shortcut},
                                    {"cardinality_used", est.cardinality_used}};
      notes.insert(notes.end(), est.notes.begin(), est.notes.end());
    } else if (cmd == "qcc" || cmd == "que") {
      Mask m = measured_mask(density, spec);
      OptimizationReport est = cmd == "qcc"
                                   ? estimate_qCC(density, m, q, spec.optimizer)
                                   : estimate_qUE(density, m, q, spec.optimizer);
      const char* name = cmd == "qcc" ? "classical_q_correlation"
                                      : "unlocalizable_q_entanglement";
      terms[name] = report_round(est.value);
      terms["optimizer_gap"] = report_round(est.optimizer_gap());
      bounds[name] = to_string(est.direction);
      certificates[name] = certificate_digest(est);
      extras["optimizer"] = ordered{{"converged", est.converged},
                                    {"analytic_shortcut", est.analytic_shortcut},
                                    {"cardinality_used", est.cardinality_used}};
      notes.insert(notes.end(), est.notes.begin(), est.notes.end());
    } else if (cmd == "qdiscord" || cmd == "qud") {
      Mask m = measured_mask(density, spec);
      bool plain = cmd == "qdiscord";
      DiscordReport rep = plain
                              ? q_discord_report(density, m, q, spec.optimizer)
                              : q_unlocalizable_discord_report(density, m, q,
                                                              spec.optimizer);
      const char* inner_name = plain ? "classical_q_correlation"
                                     : "unlocalizable_q_entanglement";
      const char* value_name = plain ? "q_discord" : "unlocalizable_q_discord";
      terms["q_mutual_entropy"] = report_round(rep.mutual);
      terms[inner_name] = report_round(rep.inner.value);
      terms[value_name] = report_round(rep.value);
      terms["optimizer_gap"] = report_round(rep.inner.optimizer_gap());
      bounds[inner_name] = to_string(rep.inner.direction);
      bounds[value_name] = plain ? "over-estimate" : "under-estimate";
      certificates[inner_name] = certificate_digest(rep.inner);
      notes.insert(notes.end(), rep.inner.notes.begin(), rep.inner.notes.end());
    } else if (cmd == "ccq-check") {
      SuperadditivityResult sr = superadditivity_check(density, q);
      terms["margin"] = report_round(sr.margin);
      verdicts["superadditivity"] = sr.holds ? "holds" : "fails";
      std::string cut = density.labels()[0] + ":" + density.labels()[1];
      conditions.push_back(
          ordered{{"cut", cut}, {"margin", report_round(sr.margin)},
                  {"holds", sr.holds}});
    } else if (cmd == "tradeoff") {
      if (!loaded.is_pure())
        throw std::invalid_argument("tradeoff needs a pure three-party state");
      auto [first, second] =
          check_tradeoff_entanglement(*loaded.pure, q, spec.optimizer);
      TradeoffReport third = check_tradeoff_discord(*loaded.pure, q, spec.optimizer);
      terms["marginal_entropy"] = report_round(first.lhs);
      terms["entanglement_residual"] = report_round(first.residual);
      terms["assistance_residual"] = report_round(second.residual);
      terms["discord_residual"] = report_round(third.residual);
      verdicts["entanglement_balance"] =
          residual_verdict(first.residual, first.optimizer_slack, q);
      verdicts["assistance_balance"] =
          residual_verdict(second.residual, second.optimizer_slack, q);
      verdicts["discord_balance"] =
          residual_verdict(third.residual, third.optimizer_slack, q);
      extras["tradeoffs"] = ordered::array(
          {tradeoff_block("entanglement_balance", first),
           tradeoff_block("assistance_balance", second),
           tradeoff_block("discord_balance", third)});
    } else if (cmd == "polygamy" || cmd == "polygamy-discord") {
      PolygamyReport rep =
          cmd == "polygamy"
              ? verify_strong_polygamy_entanglement(loaded, q, spec.optimizer,
                                                    spec.allow_large)
              : verify_strong_polygamy_discord(loaded, q, spec.optimizer,
                                               spec.allow_large);
      extras = polygamy_body(rep, terms, bounds, verdicts);
      conditions = condition_array(rep.condition_margins);
      notes.insert(notes.end(), rep.notes.begin(), rep.notes.end());
    } else if (cmd == "equivalence") {
      if (!loaded.is_pure())
        throw std::invalid_argument("equivalence needs a pure state");
      EquivalenceReport rep = verify_equivalence(*loaded.pure, q,
                                                 spec.optimizer, spec.allow_large);
      terms["conditional_entropy_sum"] = report_round(rep.conditional_entropy_sum);
      terms["sum_assistance"] = report_round(rep.sum_assistance);
      terms["sum_unlocalizable_discord"] =
          report_round(rep.sum_unlocalizable_discord);
      terms["sum_residual"] = report_round(rep.sum_residual);
      terms["optimizer_slack"] = report_round(rep.optimizer_slack);
      bounds["sum_assistance"] = "lower-bound-of-max";
      bounds["sum_unlocalizable_discord"] = "under-estimate";
      verdicts["equivalence_balance"] =
          residual_verdict(rep.sum_residual, rep.optimizer_slack, q);
      ordered per = ordered::array();
      for (const SubsetResidual& r : rep.per_subset) {
        ordered j;
        j["label"] = r.label;
        j["assistance"] = report_round(r.assistance);
        j["discord_complement"] = report_round(r.discord);
        j["conditional_complement"] = report_round(r.conditional);
        j["residual"] = report_round(r.residual);
        per.push_back(std::move(j));
      }
      extras["per_subset"] = std::move(per);
      notes.insert(notes.end(), rep.notes.begin(), rep.notes.end());
    } else {
      throw std::invalid_argument("unknown command: " + cmd);
    }
  }

  exit_code = exit_from_verdicts(verdicts);

  ordered rep;
  rep["command"] = cmd;
  rep["state"] = std::move(state_json);
  rep["q"] = report_round(q_raw);
  rep["terms"] = std::move(terms);
  rep["bounds"] = std::move(bounds);
  rep["condition_margins"] = std::move(conditions);
  rep["verdicts"] = std::move(verdicts);
  for (auto& [key, value] : extras.items()) rep[key] = std::move(value);
  if (!certificates.empty()) rep["certificates"] = std::move(certificates);
  rep["notes"] = notes;
  rep["config"] = config_block(spec);
  rep["versions"] = versions_block();
  return Built{std::move(rep), exit_code};
}

std::vector<double> q_grid(const RunSpec& spec) {
  if (spec.steps < 1) throw std::invalid_argument("sweep needs steps >= 1");
  if (spec.q_min > spec.q_max)
    throw std::invalid_argument("sweep needs q-min <= q-max");
  std::vector<double> grid;
  if (spec.steps == 1) {
    grid.push_back(spec.q_min);
    return grid;
  }
  for (int i = 0; i < spec.steps; ++i)
    grid.push_back(spec.q_min +
                   (spec.q_max - spec.q_min) * i / (spec.steps - 1));
  return grid;
}

std::string sweep_csv(const std::vector<ordered>& rows,
                      const std::vector<double>& grid) {
  std::vector<std::string> term_cols, verdict_cols;
  for (const auto& [key, value] : rows.front()["terms"].items()) {
    (void)value;
    term_cols.push_back(key);
  }
  for (const auto& [key, value] : rows.front()["verdicts"].items()) {
    (void)value;
    verdict_cols.push_back(key);
  }

  std::string csv = "q";
  for (const std::string& c : term_cols) csv += "," + c;
  for (const std::string& c : verdict_cols) csv += ",verdict_" + c;
  csv += "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    csv += format_double(report_round(grid[i]));
    for (const std::string& c : term_cols) {
      double v = rows[i]["terms"].at(c).get<double>();
      if (!std::isfinite(v))
        throw std::logic_error("non-finite value in sweep column " + c);
      csv += "," + format_double(v);
    }
    for (const std::string& c : verdict_cols)
      csv += "," + rows[i]["verdicts"].at(c).get<std::string>();
    csv += "\n";
  }
  return csv;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write output file: " + path);
  out << content;
}

}  // namespace

RunResult run_command(const RunSpec& spec) {
  if (!known_command(spec.command))
    throw std::invalid_argument("unknown command: " + spec.command);

  RunResult result;
  if (spec.command == "sweep") {
    if (!known_command(spec.sweep_command) || spec.sweep_command == "sweep" ||
        spec.sweep_command.empty())
      throw std::invalid_argument(
          "sweep needs --command naming a non-sweep command");
    if (spec.csv_path.empty())
      throw std::invalid_argument("sweep needs --csv PATH");
    std::vector<double> grid = q_grid(spec);
    if (needs_q_at_least_one(spec.sweep_command) && grid.front() < 1.0)
      throw std::invalid_argument(spec.sweep_command +
                                  " needs every grid q >= 1");

    RunSpec inner = spec;
    inner.command = spec.sweep_command;
    std::vector<ordered> rows;
    int worst = 0;
    for (double qv : grid) {
      Built built = build_single(inner, qv);
      worst = std::max(worst, built.exit_code);
      rows.push_back(std::move(built.report));
    }

    ordered rep;
    rep["command"] = "sweep";
    rep["sweep"] = ordered{{"command", spec.sweep_command},
                           {"q_min", report_round(spec.q_min)},
                           {"q_max", report_round(spec.q_max)},
                           {"steps", spec.steps}};
    rep["rows"] = rows;
    rep["config"] = config_block(spec);
    rep["versions"] = versions_block();
    result.report_json = rep.dump(2);
    result.csv = sweep_csv(rows, grid);
    result.exit_code = worst;
  } else {
    Built built = build_single(spec, spec.q);
    result.report_json = built.report.dump(2);
    result.exit_code = built.exit_code;
  }

  if (!spec.out_path.empty()) write_file(spec.out_path, result.report_json + "\n");
  if (!spec.csv_path.empty() && !result.csv.empty())
    write_file(spec.csv_path, result.csv);
  return result;
}

}  // namespace qcorr
