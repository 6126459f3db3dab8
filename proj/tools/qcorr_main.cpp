#include "qcorr/reporting.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using qcorr::RunSpec;

void add_output_option(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--out", spec.out_path, "write the JSON report here");
}

void add_state_option(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--state", spec.state,
                  "named state (ghz:4, w:3, bell:+, product:01+-, haar:3, "
                  "mixed:2:rank=2:seed=5) or a state JSON file")
      ->required();
}

void add_q_option(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--q", spec.q, "Tsallis parameter")->capture_default_str();
}

void add_optimizer_options(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--restarts", spec.optimizer.restarts,
                  "optimizer restarts")
      ->capture_default_str();
  sub->add_option("--max-iters", spec.optimizer.max_iterations,
                  "objective evaluations per restart")
      ->capture_default_str();
  sub->add_option("--step-tol", spec.optimizer.step_tolerance,
                  "simplex size tolerance")
      ->capture_default_str();
  sub->add_option("--value-tol", spec.optimizer.value_tolerance,
                  "objective spread tolerance")
      ->capture_default_str();
  sub->add_option("--seed", spec.optimizer.seed, "restart seed")
      ->capture_default_str();
  sub->add_option("--cardinality", spec.optimizer.cardinality,
                  "decomposition size / measurement outcome count");
}

void add_a_side_option(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--a-side", spec.a_side,
                  "party labels of the untouched side (default: first party)");
}

void add_measured_option(CLI::App* sub, RunSpec& spec) {
  sub->add_option("--measured", spec.measured,
                  "party labels to measure (default: all but the first)");
}

void add_allow_large_option(CLI::App* sub, RunSpec& spec) {
  sub->add_flag("--allow-large", spec.allow_large,
                "run even with more than five assisting parties");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tsallis q-expected quantum correlation toolkit"};
  app.require_subcommand(1);

  RunSpec spec;

  CLI::App* entropy = app.add_subcommand("entropy", "Tsallis q-entropy");
  add_state_option(entropy, spec);
  add_q_option(entropy, spec);
  add_output_option(entropy, spec);

  for (const char* name : {"qe", "qeoa"}) {
    CLI::App* sub = app.add_subcommand(
        name, std::string(name) == "qe"
                  ? "q-expected entanglement (decomposition minimum)"
                  : "q-expected entanglement of assistance (maximum)");
    add_state_option(sub, spec);
    add_q_option(sub, spec);
    add_a_side_option(sub, spec);
    add_optimizer_options(sub, spec);
    add_output_option(sub, spec);
  }

  for (const char* name : {"qcc", "que", "qdiscord", "qud"}) {
    const char* desc = "";
    std::string n = name;
    if (n == "qcc") desc = "one-way classical q-correlation";
    if (n == "que") desc = "one-way unlocalizable q-entanglement";
    if (n == "qdiscord") desc = "quantum q-discord";
    if (n == "qud") desc = "one-way unlocalizable q-discord";
    CLI::App* sub = app.add_subcommand(name, desc);
    add_state_option(sub, spec);
    add_q_option(sub, spec);
    add_measured_option(sub, spec);
    add_optimizer_options(sub, spec);
    add_output_option(sub, spec);
  }

  CLI::App* ccq = app.add_subcommand(
      "ccq-check", "superadditivity of q-mutual entropy on the ccq extension");
  add_state_option(ccq, spec);
  add_q_option(ccq, spec);
  add_output_option(ccq, spec);

  CLI::App* tradeoff = app.add_subcommand(
      "tradeoff", "three-party entropy balances (diagnostic for q > 1)");
  add_state_option(tradeoff, spec);
  add_q_option(tradeoff, spec);
  add_optimizer_options(tradeoff, spec);
  add_output_option(tradeoff, spec);

  for (const char* name : {"polygamy", "polygamy-discord"}) {
    CLI::App* sub = app.add_subcommand(
        name, std::string(name) == "polygamy"
                  ? "strong polygamy chain of assisted entanglement"
                  : "strong polygamy chain of unlocalizable q-discord");
    add_state_option(sub, spec);
    add_q_option(sub, spec);
    add_optimizer_options(sub, spec);
    add_allow_large_option(sub, spec);
    add_output_option(sub, spec);
  }

  CLI::App* equiv = app.add_subcommand(
      "equivalence", "assistance vs unlocalizable-discord subset sums");
  add_state_option(equiv, spec);
  add_q_option(equiv, spec);
  add_optimizer_options(equiv, spec);
  add_allow_large_option(equiv, spec);
  add_output_option(equiv, spec);

  CLI::App* ghz = app.add_subcommand("ghz-analytic",
                                     "closed forms for the GHZ chain");
  ghz->add_option("--n", spec.ghz_n, "total qubit count")->capture_default_str();
  add_q_option(ghz, spec);
  add_output_option(ghz, spec);

  CLI::App* sweep = app.add_subcommand("sweep", "run a command over a q grid");
  sweep->add_option("--command", spec.sweep_command, "command to sweep")
      ->required();
  add_state_option(sweep, spec);
  sweep->add_option("--q-min", spec.q_min, "grid start")->capture_default_str();
  sweep->add_option("--q-max", spec.q_max, "grid end")->capture_default_str();
  sweep->add_option("--steps", spec.steps, "grid size")->required();
  sweep->add_option("--csv", spec.csv_path, "CSV output path")->required();
  add_a_side_option(sweep, spec);
  add_measured_option(sweep, spec);
  add_optimizer_options(sweep, spec);
  add_allow_large_option(sweep, spec);
  sweep->add_option("--n", spec.ghz_n, "total qubit count for ghz-analytic");
  add_output_option(sweep, spec);

  CLI11_PARSE(app, argc, argv);

  spec.command = app.get_subcommands().front()->get_name();
  try {
    qcorr::RunResult result = qcorr::run_command(spec);
    std::cout << result.report_json << std::endl;
    return result.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 1;
  }
}
