#include "qcorr/state_io.hpp"

#include <doctest.h>

#include <json.hpp>
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "test_support.hpp"

using namespace qcorr;
using nlohmann::json;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
};

// runs the installed binary named by QCORR_CLI; stderr folds into stdout
// only when asked for
CliResult run_cli(const std::string& args, bool merge_stderr = false) {
  const char* exe = std::getenv("QCORR_CLI");
  REQUIRE_MESSAGE(exe != nullptr, "QCORR_CLI must point at the built binary");
  std::string cmd = std::string("\"") + exe + "\" " + args +
                    (merge_stderr ? " 2>&1" : " 2>/dev/null");
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult r;
  char buf[4096];
  std::size_t n = 0;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string temp_path(const std::string& stem) {
  std::ostringstream os;
  os << "/tmp/" << stem << "." << getpid();
  return os.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("state files round-trip through JSON") {
  LoadedState pure = make_named_state("haar:3:seed=5");
  std::string pure_path = temp_path("roundtrip_pure.json");
  save_state_file(pure_path, *pure.pure);
  LoadedState pure_back = load_state_file(pure_path);
  REQUIRE(pure_back.is_pure());
  CHECK((pure_back.pure->vec() - pure.pure->vec()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(pure_back.pure->dims() == pure.pure->dims());
  CHECK(pure_back.pure->labels() == pure.pure->labels());

  LoadedState mixed = make_named_state("mixed:2:rank=3:seed=9");
  std::string mixed_path = temp_path("roundtrip_mixed.json");
  save_state_file(mixed_path, mixed.density);
  LoadedState mixed_back = load_state_file(mixed_path);
  CHECK_FALSE(mixed_back.is_pure());
  CHECK((mixed_back.density.matrix() - mixed.density.matrix())
            .cwiseAbs()
            .maxCoeff() == 0.0);

  std::remove(pure_path.c_str());
  std::remove(mixed_path.c_str());
}

TEST_CASE("loading rejects malformed state files") {
  std::string path = temp_path("malformed.json");
  {
    std::ofstream out(path);
    out << "{\"dims\": [2], \"kind\": \"pure\", \"data\": [[1.0, 0.0]]}";
  }
  // dimension 1 data against declared qubit
  CHECK_THROWS(load_state_file(path));
  {
    std::ofstream out(path);
    out << "not json";
  }
  CHECK_THROWS(load_state_file(path));
  std::remove(path.c_str());
  CHECK_THROWS(load_state_file("/tmp/definitely_missing_state.json"));
}

TEST_CASE("resolver prefers descriptors and falls back to paths") {
  LoadedState named = resolve_state("ghz:3");
  CHECK(named.is_pure());

  LoadedState bell = make_named_state("bell:+");
  std::string path = temp_path("resolver.json");
  save_state_file(path, *bell.pure);
  LoadedState from_file = resolve_state(path);
  CHECK(from_file.is_pure());
  CHECK((from_file.pure->vec() - bell.pure->vec()).cwiseAbs().maxCoeff() ==
        0.0);
  std::remove(path.c_str());
}

TEST_CASE("entropy command reports an exact zero for pure input") {
  CliResult r = run_cli("entropy --state bell:+ --q 2");
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["command"] == "entropy");
  CHECK(rep["terms"]["tsallis_entropy"].get<double>() == 0.0);
  CHECK(rep["state"]["kind"] == "pure");
  CHECK(rep["versions"]["schema"] == "1");
}

TEST_CASE("identical invocations emit identical bytes") {
  std::string args = "qcc --state bell:+ --q 2 --restarts 8 --seed 3";
  CliResult a = run_cli(args);
  CliResult b = run_cli(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);

  json rep = json::parse(a.out);
  CHECK(std::abs(rep["terms"]["classical_q_correlation"].get<double>() - 0.5) <
        2e-6);
  CHECK(rep["bounds"]["classical_q_correlation"] == "lower-bound-of-max");
  CHECK(rep["certificates"]["classical_q_correlation"].get<std::string>()
            .size() == 16);
}

TEST_CASE("discord command carries both estimate layers") {
  CliResult r = run_cli("qdiscord --state bell:+ --q 2 --restarts 6 --seed 2");
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(std::abs(rep["terms"]["q_mutual_entropy"].get<double>() - 1.0) < 1e-8);
  CHECK(std::abs(rep["terms"]["q_discord"].get<double>() - 0.5) < 2e-6);
  CHECK(rep["bounds"]["q_discord"] == "over-estimate");
}

TEST_CASE("file states and descriptors produce the same report body") {
  LoadedState s = make_named_state("haar:3:seed=5");
  std::string path = temp_path("cli_state.json");
  save_state_file(path, *s.pure);

  CliResult named = run_cli("qe --state haar:3:seed=5 --q 1.3 --restarts 4");
  CliResult filed = run_cli("qe --state \"" + path + "\" --q 1.3 --restarts 4");
  REQUIRE(named.code == 0);
  REQUIRE(filed.code == 0);

  json a = json::parse(named.out);
  json b = json::parse(filed.out);
  CHECK(a["state"]["descriptor"] != b["state"]["descriptor"]);
  a.erase("state");
  b.erase("state");
  CHECK(a.dump() == b.dump());
  std::remove(path.c_str());
}

TEST_CASE("the out flag duplicates stdout into a file") {
  std::string path = temp_path("cli_out.json");
  CliResult r = run_cli("entropy --state ghz:3 --q 1.5 --out \"" + path + "\"");
  REQUIRE(r.code == 0);
  CHECK(slurp(path) == r.out);
  std::remove(path.c_str());
}

TEST_CASE("closed-form chain values come out frozen") {
  CliResult r = run_cli("ghz-analytic --n 4 --q 1.5");
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["terms"]["left"].get<double>() ==
        doctest::Approx(0.585786438).epsilon(1e-9));
  CHECK(rep["terms"]["middle_lower_bound"].get<double>() ==
        doctest::Approx(0.828427125).epsilon(1e-9));
  CHECK(rep["terms"]["right_coefficient"].get<double>() == 3.0);
  CHECK(rep["verdicts"]["strict_first_predicted"] == "yes");
  CHECK(rep["verdicts"]["strict_second_predicted"] == "yes");
}

TEST_CASE("sweeps produce aligned JSON and CSV artifacts") {
  std::string csv_path = temp_path("sweep.csv");
  CliResult r = run_cli(
      "sweep --command entropy --state bell:+ --q-min 1 --q-max 2 --steps 3 "
      "--csv \"" + csv_path + "\"");
  REQUIRE(r.code == 0);
  json rep = json::parse(r.out);
  CHECK(rep["sweep"]["command"] == "entropy");
  REQUIRE(rep["rows"].size() == 3);
  CHECK(rep["rows"][0]["q"].get<double>() == 1.0);
  CHECK(rep["rows"][2]["q"].get<double>() == 2.0);

  std::istringstream csv(slurp(csv_path));
  std::string line;
  std::getline(csv, line);
  CHECK(line == "q,tsallis_entropy");
  int rows = 0;
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 3);
  std::remove(csv_path.c_str());
}

TEST_CASE("runtime failures exit with code one and explain themselves") {
  CliResult bad_state = run_cli("entropy --state nosuch:2", true);
  CHECK(bad_state.code == 1);
  CHECK(bad_state.out.find("error:") != std::string::npos);

  CliResult bad_q = run_cli("polygamy --state ghz:4 --q 0.5 --restarts 4", true);
  CHECK(bad_q.code == 1);

  CliResult bad_sweep = run_cli(
      "sweep --command polygamy --state ghz:4 --q-min 0.5 --q-max 1.5 "
      "--steps 2 --csv /tmp/never_written.csv", true);
  CHECK(bad_sweep.code == 1);

  CliResult no_sub = run_cli("", true);
  CHECK(no_sub.code != 0);
}

TEST_CASE("starved chain runs exit cleanly or cautiously, never crash") {
  CliResult r = run_cli(
      "polygamy --state ghz:4 --q 1.5 --restarts 1 --seed 3 --max-iters 40",
      true);
  CHECK((r.code == 0 || r.code == 2));
  json rep = json::parse(r.out);
  CHECK(rep["verdicts"].contains("first_inequality"));
}

}  // TEST_SUITE
