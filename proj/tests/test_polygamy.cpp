#include "qcorr/polygamy.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"

using namespace qcorr;
using qcorr::testing::random_state;

namespace {

OptimizerConfig quick(int restarts, std::uint64_t seed) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

MultipartiteState classical_pair() {
  Matrix m = Matrix::Zero(4, 4);
  m(0, 0) = m(3, 3) = cx{0.5, 0.0};
  return MultipartiteState({2, 2}, default_labels(2), m);
}

bool has_note(const std::vector<std::string>& notes, const std::string& n) {
  for (const std::string& note : notes)
    if (note.find(n) != std::string::npos) return true;
  return false;
}

constexpr double kXiOneHalf = 2.0 - std::numbers::sqrt2;  // 2 - sqrt(2)

}  // namespace

TEST_SUITE("polygamy") {

TEST_CASE("proper subsets enumerate closed under complement") {
  auto subsets = enumerate_proper_subsets(3);
  REQUIRE(subsets.size() == 6);
  for (std::size_t i = 1; i < subsets.size(); ++i)
    CHECK(subsets[i].bits > subsets[i - 1].bits);
  for (const SubsetMask& s : subsets) {
    CHECK(s.size() >= 1);
    CHECK(s.size() <= 2);
    bool complement_listed = false;
    for (const SubsetMask& t : subsets)
      if (t.bits == s.complement()) complement_listed = true;
    CHECK(complement_listed);
  }
  CHECK(enumerate_proper_subsets(5).size() == 30);
  CHECK_THROWS_AS(enumerate_proper_subsets(1), std::invalid_argument);
}

TEST_CASE("subset value sums pair with their complements") {
  auto subsets = enumerate_proper_subsets(4);
  auto value = [](Mask m) { return static_cast<double>(m * m + 3); };
  double total = 0.0, paired = 0.0;
  for (const SubsetMask& s : subsets) {
    total += value(s.bits);
    paired += value(s.bits) + value(s.complement());
  }
  CHECK(paired == 2.0 * total);
}

TEST_CASE("register mutual entropy is superadditive at q = 1") {
  for (std::uint64_t seed : {401, 402, 403, 404, 405, 406}) {
    MultipartiteState s = random_state({2, 2}, 1 + static_cast<int>(seed % 4),
                                       seed);
    SuperadditivityResult r = superadditivity_check(s, QValue(1.0));
    CHECK(r.margin >= -1e-9);
    CHECK(r.holds);
  }

  LoadedState bell = make_named_state("bell:+");
  SuperadditivityResult b = superadditivity_check(bell.density, QValue(1.0));
  CHECK(std::abs(b.margin) < 1e-9);
}

TEST_CASE("the q = 1 guarantee does not extend upward") {
  // at q = 1.5 the sharp classically correlated pair violates the register
  // superadditivity by a finite amount; the chain verifiers must surface
  // this rather than assume it away
  SuperadditivityResult r = superadditivity_check(classical_pair(), QValue(1.5));
  CHECK_FALSE(r.holds);
  CHECK(std::abs(r.margin - (-0.171572875)) < 1e-6);
}

TEST_CASE("four-qubit chain at q = 1.5") {
  LoadedState s = make_named_state("ghz:4");
  PolygamyReport rep =
      verify_strong_polygamy_entanglement(s, QValue(1.5), quick(16, 3));

  CHECK(rep.left_analytic);
  CHECK(rep.left_exact);
  CHECK(std::abs(rep.left - kXiOneHalf) < 1e-12);
  REQUIRE(rep.subset_terms.size() == 6);
  REQUIRE(rep.singleton_terms.size() == 3);
  REQUIRE(rep.condition_margins.size() == 6);

  for (const SubsetTerm& t : rep.subset_terms) {
    CHECK(t.converged);
    CHECK(t.value >= std::numbers::sqrt2 * kXiOneHalf / 2.0 - 1e-6);
    CHECK(t.value <= kXiOneHalf + 1e-6);
    CHECK_FALSE(t.digest.empty());
  }

  CHECK(std::abs(rep.margin_first - 0.242640687) < 5e-3);
  CHECK(std::abs(rep.margin_second - 0.414213562) < 5e-3);
  CHECK(rep.verdict_first == "strict");
  CHECK(rep.verdict_second == "strict");

  // the sharpened middle term needs register superadditivity, which fails
  // beyond q = 1 on exactly these marginals
  CHECK_FALSE(rep.condition_all_hold);
  for (const ConditionMargin& c : rep.condition_margins)
    CHECK_FALSE(c.holds);
}

TEST_CASE("four-qubit chain at q = 1") {
  LoadedState s = make_named_state("ghz:4");
  PolygamyReport rep =
      verify_strong_polygamy_entanglement(s, QValue(1.0), quick(16, 3));
  CHECK(std::abs(rep.left - std::numbers::ln2) < 1e-12);
  CHECK(std::abs(rep.margin_first - std::numbers::ln2) < 5e-3);
  CHECK(std::abs(rep.margin_second - std::numbers::ln2) < 5e-3);
  CHECK(rep.verdict_first == "strict");
  CHECK(rep.verdict_second == "strict");
  CHECK(rep.condition_all_hold);
  CHECK(has_note(rep.notes, "q = 1"));
}

TEST_CASE("two assisting parties collapse the outer inequality") {
  LoadedState s = make_named_state("mixed:3:rank=2:seed=5");
  PolygamyReport rep =
      verify_strong_polygamy_entanglement(s, QValue(1.2), quick(8, 1));
  CHECK_FALSE(rep.left_exact);
  CHECK(has_note(rep.notes, "mixed input"));
  REQUIRE(rep.subset_terms.size() == 2);
  // with two assisting parties the subset average and the singleton sum are
  // the same expression
  CHECK(rep.margin_second == 0.0);
  CHECK(rep.verdict_second == "holds");
}

TEST_CASE("discord chain matches the entanglement chain on the 4-qubit cap") {
  LoadedState s = make_named_state("ghz:4");
  PolygamyReport rep =
      verify_strong_polygamy_discord(s, QValue(1.5), quick(16, 3));

  CHECK(std::abs(rep.left - kXiOneHalf) < 1e-12);
  REQUIRE(rep.subset_terms.size() == 6);
  for (const SubsetTerm& t : rep.singleton_terms)
    CHECK(std::abs(t.value - std::numbers::sqrt2 * kXiOneHalf / 2.0) < 2e-4);

  // the pair subsets stall before the common value; their terms are under-
  // estimates, so the strict verdicts stay trustworthy even with the slack
  CHECK(std::abs(rep.margin_first - 0.242640687) < 2e-2);
  CHECK(std::abs(rep.margin_second - 0.414213562) < 2e-2);
  CHECK(rep.verdict_first == "strict");
  CHECK(rep.verdict_second == "strict");
}

TEST_CASE("chain preconditions") {
  LoadedState bell = make_named_state("bell:+");
  CHECK_THROWS_AS(
      verify_strong_polygamy_entanglement(bell, QValue(1.5), quick(4, 1)),
      std::invalid_argument);

  LoadedState big = make_named_state("ghz:7");
  CHECK_THROWS_AS(
      verify_strong_polygamy_entanglement(big, QValue(1.5), quick(4, 1)),
      std::invalid_argument);

  LoadedState s = make_named_state("ghz:4");
  CHECK_THROWS_AS(
      verify_strong_polygamy_entanglement(s, QValue(0.9), quick(4, 1)),
      std::invalid_argument);

  LoadedState mixed = make_named_state("mixed:3:rank=2:seed=1");
  CHECK_THROWS_AS(verify_strong_polygamy_discord(mixed, QValue(1.5), quick(4, 1)),
                  std::invalid_argument);
}

TEST_CASE("equivalence balances on a three-qubit cap at q = 1") {
  LoadedState ghz = make_named_state("ghz:3");
  EquivalenceReport rep = verify_equivalence(*ghz.pure, QValue(1.0),
                                             quick(24, 7));
  CHECK(std::abs(rep.conditional_entropy_sum) < 1e-12);
  REQUIRE(rep.per_subset.size() == 2);
  for (const SubsetResidual& row : rep.per_subset) {
    CHECK(std::abs(row.assistance - std::numbers::ln2) < 2e-5);
    CHECK(std::abs(row.residual) < 5e-5);
  }
  CHECK(std::abs(rep.sum_residual -
                 (rep.sum_assistance - rep.sum_unlocalizable_discord)) < 1e-15);
  CHECK(std::abs(rep.sum_residual) < 1e-4);
  CHECK(rep.optimizer_slack >= 0.0);
}

TEST_CASE("closed-form chain catalogue") {
  GhzAnalytic g = ghz_analytic_report(4, QValue(1.5));
  CHECK(g.b_count == 3);
  CHECK(std::abs(g.xi_q - kXiOneHalf) < 1e-12);
  CHECK(std::abs(g.xi_lower - std::numbers::sqrt2 * kXiOneHalf / 2.0) < 1e-12);
  CHECK(std::abs(g.left - g.xi_q) == 0.0);
  CHECK(g.subset_count == 6);
  CHECK(g.middle_coefficient == 2.0);
  CHECK(g.right_coefficient == 3.0);
  CHECK(std::abs(g.middle_lower_bound - std::numbers::sqrt2 * kXiOneHalf) <
        1e-12);
  CHECK(g.strict_first_predicted);
  CHECK(g.strict_second_predicted);

  GhzAnalytic top = ghz_analytic_report(4, QValue(2.0));
  CHECK(top.xi_q == 0.5);
  CHECK_FALSE(top.strict_first_predicted);
  CHECK(top.strict_second_predicted);

  GhzAnalytic small = ghz_analytic_report(3, QValue(1.5));
  CHECK(small.b_count == 2);
  CHECK(small.strict_first_predicted);
  CHECK_FALSE(small.strict_second_predicted);

  GhzAnalytic one = ghz_analytic_report(5, QValue(1.0));
  CHECK(std::abs(one.xi_q - std::numbers::ln2) < 1e-15);
  CHECK(std::abs(one.xi_lower - std::numbers::ln2) < 1e-15);
  CHECK(one.right_coefficient == 4.0);

  CHECK_THROWS_AS(ghz_analytic_report(2, QValue(1.5)), std::invalid_argument);
  CHECK_THROWS_AS(ghz_analytic_report(4, QValue(0.8)), std::invalid_argument);
}

}  // TEST_SUITE
