#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "factjudge/error.hpp"
#include "factjudge/serial/reference.hpp"
#include "factjudge/special_functions.hpp"
#include "factjudge/stats_tests.hpp"
#include "oracles.hpp"

using namespace factjudge;

TEST(IncompleteBeta, MatchesOracle) {
  for (const auto& c : testsupport::stats_oracles().at("incomplete_beta")) {
    EXPECT_NEAR(regularized_incomplete_beta(c.at("x"), c.at("a"), c.at("b")), c.at("value").get<double>(), 1e-12)
        << c.dump();
  }
}

TEST(IncompleteBeta, UniformAndReflection) {
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    EXPECT_NEAR(regularized_incomplete_beta(x, 1.0, 1.0), x, 1e-12);
  }
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> ux(0.0, 1.0), ua(0.1, 30.0);
  for (int i = 0; i < 200; ++i) {
    const double x = ux(rng), a = ua(rng), b = ua(rng);
    EXPECT_NEAR(regularized_incomplete_beta(x, a, b) + regularized_incomplete_beta(1 - x, b, a), 1.0, 1e-12);
  }
  EXPECT_THROW(regularized_incomplete_beta(1.5, 1, 1), std::domain_error);
  EXPECT_THROW(regularized_incomplete_beta(0.5, 0, 1), std::domain_error);
}

TEST(FDistribution, OracleSymmetryAndMonotonicity) {
  for (const auto& c : testsupport::stats_oracles().at("f_sf")) {
    EXPECT_NEAR(f_sf(c.at("f"), c.at("d1"), c.at("d2")), c.at("p").get<double>(), 1e-12) << c.dump();
  }
  for (int d = 1; d <= 10; ++d) EXPECT_NEAR(f_sf(1.0, d, d), 0.5, 1e-9);
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> uf(0.0, 20.0);
  for (int i = 0; i < 300; ++i) {
    const double f = uf(rng);
    const int d1 = 1 + rng() % 30, d2 = 1 + rng() % 200;
    EXPECT_GE(f_sf(f, d1, d2) + 1e-15, f_sf(f + 0.5, d1, d2));
  }
  EXPECT_EQ(f_sf(0.0, 3, 4), 1.0);
}

TEST(StudentT, MatchesOracle) {
  for (const auto& c : testsupport::stats_oracles().at("t_sf")) {
    EXPECT_NEAR(student_t_sf(c.at("t"), c.at("df")), c.at("p").get<double>(), 1e-12) << c.dump();
  }
}

TEST(StudentizedRange, MatchesOracle) {
  const auto& cases = testsupport::stats_oracles().at("studentized_range");
  ASSERT_GE(cases.size(), 10u);
  for (const auto& c : cases) {
    EXPECT_NEAR(studentized_range_sf(c.at("q"), c.at("k"), c.at("df")), c.at("p").get<double>(), 1e-4) << c.dump();
  }
}

TEST(StudentizedRange, TwoMeansReduceToTwoSidedT) {
  for (int df : {1, 2, 5, 10, 30, 120}) {
    for (double q : {0.3, 1.0, 2.5, 4.0, 7.0}) {
      EXPECT_NEAR(studentized_range_sf(q, 2, df), 2.0 * student_t_sf(q / std::sqrt(2.0), df), 1e-6) << q << " " << df;
    }
  }
}

TEST(StudentizedRange, MonotoneInQAndK) {
  for (int df : {3, 20, 200}) {
    for (int k = 2; k <= 8; ++k) {
      double prev = 1.0;
      for (double q = 0.0; q <= 8.0; q += 0.5) {
        const double p = studentized_range_sf(q, k, df);
        EXPECT_LE(p, prev + 1e-9);
        EXPECT_GE(studentized_range_sf(q, k + 1, df) + 1e-9, p);
        prev = p;
      }
    }
  }
}

TEST(Anova, ClosedFormExample) {
  const std::vector<std::vector<double>> groups{{1, 2, 3}, {2, 3, 4}, {6, 7, 8}};
  const auto r = one_way_anova(groups);
  EXPECT_EQ(r.f_stat, 21.0);
  EXPECT_EQ(r.df_between, 2);
  EXPECT_EQ(r.df_within, 6);
  EXPECT_NEAR(r.p_value, 1.0 / 512.0, 1e-9);
  EXPECT_DOUBLE_EQ(r.ss_between, 42.0);
  EXPECT_DOUBLE_EQ(r.ss_within, 6.0);
}

TEST(Anova, InvariantsOnRandomData) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 2 + trial % 5;
    std::vector<std::vector<double>> g(k);
    for (int i = 0; i < k; ++i) {
      g[i].resize(2 + rng() % 15);
      for (auto& x : g[i]) x = noise(rng) + 0.3 * i;
    }
    const auto r = one_way_anova(g);
    double sst = 0.0;
    for (const auto& grp : g)
      for (double x : grp) sst += (x - r.grand_mean) * (x - r.grand_mean);
    EXPECT_NEAR(r.ss_between + r.ss_within, sst, 1e-9 * sst);
    EXPECT_NEAR(r.p_value, f_sf(r.f_stat, r.df_between, r.df_within), 1e-15);

    auto shifted = g, scaled = g;
    for (auto& grp : shifted)
      for (auto& x : grp) x += 1234.5;
    for (auto& grp : scaled)
      for (auto& x : grp) x *= -3.7;
    EXPECT_NEAR(one_way_anova(shifted).f_stat, r.f_stat, 1e-7 * r.f_stat);
    EXPECT_NEAR(one_way_anova(scaled).f_stat, r.f_stat, 1e-9 * r.f_stat);
  }
}

TEST(Anova, Errors) {
  std::vector<std::vector<double>> one{{1, 2}};
  EXPECT_THROW(one_way_anova(one), StatsError);
  std::vector<std::vector<double>> tiny{{1, 2}, {3}};
  EXPECT_THROW(one_way_anova(tiny), StatsError);
  std::vector<std::vector<double>> flat{{1, 1}, {2, 2}};
  try {
    one_way_anova(flat);
    FAIL();
  } catch (const StatsError& e) {
    EXPECT_EQ(e.code(), StatsErrc::DegenerateVariance);
  }
}

TEST(Tukey, StructureAndOrdering) {
  std::vector<LabeledGroup> groups{{"c", {6, 7, 8}}, {"a", {1, 2, 3}}, {"b", {2, 3, 4}}, {"d", {2, 2.5, 3, 4}}};
  const auto pairs = tukey_hsd(groups);
  ASSERT_EQ(pairs.size(), 6u);
  EXPECT_EQ(pairs[0].group_a, "a");
  EXPECT_EQ(pairs[0].group_b, "b");
  EXPECT_EQ(pairs[5].group_a, "c");
  EXPECT_EQ(pairs[5].group_b, "d");
  EXPECT_DOUBLE_EQ(pairs[0].mean_diff, 1.0);
  for (const auto& p : pairs) {
    EXPECT_GE(p.p_adj, 0.0);
    EXPECT_LE(p.p_adj, 1.0);
    EXPECT_EQ(p.reject_at_alpha, p.p_adj < 0.05);
  }
  EXPECT_EQ(pairs, serial::tukey_hsd(groups));
}

TEST(Tukey, IdenticalGroupsGivePOne) {
  std::vector<LabeledGroup> groups{{"x", {1, 2, 3, 4}}, {"y", {1, 2, 3, 4}}, {"z", {1, 2, 3, 4}}};
  for (const auto& p : tukey_hsd(groups)) {
    EXPECT_EQ(p.q_stat, 0.0);
    EXPECT_EQ(p.p_adj, 1.0);
  }
}

TEST(Tukey, KnownValueFromClosedFormExample) {
  // q for (a, c) is 5 / sqrt(1/3) = 8.660..., whose tail is in the oracle set.
  std::vector<LabeledGroup> groups{{"a", {1, 2, 3}}, {"b", {2, 3, 4}}, {"c", {6, 7, 8}}};
  const auto pairs = tukey_hsd(groups);
  EXPECT_NEAR(pairs[1].q_stat, 8.660254037844387, 1e-12);
  EXPECT_NEAR(pairs[1].p_adj, 0.002101240581572572, 1e-4);
}

TEST(Tukey, PermutationEquivariantAndLargestGapSmallestP) {
  std::mt19937_64 rng(37);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<LabeledGroup> g;
    for (int i = 0; i < 4; ++i) {
      LabeledGroup lg{std::string(1, char('a' + i)), std::vector<double>(6)};
      for (auto& x : lg.values) x = noise(rng) + 0.8 * i * (trial % 3);
      g.push_back(lg);
    }
    const auto base = tukey_hsd(g);
    auto reordered = g;
    std::shuffle(reordered.begin(), reordered.end(), rng);
    EXPECT_EQ(tukey_hsd(reordered), base);

    const auto widest = std::max_element(base.begin(), base.end(), [](const auto& x, const auto& y) {
      return std::abs(x.mean_diff) < std::abs(y.mean_diff);
    });
    for (const auto& p : base) EXPECT_LE(widest->p_adj, p.p_adj + 1e-12);
  }
}

TEST(Tukey, RejectsBadArguments) {
  std::vector<LabeledGroup> dup{{"a", {1, 2}}, {"a", {3, 4}}};
  EXPECT_THROW(tukey_hsd(dup), StatsError);
  std::vector<LabeledGroup> ok{{"a", {1, 2}}, {"b", {3, 5}}};
  EXPECT_THROW(tukey_hsd(ok, 0.0), StatsError);
  EXPECT_THROW(tukey_hsd(ok, 1.0), StatsError);
}

TEST(PValueDisplay, FourDecimalsWithFloor) {
  EXPECT_EQ(format_p_value(4.9e-5), "0.0000");
  EXPECT_EQ(format_p_value(1e-12), "0.0000");
  EXPECT_EQ(format_p_value(0.0), "0.0000");
  EXPECT_EQ(format_p_value(0.00021), "0.0002");
  EXPECT_EQ(format_p_value(0.05), "0.0500");
  EXPECT_EQ(format_p_value(1.0), "1.0000");
}
