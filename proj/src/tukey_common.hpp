#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "factjudge/error.hpp"
#include "factjudge/stats_tests.hpp"

namespace factjudge::detail {

// Everything about a Tukey-Kramer comparison except the tail probabilities.
struct TukeyLayout {
  std::size_t k = 0;
  int df_within = 0;
  double ms_within = 0.0;
  std::vector<PairwiseComparison> pairs;  // p_adj not yet filled
};

inline TukeyLayout tukey_layout(std::span<const LabeledGroup> groups, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw StatsError(StatsErrc::InvalidArgument, "alpha must be in (0,1)");
  std::vector<const LabeledGroup*> sorted;
  sorted.reserve(groups.size());
  for (const auto& g : groups) sorted.push_back(&g);
  std::sort(sorted.begin(), sorted.end(), [](const auto* a, const auto* b) { return a->label < b->label; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->label == sorted[i - 1]->label) {
      throw StatsError(StatsErrc::InvalidArgument, "duplicate group label '" + sorted[i]->label + "'");
    }
  }

  std::vector<std::vector<double>> values;
  values.reserve(sorted.size());
  for (const auto* g : sorted) values.push_back(g->values);
  const AnovaResult anova = one_way_anova(values);

  TukeyLayout layout;
  layout.k = sorted.size();
  layout.df_within = anova.df_within;
  layout.ms_within = anova.ss_within / anova.df_within;

  std::vector<double> means;
  for (const auto& v : values) means.push_back(std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()));

  for (std::size_t i = 0; i < sorted.size(); ++i) {
    for (std::size_t j = i + 1; j < sorted.size(); ++j) {
      PairwiseComparison c;
      c.group_a = sorted[i]->label;
      c.group_b = sorted[j]->label;
      c.mean_diff = means[j] - means[i];
      const double se = std::sqrt(0.5 * layout.ms_within *
                                  (1.0 / static_cast<double>(values[i].size()) +
                                   1.0 / static_cast<double>(values[j].size())));
      c.q_stat = std::fabs(c.mean_diff) / se;
      layout.pairs.push_back(std::move(c));
    }
  }
  return layout;
}

}  // namespace factjudge::detail
