#include "factjudge/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "factjudge/error.hpp"

namespace factjudge {

double human_alignment_rate(std::span<const bool> decisions, std::span<const bool> human_labels) {
  if (decisions.size() != human_labels.size()) {
    throw MetricsError(MetricsErrc::LengthMismatch, "decisions and human labels differ in length (" +
                                                        std::to_string(decisions.size()) + " vs " +
                                                        std::to_string(human_labels.size()) + ")");
  }
  if (decisions.empty()) throw MetricsError(MetricsErrc::Empty, "no decisions to align");
  std::size_t agree = 0;
  for (std::size_t i = 0; i < decisions.size(); ++i) agree += decisions[i] == human_labels[i];
  return 100.0 * static_cast<double>(agree) / static_cast<double>(decisions.size());
}

double improvement(double baseline_har, std::span<const double> treated_hars) {
  if (treated_hars.empty()) throw MetricsError(MetricsErrc::Empty, "no treated HAR values");
  const double mean = std::accumulate(treated_hars.begin(), treated_hars.end(), 0.0) /
                      static_cast<double>(treated_hars.size());
  return mean - baseline_har;
}

double quantile_sorted(std::span<const double> sorted, double p) {
  if (sorted.empty()) throw MetricsError(MetricsErrc::Empty, "quantile of empty sample");
  const double rank = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

DistributionSummary score_distribution(std::span<const double> scores, std::size_t bins) {
  if (scores.empty()) throw MetricsError(MetricsErrc::Empty, "score distribution of empty sample");
  if (bins == 0) throw MetricsError(MetricsErrc::InvalidArgument, "histogram needs at least one bin");
  for (double s : scores) {
    if (!(s >= 0.0 && s <= 1.0)) {
      throw MetricsError(MetricsErrc::OutOfRange, "score " + std::to_string(s) + " outside [0,1]");
    }
  }
  std::vector<double> sorted(scores.begin(), scores.end());
  std::sort(sorted.begin(), sorted.end());

  DistributionSummary out;
  out.n = sorted.size();
  // Summing in sorted order keeps the mean independent of input order.
  out.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(out.n);
  out.min = sorted.front();
  out.max = sorted.back();
  out.q1 = quantile_sorted(sorted, 0.25);
  out.median = quantile_sorted(sorted, 0.5);
  out.q3 = quantile_sorted(sorted, 0.75);

  out.histogram.resize(bins);
  const double width = 1.0 / static_cast<double>(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    out.histogram[b].lower = static_cast<double>(b) * width;
    out.histogram[b].upper = b + 1 == bins ? 1.0 : static_cast<double>(b + 1) * width;
  }
  for (double s : sorted) {
    auto b = static_cast<std::size_t>(std::floor(s * static_cast<double>(bins)));
    if (b >= bins) b = bins - 1;
    ++out.histogram[b].count;
  }
  return out;
}

std::string format_har(double har_percent) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", har_percent);
  return buf;
}

}  // namespace factjudge
