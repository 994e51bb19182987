#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace factjudge {

struct HistogramBin {
  double lower = 0.0;
  double upper = 0.0;
  std::size_t count = 0;

  bool operator==(const HistogramBin&) const = default;
};

struct DistributionSummary {
  std::size_t n = 0;
  double mean = 0.0;
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
  std::vector<HistogramBin> histogram;

  bool operator==(const DistributionSummary&) const = default;
};

// Percentage of positions where the judge decision equals the human label.
// Throws MetricsError(Empty, LengthMismatch).
double human_alignment_rate(std::span<const bool> decisions, std::span<const bool> human_labels);

// mean(treated) - baseline, in percentage points. Throws MetricsError(Empty).
double improvement(double baseline_har, std::span<const double> treated_hars);

// Quantile at probability p of an ascending sample, interpolating linearly
// between order statistics at zero-based rank p*(n-1).
double quantile_sorted(std::span<const double> sorted, double p);

// Scores must lie in [0,1]. Bins are equal-width over [0,1]; the last bin
// includes 1. Throws MetricsError(Empty, OutOfRange, InvalidArgument).
DistributionSummary score_distribution(std::span<const double> scores, std::size_t bins = 10);

// One decimal, as HAR is tabulated ("85.9").
std::string format_har(double har_percent);

}  // namespace factjudge
