#include "factjudge/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace factjudge {

namespace {

constexpr double kSqrt2 = 1.41421356237309504880;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

// Continued-fraction controls for the incomplete beta.
constexpr int kBetaMaxIterations = 10000;
constexpr double kBetaEpsilon = 1e-16;
constexpr double kTiny = 1e-300;

// Quadrature controls for the studentized range. Fixed so that results are
// bit-stable from run to run.
constexpr double kRangeHalfWidth = 8.5;       // |z| beyond this has phi(z) < 1e-15
constexpr double kInnerTolerance = 1e-11;
constexpr double kOuterTolerance = 1e-9;
constexpr double kScaleSpan = 12.0;           // chi-scale bounds: 1 -/+ kScaleSpan/sqrt(df)

double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

double beta_continued_fraction(double x, double a, double b) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kBetaMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kBetaEpsilon) break;
  }
  return h;
}

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

double gk15_adaptive(const std::function<double(double)>& f, double a, double b, double tol, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (std::fabs(kronrod - gauss) <= tol || depth <= 0) return kronrod;
  return gk15_adaptive(f, a, center, 0.5 * tol, depth - 1) + gk15_adaptive(f, center, b, 0.5 * tol, depth - 1);
}

}  // namespace

double regularized_incomplete_beta(double x, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::domain_error("incomplete beta requires a > 0 and b > 0");
  if (!(x >= 0.0 && x <= 1.0)) throw std::domain_error("incomplete beta requires x in [0,1]");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return std::clamp(front * beta_continued_fraction(x, a, b) / a, 0.0, 1.0);
  return std::clamp(1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b, 0.0, 1.0);
}

double f_sf(double f, int d1, int d2) {
  if (d1 <= 0 || d2 <= 0) throw std::domain_error("F distribution needs positive degrees of freedom");
  if (std::isnan(f)) throw std::domain_error("F statistic is NaN");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double x = d2 / (d2 + d1 * f);
  return regularized_incomplete_beta(x, 0.5 * d2, 0.5 * d1);
}

double student_t_sf(double t, int df) {
  if (df <= 0) throw std::domain_error("t distribution needs positive degrees of freedom");
  const double tail = 0.5 * regularized_incomplete_beta(df / (df + t * t), 0.5 * df, 0.5);
  return t >= 0.0 ? tail : 1.0 - tail;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double integrate_gk15(const std::function<double(double)>& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  return gk15_adaptive(f, a, b, tol, max_depth);
}

double normal_range_cdf(double w, int k) {
  if (k < 2) throw std::domain_error("range needs k >= 2");
  if (!(w > 0.0)) return 0.0;
  const double km1 = k - 1.0;
  auto integrand = [&](double z) {
    const double spread = normal_cdf(z) - normal_cdf(z - w);
    if (spread <= 0.0) return 0.0;
    return kInvSqrt2Pi * std::exp(-0.5 * z * z) * std::pow(spread, km1);
  };
  // The integrand vanishes below -kRangeHalfWidth through phi(z) and above
  // w + kRangeHalfWidth through the spread; split at the window edges.
  const double upper = std::min(kRangeHalfWidth, w + kRangeHalfWidth);
  const double value = k * integrate_gk15(integrand, -kRangeHalfWidth, upper, kInnerTolerance);
  return std::clamp(value, 0.0, 1.0);
}

double studentized_range_sf(double q, int k, int df) {
  if (k < 2) throw std::domain_error("studentized range needs k >= 2");
  if (df <= 0) throw std::domain_error("studentized range needs df >= 1");
  if (std::isnan(q)) throw std::domain_error("studentized range statistic is NaN");
  if (q <= 0.0) return 1.0;
  if (std::isinf(q)) return 0.0;

  // Density of s = chi_df / sqrt(df), in log space.
  const double nu = df;
  const double log_norm = 0.5 * nu * std::log(nu) - log_gamma(0.5 * nu) - (0.5 * nu - 1.0) * std::log(2.0);
  auto scale_density = [&](double s) {
    if (s <= 0.0) return 0.0;
    return std::exp(log_norm + (nu - 1.0) * std::log(s) - 0.5 * nu * s * s);
  };
  auto integrand = [&](double s) {
    const double g = scale_density(s);
    if (g == 0.0) return 0.0;
    return g * (1.0 - normal_range_cdf(q * s, k));
  };

  const double spread = kScaleSpan / std::sqrt(nu);
  const double lo = std::max(0.0, 1.0 - spread);
  const double hi = 1.0 + spread;
  // Split at the density mode so both flanks are resolved.
  const double mode = std::sqrt(std::max(nu - 1.0, 0.0) / nu);
  double value = 0.0;
  if (mode > lo) {
    value = integrate_gk15(integrand, lo, mode, kOuterTolerance) +
            integrate_gk15(integrand, mode, hi, kOuterTolerance);
  } else {
    value = integrate_gk15(integrand, lo, hi, kOuterTolerance);
  }
  return std::clamp(value, 0.0, 1.0);
}

}  // namespace factjudge
