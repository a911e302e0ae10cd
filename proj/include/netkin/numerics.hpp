#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace netkin {

// Compensated (Kahan) accumulator for long sums of small terms.
class KahanSum {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

namespace detail {

// Stirling tail series J(x) with lnGamma(x) = (x-1/2)ln x - x + ln(2 pi)/2 + J(x).
inline double stirling_tail(double x) {
  const double x2 = x * x;
  double inv = 1.0 / x;
  double j = inv / 12.0;
  inv /= x2;
  j -= inv / 360.0;
  inv /= x2;
  j += inv / 1260.0;
  inv /= x2;
  j -= inv / 1680.0;
  inv /= x2;
  j += inv / 1188.0;
  return j;
}

}  // namespace detail

// lnGamma(a) - lnGamma(b), stable for large nearby arguments where the naive
// lgamma difference loses absolute precision to cancellation.
inline double log_gamma_ratio(double a, double b) {
  constexpr double kBig = 30.0;
  if (a == b) return 0.0;
  if (a >= kBig && b >= kBig) {
    const double d = a - b;
    const double l = std::log1p(d / b);
    return d * std::log(b) + (a - 0.5) * l - d + detail::stirling_tail(a) -
           detail::stirling_tail(b);
  }
  if (a < kBig && b < kBig) return std::lgamma(a) - std::lgamma(b);
  // Mixed scale: raise the small argument by the recurrence
  // lnGamma(x) = lnGamma(x+n) - sum ln(x+i), then recurse on the stable case.
  if (a < b) return -log_gamma_ratio(b, a);
  KahanSum shift;
  double x = b;
  while (x < kBig) {
    shift.add(std::log(x));
    x += 1.0;
  }
  return log_gamma_ratio(a, x) + shift.value();
}

// Power-law tail extrapolation: given the last computed term t_k at index k
// and a local exponent nu > 1, estimate sum_{j>k} t_j assuming t_j ~ C j^-nu.
// Midpoint integral rule, accurate to O(1/k^2) relative for smooth tails.
inline double power_tail_sum(double term_k, double k, double nu) {
  if (!(nu > 1.0) || term_k <= 0.0) return 0.0;
  return term_k * k * std::exp((nu - 1.0) * std::log(k / (k + 0.5))) / (nu - 1.0);
}

// Local power-law exponent from two consecutive terms.
inline double local_exponent(double term_prev, double term_curr, double k) {
  if (term_prev <= 0.0 || term_curr <= 0.0) return std::numeric_limits<double>::infinity();
  return -std::log(term_curr / term_prev) / std::log(k / (k - 1.0));
}

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r2 = 0.0;
  double slope_se = 0.0;
  std::size_t n = 0;
};

// Weighted least squares y ~ a + b x.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y,
                        std::span<const double> w) {
  LineFit f;
  double sw = 0, sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sw += w[i];
    sx += w[i] * x[i];
    sy += w[i] * y[i];
  }
  if (sw <= 0) return f;
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += w[i] * dx * dx;
    sxy += w[i] * dx * dy;
    syy += w[i] * dy * dy;
  }
  if (sxx <= 0) return f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r2 = (syy > 0) ? (sxy * sxy) / (sxx * syy) : 1.0;
  // Residual variance with weights interpreted as inverse point variances.
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    rss += w[i] * r * r;
  }
  const std::size_t n = x.size();
  f.n = n;
  f.slope_se = (n > 2) ? std::sqrt(rss / double(n - 2) / sxx) : 0.0;
  return f;
}

// Upper critical value of the chi-square distribution (Wilson-Hilferty),
// adequate for the fixed significance levels used in tests.
inline double chi2_critical(double dof, double significance) {
  // z for the upper tail: significance 1e-3 -> z = 3.090232.
  double z;
  if (significance <= 1.1e-3) {
    z = 3.090232306;
  } else if (significance <= 1.1e-2) {
    z = 2.326347874;
  } else {
    z = 1.644853627;
  }
  const double c = 2.0 / (9.0 * dof);
  const double t = 1.0 - c + z * std::sqrt(c);
  return dof * t * t * t;
}

inline std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(std::span<const unsigned char>(
      reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

inline std::string to_hex(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[std::size_t(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

}  // namespace netkin
