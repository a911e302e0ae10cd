#include "netkin/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netkin/numerics.hpp"

namespace netkin {

void DistTable::add(std::uint64_t k, double weight) {
  if (k >= w_.size()) w_.resize(k + 1, 0.0);
  w_[k] += weight;
  weight_sum_ += weight;
}

void DistTable::set_total(double total) {
  if (!(total > 0)) throw std::invalid_argument("DistTable total must be positive");
  explicit_total_ = total;
}

double DistTable::count(std::uint64_t k) const {
  return k < w_.size() ? w_[k] : 0.0;
}

double DistTable::density(std::uint64_t k) const {
  const double t = total();
  return t > 0 ? count(k) / t : 0.0;
}

std::uint64_t DistTable::max_index() const {
  for (std::size_t i = w_.size(); i-- > 0;)
    if (w_[i] != 0.0) return i;
  return 0;
}

std::uint64_t DistTable::min_index() const {
  for (std::size_t i = 0; i < w_.size(); ++i)
    if (w_[i] != 0.0) return i;
  return 0;
}

void DistTable::merge(const DistTable& other) {
  if (other.w_.size() > w_.size()) w_.resize(other.w_.size(), 0.0);
  for (std::size_t i = 0; i < other.w_.size(); ++i) w_[i] += other.w_[i];
  weight_sum_ += other.weight_sum_;
  if (explicit_total_ || other.explicit_total_) {
    explicit_total_ = (explicit_total_ ? *explicit_total_ : 0.0) +
                      (other.explicit_total_ ? *other.explicit_total_ : 0.0);
  }
}

double DistTable::sum_range(std::uint64_t k_lo, std::uint64_t k_hi) const {
  KahanSum s;
  for (std::uint64_t k = k_lo; k <= k_hi && k < w_.size(); ++k) s.add(w_[k]);
  return s.value();
}

double DistTable::mean_index() const {
  KahanSum s;
  for (std::size_t i = 0; i < w_.size(); ++i) s.add(double(i) * w_[i]);
  return weight_sum_ > 0 ? s.value() / weight_sum_ : 0.0;
}

double DistTable::moment(int n) const {
  KahanSum s;
  for (std::size_t i = 0; i < w_.size(); ++i) {
    if (w_[i] == 0.0) continue;
    s.add(std::pow(double(i), n) * w_[i]);
  }
  const double t = total();
  return t > 0 ? s.value() / t : 0.0;
}

DistTable DistTable::from_densities(std::span<const double> density_by_index) {
  DistTable t;
  for (std::size_t i = 0; i < density_by_index.size(); ++i)
    if (density_by_index[i] != 0.0) t.add(i, density_by_index[i]);
  return t;
}

namespace {

// Hill statistic over [k_min, inf): returns {n, sum ln(k/(k_min - 1/2))}.
std::pair<double, double> hill_sums(const DistTable& t, std::uint64_t k_min) {
  double n = 0.0;
  KahanSum lsum;
  const double ref = double(k_min) - 0.5;
  const std::uint64_t hi = t.max_index();
  for (std::uint64_t k = k_min; k <= hi; ++k) {
    const double c = t.count(k);
    if (c <= 0.0) continue;
    n += c;
    lsum.add(c * std::log(double(k) / ref));
  }
  return {n, lsum.value()};
}

}  // namespace

TailFit fit_tail_exponent(const DistTable& table, std::uint64_t k_min) {
  TailFit f;
  if (k_min < 1) throw std::invalid_argument("fit_tail_exponent: k_min >= 1 required");
  auto [n, lsum] = hill_sums(table, k_min);
  f.n_tail = n;
  if (n < 100.0 || lsum <= 0.0) {
    f.available = false;
    return f;
  }
  f.available = true;
  f.exponent = 1.0 + n / lsum;
  f.stderr_ = (f.exponent - 1.0) / std::sqrt(n);
  auto [n2, lsum2] = hill_sums(table, 2 * k_min);
  if (n2 >= 100.0 && lsum2 > 0.0) {
    const double e2 = 1.0 + n2 / lsum2;
    const double se2 = (e2 - 1.0) / std::sqrt(n2);
    f.curvature_z = (e2 - f.exponent) / std::sqrt(f.stderr_ * f.stderr_ + se2 * se2);
    f.power_law_plausible = std::abs(f.curvature_z) < 5.0;
  }
  return f;
}

double hill_population(const DistTable& pmf, std::uint64_t k_min) {
  auto [mass, lsum] = hill_sums(pmf, k_min);
  if (mass <= 0.0 || lsum <= 0.0) return std::numeric_limits<double>::quiet_NaN();
  return 1.0 + mass / lsum;
}

CorrectedPowerFit fit_power_law_corrected(const DistTable& table, std::uint64_t k_lo,
                                          std::uint64_t k_hi, double min_count) {
  CorrectedPowerFit f;
  f.k_lo = k_lo;
  f.k_hi = k_hi;
  // Normal equations for y = b0 + b1 ln k + b2 / k, weights = counts
  // (Var[ln count] ~ 1/count under Poisson bins).
  double m[3][3] = {};
  double v[3] = {};
  std::size_t bins = 0;
  for (std::uint64_t k = std::max<std::uint64_t>(k_lo, 1); k <= k_hi; ++k) {
    const double c = table.count(k);
    if (c < min_count) continue;
    const double x[3] = {1.0, std::log(double(k)), 1.0 / double(k)};
    const double y = std::log(c / table.total());
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] += c * x[i] * x[j];
      v[i] += c * x[i] * y;
    }
    ++bins;
  }
  f.bins = bins;
  if (bins < 6) return f;
  // Solve the 3x3 system by Gaussian elimination with partial pivoting,
  // and invert for the slope variance.
  double a[3][6];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) a[i][j] = m[i][j];
    for (int j = 0; j < 3; ++j) a[i][3 + j] = (i == j) ? 1.0 : 0.0;
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (a[piv][col] == 0.0) return f;
    std::swap(a[piv], a[col]);
    const double d = a[col][col];
    for (int j = 0; j < 6; ++j) a[col][j] /= d;
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = a[r][col];
      for (int j = 0; j < 6; ++j) a[r][j] -= factor * a[col][j];
    }
  }
  double beta[3] = {};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) beta[i] += a[i][3 + j] * v[j];
  f.available = true;
  f.exponent = -beta[1];
  f.stderr_ = std::sqrt(std::max(0.0, a[1][4]));
  return f;
}

CompareReport compare(const DistTable& empirical, const DistTable& theory,
                      std::uint64_t k_lo, std::uint64_t k_hi, double z_tol,
                      std::optional<std::uint64_t> tail_k_min) {
  if (k_hi < k_lo) throw std::invalid_argument("compare: empty index range");
  CompareReport r;
  r.k_lo = k_lo;
  r.k_hi = k_hi;
  r.z_tol = z_tol;
  r.z.resize(k_hi - k_lo + 1, 0.0);
  const double total = empirical.total();
  if (!(total > 0)) throw std::invalid_argument("compare: empirical table empty");
  bool overlap = false;
  for (std::uint64_t k = k_lo; k <= k_hi; ++k) {
    const double p = theory.density(k);
    const double c = empirical.count(k);
    double z = 0.0;
    if (p > 0.0) {
      overlap = true;
      z = (c - total * p) / std::sqrt(total * p * (1.0 - p));
    } else if (c > 0.0) {
      z = std::numeric_limits<double>::infinity();
    }
    r.z[k - k_lo] = z;
    if (std::abs(z) > r.max_abs_z) {
      r.max_abs_z = std::abs(z);
      r.argmax_k = k;
    }
  }
  if (!overlap) throw std::invalid_argument("compare: no overlapping support in range");
  r.pass = r.max_abs_z <= z_tol;
  if (tail_k_min) {
    r.tail = fit_tail_exponent(empirical, *tail_k_min);
  }
  return r;
}

std::vector<LogBin> log_bin(const DistTable& table, double ratio) {
  if (!(ratio > 1.0)) throw std::invalid_argument("log_bin: ratio must exceed 1");
  std::vector<LogBin> bins;
  const std::uint64_t first = std::max<std::uint64_t>(1, table.min_index());
  const std::uint64_t last = table.max_index();
  if (table.weight_sum() == 0.0) return bins;
  std::uint64_t lo = first;
  while (lo <= last) {
    std::uint64_t hi = std::max<std::uint64_t>(lo + 1, std::uint64_t(std::floor(double(lo) * ratio)));
    LogBin b;
    b.lo = lo;
    b.hi = hi;
    b.center = std::sqrt(double(lo) * double(hi - 1));  // width-1 bins center at lo
    b.count = table.sum_range(lo, hi - 1);
    b.density = b.count / (double(hi - lo) * table.total());
    bins.push_back(b);
    lo = hi;
  }
  return bins;
}

}  // namespace netkin
