#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace netkin {

// Normalized density table over an integer support (degree k, size s, ...).
// Holds real-valued weights so theory densities and empirical counts share
// one representation; counts below 2^53 stay exact, so merging is
// order-independent and parallel seed aggregation is deterministic.
class DistTable {
 public:
  DistTable() = default;

  void add(std::uint64_t k, double weight = 1.0);
  // Replaces the normalizer. By default total() tracks the summed weights.
  void set_total(double total);

  double count(std::uint64_t k) const;
  double density(std::uint64_t k) const;
  double total() const { return explicit_total_ ? *explicit_total_ : weight_sum_; }
  double weight_sum() const { return weight_sum_; }
  std::uint64_t max_index() const;
  std::uint64_t min_index() const;  // smallest index with nonzero weight

  // Counts add, totals add; associative and commutative.
  void merge(const DistTable& other);

  double sum_range(std::uint64_t k_lo, std::uint64_t k_hi) const;
  double mean_index() const;
  double moment(int n) const;  // sum k^n count(k) / total

  static DistTable from_densities(std::span<const double> density_by_index);

 private:
  std::vector<double> w_;
  double weight_sum_ = 0.0;
  std::optional<double> explicit_total_;
};

// Discrete Hill-type tail exponent fit:
//   nu = 1 + n / sum_i ln(k_i / (k_min - 1/2)),  se = (nu - 1)/sqrt(n).
struct TailFit {
  bool available = false;       // at least 100 tail samples
  double exponent = 0.0;
  double stderr_ = 0.0;
  double n_tail = 0.0;
  // Stability of the estimate when the cutoff doubles; a power-law tail
  // keeps it near zero, curved tails (e.g. geometric) push it far positive.
  double curvature_z = 0.0;
  bool power_law_plausible = true;
};

TailFit fit_tail_exponent(const DistTable& table, std::uint64_t k_min);

// Population value of the same estimator under an exact pmf; used to
// preregister expected values for finite-sample tests.
double hill_population(const DistTable& pmf, std::uint64_t k_min);

// Weighted least-squares fit of ln density = A - nu ln k + B/k over
// [k_lo, k_hi], using only bins with count >= min_count. The 1/k term absorbs
// the leading finite-k curvature of gamma-ratio tails.
struct CorrectedPowerFit {
  bool available = false;
  double exponent = 0.0;
  double stderr_ = 0.0;
  std::uint64_t k_lo = 0, k_hi = 0;
  std::size_t bins = 0;
};

CorrectedPowerFit fit_power_law_corrected(const DistTable& table, std::uint64_t k_lo,
                                          std::uint64_t k_hi, double min_count = 10.0);

// Per-bin multinomial z comparison of an empirical table against a theory pmf.
struct CompareReport {
  std::uint64_t k_lo = 0, k_hi = 0;
  double max_abs_z = 0.0;
  std::uint64_t argmax_k = 0;
  double z_tol = 4.0;
  bool pass = false;
  std::vector<double> z;  // z[k - k_lo]
  std::optional<TailFit> tail;
};

CompareReport compare(const DistTable& empirical, const DistTable& theory,
                      std::uint64_t k_lo, std::uint64_t k_hi, double z_tol,
                      std::optional<std::uint64_t> tail_k_min = std::nullopt);

// Geometric binning for heavy-tailed plots. Mass is conserved exactly:
// sum over bins of density * width == 1 for a complete table.
struct LogBin {
  std::uint64_t lo = 0, hi = 0;  // [lo, hi)
  double center = 0.0;           // geometric midpoint
  double count = 0.0;
  double density = 0.0;          // count / (width * total)
};

std::vector<LogBin> log_bin(const DistTable& table, double ratio);

}  // namespace netkin
