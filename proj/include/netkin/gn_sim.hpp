#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "netkin/kernels.hpp"
#include "netkin/measure.hpp"
#include "netkin/rng.hpp"

namespace netkin {

enum class SamplerStrategy {
  Auto,             // endpoint mixture for linear-family kernels, classes otherwise
  ClassIndex,       // O(log D) degree-class sampler
  EndpointMixture,  // O(1), linear-family kernels only
};

// Undirected growing network: one new node per step, attached to an existing
// node drawn proportionally to A_k (or eta * k for heterogeneous runs).
class GnState {
 public:
  static constexpr std::uint32_t kRoot = 0xFFFFFFFFu;

  std::uint64_t node_count() const { return degree_.size(); }
  std::uint64_t steps() const { return steps_; }
  std::uint64_t links() const { return steps_ + 1; }  // one seed link + one per step
  std::uint64_t degree(std::uint64_t node) const { return degree_[node]; }
  std::uint32_t ancestor(std::uint64_t node) const { return ancestor_[node]; }
  std::uint64_t birth_step(std::uint64_t node) const { return birth_[node]; }
  double eta(std::uint64_t node) const { return eta_.empty() ? 1.0 : eta_[node]; }
  bool heterogeneous() const { return !eta_.empty(); }
  std::uint64_t max_degree() const;
  std::uint64_t sum_degrees() const;

  // Assembles a state from explicit arrays (tests, file import). Seed nodes
  // carry the root sentinel as ancestor.
  static GnState from_raw(std::vector<std::uint64_t> degrees,
                          std::vector<std::uint32_t> ancestors,
                          std::vector<std::uint64_t> birth_steps,
                          std::uint64_t steps);

  // Text export, one line per non-seed node: "child ancestor birth_step".
  void export_edges(std::ostream& out) const;

 private:
  friend GnState grow(const KernelSpec&, std::uint64_t, std::uint64_t, SamplerStrategy);
  std::vector<std::uint64_t> degree_;
  std::vector<std::uint32_t> ancestor_;
  std::vector<std::uint64_t> birth_;
  std::vector<double> eta_;  // empty for homogeneous kernels
  std::uint64_t steps_ = 0;
};

// Grows a network of two seed nodes plus `steps` attachments. Deterministic
// for fixed (kernel, steps, seed, strategy). Per step the RNG is consumed in
// a fixed order: target draw(s) first, then the new node's eta when
// heterogeneous.
GnState grow(const KernelSpec& kernel, std::uint64_t steps, std::uint64_t seed,
             SamplerStrategy strategy = SamplerStrategy::Auto);

// Degree histogram; total = node count.
DistTable degree_distribution(const GnState& state);

// Largest degree over the number of nodes: ~1/2 for a seed pair, -> 1 when a
// single node captures nearly every link, small for linear kernels.
double max_degree_share(const GnState& state);

// Conditional degree distribution of nodes with scaled birth time
// x = birth/steps inside [x_lo, x_hi).
DistTable age_degree_window(const GnState& state, double x_lo, double x_hi);

struct AgeDegreeSlices {
  std::vector<double> x_lo, x_hi;                 // bin edges
  std::vector<std::optional<DistTable>> rows;     // absent when the bin is empty
  std::vector<double> mean_degree;                // NaN when absent
};

// Uniform binning of x = birth/steps over (0, 1]; each present row is a
// normalized conditional distribution over k.
AgeDegreeSlices age_degree_slice(const GnState& state, std::size_t x_bins);

struct AncestorCorrelation {
  std::uint64_t k_max = 0, l_max = 0;
  std::vector<double> counts;           // (k-1)*l_max + (l-1), 1-based degrees
  std::vector<double> row_counts_full;  // per k <= k_max, summed over all l
  std::uint64_t t = 0;                  // normalizer (steps)

  double count(std::uint64_t k, std::uint64_t l) const {
    return counts[(k - 1) * l_max + (l - 1)];
  }
  double c_hat(std::uint64_t k, std::uint64_t l) const { return count(k, l) / double(t); }
  double row_density(std::uint64_t k) const { return row_counts_full[k - 1] / double(t); }
};

// Joint counts of (node degree k, ancestor degree l) over non-seed nodes.
AncestorCorrelation ancestor_correlation(const GnState& state, std::uint64_t k_max,
                                         std::uint64_t l_max);

struct GenealogyView {
  std::vector<std::uint32_t> generation;   // seed nodes are generation 0
  std::vector<std::uint64_t> subtree_size; // descendants including self
  DistTable generation_sizes;              // L_g histogram
  DistTable in_component_sizes;            // histogram of subtree sizes
  std::uint32_t max_generation = 0;

  // Out-component of a node follows the ancestor chain: generation + 1 nodes.
  std::uint64_t out_component_size(std::uint64_t node) const {
    return generation[node] + 1ull;
  }
};

GenealogyView genealogy(const GnState& state);

}  // namespace netkin
