#pragma once

#include <cstdint>
#include <ostream>

#include "netkin/wg_sim.hpp"

namespace netkin {

// Multicomponent graph: with probability p a new isolated node, with
// probability q = 1 - p a link whose endpoints are drawn independently
// (source by out-degree, target by in-degree). Connected components are
// tracked with a union-find structure.
class ClusterState : public DirectedState {
 public:
  std::uint64_t cluster_count() const { return cluster_count_; }
  std::uint64_t self_link_count() const { return self_links_; }
  std::uint64_t inter_cluster_links() const { return inter_links_; }

  std::uint64_t find_root(std::uint64_t node) const;
  std::uint64_t cluster_size(std::uint64_t root) const { return size_[root]; }
  // Summed in/out degree of a cluster and whether it never absorbed an
  // intra-cluster link (such clusters satisfy i = j = size - 1).
  std::uint64_t cluster_in(std::uint64_t root) const { return in_sum_[root]; }
  std::uint64_t cluster_out(std::uint64_t root) const { return out_sum_[root]; }
  bool cluster_pure(std::uint64_t root) const { return pure_[root] != 0; }

  std::uint64_t largest_cluster_size() const;
  double largest_cluster_fraction() const {
    return double(largest_cluster_size()) / double(node_count());
  }

  // "size,count" census.
  void export_census(std::ostream& out) const;

 private:
  friend class MgGrowth;
  mutable std::vector<std::uint32_t> parent_;
  std::vector<std::uint32_t> size_;
  std::vector<std::uint32_t> in_sum_, out_sum_;
  std::vector<std::uint8_t> pure_;
  std::uint64_t cluster_count_ = 0;
  std::uint64_t self_links_ = 0;
  std::uint64_t inter_links_ = 0;
};

ClusterState grow_mg(double p, double lambda_in, double lambda_out,
                     std::uint64_t steps, std::uint64_t seed,
                     bool record_events = false);

// Histogram of component sizes. total = number of clusters, so density is a
// per-cluster pmf; the per-time density c_k is count(k) / steps.
DistTable cluster_size_distribution(const ClusterState& state);

}  // namespace netkin
