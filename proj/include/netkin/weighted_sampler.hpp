#pragma once

#include <cstdint>
#include <vector>

#include "netkin/kernels.hpp"
#include "netkin/rng.hpp"

namespace netkin {

// Append-only Fenwick tree over doubles with prefix-sum search.
class FenwickTree {
 public:
  void append(double value);
  void add(std::size_t index, double delta);  // 0-based
  double value(std::size_t index) const { return raw_[index]; }
  double total() const;
  std::size_t size() const { return raw_.size(); }
  // Smallest index whose inclusive prefix sum exceeds target (target < total()).
  std::size_t find(double target) const;
  void rebuild(const std::vector<double>& values);
  // Instrumentation: tree-node visits, for complexity assertions in tests.
  std::uint64_t ops() const { return ops_; }

 private:
  std::vector<double> tree_;  // 1-based
  std::vector<double> raw_;
  mutable std::uint64_t ops_ = 0;
};

// Dynamic sampler over degree classes: draws a node with probability
// A_k(node) / sum_j A_j N_j in O(log D) where D is the number of distinct
// degrees seen. All nodes of one degree share a class; a draw picks the class
// by weight and then a uniform member. Single-writer.
class DegreeClassIndex {
 public:
  explicit DegreeClassIndex(KernelSpec kernel);

  void insert(std::uint64_t node, std::uint64_t degree);
  void promote(std::uint64_t node, std::uint64_t degree_from, std::uint64_t degree_to);
  std::uint64_t sample(Rng& rng) const;

  double total_weight() const { return running_total_; }
  std::uint64_t size() const { return node_count_; }
  std::size_t class_count() const { return fenwick_.size(); }
  // Rebuilds all class weights exactly; returns the exact total.
  double recompute_exact();
  std::uint64_t sample_ops() const { return fenwick_.ops(); }

 private:
  std::size_t slot_for(std::uint64_t degree);  // creates on first use
  double kernel_at(std::uint64_t degree);
  void remove_member(std::size_t slot, std::uint64_t node);

  KernelSpec kernel_;
  FenwickTree fenwick_;                        // per-class weight A_k * N_k
  std::vector<std::vector<std::uint64_t>> members_;
  std::vector<std::uint64_t> slot_degree_;
  std::vector<std::uint32_t> degree_slot_;     // degree -> slot + 1 (0 = none)
  std::vector<double> ak_cache_;               // A_k by degree, lazily filled
  std::vector<std::uint32_t> node_slot_;       // node -> slot + 1 (0 = absent)
  std::vector<std::uint32_t> node_pos_;
  double running_total_ = 0.0;
  std::uint64_t node_count_ = 0;
  std::uint64_t updates_ = 0;
  static constexpr std::uint64_t kRecomputeInterval = 1ull << 20;
};

// Per-node weight sampler for kernels whose weight differs within a degree
// class (heterogeneous eta * k). O(log N) per draw/update.
class NodeWeightIndex {
 public:
  void insert(std::uint64_t node, double weight);  // nodes arrive densely, in order
  void set_weight(std::uint64_t node, double weight);
  std::uint64_t sample(Rng& rng) const;
  double total_weight() const { return running_total_; }
  std::uint64_t size() const { return fenwick_.size(); }
  double recompute_exact();

 private:
  FenwickTree fenwick_;
  double running_total_ = 0.0;
  std::uint64_t updates_ = 0;
  static constexpr std::uint64_t kRecomputeInterval = 1ull << 20;
};

// O(1) sampler for exactly linear kernels A_k = k + w (w >= 0): a link
// endpoint list realizes the k-proportional part; with probability
// w N / (M1 + w N) a uniform node is drawn instead.
class EndpointMixtureSampler {
 public:
  explicit EndpointMixtureSampler(double w);
  void add_endpoint(std::uint64_t node) { endpoints_.push_back(node); }
  void add_node() { ++node_count_; }
  std::uint64_t sample(Rng& rng) const;
  double total_weight() const;
  std::uint64_t endpoint_count() const { return endpoints_.size(); }

 private:
  double w_;
  std::vector<std::uint64_t> endpoints_;
  std::uint64_t node_count_ = 0;
};

}  // namespace netkin
