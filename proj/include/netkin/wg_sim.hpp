#pragma once

#include <cstdint>
#include <ostream>
#include <vector>

#include "netkin/measure.hpp"
#include "netkin/rng.hpp"

namespace netkin {

// Directed growth state shared by the web-graph and multicomponent models.
// Endpoint lists give O(1) draws proportional to i + lambda_in (targets) and
// j + lambda_out (sources) via a uniform-endpoint / uniform-node mixture.
class DirectedState {
 public:
  struct Event {
    std::uint8_t link_event;  // 0 = node creation, 1 = pure link creation
    std::uint32_t src, dst;
  };

  std::uint64_t node_count() const { return in_deg_.size(); }
  std::uint64_t total_in() const { return total_in_; }    // equals link count
  std::uint64_t total_out() const { return total_out_; }  // equals link count
  std::uint64_t steps() const { return steps_; }
  std::uint32_t in_degree(std::uint64_t node) const { return in_deg_[node]; }
  std::uint32_t out_degree(std::uint64_t node) const { return out_deg_[node]; }
  double p() const { return p_; }
  double lambda_in() const { return lambda_in_; }
  double lambda_out() const { return lambda_out_; }
  double mean_in_degree() const { return double(total_in_) / double(node_count()); }
  double mean_total_degree() const {
    return double(total_in_ + total_out_) / double(node_count());
  }
  const std::vector<Event>& events() const { return events_; }

  // "src dst step event_type" lines; requires event recording.
  void export_edges(std::ostream& out) const;

 protected:
  friend class WgGrowth;
  friend class MgGrowth;
  friend class WgAccess;
  std::vector<std::uint32_t> in_deg_, out_deg_;
  std::vector<std::uint32_t> in_heads_, out_tails_;  // one entry per link end
  std::uint64_t total_in_ = 0, total_out_ = 0;
  std::uint64_t steps_ = 0;
  double p_ = 0, lambda_in_ = 0, lambda_out_ = 0;
  std::vector<Event> events_;  // populated only when recording is on
};

// Node drawn with probability (i + lambda_in) / (I + lambda_in N): a uniform
// in-link head with probability I / (I + lambda_in N), else a uniform node.
std::uint32_t draw_by_in_degree(const DirectedState& state, Rng& rng);
// Node drawn with probability (j + lambda_out) / (J + lambda_out N).
std::uint32_t draw_by_out_degree(const DirectedState& state, Rng& rng);

// Web graph: with probability p a new node plus a link to a target chosen
// proportionally to (i + lambda_in); with probability q = 1 - p a link from a
// source chosen proportionally to (j + lambda_out) to an independently chosen
// target. Seed is a single node with a self-loop. Self-loops and multi-edges
// are permitted in link creation.
DirectedState grow_wg(double p, double lambda_in, double lambda_out,
                      std::uint64_t steps, std::uint64_t seed,
                      bool record_events = false);

// In- and out-degree histograms; totals = node count.
std::pair<DistTable, DistTable> inout_distributions(const DirectedState& state);

struct JointDegreeCounts {
  std::uint64_t i_max = 0, j_max = 0;
  std::vector<double> counts;        // i * (j_max + 1) + j
  std::vector<double> in_marginal;   // per i <= i_max, over all j
  std::vector<double> out_marginal;  // per j <= j_max, over all i
  std::uint64_t t = 0;

  double count(std::uint64_t i, std::uint64_t j) const {
    return counts[i * (j_max + 1) + j];
  }
  double n_hat(std::uint64_t i, std::uint64_t j) const { return count(i, j) / double(t); }
};

JointDegreeCounts joint_inout(const DirectedState& state, std::uint64_t i_max,
                              std::uint64_t j_max);

}  // namespace netkin
