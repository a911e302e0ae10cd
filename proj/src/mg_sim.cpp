#include "netkin/mg_sim.hpp"

#include <algorithm>
#include <stdexcept>

namespace netkin {

std::uint64_t ClusterState::find_root(std::uint64_t node) const {
  std::uint32_t x = std::uint32_t(node);
  while (parent_[x] != x) {
    parent_[x] = parent_[parent_[x]];  // path halving
    x = parent_[x];
  }
  return x;
}

std::uint64_t ClusterState::largest_cluster_size() const {
  std::uint32_t best = 0;
  for (std::uint32_t v = 0; v < parent_.size(); ++v)
    if (parent_[v] == v) best = std::max(best, size_[v]);
  return best;
}

void ClusterState::export_census(std::ostream& out) const {
  DistTable census = cluster_size_distribution(*this);
  out << "size,count\n";
  for (std::uint64_t k = 1; k <= census.max_index(); ++k) {
    const double c = census.count(k);
    if (c > 0) out << k << ',' << std::uint64_t(c) << '\n';
  }
}

class MgGrowth {
 public:
  static ClusterState run(double p, double lambda_in, double lambda_out,
                          std::uint64_t steps, std::uint64_t seed, bool record) {
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("multicomponent graph: p must lie in (0, 1]");
    if (!(lambda_in > 0.0) || !(lambda_out > 0.0))
      throw std::invalid_argument("multicomponent graph: lambdas must be > 0");
    if (steps + 2 > 0xFFFFFFFEull)
      throw std::invalid_argument("multicomponent graph: too many steps");

    ClusterState s;
    s.p_ = p;
    s.lambda_in_ = lambda_in;
    s.lambda_out_ = lambda_out;
    s.steps_ = steps;
    const std::size_t n_hint = std::size_t(p * double(steps)) + 2;
    s.in_deg_.reserve(n_hint);
    s.out_deg_.reserve(n_hint);
    s.parent_.reserve(n_hint);
    s.size_.reserve(n_hint);
    s.in_sum_.reserve(n_hint);
    s.out_sum_.reserve(n_hint);
    s.pure_.reserve(n_hint);
    if (record) s.events_.reserve(steps);

    auto add_node = [&s]() {
      const std::uint32_t v = std::uint32_t(s.node_count());
      s.in_deg_.push_back(0);
      s.out_deg_.push_back(0);
      s.parent_.push_back(v);
      s.size_.push_back(1);
      s.in_sum_.push_back(0);
      s.out_sum_.push_back(0);
      s.pure_.push_back(1);
      ++s.cluster_count_;
    };
    add_node();  // minimal seed: one isolated node

    Rng rng(seed);
    const double q = 1.0 - p;
    (void)q;
    for (std::uint64_t t = 1; t <= steps; ++t) {
      if (rng.next_double() < p) {
        add_node();
        if (record) s.events_.push_back({0, std::uint32_t(s.node_count() - 1),
                                         std::uint32_t(s.node_count() - 1)});
        continue;
      }
      // Link creation. Every node carries weight lambda even at degree zero,
      // so a draw is always possible; a single-node graph yields a self-loop.
      const std::uint32_t src = draw_by_out_degree(s, rng);
      const std::uint32_t dst = draw_by_in_degree(s, rng);
      s.out_deg_[src] += 1;
      s.in_deg_[dst] += 1;
      s.out_tails_.push_back(src);
      s.in_heads_.push_back(dst);
      ++s.total_in_;
      ++s.total_out_;

      std::uint32_t ra = std::uint32_t(s.find_root(src));
      std::uint32_t rb = std::uint32_t(s.find_root(dst));
      if (ra == rb) {
        ++s.self_links_;
        s.pure_[ra] = 0;
      } else {
        if (s.size_[ra] < s.size_[rb]) std::swap(ra, rb);
        s.parent_[rb] = ra;
        s.size_[ra] += s.size_[rb];
        s.in_sum_[ra] += s.in_sum_[rb];
        s.out_sum_[ra] += s.out_sum_[rb];
        s.pure_[ra] = s.pure_[ra] & s.pure_[rb];
        --s.cluster_count_;
        ++s.inter_links_;
      }
      const std::uint32_t root = std::uint32_t(s.find_root(src));
      s.out_sum_[root] += 1;
      s.in_sum_[root] += 1;
      if (record) s.events_.push_back({1, src, dst});
    }
    return s;
  }
};

ClusterState grow_mg(double p, double lambda_in, double lambda_out, std::uint64_t steps,
                     std::uint64_t seed, bool record_events) {
  return MgGrowth::run(p, lambda_in, lambda_out, steps, seed, record_events);
}

DistTable cluster_size_distribution(const ClusterState& state) {
  DistTable t;
  for (std::uint64_t v = 0; v < state.node_count(); ++v)
    if (state.find_root(v) == v) t.add(state.cluster_size(v));
  return t;
}

}  // namespace netkin
