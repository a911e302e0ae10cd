#include "netkin/wg_sim.hpp"

#include <stdexcept>

namespace netkin {

void DirectedState::export_edges(std::ostream& out) const {
  std::uint64_t step = 1;
  for (const auto& e : events_) {
    out << e.src << ' ' << e.dst << ' ' << step << ' '
        << (e.link_event ? "link" : "node") << '\n';
    ++step;
  }
}

class WgAccess {
 public:
  static const std::vector<std::uint32_t>& heads(const DirectedState& s) {
    return s.in_heads_;
  }
  static const std::vector<std::uint32_t>& tails(const DirectedState& s) {
    return s.out_tails_;
  }
};

std::uint32_t draw_by_in_degree(const DirectedState& s, Rng& rng) {
  const std::uint64_t total = s.total_in();
  const double u =
      rng.next_double() * (double(total) + s.lambda_in() * double(s.node_count()));
  if (u < double(total) && total > 0)
    return WgAccess::heads(s)[rng.next_below(total)];
  return std::uint32_t(rng.next_below(s.node_count()));
}

std::uint32_t draw_by_out_degree(const DirectedState& s, Rng& rng) {
  const std::uint64_t total = s.total_out();
  const double u =
      rng.next_double() * (double(total) + s.lambda_out() * double(s.node_count()));
  if (u < double(total) && total > 0)
    return WgAccess::tails(s)[rng.next_below(total)];
  return std::uint32_t(rng.next_below(s.node_count()));
}

class WgGrowth {
 public:
  static DirectedState run(double p, double lambda_in, double lambda_out,
                           std::uint64_t steps, std::uint64_t seed, bool record) {
    if (!(p > 0.0) || p > 1.0)
      throw std::invalid_argument("web graph: p must lie in (0, 1]");
    if (!(lambda_in > 0.0))
      throw std::invalid_argument("web graph: lambda_in must be > 0");
    if (!(lambda_out > -1.0))
      throw std::invalid_argument("web graph: lambda_out must be > -1");
    if (steps + 2 > 0xFFFFFFFEull) throw std::invalid_argument("web graph: too many steps");

    DirectedState s;
    s.p_ = p;
    s.lambda_in_ = lambda_in;
    s.lambda_out_ = lambda_out;
    s.steps_ = steps;
    s.in_deg_.reserve(std::size_t(p * double(steps)) + 2);
    s.out_deg_.reserve(std::size_t(p * double(steps)) + 2);
    s.in_heads_.reserve(steps + 1);
    s.out_tails_.reserve(steps + 1);
    if (record) s.events_.reserve(steps);

    // Seed: one node with a self-loop, so both endpoint lists are non-empty
    // and every node keeps j >= 1.
    s.in_deg_.push_back(1);
    s.out_deg_.push_back(1);
    s.in_heads_.push_back(0);
    s.out_tails_.push_back(0);
    s.total_in_ = s.total_out_ = 1;

    Rng rng(seed);
    for (std::uint64_t t = 1; t <= steps; ++t) {
      if (rng.next_double() < p) {
        // Node creation with immediate attachment; newborn has (i, j) = (0, 1).
        const std::uint32_t target = draw_by_in_degree(s, rng);
        const std::uint32_t child = std::uint32_t(s.node_count());
        s.in_deg_.push_back(0);
        s.out_deg_.push_back(1);
        s.in_deg_[target] += 1;
        s.in_heads_.push_back(target);
        s.out_tails_.push_back(child);
        ++s.total_in_;
        ++s.total_out_;
        if (record) s.events_.push_back({0, child, target});
      } else {
        // Pure link creation: source by out-degree, target by in-degree,
        // drawn independently.
        const std::uint32_t src = draw_by_out_degree(s, rng);
        const std::uint32_t dst = draw_by_in_degree(s, rng);
        s.out_deg_[src] += 1;
        s.in_deg_[dst] += 1;
        s.out_tails_.push_back(src);
        s.in_heads_.push_back(dst);
        ++s.total_in_;
        ++s.total_out_;
        if (record) s.events_.push_back({1, src, dst});
      }
    }
    return s;
  }
};

DirectedState grow_wg(double p, double lambda_in, double lambda_out, std::uint64_t steps,
                      std::uint64_t seed, bool record_events) {
  return WgGrowth::run(p, lambda_in, lambda_out, steps, seed, record_events);
}

std::pair<DistTable, DistTable> inout_distributions(const DirectedState& state) {
  DistTable in, out;
  for (std::uint64_t v = 0; v < state.node_count(); ++v) {
    in.add(state.in_degree(v));
    out.add(state.out_degree(v));
  }
  return {in, out};
}

JointDegreeCounts joint_inout(const DirectedState& state, std::uint64_t i_max,
                              std::uint64_t j_max) {
  JointDegreeCounts jc;
  jc.i_max = i_max;
  jc.j_max = j_max;
  jc.t = state.steps();
  jc.counts.assign((i_max + 1) * (j_max + 1), 0.0);
  jc.in_marginal.assign(i_max + 1, 0.0);
  jc.out_marginal.assign(j_max + 1, 0.0);
  for (std::uint64_t v = 0; v < state.node_count(); ++v) {
    const std::uint64_t i = state.in_degree(v);
    const std::uint64_t j = state.out_degree(v);
    if (i <= i_max) jc.in_marginal[i] += 1.0;
    if (j <= j_max) jc.out_marginal[j] += 1.0;
    if (i <= i_max && j <= j_max) jc.counts[i * (j_max + 1) + j] += 1.0;
  }
  return jc;
}

}  // namespace netkin
