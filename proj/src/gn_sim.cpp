#include "netkin/gn_sim.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "netkin/weighted_sampler.hpp"

namespace netkin {

std::uint64_t GnState::max_degree() const {
  std::uint64_t m = 0;
  for (auto d : degree_) m = std::max(m, d);
  return m;
}

std::uint64_t GnState::sum_degrees() const {
  std::uint64_t s = 0;
  for (auto d : degree_) s += d;
  return s;
}

GnState GnState::from_raw(std::vector<std::uint64_t> degrees,
                          std::vector<std::uint32_t> ancestors,
                          std::vector<std::uint64_t> birth_steps, std::uint64_t steps) {
  if (degrees.size() != ancestors.size() || degrees.size() != birth_steps.size())
    throw std::invalid_argument("from_raw: array sizes differ");
  GnState s;
  s.degree_ = std::move(degrees);
  s.ancestor_ = std::move(ancestors);
  s.birth_ = std::move(birth_steps);
  s.steps_ = steps;
  return s;
}

void GnState::export_edges(std::ostream& out) const {
  for (std::uint64_t i = 0; i < node_count(); ++i) {
    if (ancestor_[i] == kRoot) continue;
    out << i << ' ' << ancestor_[i] << ' ' << birth_[i] << '\n';
  }
}

GnState grow(const KernelSpec& kernel, std::uint64_t steps, std::uint64_t seed,
             SamplerStrategy strategy) {
  if (steps < 1) throw std::invalid_argument("grow: steps >= 1 required");
  if (steps + 2 > 0xFFFFFFFEull) throw std::invalid_argument("grow: too many steps");
  const bool hetero = kernel.kind() == KernelSpec::Kind::Attractive;
  if (strategy == SamplerStrategy::Auto)
    strategy = kernel.linear_family() ? SamplerStrategy::EndpointMixture
                                      : SamplerStrategy::ClassIndex;
  if (strategy == SamplerStrategy::EndpointMixture && !kernel.linear_family())
    throw std::invalid_argument("endpoint mixture sampler requires a linear-family kernel");
  if (hetero && strategy != SamplerStrategy::ClassIndex)
    strategy = SamplerStrategy::ClassIndex;  // realized as per-node weights below

  GnState s;
  s.steps_ = steps;
  const std::uint64_t n_final = steps + 2;
  s.degree_.reserve(n_final);
  s.ancestor_.reserve(n_final);
  s.birth_.reserve(n_final);

  Rng rng(seed);

  // Seed: two nodes joined by one link, so every node has degree >= 1.
  auto push_node = [&](std::uint32_t anc, std::uint64_t birth) {
    s.degree_.push_back(1);
    s.ancestor_.push_back(anc);
    s.birth_.push_back(birth);
  };
  push_node(GnState::kRoot, 0);
  push_node(GnState::kRoot, 0);

  if (hetero) {
    const auto& dist = kernel.eta_dist();
    s.eta_.reserve(n_final);
    s.eta_.push_back(dist.sample(rng));
    s.eta_.push_back(dist.sample(rng));
    NodeWeightIndex index;
    index.insert(0, s.eta_[0]);
    index.insert(1, s.eta_[1]);
    for (std::uint64_t t = 1; t <= steps; ++t) {
      const std::uint64_t target = index.sample(rng);
      const std::uint64_t child = s.degree_.size();
      s.degree_[target] += 1;
      index.set_weight(target, s.eta_[target] * double(s.degree_[target]));
      push_node(std::uint32_t(target), t);
      const double eta = dist.sample(rng);
      s.eta_.push_back(eta);
      index.insert(child, eta);
    }
    return s;
  }

  if (strategy == SamplerStrategy::EndpointMixture) {
    const double w = kernel.kind() == KernelSpec::Kind::ShiftedLinear ? kernel.shift() : 0.0;
    EndpointMixtureSampler sampler(w);
    sampler.add_node();
    sampler.add_node();
    sampler.add_endpoint(0);
    sampler.add_endpoint(1);
    for (std::uint64_t t = 1; t <= steps; ++t) {
      const std::uint64_t target = sampler.sample(rng);
      const std::uint64_t child = s.degree_.size();
      s.degree_[target] += 1;
      push_node(std::uint32_t(target), t);
      sampler.add_node();
      sampler.add_endpoint(target);
      sampler.add_endpoint(child);
    }
    return s;
  }

  DegreeClassIndex index(kernel);
  index.insert(0, 1);
  index.insert(1, 1);
  for (std::uint64_t t = 1; t <= steps; ++t) {
    const std::uint64_t target = index.sample(rng);
    const std::uint64_t child = s.degree_.size();
    const std::uint64_t k_old = s.degree_[target];
    s.degree_[target] = k_old + 1;
    index.promote(target, k_old, k_old + 1);
    push_node(std::uint32_t(target), t);
    index.insert(child, 1);
    if ((t & 0xFFFF) == 0) {
      // Endpoint conservation: sum_k k N_k tracks 2 * links exactly.
      assert(index.size() == s.degree_.size());
    }
  }
  return s;
}

DistTable degree_distribution(const GnState& state) {
  DistTable t;
  for (std::uint64_t i = 0; i < state.node_count(); ++i) t.add(state.degree(i));
  return t;
}

double max_degree_share(const GnState& state) {
  return double(state.max_degree()) / double(state.node_count());
}

DistTable age_degree_window(const GnState& state, double x_lo, double x_hi) {
  DistTable t;
  const double steps = double(state.steps());
  for (std::uint64_t i = 0; i < state.node_count(); ++i) {
    const double x = double(state.birth_step(i)) / steps;
    if (x >= x_lo && x < x_hi) t.add(state.degree(i));
  }
  return t;
}

AgeDegreeSlices age_degree_slice(const GnState& state, std::size_t x_bins) {
  if (x_bins == 0) throw std::invalid_argument("age_degree_slice: need at least one bin");
  AgeDegreeSlices out;
  out.x_lo.resize(x_bins);
  out.x_hi.resize(x_bins);
  out.rows.resize(x_bins);
  out.mean_degree.assign(x_bins, std::numeric_limits<double>::quiet_NaN());
  std::vector<DistTable> rows(x_bins);
  const double steps = double(state.steps());
  for (std::size_t b = 0; b < x_bins; ++b) {
    out.x_lo[b] = double(b) / double(x_bins);
    out.x_hi[b] = double(b + 1) / double(x_bins);
  }
  for (std::uint64_t i = 0; i < state.node_count(); ++i) {
    const double x = double(state.birth_step(i)) / steps;
    std::size_t b = std::size_t(x * double(x_bins));
    if (b >= x_bins) b = x_bins - 1;  // x == 1 lands in the last bin
    rows[b].add(state.degree(i));
  }
  for (std::size_t b = 0; b < x_bins; ++b) {
    if (rows[b].weight_sum() > 0) {
      out.mean_degree[b] = rows[b].mean_index();
      out.rows[b] = std::move(rows[b]);
    }
  }
  return out;
}

AncestorCorrelation ancestor_correlation(const GnState& state, std::uint64_t k_max,
                                         std::uint64_t l_max) {
  if (k_max < 1 || l_max < 1) throw std::invalid_argument("ancestor_correlation: empty grid");
  AncestorCorrelation c;
  c.k_max = k_max;
  c.l_max = l_max;
  c.t = state.steps();
  c.counts.assign(k_max * l_max, 0.0);
  c.row_counts_full.assign(k_max, 0.0);
  for (std::uint64_t i = 0; i < state.node_count(); ++i) {
    const std::uint32_t anc = state.ancestor(i);
    if (anc == GnState::kRoot) continue;
    const std::uint64_t k = state.degree(i);
    const std::uint64_t l = state.degree(anc);
    if (k <= k_max) {
      c.row_counts_full[k - 1] += 1.0;
      if (l <= l_max) c.counts[(k - 1) * l_max + (l - 1)] += 1.0;
    }
  }
  return c;
}

GenealogyView genealogy(const GnState& state) {
  const std::uint64_t n = state.node_count();
  GenealogyView g;
  g.generation.assign(n, 0);
  g.subtree_size.assign(n, 1);
  for (std::uint64_t i = 0; i < n; ++i) {
    const std::uint32_t anc = state.ancestor(i);
    if (anc == GnState::kRoot) continue;
    // Ancestors precede their descendants in insertion order.
    g.generation[i] = g.generation[anc] + 1;
    g.max_generation = std::max(g.max_generation, g.generation[i]);
  }
  for (std::uint64_t i = n; i-- > 0;) {
    const std::uint32_t anc = state.ancestor(i);
    if (anc != GnState::kRoot) g.subtree_size[anc] += g.subtree_size[i];
  }
  for (std::uint64_t i = 0; i < n; ++i) {
    g.generation_sizes.add(g.generation[i]);
    g.in_component_sizes.add(g.subtree_size[i]);
  }
  return g;
}

}  // namespace netkin
