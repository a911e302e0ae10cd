#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "netkin/numerics.hpp"
#include "netkin/rng.hpp"
#include "netkin/weighted_sampler.hpp"

using namespace netkin;

TEST_CASE("insert arithmetic under simple kernels") {
  {
    DegreeClassIndex idx(KernelSpec::power(1.0));
    idx.insert(0, 1);
    idx.insert(1, 1);
    idx.insert(2, 1);
    CHECK(idx.total_weight() == doctest::Approx(3.0));
  }
  {
    DegreeClassIndex idx(KernelSpec::power(1.0));
    idx.insert(0, 1);
    idx.insert(1, 1);
    idx.insert(2, 2);
    // P(class of degree 2) = 2 / (1 + 1 + 2).
    Rng rng(3);
    int hits = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
      if (idx.sample(rng) == 2) ++hits;
    CHECK(hits / double(n) == doctest::Approx(0.5).epsilon(0.02));
  }
  {
    DegreeClassIndex idx(KernelSpec::shifted_linear(0.5));
    idx.insert(0, 1);
    CHECK(idx.total_weight() == doctest::Approx(1.5));
  }
}

TEST_CASE("duplicate insert and bad promote are rejected") {
  DegreeClassIndex idx(KernelSpec::power(1.0));
  idx.insert(0, 1);
  CHECK_THROWS_AS(idx.insert(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(idx.promote(5, 1, 2), std::logic_error);
  CHECK_THROWS_AS(idx.promote(0, 3, 4), std::logic_error);
}

TEST_CASE("promote arithmetic") {
  {
    // Classes {1: two nodes, 2: one node} under A_k = k; promote one node
    // 1 -> 2: weights become {1: 1, 2: 4}, total 5.
    DegreeClassIndex idx(KernelSpec::power(1.0));
    idx.insert(0, 1);
    idx.insert(1, 1);
    idx.insert(2, 2);
    idx.promote(0, 1, 2);
    CHECK(idx.total_weight() == doctest::Approx(5.0));
    CHECK(idx.recompute_exact() == doctest::Approx(5.0));
  }
  {
    DegreeClassIndex idx(KernelSpec::constant());
    idx.insert(0, 1);
    idx.insert(1, 4);
    const double before = idx.total_weight();
    idx.promote(1, 4, 5);
    CHECK(idx.total_weight() == doctest::Approx(before));
  }
  {
    DegreeClassIndex idx(KernelSpec::shifted_linear(1.0));
    idx.insert(0, 1);
    const double before = idx.total_weight();
    idx.promote(0, 1, 2);
    CHECK(idx.total_weight() - before == doctest::Approx(1.0));
  }
}

TEST_CASE("single node is sampled with probability one; empty index throws") {
  DegreeClassIndex idx(KernelSpec::power(0.5));
  Rng rng(1);
  CHECK_THROWS_AS(idx.sample(rng), std::runtime_error);
  idx.insert(7, 3);
  for (int i = 0; i < 100; ++i) CHECK(idx.sample(rng) == 7);
}

TEST_CASE("two-node pick frequencies match exact weights (binomial oracle)") {
  {
    // degrees {1, 2} under A_k = k: P(degree-2 node) = 2/3, 1e6 draws,
    // binomial 3-sigma band 0.0014.
    DegreeClassIndex idx(KernelSpec::power(1.0));
    idx.insert(0, 1);
    idx.insert(1, 2);
    Rng rng(17);
    std::uint64_t hits = 0;
    const std::uint64_t n = 1000000;
    for (std::uint64_t i = 0; i < n; ++i)
      if (idx.sample(rng) == 1) ++hits;
    CHECK(std::abs(hits / double(n) - 2.0 / 3.0) < 0.002);
  }
  {
    // degrees {1, 5} under A_k = k^2: P(degree-5) = 25/26; 3-sigma ~ 0.0006.
    DegreeClassIndex idx(KernelSpec::power(2.0));
    idx.insert(0, 1);
    idx.insert(1, 5);
    Rng rng(18);
    std::uint64_t hits = 0;
    const std::uint64_t n = 1000000;
    for (std::uint64_t i = 0; i < n; ++i)
      if (idx.sample(rng) == 1) ++hits;
    CHECK(std::abs(hits / double(n) - 25.0 / 26.0) < 0.001);
  }
}

TEST_CASE("running total tracks an exact recomputation within 1e-9 relative") {
  DegreeClassIndex idx(KernelSpec::power(0.8));
  Rng rng(23);
  std::vector<std::uint64_t> degree;
  for (std::uint64_t node = 0; node < 20000; ++node) {
    degree.push_back(1);
    idx.insert(node, 1);
    // promote a few random nodes per insert
    for (int j = 0; j < 3; ++j) {
      const std::uint64_t v = rng.next_below(degree.size());
      idx.promote(v, degree[v], degree[v] + 1);
      degree[v] += 1;
    }
  }
  const double running = idx.total_weight();
  const double exact = idx.recompute_exact();
  CHECK(std::abs(running - exact) <= 1e-9 * exact);
}

TEST_CASE("chi-square goodness of fit of draws against exact class probabilities") {
  // Fixed seed suite at significance 1e-3.
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    DegreeClassIndex idx(KernelSpec::power(0.5));
    std::map<std::uint64_t, std::uint64_t> degree_of;
    Rng setup(seed + 100);
    for (std::uint64_t node = 0; node < 50; ++node) {
      const std::uint64_t k = 1 + setup.next_below(30);
      idx.insert(node, k);
      degree_of[node] = k;
    }
    double total = 0.0;
    for (auto& [node, k] : degree_of) total += std::pow(double(k), 0.5);
    Rng rng(seed);
    const std::uint64_t n = 1000000;
    std::vector<std::uint64_t> hits(50, 0);
    for (std::uint64_t i = 0; i < n; ++i) ++hits[idx.sample(rng)];
    double chi2 = 0.0;
    for (std::uint64_t node = 0; node < 50; ++node) {
      const double expect = n * std::pow(double(degree_of[node]), 0.5) / total;
      chi2 += (hits[node] - expect) * (hits[node] - expect) / expect;
    }
    CHECK(chi2 < chi2_critical(49, 1e-3));
  }
}

TEST_CASE("sampling cost grows at most logarithmically in the class count") {
  auto ops_per_draw = [](std::uint64_t n_classes) {
    DegreeClassIndex idx(KernelSpec::power(0.3));
    for (std::uint64_t node = 0; node < n_classes; ++node)
      idx.insert(node, node + 1);  // every node its own degree class
    Rng rng(7);
    const std::uint64_t before = idx.sample_ops();
    const int draws = 20000;
    for (int i = 0; i < draws; ++i) idx.sample(rng);
    return double(idx.sample_ops() - before) / draws;
  };
  const double small = ops_per_draw(16);
  const double large = ops_per_draw(4096);
  // log2(4096)/log2(16) = 3; allow overhead but forbid linear growth (256x).
  CHECK(large <= 4.0 * small);
  CHECK(large <= 16.0);
}

TEST_CASE("per-node weight index: frequencies and exact recompute") {
  NodeWeightIndex idx;
  idx.insert(0, 0.5);
  idx.insert(1, 1.5);
  idx.insert(2, 2.0);
  Rng rng(31);
  std::vector<std::uint64_t> hits(3, 0);
  const std::uint64_t n = 600000;
  for (std::uint64_t i = 0; i < n; ++i) ++hits[idx.sample(rng)];
  CHECK(hits[2] / double(n) == doctest::Approx(0.5).epsilon(0.01));
  CHECK(hits[0] / double(n) == doctest::Approx(0.125).epsilon(0.03));
  idx.set_weight(0, 2.0);
  CHECK(idx.total_weight() == doctest::Approx(5.5));
  CHECK(idx.recompute_exact() == doctest::Approx(5.5));
  CHECK_THROWS_AS(idx.insert(5, 1.0), std::invalid_argument);
}

TEST_CASE("endpoint mixture equals the shifted kernel law on a frozen state") {
  // Nodes with degrees {1, 2, 3} built as endpoint multiset {0,1,1,2,2,2};
  // under A_k = k + w the node probabilities are (k_i + w)/(M1 + wN).
  const double w = 0.5;
  EndpointMixtureSampler s(w);
  for (int i = 0; i < 3; ++i) s.add_node();
  s.add_endpoint(0);
  s.add_endpoint(1);
  s.add_endpoint(1);
  s.add_endpoint(2);
  s.add_endpoint(2);
  s.add_endpoint(2);
  Rng rng(41);
  std::vector<std::uint64_t> hits(3, 0);
  const std::uint64_t n = 1000000;
  for (std::uint64_t i = 0; i < n; ++i) ++hits[s.sample(rng)];
  const double total = 6.0 + w * 3.0;
  for (int v = 0; v < 3; ++v) {
    const double p = (double(v + 1) + w) / total;
    const double se = std::sqrt(p * (1 - p) / double(n));
    CHECK(std::abs(hits[v] / double(n) - p) < 4.5 * se);
  }
}
