#include "netkin/weighted_sampler.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "netkin/numerics.hpp"

namespace netkin {

namespace {
inline std::size_t lowbit(std::size_t i) { return i & (~i + 1); }
}  // namespace

void FenwickTree::append(double value) {
  raw_.push_back(value);
  const std::size_t i = raw_.size();  // 1-based position
  double node = value;
  const std::size_t low = i - lowbit(i);
  for (std::size_t j = i - 1; j > low; j -= lowbit(j)) node += tree_[j];
  if (tree_.empty()) tree_.push_back(0.0);
  tree_.push_back(node);
}

void FenwickTree::add(std::size_t index, double delta) {
  raw_[index] += delta;
  for (std::size_t i = index + 1; i < tree_.size(); i += lowbit(i)) tree_[i] += delta;
}

double FenwickTree::total() const {
  double s = 0.0;
  for (std::size_t i = raw_.size(); i > 0; i -= lowbit(i)) s += tree_[i];
  return s;
}

std::size_t FenwickTree::find(double target) const {
  const std::size_t n = raw_.size();
  std::size_t pos = 0;
  std::size_t pw = 1;
  while ((pw << 1) <= n) pw <<= 1;
  for (; pw > 0; pw >>= 1) {
    ++ops_;
    const std::size_t next = pos + pw;
    if (next <= n && tree_[next] <= target) {
      pos = next;
      target -= tree_[pos];
    }
  }
  // pos = largest index with prefix <= target; answer is the next slot.
  std::size_t idx = pos;  // 0-based
  while (idx < n && raw_[idx] <= 0.0) ++idx;
  if (idx >= n) {
    // Float drift put the target past the last positive slot; walk back.
    idx = n;
    while (idx > 0 && raw_[idx - 1] <= 0.0) --idx;
    if (idx == 0) throw std::runtime_error("FenwickTree::find on empty tree");
    --idx;
  }
  return idx;
}

void FenwickTree::rebuild(const std::vector<double>& values) {
  raw_ = values;
  tree_.assign(raw_.size() + 1, 0.0);
  for (std::size_t i = 1; i <= raw_.size(); ++i) {
    tree_[i] += raw_[i - 1];
    const std::size_t parent = i + (i & -i);
    if (parent <= raw_.size()) tree_[parent] += tree_[i];
  }
}

DegreeClassIndex::DegreeClassIndex(KernelSpec kernel) : kernel_(kernel) {
  if (kernel_.kind() == KernelSpec::Kind::Attractive)
    throw std::invalid_argument(
        "degree classes cannot share weights under an attractive kernel; "
        "use NodeWeightIndex");
}

double DegreeClassIndex::kernel_at(std::uint64_t degree) {
  if (degree >= ak_cache_.size()) ak_cache_.resize(degree + 1, -1.0);
  double& a = ak_cache_[degree];
  if (a < 0.0) a = kernel_.eval(degree);
  return a;
}

std::size_t DegreeClassIndex::slot_for(std::uint64_t degree) {
  if (degree >= degree_slot_.size()) degree_slot_.resize(degree + 1, 0);
  if (degree_slot_[degree] == 0) {
    fenwick_.append(0.0);
    members_.emplace_back();
    slot_degree_.push_back(degree);
    degree_slot_[degree] = std::uint32_t(fenwick_.size());
  }
  return degree_slot_[degree] - 1;
}

void DegreeClassIndex::insert(std::uint64_t node, std::uint64_t degree) {
  if (node >= node_slot_.size()) {
    node_slot_.resize(node + 1, 0);
    node_pos_.resize(node + 1, 0);
  }
  if (node_slot_[node] != 0)
    throw std::invalid_argument("DegreeClassIndex: duplicate node id " + std::to_string(node));
  const std::size_t slot = slot_for(degree);
  members_[slot].push_back(node);
  node_slot_[node] = std::uint32_t(slot + 1);
  node_pos_[node] = std::uint32_t(members_[slot].size() - 1);
  const double a = kernel_at(degree);
  fenwick_.add(slot, a);
  running_total_ += a;
  ++node_count_;
  if (++updates_ % kRecomputeInterval == 0) recompute_exact();
}

void DegreeClassIndex::remove_member(std::size_t slot, std::uint64_t node) {
  auto& pool = members_[slot];
  const std::uint32_t pos = node_pos_[node];
  const std::uint64_t last = pool.back();
  pool[pos] = last;
  node_pos_[last] = pos;
  pool.pop_back();
}

void DegreeClassIndex::promote(std::uint64_t node, std::uint64_t degree_from,
                               std::uint64_t degree_to) {
  if (node >= node_slot_.size() || node_slot_[node] == 0)
    throw std::logic_error("DegreeClassIndex: promote of absent node");
  const std::size_t slot = node_slot_[node] - 1;
  if (slot_degree_[slot] != degree_from)
    throw std::logic_error("DegreeClassIndex: node degree does not match its class");
  remove_member(slot, node);
  const double a_from = kernel_at(degree_from);
  fenwick_.add(slot, -a_from);

  const std::size_t to = slot_for(degree_to);
  members_[to].push_back(node);
  node_slot_[node] = std::uint32_t(to + 1);
  node_pos_[node] = std::uint32_t(members_[to].size() - 1);
  const double a_to = kernel_at(degree_to);
  fenwick_.add(to, a_to);
  running_total_ += a_to - a_from;
  if (++updates_ % kRecomputeInterval == 0) recompute_exact();
}

std::uint64_t DegreeClassIndex::sample(Rng& rng) const {
  if (node_count_ == 0) throw std::runtime_error("DegreeClassIndex: sample from empty index");
  const double total = fenwick_.total();
  const std::size_t slot = fenwick_.find(rng.next_double() * total);
  const auto& pool = members_[slot];
  return pool[rng.next_below(pool.size())];
}

double DegreeClassIndex::recompute_exact() {
  std::vector<double> weights(members_.size());
  KahanSum total;
  for (std::size_t s = 0; s < members_.size(); ++s) {
    weights[s] = members_[s].empty() ? 0.0
                                     : kernel_at(slot_degree_[s]) * double(members_[s].size());
    total.add(weights[s]);
  }
  fenwick_.rebuild(weights);
  running_total_ = total.value();
  return running_total_;
}

void NodeWeightIndex::insert(std::uint64_t node, double weight) {
  if (node != fenwick_.size())
    throw std::invalid_argument("NodeWeightIndex: node ids must arrive densely");
  fenwick_.append(weight);
  running_total_ += weight;
  if (++updates_ % kRecomputeInterval == 0) recompute_exact();
}

void NodeWeightIndex::set_weight(std::uint64_t node, double weight) {
  if (node >= fenwick_.size())
    throw std::logic_error("NodeWeightIndex: unknown node");
  const double delta = weight - fenwick_.value(node);
  fenwick_.add(node, delta);
  running_total_ += delta;
  if (++updates_ % kRecomputeInterval == 0) recompute_exact();
}

std::uint64_t NodeWeightIndex::sample(Rng& rng) const {
  if (fenwick_.size() == 0) throw std::runtime_error("NodeWeightIndex: empty");
  return fenwick_.find(rng.next_double() * fenwick_.total());
}

double NodeWeightIndex::recompute_exact() {
  KahanSum total;
  for (std::size_t i = 0; i < fenwick_.size(); ++i) total.add(fenwick_.value(i));
  running_total_ = total.value();
  return running_total_;
}

EndpointMixtureSampler::EndpointMixtureSampler(double w) : w_(w) {
  if (w < 0.0)
    throw std::invalid_argument("endpoint mixture requires w >= 0");
}

double EndpointMixtureSampler::total_weight() const {
  return double(endpoints_.size()) + w_ * double(node_count_);
}

std::uint64_t EndpointMixtureSampler::sample(Rng& rng) const {
  if (endpoints_.empty()) throw std::runtime_error("EndpointMixtureSampler: empty");
  if (w_ > 0.0) {
    const double u = rng.next_double() * total_weight();
    if (u >= double(endpoints_.size())) return rng.next_below(node_count_);
  }
  return endpoints_[rng.next_below(endpoints_.size())];
}

}  // namespace netkin
