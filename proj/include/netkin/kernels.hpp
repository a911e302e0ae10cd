#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "netkin/rng.hpp"

namespace netkin {

// Asymptotic regime of an attachment kernel A_k.
enum class Regime {
  Worm,              // gamma < -2: strong avoidance of popularity
  AntiPreferential,  // -2 <= gamma < 0
  SubLinear,         // 0 <= gamma < 1 (Constant is gamma = 0)
  Linear,            // gamma = 1 and all shifted-linear kernels
  BestSeller,        // 1 < gamma <= 2
  Bible,             // gamma > 2: one node ends up holding almost every link
};

const char* regime_name(Regime r);

// Distribution of the per-node attractiveness parameter eta > 0.
struct AttractivenessDist {
  enum class Kind { PointMass, Uniform, PowerCutoff };

  Kind kind = Kind::PointMass;
  double eta = 1.0;      // PointMass value
  double eta_min = 0.0;  // Uniform lower bound
  double eta_max = 1.0;  // upper support bound (Uniform, PowerCutoff)
  double omega = 1.0;    // PowerCutoff: density ~ (eta_max - eta)^(omega-1)

  static AttractivenessDist point_mass(double eta);
  static AttractivenessDist uniform(double eta_min, double eta_max);
  static AttractivenessDist power_cutoff(double eta_max, double omega);

  // Density of eta; zero outside the support.
  double density(double value) const;
  // Exact inverse-CDF sampling.
  double sample(Rng& rng) const;
  double support_min() const;
  double support_max() const { return kind == Kind::PointMass ? eta : eta_max; }
};

// Attachment kernel A_k: the rate at which a degree-k node acquires links.
class KernelSpec {
 public:
  enum class Kind { Constant, Power, ShiftedLinear, Attractive };

  static KernelSpec constant();
  static KernelSpec power(double gamma);
  static KernelSpec shifted_linear(double w);  // A_k = k + w, w > -1
  static KernelSpec attractive(AttractivenessDist dist);

  Kind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double shift() const { return shift_; }
  const AttractivenessDist& eta_dist() const;

  // A_k for k >= 1. The Attractive variant requires the node's eta.
  double eval(std::uint64_t k) const;
  double eval(std::uint64_t k, double eta) const;

  // Regime classification; defined for Constant, Power and ShiftedLinear.
  Regime classify() const;

  // True when A_k grows exactly linearly (k + w with w >= 0), enabling the
  // O(1) endpoint-mixture sampler.
  bool linear_family() const;

  std::string describe() const;

 private:
  KernelSpec() = default;
  Kind kind_ = Kind::Constant;
  double gamma_ = 0.0;
  double shift_ = 0.0;
  std::optional<AttractivenessDist> eta_;
};

}  // namespace netkin
