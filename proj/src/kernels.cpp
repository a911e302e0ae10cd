#include "netkin/kernels.hpp"

#include <cmath>
#include <stdexcept>

namespace netkin {

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Worm: return "worm";
    case Regime::AntiPreferential: return "anti-preferential";
    case Regime::SubLinear: return "sub-linear";
    case Regime::Linear: return "linear";
    case Regime::BestSeller: return "best-seller";
    case Regime::Bible: return "bible";
  }
  return "?";
}

AttractivenessDist AttractivenessDist::point_mass(double eta) {
  if (!(eta > 0)) throw std::invalid_argument("attractiveness: eta must be > 0");
  AttractivenessDist d;
  d.kind = Kind::PointMass;
  d.eta = eta;
  return d;
}

AttractivenessDist AttractivenessDist::uniform(double eta_min, double eta_max) {
  if (!(eta_min > 0) || !(eta_max > eta_min))
    throw std::invalid_argument("attractiveness: need 0 < eta_min < eta_max");
  AttractivenessDist d;
  d.kind = Kind::Uniform;
  d.eta_min = eta_min;
  d.eta_max = eta_max;
  return d;
}

AttractivenessDist AttractivenessDist::power_cutoff(double eta_max, double omega) {
  if (!(eta_max > 0) || !(omega > 0))
    throw std::invalid_argument("attractiveness: need eta_max > 0 and omega > 0");
  AttractivenessDist d;
  d.kind = Kind::PowerCutoff;
  d.eta_max = eta_max;
  d.omega = omega;
  return d;
}

double AttractivenessDist::support_min() const {
  switch (kind) {
    case Kind::PointMass: return eta;
    case Kind::Uniform: return eta_min;
    case Kind::PowerCutoff: return 0.0;
  }
  return 0.0;
}

double AttractivenessDist::density(double value) const {
  switch (kind) {
    case Kind::PointMass:
      return 0.0;  // atom, not a density
    case Kind::Uniform:
      return (value >= eta_min && value <= eta_max) ? 1.0 / (eta_max - eta_min) : 0.0;
    case Kind::PowerCutoff:
      if (value <= 0.0 || value >= eta_max) return 0.0;
      return omega * std::pow(eta_max - value, omega - 1.0) / std::pow(eta_max, omega);
  }
  return 0.0;
}

double AttractivenessDist::sample(Rng& rng) const {
  switch (kind) {
    case Kind::PointMass:
      return eta;
    case Kind::Uniform:
      return eta_min + (eta_max - eta_min) * rng.next_double();
    case Kind::PowerCutoff: {
      // CDF F(x) = 1 - ((eta_max - x)/eta_max)^omega; closed-form inverse.
      const double u = rng.next_double();
      return eta_max * (1.0 - std::pow(1.0 - u, 1.0 / omega));
    }
  }
  return eta;
}

KernelSpec KernelSpec::constant() {
  KernelSpec k;
  k.kind_ = Kind::Constant;
  return k;
}

KernelSpec KernelSpec::power(double gamma) {
  KernelSpec k;
  k.kind_ = Kind::Power;
  k.gamma_ = gamma;
  return k;
}

KernelSpec KernelSpec::shifted_linear(double w) {
  if (!(w > -1.0)) throw std::invalid_argument("shifted kernel requires w > -1");
  KernelSpec k;
  k.kind_ = Kind::ShiftedLinear;
  k.shift_ = w;
  return k;
}

KernelSpec KernelSpec::attractive(AttractivenessDist dist) {
  KernelSpec k;
  k.kind_ = Kind::Attractive;
  k.eta_ = dist;
  return k;
}

const AttractivenessDist& KernelSpec::eta_dist() const {
  if (!eta_) throw std::logic_error("kernel has no attractiveness distribution");
  return *eta_;
}

double KernelSpec::eval(std::uint64_t k) const {
  if (k == 0) throw std::domain_error("attachment kernel undefined for degree 0");
  switch (kind_) {
    case Kind::Constant: return 1.0;
    case Kind::Power: return std::pow(double(k), gamma_);
    case Kind::ShiftedLinear: return double(k) + shift_;
    case Kind::Attractive:
      throw std::invalid_argument("attractive kernel requires a node eta");
  }
  return 0.0;
}

double KernelSpec::eval(std::uint64_t k, double eta) const {
  if (kind_ != Kind::Attractive)
    throw std::invalid_argument("eta supplied to a non-attractive kernel");
  if (k == 0) throw std::domain_error("attachment kernel undefined for degree 0");
  return eta * double(k);
}

Regime KernelSpec::classify() const {
  switch (kind_) {
    case Kind::Constant: return Regime::SubLinear;
    case Kind::ShiftedLinear: return Regime::Linear;
    case Kind::Attractive:
      throw std::invalid_argument("attractive kernels are classified per eta");
    case Kind::Power: break;
  }
  const double g = gamma_;
  if (g < -2.0) return Regime::Worm;
  if (g < 0.0) return Regime::AntiPreferential;
  if (g < 1.0) return Regime::SubLinear;
  if (g == 1.0) return Regime::Linear;
  if (g <= 2.0) return Regime::BestSeller;
  return Regime::Bible;
}

bool KernelSpec::linear_family() const {
  if (kind_ == Kind::ShiftedLinear) return shift_ >= 0.0;
  return kind_ == Kind::Power && gamma_ == 1.0;
}

std::string KernelSpec::describe() const {
  switch (kind_) {
    case Kind::Constant: return "constant";
    case Kind::Power: return "power(gamma=" + std::to_string(gamma_) + ")";
    case Kind::ShiftedLinear: return "shifted(w=" + std::to_string(shift_) + ")";
    case Kind::Attractive: return "attractive";
  }
  return "?";
}

}  // namespace netkin
