#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "netkin/kernels.hpp"
#include "netkin/measure.hpp"

namespace netkin::theory {

// Raised when a closed-form prediction does not exist in the requested
// parameter regime (runaway kernels, unbounded attractiveness, q = 0, ...).
struct RegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Growing network (undirected, one node + one link per step)

struct GnTheory {
  double mu = 0.0;         // growth amplitude of the total attachment rate
  double nu = 0.0;         // tail exponent 1 + mu (meaningful for linear-family kernels)
  std::vector<double> nk;  // steady-state density by degree, nk[0] unused
  double density_sum = 0.0;  // sum of nk including the tail estimate
  double mean_degree = 0.0;  // sum k nk including the tail estimate
};

// Rate amplitude mu solving sum_k prod_{j<=k} (1 + mu/A_j)^(-1) = 1.
// Adaptive truncation with a power-law tail estimate; bisection to |f| < tol.
double solve_mu(const KernelSpec& kernel, double tol = 1e-10);

// Steady-state degree densities n_k = (mu/A_k) prod_{j<=k} (1 + mu/A_j)^(-1),
// via the stable forward recursion. Throws RegimeError for runaway kernels.
GnTheory gn_degree_dist(const KernelSpec& kernel, std::uint64_t k_max);

// Independent gamma-ratio evaluation for shifted-linear kernels
// n_k = (2+w) Gamma(3+2w)/Gamma(1+w) * Gamma(k+w)/Gamma(k+3+2w).
std::vector<double> gn_degree_closed_shifted(double w, std::uint64_t k_max);

// Exact strictly-linear-kernel density 4/(k(k+1)(k+2)).
double linear_gn_density(std::uint64_t k);

// Moments of a density table with power-law tail corrections beyond k_max.
struct TailedMoments {
  double m0 = 0.0;
  double m1 = 0.0;
  double m2 = 0.0;
};
TailedMoments tail_corrected_moments(const std::vector<double>& density_from_1);

// ---------------------------------------------------------------------------
// Heterogeneous network with attachment rate eta * k

struct HeteroTheory {
  double mu = 0.0;
  std::vector<double> nk_total;  // integrated over the attractiveness law
  double nu_at(double eta) const { return 1.0 + mu / eta; }
};

// The amplitude condition integral int p0(eta) (mu/eta - 1)^(-1) d eta.
double hetero_mu_integral(const AttractivenessDist& dist, double mu, int panels = 64);

// Solves the amplitude condition and integrates the per-eta densities.
// Throws RegimeError when no amplitude solution exists (the most attractive
// nodes would capture a finite fraction of all links).
HeteroTheory gn_hetero_dist(const AttractivenessDist& dist, std::uint64_t k_max);

// ---------------------------------------------------------------------------
// Age-degree structure (strictly linear kernel)

// Density of degree k among nodes of scaled birth time x = 1 - a/t:
// sqrt(x) (1 - sqrt(x))^(k-1); a normalized geometric law for each x.
double age_degree(double x, std::uint64_t k);
// Mean degree at scaled birth time x: 1 / sqrt(x).
double age_degree_mean(double x);

// ---------------------------------------------------------------------------
// Degree correlations between a node and its attachment ancestor (linear kernel)

// Closed-form stationary density c_kl; zero outside k >= 1, l >= 2.
double corr_closed(std::uint64_t k, std::uint64_t l);
// Independent route: the stationary recursion
// (k+l+2) c_kl = (k-1) c_{k-1,l} + (l-1) c_{k,l-1} + (l-1) n_{l-1} delta_{k1}.
// Returns row-major [k-1][l-1] for 1 <= k <= k_max, 1 <= l <= l_max.
std::vector<double> corr_recursion(std::uint64_t k_max, std::uint64_t l_max);
// Large-k scaling profile: c_kl -> k^-4 * F(y), y = l/k, F(y) = 4y(y+4)/(1+y)^4.
double corr_scaling_function(double y);

// ---------------------------------------------------------------------------
// Global structure (constant kernel)

// In-component size density 1/(s(s+1)).
double in_component_density(std::uint64_t s);
// Number of out-components of size s at time t: tau^(s-1)/(s-1)!, tau = ln(1+t).
double out_component_count(std::uint64_t s, double t);
// Size of genealogical generation g at time t: tau^g / g!.
double generation_size(std::uint64_t g, double t);
// Network diameter estimate 2 e ln N.
double diameter_estimate(double n_nodes);

// ---------------------------------------------------------------------------
// Web graph (directed, always connected)

struct WgTheory {
  std::vector<double> in_density;   // I_i, index i >= 0, node density per unit time
  std::vector<double> out_density;  // O_j, index j >= 0 (O_0 = 0)
  double nu_in = 0.0;
  double nu_out = 0.0;
  bool out_degenerate = false;  // q = 0: out-degrees form a point mass at 1
};

// Gamma-ratio closed forms plus exponents.
WgTheory wg_closed_form(double p, double lambda_in, double lambda_out,
                        std::uint64_t k_max);
// Independent route: direct iteration of the stationary recursions.
std::pair<std::vector<double>, std::vector<double>> wg_recursion(
    double p, double lambda_in, double lambda_out, std::uint64_t k_max);
// Joint in/out degree density by recursion; row-major (i_max+1) x (j_max+1).
std::vector<double> wg_joint_recursion(double p, double lambda_in, double lambda_out,
                                       std::uint64_t i_max, std::uint64_t j_max);
std::pair<double, double> wg_exponents(double p, double lambda_in, double lambda_out);

// ---------------------------------------------------------------------------
// Multicomponent graph

struct MgExponents {
  double nu_in = 0.0, nu_out = 0.0;
  double xi_in = 0.0, xi_out = 0.0;  // joint-distribution edge exponents
};
MgExponents mg_exponents(double p, double lambda_in, double lambda_out);

// Joint degree density on the symmetric diagonal lambda_in = lambda_out.
std::vector<double> mg_joint_closed(double p, double lambda, std::uint64_t i_max,
                                    std::uint64_t j_max);
std::vector<double> mg_joint_recursion(double p, double lambda, std::uint64_t i_max,
                                       std::uint64_t j_max);

// Stationary cluster-size densities c_k for lambda_in = lambda_out = 1,
// by direct convolution iteration. c[0] unused.
std::vector<double> mg_cluster_dist(double p, std::uint64_t k_max);

struct MgCriticality {
  double p = 0.0;
  double pc = 0.0;                      // (2 + sqrt(3)) / 4
  bool supercritical = false;           // p > pc: all clusters finite
  std::optional<double> m2;             // second moment of the cluster sizes
  std::optional<double> tau_cluster;    // cluster-size tail exponent
  std::optional<double> kmax_exponent;  // growth exponent of the largest cluster
};
MgCriticality mg_criticality(double p);

}  // namespace netkin::theory
