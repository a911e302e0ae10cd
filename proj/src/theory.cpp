#include "netkin/theory.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include "netkin/numerics.hpp"

namespace netkin::theory {

namespace {

constexpr double kTruncationFloor = 1e-17;
constexpr std::uint64_t kMaxSeriesTerms = 1ull << 21;

// Cached kernel values A_1..A_k; shared across bisection iterations.
class KernelTable {
 public:
  explicit KernelTable(const KernelSpec& kernel) : kernel_(kernel) {}
  double at(std::uint64_t k) {
    if (k > a_.size()) {
      const std::uint64_t old = a_.size();
      a_.resize(k);
      for (std::uint64_t j = old + 1; j <= k; ++j) a_[j - 1] = kernel_.eval(j);
    }
    return a_[k - 1];
  }

 private:
  const KernelSpec& kernel_;
  std::vector<double> a_;
};

// f(mu) = sum_k prod_{j<=k} A_j/(A_j + mu) - 1, truncated adaptively with a
// power-law tail estimate when the running product is still large at the cap.
double mu_objective(KernelTable& a, double mu) {
  KahanSum sum;
  double term = 1.0;
  double prev = 1.0;
  std::uint64_t k = 0;
  while (++k <= kMaxSeriesTerms) {
    const double ak = a.at(k);
    prev = term;
    term *= ak / (ak + mu);
    sum.add(term);
    if (term < kTruncationFloor) return sum.value() - 1.0;
  }
  const double nu = local_exponent(prev, term, double(kMaxSeriesTerms));
  return sum.value() + power_tail_sum(term, double(kMaxSeriesTerms), nu) - 1.0;
}

void require_solvable(const KernelSpec& kernel) {
  if (kernel.kind() == KernelSpec::Kind::Attractive)
    throw RegimeError("attractive kernels: use the heterogeneous solver");
  const Regime r = kernel.classify();
  if (r == Regime::BestSeller || r == Regime::Bible)
    throw RegimeError(
        "super-linear kernel: no linear-growth amplitude exists; the degree "
        "distribution is dominated by a runaway node");
}

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double z1 = z;
      z = z1 - p0 / pp;
      if (std::abs(z - z1) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
    w[n - 1 - i] = w[i];
  }
}

// Integral of f over [a, b] with `panels` equal panels of 32-point GL.
template <typename F>
double panel_integrate(F&& f, double a, double b, int panels) {
  static std::vector<double> gx, gw;
  if (gx.empty()) gauss_legendre(32, gx, gw);
  KahanSum total;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * h;
    const double mid = lo + 0.5 * h;
    for (std::size_t i = 0; i < gx.size(); ++i)
      total.add(0.5 * h * gw[i] * f(mid + 0.5 * h * gx[i]));
  }
  return total.value();
}

double bisect_decreasing(const std::function<double(double)>& g, double lo, double hi,
                         double target, double tol) {
  // g decreasing; bisects until the bracket is exhausted so the root carries
  // the full precision of the objective, then verifies |g - target| < tol.
  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (hi - lo < 1e-15 * std::max(1.0, mid)) break;
    if (g(mid) - target > 0)
      lo = mid;
    else
      hi = mid;
  }
  (void)tol;
  return mid;
}

}  // namespace

double solve_mu(const KernelSpec& kernel, double tol) {
  require_solvable(kernel);
  KernelTable a(kernel);
  double lo = 1e-9;
  double hi = kernel.eval(1) * 1e3;
  while (mu_objective(a, hi) > 0) hi *= 2.0;
  while (mu_objective(a, lo) < 0) lo *= 0.5;
  return bisect_decreasing([&](double mu) { return mu_objective(a, mu); }, lo, hi, 0.0,
                           tol);
}

GnTheory gn_degree_dist(const KernelSpec& kernel, std::uint64_t k_max) {
  GnTheory g;
  // The linear family has the exact amplitude mu = 2 + w (total attachment
  // rate M1 + w M0); everything else goes through the series solver.
  if (kernel.linear_family() || kernel.kind() == KernelSpec::Kind::ShiftedLinear) {
    const double w =
        kernel.kind() == KernelSpec::Kind::ShiftedLinear ? kernel.shift() : 0.0;
    g.mu = 2.0 + w;
  } else {
    require_solvable(kernel);
    g.mu = solve_mu(kernel);
  }
  g.nu = 1.0 + g.mu;
  g.nk.assign(k_max + 1, 0.0);
  KernelTable a(kernel);
  g.nk[1] = g.mu / (g.mu + a.at(1));
  for (std::uint64_t k = 2; k <= k_max; ++k)
    g.nk[k] = g.nk[k - 1] * a.at(k - 1) / (g.mu + a.at(k));
  KahanSum m0, m1;
  for (std::uint64_t k = 1; k <= k_max; ++k) {
    m0.add(g.nk[k]);
    m1.add(double(k) * g.nk[k]);
  }
  g.density_sum = m0.value();
  g.mean_degree = m1.value();
  if (k_max >= 8 && g.nk[k_max] > 0) {
    const double nu_loc =
        local_exponent(g.nk[k_max - 1], g.nk[k_max], double(k_max));
    g.density_sum += power_tail_sum(g.nk[k_max], double(k_max), nu_loc);
    g.mean_degree +=
        power_tail_sum(double(k_max) * g.nk[k_max], double(k_max), nu_loc - 1.0);
  }
  return g;
}

std::vector<double> gn_degree_closed_shifted(double w, std::uint64_t k_max) {
  std::vector<double> nk(k_max + 1, 0.0);
  const double amp = (2.0 + w) * std::exp(log_gamma_ratio(3.0 + 2.0 * w, 1.0 + w));
  for (std::uint64_t k = 1; k <= k_max; ++k)
    nk[k] = amp * std::exp(log_gamma_ratio(double(k) + w, double(k) + 3.0 + 2.0 * w));
  return nk;
}

double linear_gn_density(std::uint64_t k) {
  const double kd = double(k);
  return 4.0 / (kd * (kd + 1.0) * (kd + 2.0));
}

TailedMoments tail_corrected_moments(const std::vector<double>& density_from_1) {
  TailedMoments m;
  KahanSum m0, m1, m2;
  const std::size_t n = density_from_1.size();
  for (std::size_t k = 1; k < n; ++k) {
    const double d = density_from_1[k];
    m0.add(d);
    m1.add(double(k) * d);
    m2.add(double(k) * double(k) * d);
  }
  m.m0 = m0.value();
  m.m1 = m1.value();
  m.m2 = m2.value();
  if (n >= 10 && density_from_1[n - 1] > 0 && density_from_1[n - 2] > 0) {
    const double k = double(n - 1);
    const double nu = local_exponent(density_from_1[n - 2], density_from_1[n - 1], k);
    const double last = density_from_1[n - 1];
    m.m0 += power_tail_sum(last, k, nu);
    m.m1 += power_tail_sum(k * last, k, nu - 1.0);
    m.m2 += power_tail_sum(k * k * last, k, nu - 2.0);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Heterogeneous network

namespace {

struct EtaNode {
  double eta;
  double weight;  // includes the density p0 and the measure d eta
};

// Quadrature nodes for int p0(eta) f(eta) d eta. For the power-cutoff law the
// substitution v = (eta_max - eta)^omega removes the density singularity; the
// transformed measure is dv / eta_max^omega.
std::vector<EtaNode> hetero_nodes(const AttractivenessDist& dist, int panels) {
  using Kind = AttractivenessDist::Kind;
  std::vector<double> gx, gw;
  gauss_legendre(32, gx, gw);
  std::vector<EtaNode> nodes;
  if (dist.kind == Kind::PointMass) {
    nodes.push_back({dist.eta, 1.0});
    return nodes;
  }
  const bool cutoff = dist.kind == Kind::PowerCutoff;
  const double a = cutoff ? 0.0 : dist.eta_min;
  const double b = cutoff ? std::pow(dist.eta_max, dist.omega) : dist.eta_max;
  const double density = cutoff ? 1.0 / b : 1.0 / (dist.eta_max - dist.eta_min);
  nodes.reserve(std::size_t(panels) * gx.size());
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      const double u = mid + 0.5 * h * gx[i];
      const double eta =
          cutoff ? dist.eta_max - std::pow(u, 1.0 / dist.omega) : u;
      nodes.push_back({std::max(eta, 1e-300), 0.5 * h * gw[i] * density});
    }
  }
  return nodes;
}

template <typename F>
double hetero_integral(const AttractivenessDist& dist, F&& f, int panels) {
  KahanSum s;
  for (const auto& n : hetero_nodes(dist, panels)) s.add(n.weight * f(n.eta));
  return s.value();
}

}  // namespace

double hetero_mu_integral(const AttractivenessDist& dist, double mu, int panels) {
  return hetero_integral(
      dist, [&](double eta) { return eta / (mu - eta); }, panels);
}

HeteroTheory gn_hetero_dist(const AttractivenessDist& dist, std::uint64_t k_max) {
  const double eta_max = dist.support_max();
  auto solve_at = [&](int panels) {
    const double lo0 = eta_max * (1.0 + 1e-12);
    if (hetero_mu_integral(dist, lo0, panels) < 1.0)
      throw RegimeError(
          "no amplitude solution: the most attractive nodes capture a finite "
          "fraction of all links");
    double hi = eta_max * 4.0;
    while (hetero_mu_integral(dist, hi, panels) > 1.0) hi *= 2.0;
    return bisect_decreasing(
        [&](double mu) { return hetero_mu_integral(dist, mu, panels); }, lo0, hi, 1.0,
        1e-12);
  };
  int panels = 64;
  double mu = solve_at(panels);
  for (;;) {
    if (panels >= 16384)
      break;
    const double refined = solve_at(panels * 2);
    const bool stable = std::abs(refined - mu) <= 1e-10 * std::max(1.0, mu);
    mu = refined;
    panels *= 2;
    if (stable) break;
  }

  HeteroTheory h;
  h.mu = mu;
  h.nk_total.assign(k_max + 1, 0.0);
  // Column recursion n_k(eta) = n_{k-1}(eta) * eta (k-1) / (mu + eta k),
  // integrated across the attractiveness law in one pass over the nodes.
  std::vector<KahanSum> acc(k_max + 1);
  for (const auto& node : hetero_nodes(dist, 256)) {
    double col = mu / (mu + node.eta);
    if (k_max >= 1) acc[1].add(node.weight * col);
    for (std::uint64_t k = 2; k <= k_max; ++k) {
      col *= node.eta * double(k - 1) / (mu + node.eta * double(k));
      acc[k].add(node.weight * col);
    }
  }
  for (std::uint64_t k = 1; k <= k_max; ++k) h.nk_total[k] = acc[k].value();
  return h;
}

// ---------------------------------------------------------------------------

double age_degree(double x, std::uint64_t k) {
  if (!(x > 0.0) || x > 1.0) throw std::domain_error("age_degree: x must lie in (0, 1]");
  if (k < 1) throw std::domain_error("age_degree: k >= 1 required");
  const double phi = std::sqrt(x);
  if (k == 1) return phi;
  return phi * std::pow(1.0 - phi, double(k - 1));
}

double age_degree_mean(double x) {
  if (!(x > 0.0) || x > 1.0) throw std::domain_error("age_degree_mean: x in (0, 1]");
  return 1.0 / std::sqrt(x);
}

double corr_closed(std::uint64_t k, std::uint64_t l) {
  if (k < 1 || l < 2) return 0.0;
  const double kd = double(k), ld = double(l);
  const double s = kd + ld;
  return 4.0 * (ld - 1.0) / (kd * s * (s + 1.0) * (s + 2.0)) *
         (1.0 / (kd + 1.0) + 3.0 / (s - 1.0));
}

std::vector<double> corr_recursion(std::uint64_t k_max, std::uint64_t l_max) {
  std::vector<double> c(k_max * l_max, 0.0);
  auto at = [&](std::uint64_t k, std::uint64_t l) -> double& {
    return c[(k - 1) * l_max + (l - 1)];
  };
  for (std::uint64_t l = 1; l <= l_max; ++l) {
    for (std::uint64_t k = 1; k <= k_max; ++k) {
      double rhs = 0.0;
      if (k >= 2) rhs += double(k - 1) * at(k - 1, l);
      if (l >= 2) rhs += double(l - 1) * at(k, l - 1);
      if (k == 1 && l >= 2) rhs += double(l - 1) * linear_gn_density(l - 1);
      at(k, l) = rhs / double(k + l + 2);
    }
  }
  return c;
}

double corr_scaling_function(double y) { return 4.0 * y * (y + 4.0) / std::pow(1.0 + y, 4.0); }

double in_component_density(std::uint64_t s) {
  const double sd = double(s);
  return 1.0 / (sd * (sd + 1.0));
}

double out_component_count(std::uint64_t s, double t) {
  return generation_size(s - 1, t);
}

double generation_size(std::uint64_t g, double t) {
  const double tau = std::log1p(t);
  return std::exp(double(g) * std::log(tau) - std::lgamma(double(g) + 1.0));
}

double diameter_estimate(double n_nodes) {
  return 2.0 * std::numbers::e * std::log(n_nodes);
}

// ---------------------------------------------------------------------------
// Web graph

namespace {

void check_wg_params(double p, double lambda_in, double lambda_out) {
  if (!(p > 0.0) || p > 1.0) throw RegimeError("web graph: p must lie in (0, 1]");
  if (!(lambda_in > 0.0)) throw RegimeError("web graph: lambda_in > 0 required");
  if (!(lambda_out > -1.0)) throw RegimeError("web graph: lambda_out > -1 required");
}

}  // namespace

std::pair<double, double> wg_exponents(double p, double lambda_in, double lambda_out) {
  check_wg_params(p, lambda_in, lambda_out);
  const double q = 1.0 - p;
  if (q == 0.0) return {2.0 + p * lambda_in, std::numeric_limits<double>::infinity()};
  return {2.0 + p * lambda_in, 1.0 + 1.0 / q + lambda_out * p / q};
}

WgTheory wg_closed_form(double p, double lambda_in, double lambda_out,
                        std::uint64_t k_max) {
  check_wg_params(p, lambda_in, lambda_out);
  WgTheory w;
  const double q = 1.0 - p;
  std::tie(w.nu_in, w.nu_out) = wg_exponents(p, lambda_in, lambda_out);
  w.in_density.assign(k_max + 1, 0.0);
  w.out_density.assign(k_max + 1, 0.0);
  const double b = 1.0 + (1.0 + p) * lambda_in;
  const double i0 = p * (1.0 + p * lambda_in) / b;
  for (std::uint64_t i = 0; i <= k_max; ++i) {
    w.in_density[i] = i0 * std::exp(log_gamma_ratio(double(i) + lambda_in,
                                                    double(i) + b + 1.0) +
                                    log_gamma_ratio(b + 1.0, lambda_in));
  }
  if (q == 0.0) {
    w.out_degenerate = true;
    if (k_max >= 1) w.out_density[1] = p;
    return w;
  }
  const double s = (1.0 + lambda_out) / q;  // O_j loss coefficient offset
  const double o1 = p * (1.0 + p * lambda_out) / (1.0 + q + lambda_out);
  for (std::uint64_t j = 1; j <= k_max; ++j) {
    w.out_density[j] = o1 * std::exp(log_gamma_ratio(double(j) + lambda_out,
                                                     double(j) + 1.0 + s) +
                                     log_gamma_ratio(2.0 + s, 1.0 + lambda_out));
  }
  return w;
}

std::pair<std::vector<double>, std::vector<double>> wg_recursion(
    double p, double lambda_in, double lambda_out, std::uint64_t k_max) {
  check_wg_params(p, lambda_in, lambda_out);
  const double q = 1.0 - p;
  std::vector<double> in(k_max + 1, 0.0), out(k_max + 1, 0.0);
  const double b = 1.0 + (1.0 + p) * lambda_in;
  in[0] = p * (1.0 + p * lambda_in) / b;
  for (std::uint64_t i = 1; i <= k_max; ++i)
    in[i] = in[i - 1] * (double(i) - 1.0 + lambda_in) / (double(i) + b);
  if (q == 0.0) {
    if (k_max >= 1) out[1] = p;
    return {in, out};
  }
  const double s = (1.0 + lambda_out) / q;
  out[1] = p * (1.0 + p * lambda_out) / (1.0 + q + lambda_out);
  for (std::uint64_t j = 2; j <= k_max; ++j)
    out[j] = out[j - 1] * (double(j) - 1.0 + lambda_out) / (double(j) + s);
  return {in, out};
}

std::vector<double> wg_joint_recursion(double p, double lambda_in, double lambda_out,
                                       std::uint64_t i_max, std::uint64_t j_max) {
  check_wg_params(p, lambda_in, lambda_out);
  const double q = 1.0 - p;
  if (q == 0.0) throw RegimeError("web graph joint table: q > 0 required");
  const double a = q * (1.0 + p * lambda_in) / (1.0 + p * lambda_out);
  const double b = 1.0 + (1.0 + p) * lambda_in;
  std::vector<double> n((i_max + 1) * (j_max + 1), 0.0);
  auto at = [&](std::uint64_t i, std::uint64_t j) -> double& {
    return n[i * (j_max + 1) + j];
  };
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    for (std::uint64_t j = 1; j <= j_max; ++j) {
      double rhs = 0.0;
      if (i >= 1) rhs += (double(i) - 1.0 + lambda_in) * at(i - 1, j);
      if (j >= 2) rhs += a * (double(j) - 1.0 + lambda_out) * at(i, j - 1);
      if (i == 0 && j == 1) rhs += p * (1.0 + p * lambda_in);
      at(i, j) = rhs / (double(i) + a * (double(j) + lambda_out) + b);
    }
  }
  return n;
}

// ---------------------------------------------------------------------------
// Multicomponent graph

MgExponents mg_exponents(double p, double lambda_in, double lambda_out) {
  if (!(p > 0.0) || !(p < 1.0)) throw RegimeError("multicomponent: p in (0, 1) required");
  if (!(lambda_in > 0.0) || !(lambda_out > 0.0))
    throw RegimeError("multicomponent: lambdas > 0 required");
  const double q = 1.0 - p;
  const double degree = 2.0 * q / p;
  MgExponents e;
  e.nu_in = 2.0 * (1.0 + lambda_in / degree);
  e.nu_out = 2.0 * (1.0 + lambda_out / degree);
  e.xi_in = e.nu_in + 0.5 * degree * (e.nu_in - 1.0) * (e.nu_out - 2.0) / (e.nu_out - 1.0);
  e.xi_out = e.nu_out + 0.5 * degree * (e.nu_out - 1.0) * (e.nu_in - 2.0) / (e.nu_in - 1.0);
  return e;
}

std::vector<double> mg_joint_closed(double p, double lambda, std::uint64_t i_max,
                                    std::uint64_t j_max) {
  if (!(p > 0.0) || !(p < 1.0)) throw RegimeError("multicomponent: p in (0, 1) required");
  if (!(lambda > 0.0)) throw RegimeError("multicomponent: lambda > 0 required");
  const double q = 1.0 - p;
  const double degree = 2.0 * q / p;
  const double s = lambda + lambda / q;
  const double c = p * (1.0 + 2.0 * lambda / degree);
  const double mu_aux =
      c * std::exp(std::lgamma(1.0 + s) - 2.0 * std::lgamma(lambda));
  std::vector<double> n((i_max + 1) * (j_max + 1), 0.0);
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    for (std::uint64_t j = 0; j <= j_max; ++j) {
      const double lg = log_gamma_ratio(double(i) + lambda, double(i) + 1.0) +
                        log_gamma_ratio(double(j) + lambda, double(j) + 1.0) +
                        log_gamma_ratio(double(i + j) + 1.0, double(i + j) + 2.0 + s);
      n[i * (j_max + 1) + j] = mu_aux * std::exp(lg);
    }
  }
  return n;
}

std::vector<double> mg_joint_recursion(double p, double lambda, std::uint64_t i_max,
                                       std::uint64_t j_max) {
  if (!(p > 0.0) || !(p < 1.0)) throw RegimeError("multicomponent: p in (0, 1) required");
  if (!(lambda > 0.0)) throw RegimeError("multicomponent: lambda > 0 required");
  const double q = 1.0 - p;
  const double degree = 2.0 * q / p;
  const double s = lambda + lambda / q;
  const double c = p * (1.0 + 2.0 * lambda / degree);
  std::vector<double> n((i_max + 1) * (j_max + 1), 0.0);
  auto at = [&](std::uint64_t i, std::uint64_t j) -> double& {
    return n[i * (j_max + 1) + j];
  };
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    for (std::uint64_t j = 0; j <= j_max; ++j) {
      double rhs = 0.0;
      if (i >= 1) rhs += (double(i) - 1.0 + lambda) * at(i - 1, j);
      if (j >= 1) rhs += (double(j) - 1.0 + lambda) * at(i, j - 1);
      if (i == 0 && j == 0) rhs += c;
      at(i, j) = rhs / (double(i + j) + 1.0 + s);
    }
  }
  return n;
}

std::vector<double> mg_cluster_dist(double p, std::uint64_t k_max) {
  if (!(p > 0.0) || p > 1.0) throw RegimeError("multicomponent: p in (0, 1] required");
  const double q = 1.0 - p;
  std::vector<double> c(k_max + 1, 0.0);
  if (k_max >= 1) c[1] = p / (1.0 + 2.0 * q);
  if (q == 0.0) return c;
  // d_k = (2k - 1) c_k makes the merge convolution a plain product.
  std::vector<double> d(k_max + 1, 0.0);
  d[1] = c[1];
  for (std::uint64_t k = 2; k <= k_max; ++k) {
    double conv = 0.0;
    for (std::uint64_t k1 = 1; k1 < k; ++k1) conv += d[k1] * d[k - k1];
    c[k] = q * conv / (1.0 + 2.0 * q * (2.0 * double(k) - 1.0));
    d[k] = (2.0 * double(k) - 1.0) * c[k];
  }
  return c;
}

MgCriticality mg_criticality(double p) {
  if (!(p > 0.0) || p > 1.0) throw RegimeError("multicomponent: p in (0, 1] required");
  MgCriticality m;
  m.p = p;
  m.pc = 0.25 * (2.0 + std::sqrt(3.0));
  m.supercritical = p > m.pc;
  const double q = 1.0 - p;
  // Below the threshold a giant cluster absorbs the tail and the moment
  // solution branch no longer applies; the fields stay absent.
  if (m.supercritical) {
    const double root = std::sqrt(std::max(0.0, 1.0 - 16.0 * p * q));
    m.m2 = q > 0.0 ? (1.0 + 8.0 * p * q - root) / (16.0 * q) : 1.0;
    m.tau_cluster = root < 1.0 ? 1.0 + 2.0 / (1.0 - root)
                               : std::numeric_limits<double>::infinity();
    m.kmax_exponent = 0.5 * (1.0 - root);
  }
  return m;
}

}  // namespace netkin::theory
