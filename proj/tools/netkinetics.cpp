// netkinetics: growing-network simulation and analysis harness.
//
// Subcommands: gn | wg | mg | theory | compare | replay.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "netkin/experiment.hpp"
#include "netkin/measure.hpp"
#include "netkin/theory.hpp"

using namespace netkin;
using nlohmann::json;

namespace {

void add_shared_flags(CLI::App* cmd, ExperimentConfig& cfg, std::string& config_path) {
  cmd->add_option("--config", config_path, "JSON config file; flags override its values");
  cmd->add_option("--steps", cfg.steps, "growth steps per seed");
  cmd->add_option("--seeds", cfg.n_seeds, "number of seeds");
  cmd->add_option("--seed-base", cfg.seed_base, "first seed value");
  cmd->add_option("--jobs", cfg.jobs, "parallel seed workers");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_option("--format", cfg.format, "csv or json");
  cmd->add_option("--z-tol", cfg.z_tol, "per-bin z tolerance for --check");
  cmd->add_flag("--check", cfg.check, "compare against theory; exit 1 on failure");
  std::string analyses;
  cmd->add_option("--analyze", analyses,
                  "comma-separated analyses (degree,age,corr,components,inout,joint,clusters)")
      ->each([&cfg](const std::string& v) {
        cfg.analyses.clear();
        std::string cur;
        for (char c : v + ",") {
          if (c == ',') {
            if (!cur.empty()) cfg.analyses.push_back(cur);
            cur.clear();
          } else {
            cur += c;
          }
        }
      });
}

ExperimentConfig load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  json j;
  f >> j;
  return ExperimentConfig::from_json(j);
}

int run_model(ExperimentConfig cfg, const std::string& config_path, CLI::App* cmd) {
  if (!config_path.empty()) {
    // Start from the file, then re-apply any explicit flags on top.
    ExperimentConfig base = load_config_file(config_path);
    base.model = cfg.model;
    base.out_dir = cfg.out_dir;
    base.check = cfg.check;
    base.jobs = cfg.jobs;
    for (const auto* opt : cmd->get_options()) {
      if (opt->count() == 0) continue;
      const std::string name = opt->get_name();
      if (name == "--steps") base.steps = cfg.steps;
      if (name == "--seeds") base.n_seeds = cfg.n_seeds;
      if (name == "--seed-base") base.seed_base = cfg.seed_base;
      if (name == "--format") base.format = cfg.format;
      if (name == "--z-tol") base.z_tol = cfg.z_tol;
      if (name == "--analyze") base.analyses = cfg.analyses;
      if (name == "--kernel") base.kernel_kind = cfg.kernel_kind;
      if (name == "--gamma") base.gamma = cfg.gamma;
      if (name == "--shift") base.shift = cfg.shift;
      if (name == "--eta-dist") base.eta_dist = cfg.eta_dist;
      if (name == "--sampler") base.sampler = cfg.sampler;
      if (name == "--p") base.p = cfg.p;
      if (name == "--lambda-in") base.lambda_in = cfg.lambda_in;
      if (name == "--lambda-out") base.lambda_out = cfg.lambda_out;
    }
    cfg = base;
  }
  return run_experiment(cfg, std::cout).exit_code;
}

// Reads "k,count[,density,...]" rows. When every count is zero (pure theory
// tables), the density column is used instead.
DistTable read_dist_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open " + path);
  DistTable counts, densities;
  std::string line;
  while (std::getline(f, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!std::isdigit(static_cast<unsigned char>(line[0]))) continue;  // header row
    std::istringstream ss(line);
    std::string tok;
    std::getline(ss, tok, ',');
    const std::uint64_t k = std::stoull(tok);
    if (!std::getline(ss, tok, ',')) continue;
    const double c = tok.empty() ? 0.0 : std::stod(tok);
    if (c != 0.0) counts.add(k, c);
    if (std::getline(ss, tok, ',') && !tok.empty()) {
      const double d = std::stod(tok);
      if (d != 0.0) densities.add(k, d);
    }
  }
  return counts.weight_sum() > 0 ? counts : densities;
}

int cmd_theory(const std::string& which, double p, double lambda_in, double lambda_out,
               double gamma, double shift, const std::string& kernel_kind,
               std::uint64_t k_max, double steps, const std::string& out_path) {
  std::ostringstream csv;
  if (which == "mg-criticality") {
    auto c = theory::mg_criticality(p);
    std::printf("pc=%.7f", c.pc);
    if (c.m2) std::printf(", m2=%.5f", *c.m2);
    if (c.tau_cluster) std::printf(", tau=%.4f", *c.tau_cluster);
    if (c.kmax_exponent) std::printf(", kmax_exp=%.5f", *c.kmax_exponent);
    std::printf(", supercritical=%s\n", c.supercritical ? "true" : "false");
    return 0;
  }
  if (which == "gn-degree") {
    ExperimentConfig tmp;
    tmp.model = "gn";
    tmp.kernel_kind = kernel_kind;
    tmp.gamma = gamma;
    tmp.shift = shift;
    auto g = theory::gn_degree_dist(tmp.kernel(), k_max);
    std::printf("mu=%.10f nu=%.10f\n", g.mu, g.nu);
    csv << "k,count,density\n";
    for (std::uint64_t k = 1; k <= k_max; ++k) csv << k << ",0," << g.nk[k] << '\n';
  } else if (which == "wg") {
    auto w = theory::wg_closed_form(p, lambda_in, lambda_out, k_max);
    std::printf("nu_in=%.6f nu_out=%.6f\n", w.nu_in, w.nu_out);
    csv << "k,in_density,out_density\n";
    for (std::uint64_t k = 0; k <= k_max; ++k)
      csv << k << ',' << w.in_density[k] << ',' << w.out_density[k] << '\n';
  } else if (which == "mg-cluster") {
    auto c = theory::mg_cluster_dist(p, k_max);
    csv << "k,count,density\n";
    for (std::uint64_t k = 1; k <= k_max; ++k) csv << k << ",0," << c[k] << '\n';
  } else if (which == "mg-exponents") {
    auto e = theory::mg_exponents(p, lambda_in, lambda_out);
    std::printf("nu_in=%.6f nu_out=%.6f xi_in=%.6f xi_out=%.6f\n", e.nu_in, e.nu_out,
                e.xi_in, e.xi_out);
    return 0;
  } else if (which == "corr") {
    csv << "k,l,c_kl\n";
    for (std::uint64_t k = 1; k <= k_max; ++k)
      for (std::uint64_t l = 1; l <= k_max; ++l)
        csv << k << ',' << l << ',' << theory::corr_closed(k, l) << '\n';
  } else if (which == "components") {
    csv << "s,in_density,out_count\n";
    for (std::uint64_t s = 1; s <= k_max; ++s)
      csv << s << ',' << theory::in_component_density(s) << ','
          << theory::out_component_count(s, steps) << '\n';
  } else {
    std::fprintf(stderr,
                 "unknown theory table '%s' (gn-degree, wg, corr, components, "
                 "mg-cluster, mg-exponents, mg-criticality)\n",
                 which.c_str());
    return 2;
  }
  if (!csv.str().empty()) {
    if (out_path.empty()) {
      std::fputs(csv.str().c_str(), stdout);
    } else {
      std::ofstream f(out_path, std::ios::binary);
      f << csv.str();
      std::printf("wrote %s\n", out_path.c_str());
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"growing-network simulators, closed-form predictions and comparisons"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string config_path;

  auto* gn = app.add_subcommand("gn", "grow undirected networks (one node+link per step)");
  cfg.model = "gn";
  add_shared_flags(gn, cfg, config_path);
  gn->add_option("--kernel", cfg.kernel_kind, "constant|power|linear|shifted|attractive");
  gn->add_option("--gamma", cfg.gamma, "power kernel exponent");
  gn->add_option("--shift", cfg.shift, "shifted kernel offset w > -1");
  gn->add_option("--eta-dist", cfg.eta_dist, "point:v | uniform:a,b | cutoff:max,omega");
  gn->add_option("--sampler", cfg.sampler, "auto|classes|endpoints");

  auto* wg = app.add_subcommand("wg", "grow directed web graphs (node or link per step)");
  add_shared_flags(wg, cfg, config_path);
  wg->add_option("--p", cfg.p, "node-creation probability");
  wg->add_option("--lambda-in", cfg.lambda_in, "in-degree rate offset (> 0)");
  wg->add_option("--lambda-out", cfg.lambda_out, "out-degree rate offset (> -1)");

  auto* mg = app.add_subcommand("mg", "grow multicomponent graphs (isolated node births)");
  add_shared_flags(mg, cfg, config_path);
  mg->add_option("--p", cfg.p, "node-creation probability");
  mg->add_option("--lambda-in", cfg.lambda_in, "in-degree rate offset (> 0)");
  mg->add_option("--lambda-out", cfg.lambda_out, "out-degree rate offset (> 0)");

  auto* th = app.add_subcommand("theory", "print or export closed-form tables");
  std::string table, th_out;
  double th_p = 0.5, th_lin = 1.0, th_lout = 1.0, th_gamma = 1.0, th_shift = 0.0;
  double th_steps = 1e6;
  std::string th_kernel = "power";
  std::uint64_t th_kmax = 100;
  th->add_option("table", table,
                 "gn-degree|wg|corr|components|mg-cluster|mg-exponents|mg-criticality")
      ->required();
  th->add_option("--p", th_p, "node-creation probability");
  th->add_option("--lambda-in", th_lin, "in-degree rate offset");
  th->add_option("--lambda-out", th_lout, "out-degree rate offset");
  th->add_option("--kernel", th_kernel, "constant|power|linear|shifted");
  th->add_option("--gamma", th_gamma, "power kernel exponent");
  th->add_option("--shift", th_shift, "shifted kernel offset");
  th->add_option("--k-max", th_kmax, "table size");
  th->add_option("--steps", th_steps, "time t for time-dependent tables");
  th->add_option("--out", th_out, "write CSV here instead of stdout");

  auto* cmp = app.add_subcommand("compare", "z-compare two distribution CSV files");
  std::string emp_path, theory_path;
  std::uint64_t cmp_lo = 1, cmp_hi = 50;
  double cmp_ztol = 4.0;
  std::uint64_t cmp_tail = 0;
  cmp->add_option("--empirical", emp_path, "CSV with k,count columns")->required();
  cmp->add_option("--theory", theory_path, "CSV with k,density (count column ignored)")
      ->required();
  cmp->add_option("--k-lo", cmp_lo, "first compared index");
  cmp->add_option("--k-hi", cmp_hi, "last compared index");
  cmp->add_option("--z-tol", cmp_ztol, "max |z| to pass");
  cmp->add_option("--tail-kmin", cmp_tail, "also fit the tail exponent above this cutoff");

  auto* rp = app.add_subcommand("replay", "re-run a manifest and verify byte-identical outputs");
  std::string manifest_path;
  rp->add_option("manifest", manifest_path, "path to manifest.json")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gn->parsed()) {
      cfg.model = "gn";
      return run_model(cfg, config_path, gn);
    }
    if (wg->parsed()) {
      cfg.model = "wg";
      return run_model(cfg, config_path, wg);
    }
    if (mg->parsed()) {
      cfg.model = "mg";
      return run_model(cfg, config_path, mg);
    }
    if (th->parsed())
      return cmd_theory(table, th_p, th_lin, th_lout, th_gamma, th_shift, th_kernel,
                        th_kmax, th_steps, th_out);
    if (cmp->parsed()) {
      DistTable emp = read_dist_csv(emp_path);
      DistTable theory_raw = read_dist_csv(theory_path);
      // Theory files carry densities in the count column slot; renormalize.
      auto rep = compare(emp, theory_raw, cmp_lo, cmp_hi, cmp_ztol,
                         cmp_tail ? std::optional<std::uint64_t>(cmp_tail) : std::nullopt);
      std::printf("range=[%llu,%llu] max|z|=%.3f at k=%llu -> %s\n",
                  (unsigned long long)rep.k_lo, (unsigned long long)rep.k_hi,
                  rep.max_abs_z, (unsigned long long)rep.argmax_k,
                  rep.pass ? "pass" : "FAIL");
      if (rep.tail && rep.tail->available)
        std::printf("tail exponent %.4f +- %.4f (n=%.0f)%s\n", rep.tail->exponent,
                    rep.tail->stderr_, rep.tail->n_tail,
                    rep.tail->power_law_plausible ? "" : " [non-power-law curvature]");
      return rep.pass ? 0 : 1;
    }
    if (rp->parsed()) return replay_manifest(manifest_path, std::cout);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const theory::RegimeError& e) {
    std::fprintf(stderr, "regime error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
