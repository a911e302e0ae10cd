#include "netkin/experiment.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "netkin/gn_sim.hpp"
#include "netkin/measure.hpp"
#include "netkin/mg_sim.hpp"
#include "netkin/numerics.hpp"
#include "netkin/theory.hpp"
#include "netkin/wg_sim.hpp"

namespace netkin {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt_g(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.17g", v);
  return b;
}

std::string fmt_count(double v) {
  char b[40];
  std::snprintf(b, sizeof b, "%.0f", v);
  return b;
}

constexpr std::size_t kAgeBins = 50;
constexpr std::uint64_t kCorrGrid = 20;
constexpr std::uint64_t kJointGrid = 20;

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (model != "gn" && model != "wg" && model != "mg")
    throw ConfigError("model must be one of gn|wg|mg");
  if (steps < 1) throw ConfigError("steps must be >= 1");
  if (n_seeds < 1) throw ConfigError("need at least one seed");
  if (jobs < 1) throw ConfigError("jobs must be >= 1");
  if (format != "csv" && format != "json")
    throw ConfigError("format must be csv or json");
  if (model == "gn") {
    kernel();  // validates kernel parameters
    if (sampler != "auto" && sampler != "classes" && sampler != "endpoints")
      throw ConfigError("sampler must be auto|classes|endpoints");
    if (sampler == "endpoints" && !kernel().linear_family())
      throw ConfigError("endpoint sampler requires a linear-family kernel");
  } else {
    if (!(p > 0.0) || p > 1.0) throw ConfigError("p must lie in (0, 1]");
    if (!(lambda_in > 0.0)) throw ConfigError("lambda-in must be > 0");
    if (model == "wg" && !(lambda_out > -1.0))
      throw ConfigError("lambda-out must be > -1");
    if (model == "mg" && !(lambda_out > 0.0))
      throw ConfigError("lambda-out must be > 0 for the multicomponent model");
  }
  for (const auto& a : effective_analyses()) {
    static const std::vector<std::string> known = {
        "degree", "age", "corr", "components", "inout", "joint", "clusters"};
    if (std::find(known.begin(), known.end(), a) == known.end())
      throw ConfigError("unknown analysis: " + a);
  }
}

AttractivenessDist ExperimentConfig::parse_eta_dist() const {
  const auto colon = eta_dist.find(':');
  const std::string kind = eta_dist.substr(0, colon);
  std::vector<double> args;
  if (colon != std::string::npos) {
    for (const auto& tok : split_csv_list(eta_dist.substr(colon + 1)))
      args.push_back(std::stod(tok));
  }
  if (kind == "point" && args.size() == 1) return AttractivenessDist::point_mass(args[0]);
  if (kind == "uniform" && args.size() == 2)
    return AttractivenessDist::uniform(args[0], args[1]);
  if (kind == "cutoff" && args.size() == 2)
    return AttractivenessDist::power_cutoff(args[0], args[1]);
  throw ConfigError("eta-dist must be point:v, uniform:a,b or cutoff:max,omega");
}

KernelSpec ExperimentConfig::kernel() const {
  try {
    if (kernel_kind == "constant") return KernelSpec::constant();
    if (kernel_kind == "power") return KernelSpec::power(gamma);
    if (kernel_kind == "linear") return KernelSpec::power(1.0);
    if (kernel_kind == "shifted") return KernelSpec::shifted_linear(shift);
    if (kernel_kind == "attractive") return KernelSpec::attractive(parse_eta_dist());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("kernel must be constant|power|linear|shifted|attractive");
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> s(n_seeds);
  for (std::uint32_t i = 0; i < n_seeds; ++i) s[i] = seed_base + i;
  return s;
}

std::vector<std::string> ExperimentConfig::effective_analyses() const {
  if (!analyses.empty()) return analyses;
  if (model == "gn") return {"degree"};
  if (model == "wg") return {"inout"};
  return {"clusters"};
}

json ExperimentConfig::to_json() const {
  json j;
  j["model"] = model;
  if (model == "gn") {
    json k;
    k["kind"] = kernel_kind;
    if (kernel_kind == "power" || kernel_kind == "linear") k["gamma"] = gamma;
    if (kernel_kind == "shifted") k["shift"] = shift;
    if (kernel_kind == "attractive") k["eta_dist"] = eta_dist;
    j["kernel"] = k;
    j["sampler"] = sampler;
  } else {
    j["p"] = p;
    j["lambda_in"] = lambda_in;
    j["lambda_out"] = lambda_out;
  }
  j["steps"] = steps;
  j["seed_base"] = seed_base;
  j["n_seeds"] = n_seeds;
  j["analyses"] = effective_analyses();
  j["format"] = format;
  j["z_tol"] = z_tol;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.model = j.at("model").get<std::string>();
  if (j.contains("kernel")) {
    const auto& k = j.at("kernel");
    c.kernel_kind = k.at("kind").get<std::string>();
    if (k.contains("gamma")) c.gamma = k.at("gamma").get<double>();
    if (k.contains("shift")) c.shift = k.at("shift").get<double>();
    if (k.contains("eta_dist")) c.eta_dist = k.at("eta_dist").get<std::string>();
  }
  if (j.contains("sampler")) c.sampler = j.at("sampler").get<std::string>();
  if (j.contains("p")) c.p = j.at("p").get<double>();
  if (j.contains("lambda_in")) c.lambda_in = j.at("lambda_in").get<double>();
  if (j.contains("lambda_out")) c.lambda_out = j.at("lambda_out").get<double>();
  c.steps = j.at("steps").get<std::uint64_t>();
  c.seed_base = j.at("seed_base").get<std::uint64_t>();
  c.n_seeds = j.at("n_seeds").get<std::uint32_t>();
  if (j.contains("analyses")) c.analyses = j.at("analyses").get<std::vector<std::string>>();
  if (j.contains("format")) c.format = j.at("format").get<std::string>();
  if (j.contains("z_tol")) c.z_tol = j.at("z_tol").get<double>();
  return c;
}

std::string ExperimentConfig::config_hash() const {
  return to_hex(fnv1a64(to_json().dump()));
}

namespace {

// ---------------------------------------------------------------------------
// Per-seed simulation outputs

struct SeedOut {
  // gn
  DistTable degree;
  std::vector<DistTable> age_rows;
  std::vector<double> corr_counts, corr_rows_full;
  DistTable in_comp, generations;
  std::uint32_t max_generation = 0;
  double share = 0.0;
  std::uint64_t node_count = 0;
  // wg / mg
  DistTable in_deg, out_deg;
  std::vector<double> joint, joint_in_marg, joint_out_marg;
  DistTable census;
  std::uint64_t clusters = 0, self_links = 0, kmax_cluster = 0;
  double m2_hat = 0.0, mean_total_degree = 0.0;
};

bool wants(const std::vector<std::string>& analyses, const char* a) {
  return std::find(analyses.begin(), analyses.end(), a) != analyses.end();
}

SamplerStrategy strategy_of(const ExperimentConfig& cfg) {
  if (cfg.sampler == "classes") return SamplerStrategy::ClassIndex;
  if (cfg.sampler == "endpoints") return SamplerStrategy::EndpointMixture;
  return SamplerStrategy::Auto;
}

SeedOut run_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                 const std::vector<std::string>& analyses) {
  SeedOut out;
  if (cfg.model == "gn") {
    GnState state = grow(cfg.kernel(), cfg.steps, seed, strategy_of(cfg));
    out.node_count = state.node_count();
    out.degree = degree_distribution(state);
    out.share = max_degree_share(state);
    if (wants(analyses, "age")) {
      auto slices = age_degree_slice(state, kAgeBins);
      out.age_rows.resize(kAgeBins);
      for (std::size_t b = 0; b < kAgeBins; ++b)
        if (slices.rows[b]) out.age_rows[b] = *slices.rows[b];
    }
    if (wants(analyses, "corr")) {
      auto corr = ancestor_correlation(state, kCorrGrid, kCorrGrid);
      out.corr_counts = std::move(corr.counts);
      out.corr_rows_full = std::move(corr.row_counts_full);
    }
    if (wants(analyses, "components")) {
      auto gen = genealogy(state);
      out.in_comp = std::move(gen.in_component_sizes);
      out.generations = std::move(gen.generation_sizes);
      out.max_generation = gen.max_generation;
    }
  } else if (cfg.model == "wg") {
    DirectedState state = grow_wg(cfg.p, cfg.lambda_in, cfg.lambda_out, cfg.steps, seed);
    out.node_count = state.node_count();
    auto [in_t, out_t] = inout_distributions(state);
    out.in_deg = std::move(in_t);
    out.out_deg = std::move(out_t);
    if (wants(analyses, "joint")) {
      auto jc = joint_inout(state, kJointGrid, kJointGrid);
      out.joint = std::move(jc.counts);
      out.joint_in_marg = std::move(jc.in_marginal);
      out.joint_out_marg = std::move(jc.out_marginal);
    }
  } else {
    ClusterState state = grow_mg(cfg.p, cfg.lambda_in, cfg.lambda_out, cfg.steps, seed);
    out.node_count = state.node_count();
    out.census = cluster_size_distribution(state);
    out.clusters = state.cluster_count();
    out.self_links = state.self_link_count();
    out.kmax_cluster = state.largest_cluster_size();
    out.mean_total_degree = state.mean_total_degree();
    out.m2_hat = out.census.moment(2) * double(state.cluster_count()) / double(cfg.steps);
    if (wants(analyses, "inout")) {
      auto [in_t, out_t] = inout_distributions(state);
      out.in_deg = std::move(in_t);
      out.out_deg = std::move(out_t);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Output files

class OutputWriter {
 public:
  OutputWriter(const fs::path& dir, std::string header) : dir_(dir), header_(std::move(header)) {
    fs::create_directories(dir);
  }

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir_ / name, std::ios::binary);
    f << header_;
    files_.push_back(name);
    return f;
  }

  // Registers files written into subdirectories through a child writer.
  void adopt(const std::string& sub, const OutputWriter& child) {
    for (const auto& f : child.files_) files_.push_back(sub + "/" + f);
  }

  const std::vector<std::string>& files() const { return files_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::string header_;
  std::vector<std::string> files_;
};

void write_distribution_csv(std::ofstream f, const DistTable& emp,
                            const std::vector<double>* theory_density,
                            const char* index_name) {
  f << index_name << ",count,density,theory_density,z\n";
  const std::uint64_t hi = emp.max_index();
  const double total = emp.total();
  for (std::uint64_t k = 0; k <= hi; ++k) {
    const double c = emp.count(k);
    const double th =
        theory_density && k < theory_density->size() ? (*theory_density)[k] : 0.0;
    if (c == 0.0 && th == 0.0) continue;
    f << k << ',' << fmt_count(c) << ',' << fmt_g(emp.density(k));
    if (theory_density) {
      double z = 0.0;
      if (th > 0.0) z = (c - total * th) / std::sqrt(total * th * (1.0 - th));
      f << ',' << fmt_g(th) << ',' << fmt_g(z);
    } else {
      f << ",,";
    }
    f << '\n';
  }
}

// ---------------------------------------------------------------------------
// Theory tables per model (when a closed form exists for the configuration)

struct GnTheoryTables {
  bool available = false;
  std::vector<double> nk;  // density by degree
};

GnTheoryTables gn_theory_for(const ExperimentConfig& cfg, std::uint64_t k_max) {
  GnTheoryTables t;
  const KernelSpec kernel = cfg.kernel();
  if (kernel.kind() == KernelSpec::Kind::Attractive) {
    auto h = theory::gn_hetero_dist(kernel.eta_dist(), k_max);
    t.nk = h.nk_total;
    t.available = true;
    return t;
  }
  const Regime r = kernel.classify();
  if (r == Regime::BestSeller || r == Regime::Bible) return t;  // runaway: no table
  auto g = theory::gn_degree_dist(kernel, k_max);
  t.nk = g.nk;
  t.available = true;
  return t;
}

// Per-node pmf of the node-degree multinomial: theory densities are per unit
// time; node count per unit time is 1 for the GN, so nk is already a pmf.

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg, std::ostream& log) {
  RunResult result;
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << '\n';
    result.exit_code = 2;
    return result;
  }
  const auto t_start = std::chrono::steady_clock::now();
  const auto analyses = cfg.effective_analyses();
  const auto seeds = cfg.seeds();
  const std::string hash = cfg.config_hash();

  // Seed-level parallelism; results land in seed order so the aggregation
  // and every output byte is independent of scheduling.
  std::vector<SeedOut> outs(seeds.size());
  {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= seeds.size()) return;
        outs[i] = run_seed(cfg, seeds[i], analyses);
      }
    };
    const std::size_t n_threads =
        std::min<std::size_t>(std::size_t(cfg.jobs), seeds.size());
    if (n_threads <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t i = 0; i < n_threads; ++i) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
  }

  std::string header = "# netkinetics model=" + cfg.model + " config_hash=" + hash +
                       " seeds=" + std::to_string(cfg.seed_base) + "+" +
                       std::to_string(cfg.n_seeds) + "\n";
  OutputWriter writer(cfg.out_dir, header);
  json report;
  report["config_hash"] = hash;
  report["model"] = cfg.model;
  auto fail = [&](const std::string& name) { result.failed_checks.push_back(name); };

  if (cfg.model == "gn") {
    DistTable degree_agg;
    for (const auto& o : outs) degree_agg.merge(o.degree);
    GnTheoryTables theory = gn_theory_for(cfg, std::max<std::uint64_t>(64, degree_agg.max_index()));
    write_distribution_csv(writer.open("degree.csv"), degree_agg,
                           theory.available ? &theory.nk : nullptr, "k");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      OutputWriter sub(writer.dir() / ("seed_" + std::to_string(seeds[i])),
                       "# netkinetics model=gn config_hash=" + hash + " seed=" +
                           std::to_string(seeds[i]) + "\n");
      write_distribution_csv(sub.open("degree.csv"), outs[i].degree,
                             theory.available ? &theory.nk : nullptr, "k");
      writer.adopt("seed_" + std::to_string(seeds[i]), sub);
    }
    {
      json shares = json::array();
      for (const auto& o : outs) shares.push_back(o.share);
      report["max_degree_share"] = shares;
    }
    if (theory.available && cfg.check) {
      // Compare where the theory predicts at least ~10 counts per bin.
      DistTable th = DistTable::from_densities(theory.nk);
      std::uint64_t hi = 1;
      const double total = degree_agg.total();
      while (hi + 1 < theory.nk.size() && hi < 50 && theory.nk[hi + 1] * total >= 10.0)
        ++hi;
      auto rep = compare(degree_agg, th, 1, hi, cfg.z_tol);
      report["degree_check"] = {{"k_lo", 1},
                                {"k_hi", hi},
                                {"max_abs_z", rep.max_abs_z},
                                {"argmax_k", rep.argmax_k},
                                {"pass", rep.pass}};
      if (!rep.pass) fail("gn degree vs theory");
    }
    if (wants(analyses, "age")) {
      std::vector<DistTable> rows(kAgeBins);
      for (const auto& o : outs)
        for (std::size_t b = 0; b < o.age_rows.size(); ++b) rows[b].merge(o.age_rows[b]);
      auto f = writer.open("age_slices.csv");
      f << "x_lo,x_hi,k,count,density\n";
      for (std::size_t b = 0; b < kAgeBins; ++b) {
        if (rows[b].weight_sum() == 0) continue;  // empty bins are absent, not zero
        const double x_lo = double(b) / kAgeBins, x_hi = double(b + 1) / kAgeBins;
        for (std::uint64_t k = 1; k <= rows[b].max_index(); ++k) {
          if (rows[b].count(k) == 0) continue;
          f << fmt_g(x_lo) << ',' << fmt_g(x_hi) << ',' << k << ','
            << fmt_count(rows[b].count(k)) << ',' << fmt_g(rows[b].density(k)) << '\n';
        }
      }
      if (cfg.check && cfg.kernel().linear_family() && cfg.kernel().shift() == 0.0) {
        // Geometric-ratio check in the window around x = 0.25.
        const std::size_t b = std::size_t(0.25 * kAgeBins);
        const double mean = rows[b].mean_index();
        const double ratio = 1.0 - 1.0 / mean;
        const bool ok = std::abs(ratio / 0.5 - 1.0) <= 0.05;
        report["age_check"] = {{"x", 0.25}, {"ratio", ratio}, {"pass", ok}};
        if (!ok) fail("gn age-degree geometric ratio");
      }
    }
    if (wants(analyses, "corr")) {
      std::vector<double> counts(kCorrGrid * kCorrGrid, 0.0);
      double t_total = 0.0;
      for (const auto& o : outs) {
        for (std::size_t i = 0; i < counts.size(); ++i) counts[i] += o.corr_counts[i];
        t_total += double(cfg.steps);
      }
      auto f = writer.open("corr.csv");
      f << "k,l,count,c_hat,theory_c,z\n";
      for (std::uint64_t k = 1; k <= kCorrGrid; ++k) {
        for (std::uint64_t l = 1; l <= kCorrGrid; ++l) {
          const double c = counts[(k - 1) * kCorrGrid + (l - 1)];
          const double th = theory::corr_closed(k, l);
          if (c == 0.0 && th == 0.0) continue;
          double z = 0.0;
          if (th > 0.0) z = (c - t_total * th) / std::sqrt(t_total * th * (1.0 - th));
          f << k << ',' << l << ',' << fmt_count(c) << ',' << fmt_g(c / t_total) << ','
            << fmt_g(th) << ',' << fmt_g(z) << '\n';
        }
      }
      if (cfg.check && cfg.kernel().linear_family() && cfg.kernel().shift() == 0.0) {
        double max_z = 0.0;
        for (std::uint64_t k = 1; k <= 8; ++k)
          for (std::uint64_t l = 2; l <= 8; ++l) {
            const double th = theory::corr_closed(k, l);
            const double c = counts[(k - 1) * kCorrGrid + (l - 1)];
            const double z = (c - t_total * th) / std::sqrt(t_total * th * (1.0 - th));
            max_z = std::max(max_z, std::abs(z));
          }
        const bool ok = max_z <= cfg.z_tol;
        report["corr_check"] = {{"max_abs_z", max_z}, {"pass", ok}};
        if (!ok) fail("gn ancestor correlations vs closed form");
      }
    }
    if (wants(analyses, "components")) {
      DistTable in_comp, generations;
      for (const auto& o : outs) {
        in_comp.merge(o.in_comp);
        generations.merge(o.generations);
      }
      {
        std::vector<double> th(std::min<std::uint64_t>(in_comp.max_index(), 4096) + 1, 0.0);
        for (std::uint64_t s = 1; s < th.size(); ++s) th[s] = theory::in_component_density(s);
        write_distribution_csv(writer.open("components.csv"), in_comp,
                               cfg.kernel_kind == "constant" ? &th : nullptr, "s");
      }
      {
        auto f = writer.open("generations.csv");
        f << "g,count\n";
        for (std::uint64_t g = 0; g <= generations.max_index(); ++g)
          if (generations.count(g) > 0)
            f << g << ',' << fmt_count(generations.count(g)) << '\n';
      }
      if (cfg.check && cfg.kernel_kind == "constant") {
        DistTable th;
        for (std::uint64_t s = 1; s <= 4096; ++s)
          th.add(s, theory::in_component_density(s));
        auto rep = compare(in_comp, th, 1, 50, cfg.z_tol);
        report["in_component_check"] = {{"max_abs_z", rep.max_abs_z}, {"pass", rep.pass}};
        if (!rep.pass) fail("gn in-component sizes vs theory");
      }
    }
  }

  if (cfg.model == "wg") {
    DistTable in_agg, out_agg;
    for (const auto& o : outs) {
      in_agg.merge(o.in_deg);
      out_agg.merge(o.out_deg);
    }
    const std::uint64_t k_max = std::max<std::uint64_t>(
        256, std::max(in_agg.max_index(), out_agg.max_index()));
    auto th = theory::wg_closed_form(cfg.p, cfg.lambda_in, cfg.lambda_out, k_max);
    // Densities are per unit time; per-node pmf rescales by 1/p.
    std::vector<double> in_pmf(th.in_density), out_pmf(th.out_density);
    for (auto& v : in_pmf) v /= cfg.p;
    for (auto& v : out_pmf) v /= cfg.p;
    write_distribution_csv(writer.open("in_degree.csv"), in_agg, &in_pmf, "i");
    write_distribution_csv(writer.open("out_degree.csv"), out_agg, &out_pmf, "j");
    report["nu_in_theory"] = th.nu_in;
    report["nu_out_theory"] = th.nu_out;
    auto fit_in = fit_tail_exponent(in_agg, 30);
    auto fit_out = fit_tail_exponent(out_agg, 80);
    if (fit_in.available)
      report["nu_in_hat"] = {{"value", fit_in.exponent}, {"stderr", fit_in.stderr_}};
    if (fit_out.available)
      report["nu_out_hat"] = {{"value", fit_out.exponent}, {"stderr", fit_out.stderr_}};
    if (wants(analyses, "joint")) {
      std::vector<double> joint((kJointGrid + 1) * (kJointGrid + 1), 0.0);
      for (const auto& o : outs)
        for (std::size_t i = 0; i < joint.size(); ++i) joint[i] += o.joint[i];
      auto f = writer.open("joint.csv");
      f << "i,j,count,n_hat\n";
      const double t_total = double(cfg.steps) * double(seeds.size());
      for (std::uint64_t i = 0; i <= kJointGrid; ++i)
        for (std::uint64_t j = 0; j <= kJointGrid; ++j) {
          const double c = joint[i * (kJointGrid + 1) + j];
          if (c == 0) continue;
          f << i << ',' << j << ',' << fmt_count(c) << ',' << fmt_g(c / t_total) << '\n';
        }
    }
    if (cfg.check) {
      DistTable in_pmf_t = DistTable::from_densities(in_pmf);
      DistTable out_pmf_t = DistTable::from_densities(out_pmf);
      std::uint64_t hi_in = 1, hi_out = 2;
      while (hi_in < 50 && in_pmf[hi_in + 1] * in_agg.total() >= 10.0) ++hi_in;
      while (hi_out < 50 && out_pmf[hi_out + 1] * out_agg.total() >= 10.0) ++hi_out;
      auto rep_in = compare(in_agg, in_pmf_t, 0, hi_in, cfg.z_tol);
      auto rep_out = compare(out_agg, out_pmf_t, 1, hi_out, cfg.z_tol);
      report["in_degree_check"] = {{"max_abs_z", rep_in.max_abs_z}, {"pass", rep_in.pass}};
      report["out_degree_check"] = {{"max_abs_z", rep_out.max_abs_z}, {"pass", rep_out.pass}};
      if (!rep_in.pass) fail("wg in-degree vs closed form");
      if (!rep_out.pass) fail("wg out-degree vs closed form");
    }
  }

  if (cfg.model == "mg") {
    DistTable census_agg;
    double clusters_total = 0, self_total = 0, nodes_total = 0;
    for (const auto& o : outs) {
      census_agg.merge(o.census);
      clusters_total += double(o.clusters);
      self_total += double(o.self_links);
      nodes_total += double(o.node_count);
    }
    const double t_total = double(cfg.steps) * double(seeds.size());
    auto ck = theory::mg_cluster_dist(cfg.p, 4096);
    // Per-cluster pmf: c_k / (sum c_k).
    std::vector<double> pmf(ck);
    {
      double s = 0;
      for (double v : ck) s += v;
      for (auto& v : pmf) v /= s;
    }
    const bool theory_valid = cfg.lambda_in == 1.0 && cfg.lambda_out == 1.0;
    write_distribution_csv(writer.open("clusters.csv"), census_agg,
                           theory_valid ? &pmf : nullptr, "size");
    for (std::size_t i = 0; i < outs.size(); ++i) {
      OutputWriter sub(writer.dir() / ("seed_" + std::to_string(seeds[i])),
                       "# netkinetics model=mg config_hash=" + hash + " seed=" +
                           std::to_string(seeds[i]) + "\n");
      auto f = sub.open("census.csv");
      f << "size,count\n";
      for (std::uint64_t k = 1; k <= outs[i].census.max_index(); ++k)
        if (outs[i].census.count(k) > 0)
          f << k << ',' << fmt_count(outs[i].census.count(k)) << '\n';
      writer.adopt("seed_" + std::to_string(seeds[i]), sub);
    }
    if (wants(analyses, "inout")) {
      DistTable in_agg, out_agg;
      for (const auto& o : outs) {
        in_agg.merge(o.in_deg);
        out_agg.merge(o.out_deg);
      }
      write_distribution_csv(writer.open("in_degree.csv"), in_agg, nullptr, "i");
      write_distribution_csv(writer.open("out_degree.csv"), out_agg, nullptr, "j");
      if (cfg.p < 1.0) {
        const auto e = theory::mg_exponents(cfg.p, cfg.lambda_in, cfg.lambda_out);
        report["nu_in_theory"] = e.nu_in;
        report["nu_out_theory"] = e.nu_out;
      }
    }
    json kmaxes = json::array(), fracs = json::array();
    for (const auto& o : outs) {
      kmaxes.push_back(o.kmax_cluster);
      fracs.push_back(double(o.kmax_cluster) / double(o.node_count));
    }
    report["largest_cluster"] = kmaxes;
    report["largest_cluster_fraction"] = fracs;
    report["cluster_count_per_step"] = clusters_total / t_total;
    report["self_link_count"] = self_total;
    auto crit = theory::mg_criticality(cfg.p);
    report["pc"] = crit.pc;
    report["supercritical"] = crit.supercritical;
    if (crit.m2) report["m2_theory"] = *crit.m2;
    if (crit.tau_cluster) report["tau_theory"] = *crit.tau_cluster;
    {
      double m2_hat = 0;
      for (const auto& o : outs) m2_hat += o.m2_hat;
      m2_hat /= double(outs.size());
      report["m2_hat"] = m2_hat;
    }
    if (cfg.check) {
      // Cluster count identity: clusters - nodes + inter-cluster links = 0,
      // so clusters - self_links behaves as a (p - q) random walk endpoint.
      const double q = 1.0 - cfg.p;
      const double expect = (cfg.p - q) * t_total;
      const double sigma = std::sqrt(4.0 * cfg.p * q * t_total);
      const double dev = clusters_total - self_total - double(seeds.size()) - expect;
      const bool ok_count = std::abs(dev) <= 3.0 * sigma + 3.0;
      report["cluster_count_check"] = {{"deviation", dev}, {"sigma", sigma}, {"pass", ok_count}};
      if (!ok_count) fail("mg cluster count vs (p-q)t");
      if (theory_valid && crit.supercritical) {
        DistTable pmf_t = DistTable::from_densities(pmf);
        auto rep = compare(census_agg, pmf_t, 1, 30, cfg.z_tol);
        report["cluster_dist_check"] = {{"max_abs_z", rep.max_abs_z}, {"pass", rep.pass}};
        if (!rep.pass) fail("mg cluster sizes vs theory recursion");
      }
    }
  }

  // Manifest with enough to replay byte-for-byte.
  const auto t_end = std::chrono::steady_clock::now();
  json manifest;
  manifest["format_version"] = 1;
  manifest["tool"] = "netkinetics";
  manifest["tool_version"] = kToolVersion;
  manifest["rng"] = {{"algorithm", Rng::algorithm()}, {"version", Rng::version()}};
  manifest["config"] = cfg.to_json();
  manifest["config_hash"] = hash;
  manifest["seeds"] = seeds;
  manifest["runtime_seconds"] =
      std::chrono::duration<double>(t_end - t_start).count();
  json outputs = json::array();
  for (const auto& name : writer.files()) {
    std::ifstream f(fs::path(cfg.out_dir) / name, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    const std::string bytes = ss.str();
    outputs.push_back({{"file", name}, {"bytes", bytes.size()}, {"fnv64", to_hex(fnv1a64(bytes))}});
  }
  manifest["outputs"] = outputs;
  {
    std::ofstream mf(fs::path(cfg.out_dir) / "manifest.json", std::ios::binary);
    mf << manifest.dump(2) << '\n';
  }
  report["failed_checks"] = result.failed_checks;
  report["pass"] = result.failed_checks.empty();
  {
    std::ofstream rf(fs::path(cfg.out_dir) / "report.json", std::ios::binary);
    rf << report.dump(2) << '\n';
  }
  result.report = report;
  if (cfg.check && !result.failed_checks.empty()) result.exit_code = 1;
  log << "wrote " << writer.files().size() << " distribution files to " << cfg.out_dir
      << " (config " << hash << ")\n";
  for (const auto& f : result.failed_checks) log << "CHECK FAILED: " << f << '\n';
  return result;
}

int replay_manifest(const std::string& manifest_path, std::ostream& log) {
  json manifest;
  try {
    std::ifstream mf(manifest_path);
    if (!mf) throw std::runtime_error("cannot open " + manifest_path);
    mf >> manifest;
  } catch (const std::exception& e) {
    log << "replay: unreadable manifest: " << e.what() << '\n';
    return 2;
  }
  const fs::path dir = fs::path(manifest_path).parent_path();
  const std::string recorded_version = manifest.value("tool_version", "?");
  const bool version_match = recorded_version == kToolVersion;
  if (!version_match)
    log << "replay: warning: manifest written by version " << recorded_version
        << ", running " << kToolVersion << "; differences reported as warnings\n";

  // Every recorded distribution file must still exist.
  for (const auto& o : manifest.at("outputs")) {
    const fs::path p = dir / o.at("file").get<std::string>();
    if (!fs::exists(p)) {
      log << "replay: missing recorded output " << p.string() << '\n';
      return 2;
    }
  }

  ExperimentConfig cfg;
  try {
    cfg = ExperimentConfig::from_json(manifest.at("config"));
  } catch (const std::exception& e) {
    log << "replay: bad config in manifest: " << e.what() << '\n';
    return 2;
  }
  const fs::path scratch = dir / "replay_check";
  cfg.out_dir = scratch.string();
  cfg.check = false;
  std::ostringstream devnull;
  auto run = run_experiment(cfg, devnull);
  if (run.exit_code == 2) {
    log << "replay: config failed validation\n";
    return 2;
  }

  std::size_t diffs = 0;
  for (const auto& o : manifest.at("outputs")) {
    const std::string name = o.at("file").get<std::string>();
    auto slurp = [](const fs::path& p) {
      std::ifstream f(p, std::ios::binary);
      std::ostringstream ss;
      ss << f.rdbuf();
      return ss.str();
    };
    const std::string a = slurp(dir / name);
    const std::string b = slurp(scratch / name);
    if (a != b) {
      ++diffs;
      log << (version_match ? "replay: MISMATCH " : "replay: warning: mismatch ")
          << name << '\n';
    }
  }
  fs::remove_all(scratch);
  if (diffs == 0) {
    log << "replay: all " << manifest.at("outputs").size()
        << " distribution files byte-identical\n";
    return 0;
  }
  return version_match ? 1 : 0;
}

}  // namespace netkin
