#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "leoscale/link_dynamics.hpp"
#include "leoscale/montecarlo.hpp"
#include "leoscale/routing.hpp"
#include "leoscale/scalability.hpp"
#include "leoscale/topology.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string render(const std::string& format) const {
    std::ostringstream out;
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj;
        for (std::size_t c = 0; c < columns.size(); ++c) obj[columns[c]] = row[c];
        arr.push_back(obj);
      }
      out << arr.dump(2) << "\n";
      return out.str();
    }
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ",";
      out << columns[c];
    }
    out << "\n";
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out << ",";
        out << format_double(row[c]);
      }
      out << "\n";
    }
    return out.str();
  }
};

void write_output(const std::string& out_path, const std::string& content,
                  const json& manifest) {
  if (out_path.empty()) {
    std::cout << content;
    return;
  }
  {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << content;
  }
  std::ofstream mf(out_path + ".manifest.json", std::ios::binary);
  if (!mf) throw std::runtime_error("cannot open manifest file");
  mf << manifest.dump(2) << "\n";
}

json base_manifest(const std::string& subcommand, const std::string& out_path) {
  json m;
  m["tool"] = "leoscale";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["output"] = out_path;
  return m;
}

leoscale::MaintenancePolicy parse_period(const std::string& k) {
  if (k == "inf" || k == "INF" || k == "infinite") {
    return leoscale::MaintenancePolicy::infinite();
  }
  int value = 0;
  auto [ptr, ec] = std::from_chars(k.data(), k.data() + k.size(), value);
  if (ec != std::errc() || ptr != k.data() + k.size()) {
    throw std::invalid_argument("--k must be a positive integer or 'inf'");
  }
  return leoscale::MaintenancePolicy::finite(value);
}

leoscale::Region parse_region(const std::string& r) {
  if (r == "I") return leoscale::Region::I;
  if (r == "II") return leoscale::Region::II;
  if (r == "III") return leoscale::Region::III;
  if (r == "IV") return leoscale::Region::IV;
  throw std::invalid_argument("--region must be one of I, II, III, IV");
}

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

// Options shared by the Monte-Carlo subcommands.
struct SimOptions {
  double alpha = NAN;
  double beta = NAN;
  double sigma = 1e-12;
  std::string k = "10";
  int warmup = 100;
  int measure = 200;
  int replications = 50;
  std::uint64_t seed = 1;
  int threads = 0;
  bool fixed_traffic = false;
  bool pooled = false;

  leoscale::LinkDynamics dynamics() const {
    require(!std::isnan(alpha), "--alpha is required");
    require(!std::isnan(beta), "--beta is required");
    return {alpha, beta};
  }
  leoscale::SimConfig sim_config() const {
    leoscale::SimConfig cfg;
    cfg.warmup_slots = warmup;
    cfg.measure_slots = measure;
    cfg.replications = replications;
    cfg.master_seed = seed;
    cfg.maintenance = parse_period(k);
    require(!cfg.maintenance.is_infinite(),
            "--k must be finite for simulation commands");
    cfg.sigma = sigma;
    cfg.refresh_traffic_each_slot = !fixed_traffic;
    cfg.pooled_estimation = pooled;
    cfg.threads = threads;
    cfg.validate();
    return cfg;
  }
  void to_manifest(json& m) const {
    m["params"]["alpha"] = alpha;
    m["params"]["beta"] = beta;
    m["params"]["sigma"] = sigma;
    m["params"]["k"] = k;
    m["params"]["warmup"] = warmup;
    m["params"]["measure"] = measure;
    m["params"]["replications"] = replications;
    m["params"]["threads"] = threads;
    m["params"]["fixed_traffic"] = fixed_traffic;
    m["params"]["pooled"] = pooled;
    m["seed"] = seed;
  }
};

void add_sim_options(CLI::App* sub, SimOptions& o) {
  sub->add_option("--alpha", o.alpha, "per-slot link failure probability");
  sub->add_option("--beta", o.beta, "per-slot link recovery probability");
  sub->add_option("--sigma", o.sigma, "per-hop contention overhead (Gbps)");
  sub->add_option("--k", o.k, "maintenance period in slots");
  sub->add_option("--warmup", o.warmup, "warm-up slots before measurement");
  sub->add_option("--measure", o.measure, "measurement slots");
  sub->add_option("--replications", o.replications, "independent replications");
  sub->add_option("--seed", o.seed, "master seed");
  sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
  sub->add_flag("--fixed-traffic", o.fixed_traffic,
                "draw one permutation per replication instead of per slot");
  sub->add_flag("--pooled", o.pooled,
                "pool transition counts across replications for estimation");
}

template <typename T>
void maybe_set(const json& cfg, const char* key, T& value) {
  if (cfg.contains(key)) value = cfg.at(key).get<T>();
}

void apply_sim_config_file(const json& cfg, SimOptions& o) {
  maybe_set(cfg, "alpha", o.alpha);
  maybe_set(cfg, "beta", o.beta);
  maybe_set(cfg, "sigma", o.sigma);
  maybe_set(cfg, "k", o.k);
  maybe_set(cfg, "warmup", o.warmup);
  maybe_set(cfg, "measure", o.measure);
  maybe_set(cfg, "replications", o.replications);
  maybe_set(cfg, "seed", o.seed);
  maybe_set(cfg, "threads", o.threads);
  maybe_set(cfg, "fixed_traffic", o.fixed_traffic);
  maybe_set(cfg, "pooled", o.pooled);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LEO constellation capacity-scalability toolkit"};
  app.set_version_flag("--version", std::string("leoscale ") + kVersion);
  app.require_subcommand(1);

  // Pre-scan for --config so file values become defaults that explicit
  // flags then override.
  json config = json::object();
  for (int i = 1; i < argc; ++i) {
    std::string arg = argv[i];
    std::string path;
    if (arg == "--config" && i + 1 < argc) {
      path = argv[i + 1];
    } else if (arg.rfind("--config=", 0) == 0) {
      path = arg.substr(9);
    }
    if (!path.empty()) {
      std::ifstream f(path);
      if (!f) {
        std::cerr << "error: cannot read config file: " << path << "\n";
        return 1;
      }
      try {
        f >> config;
      } catch (const json::exception& e) {
        std::cerr << "error: invalid config JSON: " << e.what() << "\n";
        return 1;
      }
    }
  }

  std::string config_path;  // consumed above; registered so CLI11 accepts it
  std::string out_path;
  std::string format = "csv";

  // ---- analyze ----
  struct {
    double n_min = 100, n_max = 1e8;
    int points = 200;
    double sigma = 0.0, alpha = NAN, beta = NAN;
    std::string k = "10";
    std::string region;
  } an;
  maybe_set(config, "n_min", an.n_min);
  maybe_set(config, "n_max", an.n_max);
  maybe_set(config, "points", an.points);
  maybe_set(config, "sigma", an.sigma);
  maybe_set(config, "alpha", an.alpha);
  maybe_set(config, "beta", an.beta);
  maybe_set(config, "k", an.k);
  maybe_set(config, "region", an.region);
  CLI::App* analyze = app.add_subcommand(
      "analyze", "scalability curves tau, tau_1, tau_inf over a log-spaced n grid");
  analyze->add_option("--n-min", an.n_min, "smallest n");
  analyze->add_option("--n-max", an.n_max, "largest n");
  analyze->add_option("--points", an.points, "grid points (log-spaced)");
  analyze->add_option("--sigma", an.sigma, "per-hop contention overhead");
  analyze->add_option("--alpha", an.alpha, "failure probability");
  analyze->add_option("--beta", an.beta, "recovery probability");
  analyze->add_option("--k", an.k, "maintenance period or 'inf'");
  analyze->add_option("--region", an.region, "also emit the region bound (I-IV)");

  // ---- optimal-size ----
  struct {
    double sigma = NAN, alpha = NAN, beta = NAN, hk_override = NAN;
    std::string k = "10";
  } os_;
  maybe_set(config, "sigma", os_.sigma);
  maybe_set(config, "alpha", os_.alpha);
  maybe_set(config, "beta", os_.beta);
  maybe_set(config, "hk_override", os_.hk_override);
  maybe_set(config, "k", os_.k);
  CLI::App* optimal = app.add_subcommand(
      "optimal-size", "optimal constellation size and maximum scalability");
  optimal->add_option("--sigma", os_.sigma, "per-hop contention overhead");
  optimal->add_option("--alpha", os_.alpha, "failure probability");
  optimal->add_option("--beta", os_.beta, "recovery probability");
  optimal->add_option("--k", os_.k, "maintenance period or 'inf'");
  optimal->add_option("--hk-override", os_.hk_override,
                      "use this consensus bound instead of deriving it");

  // ---- simulate ----
  SimOptions sim_opts;
  int sim_n = 0;
  apply_sim_config_file(config, sim_opts);
  maybe_set(config, "n", sim_n);
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Monte-Carlo replications at a single constellation size");
  simulate->add_option("--n", sim_n, "satellite count (perfect square)");
  add_sim_options(simulate, sim_opts);

  // ---- sweep ----
  SimOptions sweep_opts;
  std::vector<int> sweep_n;
  apply_sim_config_file(config, sweep_opts);
  maybe_set(config, "n_list", sweep_n);
  CLI::App* sweep_cmd = app.add_subcommand(
      "sweep", "Monte-Carlo sweep over constellation sizes");
  sweep_cmd->add_option("--n", sweep_n, "satellite counts (perfect squares)");
  add_sim_options(sweep_cmd, sweep_opts);

  // ---- trajectory ----
  struct {
    int n = 0, slots = 900;
    double alpha = NAN, beta = NAN;
    std::uint64_t seed = 1;
  } tr;
  maybe_set(config, "n", tr.n);
  maybe_set(config, "slots", tr.slots);
  maybe_set(config, "alpha", tr.alpha);
  maybe_set(config, "beta", tr.beta);
  maybe_set(config, "seed", tr.seed);
  CLI::App* traj = app.add_subcommand(
      "trajectory", "per-slot ON-link count and connectivity trajectory");
  traj->add_option("--n", tr.n, "satellite count (perfect square)");
  traj->add_option("--slots", tr.slots, "number of slots to evolve");
  traj->add_option("--alpha", tr.alpha, "failure probability");
  traj->add_option("--beta", tr.beta, "recovery probability");
  traj->add_option("--seed", tr.seed, "seed");

  // ---- fit ----
  struct {
    std::string input;
    double alpha = NAN, beta = NAN;
    std::string k = "10";
  } ft;
  maybe_set(config, "input", ft.input);
  maybe_set(config, "alpha", ft.alpha);
  maybe_set(config, "beta", ft.beta);
  maybe_set(config, "k", ft.k);
  CLI::App* fit_cmd = app.add_subcommand(
      "fit", "fit overhead coefficients (a, b) from a sweep CSV");
  fit_cmd->add_option("--input", ft.input, "sweep CSV produced by the sweep command");
  fit_cmd->add_option("--alpha", ft.alpha, "failure probability");
  fit_cmd->add_option("--beta", ft.beta, "recovery probability");
  fit_cmd->add_option("--k", ft.k, "maintenance period");

  for (CLI::App* sub : {analyze, optimal, simulate, sweep_cmd, traj, fit_cmd}) {
    sub->add_option("--config", config_path, "JSON file with parameter defaults");
    sub->add_option("--out", out_path, "output file (stdout when omitted)");
    sub->add_option("--format", format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
  }
  maybe_set(config, "out", out_path);
  maybe_set(config, "format", format);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 1;
  }

  try {
    if (*analyze) {
      require(!std::isnan(an.alpha), "--alpha is required");
      require(!std::isnan(an.beta), "--beta is required");
      require(an.n_min >= 1 && an.n_max >= an.n_min, "need 1 <= n-min <= n-max");
      require(an.points >= 1, "--points must be >= 1");
      const leoscale::LinkDynamics dyn(an.alpha, an.beta);
      const auto policy = parse_period(an.k);
      const double hk = leoscale::consensus_lower_bound(dyn, policy);
      std::optional<leoscale::Region> region;
      if (!an.region.empty()) region = parse_region(an.region);
      const int region_k = policy.is_infinite() ? 1 : policy.period();

      Table table;
      table.columns = {"n",      "tau",           "tau1",
                       "tauInf", "contention_term", "consensus_term"};
      if (region) table.columns.push_back("region_bound");
      for (int i = 0; i < an.points; ++i) {
        const double t = an.points == 1
                             ? 0.0
                             : static_cast<double>(i) / (an.points - 1);
        const double n = an.n_min * std::pow(an.n_max / an.n_min, t);
        const auto env = leoscale::tau_envelope(n, an.sigma, dyn);
        std::vector<double> row = {n,
                                   leoscale::tau_upper(n, an.sigma, hk),
                                   env.tau_1,
                                   env.tau_inf,
                                   an.sigma * std::pow(n, 1.5),
                                   4.0 * n * hk};
        if (region) {
          row.push_back(leoscale::region_tau_bound(*region, n, an.sigma, dyn,
                                                   region_k));
        }
        table.rows.push_back(std::move(row));
      }
      json manifest = base_manifest("analyze", out_path);
      manifest["params"] = {{"n_min", an.n_min}, {"n_max", an.n_max},
                            {"points", an.points}, {"sigma", an.sigma},
                            {"alpha", an.alpha}, {"beta", an.beta},
                            {"k", an.k}, {"region", an.region},
                            {"format", format}};
      write_output(out_path, table.render(format), manifest);
      return 0;
    }

    if (*optimal) {
      require(!std::isnan(os_.sigma), "--sigma is required");
      double hk;
      if (!std::isnan(os_.hk_override)) {
        require(os_.hk_override >= 0, "--hk-override must be >= 0");
        hk = os_.hk_override;
      } else {
        require(!std::isnan(os_.alpha) && !std::isnan(os_.beta),
                "--alpha/--beta (or --hk-override) are required");
        const leoscale::LinkDynamics dyn(os_.alpha, os_.beta);
        hk = leoscale::consensus_lower_bound(dyn, parse_period(os_.k));
      }
      const auto result = leoscale::max_scalability(os_.sigma, hk);
      json report;
      report["sigma"] = os_.sigma;
      report["hk"] = hk;
      report["n_star"] = result.n_star;
      report["tau_at_n_star"] = result.tau_at_n_star;
      report["eight_sqrt_n_star"] = result.eight_sqrt_n_star;
      if (hk > 0) {
        report["n_star_contention_free_approx"] = leoscale::n_star_approx(
            leoscale::ExtremeScenario::kContentionFree, os_.sigma, hk);
      }
      if (os_.sigma > 0) {
        report["n_star_consensus_free_approx"] = leoscale::n_star_approx(
            leoscale::ExtremeScenario::kConsensusFree, os_.sigma, hk);
      }
      json manifest = base_manifest("optimal-size", out_path);
      manifest["params"] = {{"sigma", os_.sigma}, {"alpha", os_.alpha},
                            {"beta", os_.beta}, {"k", os_.k},
                            {"hk_override", os_.hk_override}};
      write_output(out_path, report.dump(2) + "\n", manifest);
      return 0;
    }

    if (*simulate) {
      require(sim_n > 0, "--n is required");
      const auto dyn = sim_opts.dynamics();
      const auto cfg = sim_opts.sim_config();
      const auto geometry = leoscale::ConstellationGeometry::square(sim_n);
      Table table;
      table.columns = {"replication", "n", "avg_hops", "reachable_fraction",
                       "alpha_hat", "beta_hat", "tau_sim",
                       "mean_connectivity", "mean_on_links"};
      for (int rep = 0; rep < cfg.replications; ++rep) {
        const auto r = leoscale::run_replication(geometry, dyn, cfg, rep);
        table.rows.push_back({static_cast<double>(rep), static_cast<double>(r.n),
                              r.avg_hops, r.reachable_fraction, r.alpha_hat,
                              r.beta_hat, r.tau_sim, r.mean_connectivity,
                              r.mean_on_links});
      }
      json manifest = base_manifest("simulate", out_path);
      sim_opts.to_manifest(manifest);
      manifest["params"]["n"] = sim_n;
      manifest["params"]["format"] = format;
      write_output(out_path, table.render(format), manifest);
      return 0;
    }

    if (*sweep_cmd) {
      require(!sweep_n.empty(), "--n is required (one or more perfect squares)");
      const auto dyn = sweep_opts.dynamics();
      const auto cfg = sweep_opts.sim_config();
      const auto result = leoscale::sweep(sweep_n, dyn, cfg);
      Table table;
      table.columns = {"n", "tau_mean", "tau_std", "tau_analytic", "avg_hops",
                       "reachable_fraction", "alpha_hat", "beta_hat"};
      for (const auto& rec : result.records) {
        table.rows.push_back({static_cast<double>(rec.n), rec.tau_mean,
                              rec.tau_std, rec.tau_analytic, rec.avg_hops,
                              rec.reachable_fraction, rec.alpha_hat,
                              rec.beta_hat});
      }
      json manifest = base_manifest("sweep", out_path);
      sweep_opts.to_manifest(manifest);
      manifest["params"]["n_list"] = sweep_n;
      manifest["params"]["format"] = format;
      manifest["pooled_alpha_hat"] = result.pooled_alpha_hat;
      manifest["pooled_beta_hat"] = result.pooled_beta_hat;
      write_output(out_path, table.render(format), manifest);
      return 0;
    }

    if (*traj) {
      require(tr.n > 0, "--n is required");
      require(!std::isnan(tr.alpha) && !std::isnan(tr.beta),
              "--alpha and --beta are required");
      const leoscale::LinkDynamics dyn(tr.alpha, tr.beta);
      const auto geometry = leoscale::ConstellationGeometry::square(tr.n);
      const auto points = leoscale::trajectory(geometry, dyn, tr.slots, tr.seed);
      Table table;
      table.columns = {"slot", "on_links", "connectivity"};
      for (const auto& p : points) {
        table.rows.push_back({static_cast<double>(p.slot),
                              static_cast<double>(p.on_links), p.connectivity});
      }
      json manifest = base_manifest("trajectory", out_path);
      manifest["params"] = {{"n", tr.n}, {"slots", tr.slots},
                            {"alpha", tr.alpha}, {"beta", tr.beta},
                            {"format", format}};
      manifest["seed"] = tr.seed;
      write_output(out_path, table.render(format), manifest);
      return 0;
    }

    if (*fit_cmd) {
      require(!ft.input.empty(), "--input is required");
      require(!std::isnan(ft.alpha) && !std::isnan(ft.beta),
              "--alpha and --beta are required");
      const leoscale::LinkDynamics dyn(ft.alpha, ft.beta);
      const auto policy = parse_period(ft.k);
      require(!policy.is_infinite(), "--k must be finite for fitting");

      std::ifstream in(ft.input);
      require(static_cast<bool>(in), "cannot read input file: " + ft.input);
      std::string line;
      require(static_cast<bool>(std::getline(in, line)), "empty sweep CSV");
      const auto header = split_csv_line(line);
      auto column = [&](const std::string& name) {
        for (std::size_t i = 0; i < header.size(); ++i) {
          if (header[i] == name) return i;
        }
        throw std::invalid_argument("sweep CSV is missing column: " + name);
      };
      const std::size_t n_col = column("n");
      const std::size_t tau_col = column("tau_mean");
      const std::size_t hops_col = column("avg_hops");
      leoscale::SweepResult sweep_data;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        require(fields.size() == header.size(), "malformed sweep CSV row");
        leoscale::SweepRecord rec;
        rec.n = static_cast<int>(std::lround(std::stod(fields[n_col])));
        rec.tau_mean = std::stod(fields[tau_col]);
        rec.avg_hops = std::stod(fields[hops_col]);
        sweep_data.records.push_back(rec);
      }
      const auto fit =
          leoscale::fit_overheads(sweep_data, policy.period(), dyn);
      json report;
      report["a_hat"] = fit.a_hat;
      report["b_hat"] = fit.b_hat;
      report["residual"] = fit.residual;
      report["clamped"] = fit.clamped;
      json manifest = base_manifest("fit", out_path);
      manifest["params"] = {{"input", ft.input}, {"alpha", ft.alpha},
                            {"beta", ft.beta}, {"k", ft.k}};
      write_output(out_path, report.dump(2) + "\n", manifest);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
