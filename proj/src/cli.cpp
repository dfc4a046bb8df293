#include "lsnw/cli.hpp"
#include "lsnw/error.hpp"
#include "lsnw/estimator.hpp"
#include "lsnw/harness.hpp"
#include "lsnw/io.hpp"
#include "lsnw/kernels.hpp"
#include "lsnw/simulate.hpp"

#include <CLI11.hpp>

#include <array>
#include <fstream>
#include <iostream>
#include <random>

namespace lsnw {

namespace {

constexpr const char* kVersion = "0.1.0";
constexpr double kDensityFloor = 1e-8;
constexpr int kMomentQuadPoints = 4096;

// Raw option values; unset optionals mean "not given".
struct Flags
{
  std::optional<std::string> process, input, column, out, format, k_time, k_space;
  std::optional<int> T, L, mc_runs, d, t, threads, burn_in;
  std::optional<double> xi, h, u, sigma, stationary_u;
  std::optional<std::uint64_t> seed;
  std::vector<int> T_list;
  std::vector<double> u_grid, sigmas, cut_points, x;
  bool paper_scale = false;
  bool force_boundary = false;
  bool allow_signed_weights = false;
};

template<class T>
void read_key(const Json& j, const char* key, std::optional<T>& dst)
{
  if (j.contains(key))
    dst = j.at(key).get<T>();
}

template<class T>
void read_key(const Json& j, const char* key, std::vector<T>& dst)
{
  if (j.contains(key))
    dst = j.at(key).get<std::vector<T>>();
}

void read_key(const Json& j, const char* key, bool& dst)
{
  if (j.contains(key))
    dst = j.at(key).get<bool>();
}

Flags flags_from_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw InputError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + path + "': " + e.what());
  }
  static const std::array<const char*, 28> known{
    "process", "input",  "column", "out",        "format",     "k_time",
    "k_space", "T",      "L",      "mc_runs",    "d",          "t",
    "threads", "burn_in", "xi",    "h",          "u",          "sigma",
    "stationary_u", "seed", "T_list", "u_grid",  "sigmas",     "cut_points",
    "x",       "paper_scale", "force_boundary", "allow_signed_weights"
  };
  for (const auto& [key, _] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw InputError("unknown config key '" + key + "'");
  }

  Flags f;
  try {
    read_key(j, "process", f.process);
    read_key(j, "input", f.input);
    read_key(j, "column", f.column);
    read_key(j, "out", f.out);
    read_key(j, "format", f.format);
    read_key(j, "k_time", f.k_time);
    read_key(j, "k_space", f.k_space);
    read_key(j, "T", f.T);
    read_key(j, "L", f.L);
    read_key(j, "mc_runs", f.mc_runs);
    read_key(j, "d", f.d);
    read_key(j, "t", f.t);
    read_key(j, "threads", f.threads);
    read_key(j, "burn_in", f.burn_in);
    read_key(j, "xi", f.xi);
    read_key(j, "h", f.h);
    read_key(j, "u", f.u);
    read_key(j, "sigma", f.sigma);
    read_key(j, "stationary_u", f.stationary_u);
    read_key(j, "seed", f.seed);
    read_key(j, "T_list", f.T_list);
    read_key(j, "u_grid", f.u_grid);
    read_key(j, "sigmas", f.sigmas);
    read_key(j, "cut_points", f.cut_points);
    read_key(j, "x", f.x);
    read_key(j, "paper_scale", f.paper_scale);
    read_key(j, "force_boundary", f.force_boundary);
    read_key(j, "allow_signed_weights", f.allow_signed_weights);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("config file '" + path + "': " + e.what());
  }
  if (f.xi && f.h)
    throw InputError("config file sets both xi and h");
  return f;
}

template<class T>
void overlay(std::optional<T>& base, const std::optional<T>& top)
{
  if (top)
    base = top;
}

template<class T>
void overlay(std::vector<T>& base, const std::vector<T>& top)
{
  if (!top.empty())
    base = top;
}

// CLI values take precedence over the config file.
Flags merge(Flags file, const Flags& cli)
{
  overlay(file.process, cli.process);
  overlay(file.input, cli.input);
  overlay(file.column, cli.column);
  overlay(file.out, cli.out);
  overlay(file.format, cli.format);
  overlay(file.k_time, cli.k_time);
  overlay(file.k_space, cli.k_space);
  overlay(file.T, cli.T);
  overlay(file.L, cli.L);
  overlay(file.mc_runs, cli.mc_runs);
  overlay(file.d, cli.d);
  overlay(file.t, cli.t);
  overlay(file.threads, cli.threads);
  overlay(file.burn_in, cli.burn_in);
  if (cli.xi || cli.h) {
    file.xi = cli.xi;
    file.h = cli.h;
  }
  if (cli.t || cli.u) {
    file.t = cli.t;
    file.u = cli.u;
  }
  overlay(file.sigma, cli.sigma);
  overlay(file.stationary_u, cli.stationary_u);
  overlay(file.seed, cli.seed);
  overlay(file.T_list, cli.T_list);
  overlay(file.u_grid, cli.u_grid);
  overlay(file.sigmas, cli.sigmas);
  overlay(file.cut_points, cli.cut_points);
  overlay(file.x, cli.x);
  file.paper_scale = file.paper_scale || cli.paper_scale;
  file.force_boundary = file.force_boundary || cli.force_boundary;
  file.allow_signed_weights = file.allow_signed_weights || cli.allow_signed_weights;
  return file;
}

struct Invocation
{
  std::string command;
  ExperimentConfig cfg;
  Flags flags;
  bool seed_generated = false;
  std::string format = "csv";
};

Invocation build_invocation(const std::string& command, const Flags& f)
{
  Invocation inv;
  inv.command = command;
  inv.flags = f;
  auto& cfg = inv.cfg;

  if (f.format) {
    if (*f.format != "csv" && *f.format != "json")
      throw InputError("--format must be csv or json");
    inv.format = *f.format;
  }
  if (f.process) {
    ProcessSpec spec;
    spec.family = parse_process(*f.process);
    if (f.burn_in)
      spec.burn_in = *f.burn_in;
    cfg.process = spec;
  }
  if (f.k_time)
    cfg.k_time = KernelSpec(parse_kernel(*f.k_time));
  if (f.k_space)
    cfg.k_space = KernelSpec(parse_kernel(*f.k_space));
  cfg.d = f.d.value_or(cfg.process ? cfg.process->lag_order() : 1);
  if (cfg.d < 1)
    throw InputError("--d must be at least 1");
  if (f.T)
    cfg.T = *f.T;
  if (f.L)
    cfg.L = *f.L;
  if (f.mc_runs)
    cfg.mc_runs = *f.mc_runs;
  if (f.paper_scale) {
    if (f.T_list.empty())
      cfg.T_list = { 5000, 10000, 15000 };
    if (!f.L)
      cfg.L = 1000;
    if (!f.mc_runs)
      cfg.mc_runs = 100;
  }
  if (!f.T_list.empty())
    cfg.T_list = f.T_list;
  if (cfg.T_list.empty())
    cfg.T_list = { 500, 1000, 2000 };
  cfg.u_grid = f.u_grid.empty() ? std::vector<double>{ 0.4, 0.45, 0.5, 0.55, 0.6 }
                                 : f.u_grid;
  cfg.sigmas =
    f.sigmas.empty() ? std::vector<double>{ 1.0, 1e-1, 1e-2, 1e-3 } : f.sigmas;
  cfg.cut_points = f.cut_points.empty()
                     ? std::vector<double>{ 1.0 / 3.0, 2.0 / 3.0, 1.0 }
                     : f.cut_points;
  cfg.xi = f.xi;
  cfg.h = f.h;
  cfg.t = f.t;
  cfg.u = f.u;
  cfg.sigma = f.sigma;
  cfg.force_boundary = f.force_boundary;
  cfg.allow_signed_weights = f.allow_signed_weights;
  cfg.threads = f.threads.value_or(0);
  if (f.seed) {
    cfg.seed = *f.seed;
  } else if (command != "kernels-check") {
    std::random_device rd;
    cfg.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    inv.seed_generated = true;
  }
  return inv;
}

Json config_json(const Invocation& inv)
{
  const auto& c = inv.cfg;
  Json j;
  j["command"] = inv.command;
  j["process"] = c.process ? Json(std::string(process_name(c.process->family)))
                           : Json(nullptr);
  j["burn_in"] = c.process ? Json(c.process->burn_in) : Json(nullptr);
  j["input"] = inv.flags.input ? Json(*inv.flags.input) : Json(nullptr);
  j["column"] = inv.flags.column ? Json(*inv.flags.column) : Json(nullptr);
  j["T"] = c.T;
  j["t"] = c.t ? Json(*c.t) : Json(nullptr);
  j["u"] = c.u ? Json(*c.u) : Json(nullptr);
  j["L"] = c.L;
  j["mc_runs"] = c.mc_runs;
  j["k_time"] = std::string(kernel_name(c.k_time.family));
  j["k_space"] = std::string(kernel_name(c.k_space.family));
  j["xi"] = c.h ? Json(nullptr) : Json(c.effective_xi());
  j["h"] = c.h ? Json(*c.h) : Json(nullptr);
  j["d"] = c.d;
  j["sigma"] = c.sigma ? Json(*c.sigma) : Json(nullptr);
  j["seed"] = c.seed;
  j["seed_generated"] = inv.seed_generated;
  j["T_list"] = c.T_list;
  j["u_grid"] = c.u_grid;
  j["sigmas"] = c.sigmas;
  j["cut_points"] = c.cut_points;
  j["force_boundary"] = c.force_boundary;
  j["allow_signed_weights"] = c.allow_signed_weights;
  j["paper_scale"] = inv.flags.paper_scale;
  return j;
}

struct Output
{
  std::string csv;
  Json rows = Json::array();
  Json extra = Json::object();
};

Series input_series(const Invocation& inv)
{
  if (!inv.flags.input)
    throw InputError("--input is required");
  const ColumnSelector sel =
    inv.flags.column ? ColumnSelector::parse(*inv.flags.column) : ColumnSelector{};
  return load_series_csv(*inv.flags.input, sel);
}

Series input_or_simulated(const Invocation& inv)
{
  if (inv.flags.input)
    return input_series(inv);
  if (!inv.cfg.process)
    throw InputError("either --input or --process is required");
  return simulate(*inv.cfg.process, inv.cfg.T, inv.cfg.seed);
}

std::string csv_line(std::initializer_list<std::string> cells)
{
  std::string s;
  for (const auto& c : cells) {
    if (!s.empty())
      s += ',';
    s += c;
  }
  return s + "\n";
}

Output cmd_simulate(const Invocation& inv)
{
  if (!inv.cfg.process)
    throw InputError("simulate needs --process");
  const auto& f = inv.flags;
  const Series s =
    f.stationary_u
      ? simulate_stationary_at(*inv.cfg.process, *f.stationary_u, inv.cfg.T,
                               inv.cfg.seed)
      : simulate(*inv.cfg.process, inv.cfg.T, inv.cfg.seed);
  Output o;
  o.csv = series_csv(s);
  for (Eigen::Index i = 0; i < s.size(); ++i)
    o.rows.push_back(s.values(i));
  if (f.stationary_u)
    o.extra["stationary_u"] = *f.stationary_u;
  return o;
}

Output cmd_estimate(const Invocation& inv, std::ostream& err)
{
  const auto& cfg = inv.cfg;
  const Series s = input_or_simulated(inv);
  const int T = static_cast<int>(s.size());
  const int t = cfg.time_index_for(T);
  const double h = cfg.bandwidth_for(T);
  const LagEmbedding emb = lag_embed(s, cfg.d);
  Eigen::VectorXd x;
  if (!inv.flags.x.empty())
    x = Eigen::Map<const Eigen::VectorXd>(inv.flags.x.data(), inv.flags.x.size());
  else
    x = lag_vector(s, t, cfg.d);

  const WeightVector w =
    nw_weights(emb, t, x, cfg.k_time, cfg.k_space, h, cfg.nw_options());
  const double J = density_diagnostic(emb, t, x, cfg.k_time, cfg.k_space, h);
  if (J < kDensityFloor)
    err << "warning: density diagnostic " << J
        << " below floor; the estimate is unreliable\n";

  Output o;
  const double mean = conditional_mean(w, emb.y);
  o.extra["t"] = t;
  o.extra["u"] = static_cast<double>(t) / T;
  o.extra["h"] = h;
  o.extra["x"] = std::vector<double>(x.data(), x.data() + x.size());
  o.extra["mean"] = mean;
  o.extra["density_diagnostic"] = J;
  o.extra["signed_weights"] = w.has_negative;
  if (w.has_negative) {
    o.csv = "mean\n" + format_double(mean) + "\n";
    o.rows.push_back(Json{ { "mean", mean } });
    return o;
  }
  const StepCdf F = conditional_cdf(w, emb.y);
  o.csv = "y,cdf\n";
  for (Eigen::Index i = 0; i < F.jump_points.size(); ++i) {
    o.csv += csv_line({ format_double(F.jump_points(i)),
                        format_double(F.cum_weights(i)) });
    o.rows.push_back(Json{ { "y", F.jump_points(i) }, { "cdf", F.cum_weights(i) } });
  }
  return o;
}

Output replication_output(const ReplicationResult& r,
                          int T,
                          int L,
                          std::optional<double> sigma)
{
  const double u = static_cast<double>(r.t) / T;
  Output o;
  if (sigma) {
    o.csv = "T,t,u,h,L,sigma,w1\n" +
            csv_line({ std::to_string(T), std::to_string(r.t), format_double(u),
                       format_double(r.h), std::to_string(L),
                       format_double(*sigma), format_double(r.w1) });
  } else {
    o.csv = "T,t,u,h,L,w1\n" +
            csv_line({ std::to_string(T), std::to_string(r.t), format_double(u),
                       format_double(r.h), std::to_string(L),
                       format_double(r.w1) });
  }
  Json row{ { "T", T }, { "t", r.t }, { "u", u }, { "h", r.h }, { "L", L } };
  if (sigma)
    row["sigma"] = *sigma;
  row["w1"] = r.w1;
  o.rows.push_back(row);
  return o;
}

Output cmd_algo1(const Invocation& inv)
{
  const auto r = run_algorithm1_detailed(inv.cfg);
  return replication_output(r, inv.cfg.T, inv.cfg.L, std::nullopt);
}

Output cmd_algo2(const Invocation& inv)
{
  const Series base = input_series(inv);
  const auto r = run_algorithm2_detailed(base, inv.cfg);
  return replication_output(r, static_cast<int>(base.size()), inv.cfg.L,
                            inv.cfg.sigma);
}

Output cmd_converge(const Invocation& inv, std::ostream& err)
{
  const ConvergenceReport rep = convergence_study(inv.cfg);
  Output o;
  o.csv = convergence_csv(rep);
  for (const auto& row : rep.rows)
    o.rows.push_back(to_json(row));
  o.extra["notes"] = rep.notes;
  for (const auto& n : rep.notes)
    err << "note: " << n << "\n";
  return o;
}

Output cmd_sweep(const Invocation& inv)
{
  const Series base = input_series(inv);
  const auto rows = sigma_sweep(base, inv.cfg);
  Output o;
  o.csv = "sigma,cut,S,t,h,w1\n";
  for (const auto& r : rows) {
    o.csv += csv_line({ format_double(r.sigma), format_double(r.cut),
                        std::to_string(r.S), std::to_string(r.t),
                        format_double(r.h), format_double(r.w1) });
    o.rows.push_back(Json{ { "sigma", r.sigma },
                           { "cut", r.cut },
                           { "S", r.S },
                           { "t", r.t },
                           { "h", r.h },
                           { "w1", r.w1 } });
  }
  return o;
}

Output cmd_fit(const Invocation& inv, std::ostream& err)
{
  const Series s = input_or_simulated(inv);
  const FitReport fit = fit_report(s, inv.cfg);
  Output o;
  o.csv = "t,y,fitted\n";
  for (Eigen::Index i = 0; i < fit.t.size(); ++i) {
    o.csv += csv_line({ std::to_string(fit.t(i)), format_double(fit.observed(i)),
                        format_double(fit.fitted(i)) });
    o.rows.push_back(Json{ { "t", fit.t(i) },
                           { "y", fit.observed(i) },
                           { "fitted", fit.fitted(i) } });
  }
  o.extra["rmse"] = fit.rmse;
  o.extra["mae"] = fit.mae;
  o.extra["missing"] = fit.missing;
  err << "rmse=" << format_double(fit.rmse) << " mae=" << format_double(fit.mae);
  if (!inv.flags.input && inv.cfg.process &&
      inv.cfg.d == inv.cfg.process->lag_order()) {
    const FitError truth = fit_error_against_truth(fit, s, *inv.cfg.process);
    o.extra["rmse_vs_true_mean"] = truth.rmse;
    o.extra["mae_vs_true_mean"] = truth.mae;
    err << " rmse_vs_true_mean=" << format_double(truth.rmse);
  }
  err << " missing=" << fit.missing.size() << "\n";
  return o;
}

Output cmd_kernels_check()
{
  static constexpr std::array<KernelFamily, 7> all{
    KernelFamily::Uniform,      KernelFamily::Rectangle, KernelFamily::Triangle,
    KernelFamily::Epanechnikov, KernelFamily::Tricube,   KernelFamily::Gaussian,
    KernelFamily::Silverman
  };
  Output o;
  o.csv = "kernel,radius,m0,m1,m2,kappa\n";
  for (auto f : all) {
    const KernelSpec k(f);
    const auto m = verify_moments(k, kMomentQuadPoints);
    const std::string name(kernel_name(f));
    o.csv += csv_line({ name, format_double(k.effective_support_radius),
                        format_double(m.m0), format_double(m.m1),
                        format_double(m.m2), format_double(kernel_kappa(f)) });
    o.rows.push_back(Json{ { "kernel", name },
                           { "radius", k.effective_support_radius },
                           { "m0", m.m0 },
                           { "m1", m.m1 },
                           { "m2", m.m2 },
                           { "kappa", kernel_kappa(f) } });
  }
  return o;
}

void add_flags(CLI::App* sub, Flags& f, std::string& config_path)
{
  sub->add_option("--config", config_path, "JSON config file (snake_case keys)");
  sub->add_option("--process", f.process,
                  "tvar1-gauss | tvar2-gauss | tvar2-cauchy | tvtar1-gauss");
  sub->add_option("--input", f.input, "CSV file with the observed series");
  sub->add_option("--column", f.column, "CSV column name or 0-based index");
  sub->add_option("--T", f.T, "series length");
  sub->add_option("--L", f.L, "replications");
  sub->add_option("--mc-runs", f.mc_runs, "Monte Carlo runs per cell");
  auto* xi = sub->add_option("--xi", f.xi, "bandwidth exponent, h = T^-xi");
  auto* h = sub->add_option("--h", f.h, "explicit bandwidth");
  xi->excludes(h);
  sub->add_option("--d", f.d, "lag order");
  sub->add_option("--k-time", f.k_time, "time-direction kernel");
  sub->add_option("--k-space", f.k_space, "space-direction kernel");
  auto* t = sub->add_option("--t", f.t, "evaluation index (1-based)");
  auto* u = sub->add_option("--u", f.u, "evaluation rescaled time");
  t->excludes(u);
  sub->add_option("--sigma", f.sigma, "Gaussian smoothing scale");
  sub->add_option("--seed", f.seed, "random seed");
  sub->add_option("--out", f.out, "output path (stdout when absent)");
  sub->add_option("--format", f.format, "csv | json");
  sub->add_option("--T-list", f.T_list, "sample sizes")->delimiter(',');
  sub->add_option("--u-grid", f.u_grid, "rescaled times")->delimiter(',');
  sub->add_option("--sigmas", f.sigmas, "smoothing scales")->delimiter(',');
  sub->add_option("--cuts", f.cut_points, "cut fractions of T")->delimiter(',');
  sub->add_option("--x", f.x, "query covariate")->delimiter(',');
  sub->add_option("--threads", f.threads, "worker threads (0 = all cores)");
  sub->add_option("--burn-in", f.burn_in, "discarded initial steps");
  sub->add_option("--stationary-u", f.stationary_u,
                  "simulate the stationary approximation at this u");
  sub->add_flag("--paper-scale", f.paper_scale,
                "T in {5000,10000,15000}, L = 1000, 100 runs");
  sub->add_flag("--force-boundary", f.force_boundary,
                "estimate outside [C1 h, 1 - C1 h]");
  sub->add_flag("--allow-signed-weights", f.allow_signed_weights,
                "accept negative kernel weights (mean only)");
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& err)
{
  CLI::App app{ "Nadaraya-Watson conditional distributions for locally "
                "stationary series",
                "lsnw" };
  app.require_subcommand(1);
  // -h is taken by the bandwidth flag.
  app.set_help_flag("--help", "print help");

  Flags flags;
  std::string config_path;
  const std::array<std::pair<const char*, const char*>, 8> commands{ {
    { "simulate", "simulate a synthetic process" },
    { "estimate", "NW conditional CDF at one time point" },
    { "algo1", "synthetic replication + NW + W1" },
    { "algo2", "Gaussian-smoothed replication of an observed series + W1" },
    { "converge", "Monte Carlo convergence study over T and u" },
    { "sweep", "W1 over smoothing scales and sample cuts" },
    { "fit", "conditional mean fit with RMSE/MAE" },
    { "kernels-check", "quadrature moments of every kernel" },
  } };
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : commands) {
    auto* sub = app.add_subcommand(name, desc);
    add_flags(sub, flags, config_path);
    subs.push_back(sub);
  }

  std::vector<const char*> argv{ "lsnw" };
  for (const auto& a : args)
    argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    err << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  std::string command;
  for (auto* sub : subs)
    if (sub->parsed())
      command = sub->get_name();

  try {
    const Flags merged =
      config_path.empty() ? flags : merge(flags_from_config_file(config_path), flags);
    const Invocation inv = build_invocation(command, merged);
    if (inv.seed_generated)
      err << "seed: " << inv.cfg.seed << "\n";

    Output out;
    if (command == "simulate")
      out = cmd_simulate(inv);
    else if (command == "estimate")
      out = cmd_estimate(inv, err);
    else if (command == "algo1")
      out = cmd_algo1(inv);
    else if (command == "algo2")
      out = cmd_algo2(inv);
    else if (command == "converge")
      out = cmd_converge(inv, err);
    else if (command == "sweep")
      out = cmd_sweep(inv);
    else if (command == "fit")
      out = cmd_fit(inv, err);
    else
      out = cmd_kernels_check();

    const std::string path = merged.out.value_or("");
    if (inv.format == "json") {
      Json meta = config_json(inv);
      meta["version"] = kVersion;
      for (auto& [k, v] : out.extra.items())
        meta[k] = v;
      write_text(path, report_json(meta, out.rows));
    } else {
      write_text(path, out.csv);
    }
  } catch (const ComputationError& e) {
    err << "error: " << e.name() << ": " << e.what() << "\n";
    return kExitComputation;
  } catch (const InputError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  return kExitOk;
}

int run_cli(int argc, const char* const* argv)
{
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i)
    args.emplace_back(argv[i]);
  return run_cli(args, std::cerr);
}

} // namespace lsnw
