#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "zeroscope/detect.hpp"
#include "zeroscope/gaf.hpp"
#include "zeroscope/hermite.hpp"
#include "zeroscope/io.hpp"
#include "zeroscope/ppstats.hpp"
#include "zeroscope/signal.hpp"
#include "zeroscope/stft.hpp"
#include "zeroscope/theory.hpp"

using nlohmann::json;
using namespace zeroscope;

namespace {

// Every subcommand resolves its options into one JSON object: built-in
// defaults, overlaid by the config file, overlaid by explicit flags.  The
// resolved object is logged to stderr (or printed and not run, with
// --print-config).
struct Resolver {
  CLI::App* sub;
  json eff;

  Resolver(CLI::App* s, json defaults, const json& config) : sub(s), eff(std::move(defaults)) {
    for (const auto& [key, value] : config.items()) {
      if (key == "threads") continue;  // global, handled by the caller
      if (!eff.contains(key)) {
        throw ValidationError("config key '" + key + "' is not an option of " +
                              sub->get_name());
      }
      eff[key] = value;
    }
  }

  template <typename T>
  void flag(const std::string& name, const std::string& key, const T& value) {
    if (sub->count(name) > 0) eff[key] = value;
  }

  void require(const std::string& key, const std::string& name) const {
    if (eff.at(key).is_null()) {
      throw ValidationError(sub->get_name() + " needs " + name);
    }
  }
};

int finish_resolve(Resolver& r, bool print_config, unsigned threads) {
  r.eff["threads"] = threads;
  if (print_config) {
    std::cout << r.eff.dump(2) << '\n';
    return 0;
  }
  std::cerr << "config " << r.eff.dump() << '\n';
  return -1;
}

SignalKind parse_kind(const std::string& s) {
  if (s == "real") return SignalKind::Real;
  if (s == "complex") return SignalKind::Complex;
  throw ValidationError("kind must be 'real' or 'complex'");
}

Statistic parse_statistic(const std::string& s) {
  if (s == "L") return Statistic::L;
  if (s == "F") return Statistic::F;
  throw ValidationError("statistic must be 'L' or 'F'");
}

Norm parse_norm(const std::string& s) {
  if (s == "sup") return Norm::Sup;
  if (s == "two") return Norm::Two;
  throw ValidationError("norm must be 'sup' or 'two'");
}

NullCurve parse_null(const std::string& s) {
  if (s == "theoretical") return NullCurve::Theoretical;
  if (s == "pointwise_average") return NullCurve::PointwiseAverage;
  throw ValidationError("null curve must be 'theoretical' or 'pointwise_average'");
}

GridSpec grid_from_eff(const json& eff) {
  const std::size_t K = eff.at("k").get<std::size_t>();
  const std::size_t N = eff.at("n").get<std::size_t>();
  return GridSpec::from_a(N, K, eff.at("a").get<double>());
}

TestConfig test_config_from_eff(const json& eff) {
  TestConfig cfg;
  cfg.statistic = parse_statistic(eff.at("statistic").get<std::string>());
  cfg.norm = parse_norm(eff.at("norm").get<std::string>());
  cfg.null_curve = parse_null(eff.at("null_curve").get<std::string>());
  cfg.r_min = eff.at("r_min").get<double>();
  cfg.r_max = eff.at("r_max").get<double>();
  cfg.m = eff.at("m").get<int>();
  cfg.k = eff.at("rank").get<int>();
  cfg.seed = eff.at("seed").get<std::uint64_t>();
  cfg.grid = grid_from_eff(eff);
  return cfg;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::string item;
  std::stringstream ss(s);
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0') {
      throw ValidationError("bad number in list: '" + item + "'");
    }
    out.push_back(v);
  }
  if (out.empty()) throw ValidationError("empty number list");
  return out;
}

std::string with_suffix(const std::string& path, const std::string& tag) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
    return path + tag;
  }
  return path.substr(0, dot) + tag + path.substr(dot);
}

json load_config(const std::string& path) {
  if (path.empty()) return json::object();
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file: " + path);
  json cfg;
  try {
    f >> cfg;
  } catch (const json::exception& e) {
    throw IoError(std::string("bad config file: ") + e.what());
  }
  if (!cfg.is_object()) throw ValidationError("config file must hold a JSON object");
  return cfg;
}

int run(int argc, char** argv) {
  CLI::App app{"spectrogram zero patterns: simulation, statistics, detection"};
  app.require_subcommand(1);

  std::string config_path;
  int threads_flag = 0;
  bool print_config = false;
  app.add_option("--config", config_path, "JSON file with option defaults");
  app.add_option("--threads", threads_flag, "worker threads (default: ZEROSCOPE_THREADS or all cores)");
  app.add_flag("--print-config", print_config, "print the resolved options and exit");

  // noise
  auto* c_noise = app.add_subcommand("noise", "sample white Gaussian noise");
  std::size_t noise_n = 0;
  double noise_fs = 0.0;
  std::uint64_t noise_seed = 0;
  std::string noise_kind, noise_out;
  c_noise->add_option("--n", noise_n, "sample count");
  c_noise->add_option("--fs", noise_fs, "sample rate");
  c_noise->add_option("--seed", noise_seed, "generator seed");
  c_noise->add_option("--kind", noise_kind, "real or complex");
  c_noise->add_option("--out", noise_out, "output signal CSV");

  // chirp
  auto* c_chirp = app.add_subcommand("chirp", "synthesize a linear chirp");
  std::size_t chirp_n = 0;
  double chirp_fs = 0.0, chirp_f0 = 0.0, chirp_f1 = 0.0;
  double chirp_t0 = 0.0, chirp_t1 = 0.0, chirp_taper = 0.0;
  std::string chirp_out;
  c_chirp->add_option("--n", chirp_n, "sample count");
  c_chirp->add_option("--fs", chirp_fs, "sample rate");
  c_chirp->add_option("--f0", chirp_f0, "start frequency");
  c_chirp->add_option("--f1", chirp_f1, "end frequency");
  c_chirp->add_option("--t-start", chirp_t0, "support start (s)");
  c_chirp->add_option("--t-end", chirp_t1, "support end (s)");
  c_chirp->add_option("--taper", chirp_taper, "cosine taper fraction per end");
  c_chirp->add_option("--out", chirp_out, "output signal CSV");

  // mix
  auto* c_mix = app.add_subcommand("mix", "embed a signal in noise at a given snr");
  std::string mix_signal, mix_noise, mix_out;
  double mix_snr_v = 0.0;
  c_mix->add_option("--signal", mix_signal, "clean signal CSV");
  c_mix->add_option("--noise", mix_noise, "noise signal CSV");
  c_mix->add_option("--snr", mix_snr_v, "signal-to-noise ratio");
  c_mix->add_option("--out", mix_out, "output signal CSV");

  // spectrogram
  auto* c_spg = app.add_subcommand("spectrogram", "Gaussian-window spectrogram raster");
  std::string spg_in, spg_out, spg_oracle;
  std::size_t spg_k = 0, spg_n = 0;
  double spg_a = 0.0;
  c_spg->add_option("--in", spg_in, "input signal CSV");
  c_spg->add_option("--k", spg_k, "FFT length (even)");
  c_spg->add_option("--n", spg_n, "frame count (default: signal length - 1)");
  c_spg->add_option("--a", spg_a, "window width (default: fs / sqrt(K))");
  c_spg->add_option("--out", spg_out, "output raster file");
  c_spg->add_option("--oracle", spg_oracle,
                    "hermite:<j>: check the raster against the closed form");

  // zeros
  auto* c_zeros = app.add_subcommand("zeros", "extract zero pattern from a raster");
  std::string zeros_in, zeros_out;
  c_zeros->add_option("--in", zeros_in, "input raster file");
  c_zeros->add_option("--out", zeros_out, "output pattern CSV");

  // stats
  auto* c_stats = app.add_subcommand("stats", "summary statistics of a point pattern");
  std::string stats_in, stats_out, stats_stat;
  double stats_rmax = -1.0, stats_spacing = 0.05, stats_bandwidth = 0.0;
  std::size_t stats_steps = 512;
  c_stats->add_option("--in", stats_in, "input pattern CSV");
  c_stats->add_option("--stat", stats_stat, "K, L, F, G or pcf");
  c_stats->add_option("--rmax", stats_rmax, "largest radius (default: half crop side)");
  c_stats->add_option("--steps", stats_steps, "r grid size");
  c_stats->add_option("--spacing", stats_spacing, "reference grid spacing (F)");
  c_stats->add_option("--bandwidth", stats_bandwidth, "kernel bandwidth (pcf)");
  c_stats->add_option("--out", stats_out, "output curve CSV");

  // theory
  auto* c_theory = app.add_subcommand("theory", "reference curves and constants");
  std::string th_curve, th_out;
  double th_rmax = 2.0, th_r = -1.0, th_y = -1.0;
  std::size_t th_steps = 512;
  c_theory->add_option("--curve", th_curve,
                       "g0_gaf, g0_ginibre, g0_poisson, K0_<model>, L0_<model> or S");
  c_theory->add_option("--rmax", th_rmax, "upper end of the curve grid");
  c_theory->add_option("--steps", th_steps, "curve grid size");
  c_theory->add_option("--r", th_r, "evaluate at a single radius and print");
  c_theory->add_option("--y", th_y, "evaluate S at a single height and print");
  c_theory->add_option("--out", th_out, "output curve CSV");

  // test
  auto* c_test = app.add_subcommand("test", "Monte Carlo envelope test of a pattern");
  std::string test_in, test_out, test_stat, test_norm, test_null;
  std::size_t test_k = 0, test_n = 0;
  double test_a = 1.0, test_rmin = 0.0, test_rmax = -1.0;
  int test_m = 0, test_rank = 0;
  std::uint64_t test_seed = 0;
  c_test->add_option("--in", test_in, "input pattern CSV");
  c_test->add_option("--k", test_k, "FFT length of the generating grid");
  c_test->add_option("--n", test_n, "frame count of the generating grid");
  c_test->add_option("--a", test_a, "window width of the generating grid");
  c_test->add_option("--stat", test_stat, "L or F");
  c_test->add_option("--norm", test_norm, "sup or two");
  c_test->add_option("--null", test_null, "theoretical or pointwise_average");
  c_test->add_option("--rmin", test_rmin, "lower integration limit");
  c_test->add_option("--rmax", test_rmax, "upper integration limit (default: half crop side)");
  c_test->add_option("--m", test_m, "null simulations");
  c_test->add_option("--rank", test_rank, "envelope rank k");
  c_test->add_option("--seed", test_seed, "base seed for null substreams");
  c_test->add_option("--out", test_out, "output JSON (default: stdout)");

  // envelope
  auto* c_env = app.add_subcommand("envelope", "test statistics across r_max values");
  std::string env_in, env_out, env_stat, env_norm, env_null;
  std::size_t env_k = 0, env_n = 0, env_count = 10;
  double env_a = 1.0;
  int env_m = 0, env_rank = 0;
  std::uint64_t env_seed = 0;
  c_env->add_option("--in", env_in, "input pattern CSV");
  c_env->add_option("--k", env_k, "FFT length of the generating grid");
  c_env->add_option("--n", env_n, "frame count of the generating grid");
  c_env->add_option("--a", env_a, "window width of the generating grid");
  c_env->add_option("--stat", env_stat, "L or F");
  c_env->add_option("--norm", env_norm, "sup or two");
  c_env->add_option("--null", env_null, "theoretical or pointwise_average");
  c_env->add_option("--m", env_m, "null simulations");
  c_env->add_option("--rank", env_rank, "envelope rank k");
  c_env->add_option("--seed", env_seed, "base seed for null substreams");
  c_env->add_option("--rmax-count", env_count, "number of r_max values");
  c_env->add_option("--out", env_out, "output CSV");

  // power
  auto* c_power = app.add_subcommand("power", "rejection rate against an embedded signal");
  std::string pow_signal, pow_out, pow_stat, pow_norm, pow_null, pow_snrs;
  std::size_t pow_k = 0, pow_n = 0;
  double pow_a = 1.0, pow_conf = 0.95, pow_rmin = 0.0;
  int pow_m = 0, pow_rank = 0, pow_reps = 0, pow_nrmax = 0;
  std::uint64_t pow_seed = 0;
  bool pow_cached = false;
  c_power->add_option("--signal", pow_signal, "clean signal CSV");
  c_power->add_option("--snrs", pow_snrs, "comma-separated snr values");
  c_power->add_option("--reps", pow_reps, "repetitions per snr");
  c_power->add_option("--k", pow_k, "FFT length of the grid");
  c_power->add_option("--n", pow_n, "frame count of the grid");
  c_power->add_option("--a", pow_a, "window width of the grid");
  c_power->add_option("--stat", pow_stat, "L or F");
  c_power->add_option("--norm", pow_norm, "sup or two");
  c_power->add_option("--null", pow_null, "theoretical or pointwise_average");
  c_power->add_option("--rmin", pow_rmin, "lower integration limit");
  c_power->add_option("--m", pow_m, "null simulations per test");
  c_power->add_option("--rank", pow_rank, "envelope rank k");
  c_power->add_option("--confidence", pow_conf, "binomial interval confidence");
  c_power->add_option("--n-rmax", pow_nrmax, "number of r_max values tested");
  c_power->add_option("--seed", pow_seed, "base seed");
  c_power->add_flag("--cached-null", pow_cached, "share one null batch across repetitions");
  c_power->add_option("--out", pow_out, "output CSV (per-snr suffix when several)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  json config = load_config(config_path);
  if (threads_flag == 0 && config.contains("threads")) {
    threads_flag = config.at("threads").get<int>();
  }
  const unsigned threads = resolve_threads(threads_flag);

  if (c_noise->parsed()) {
    Resolver r(c_noise, json{{"n", nullptr}, {"fs", nullptr}, {"seed", 1}, {"kind", "real"},
                             {"out", nullptr}},
               config);
    r.flag("--n", "n", noise_n);
    r.flag("--fs", "fs", noise_fs);
    r.flag("--seed", "seed", noise_seed);
    r.flag("--kind", "kind", noise_kind);
    r.flag("--out", "out", noise_out);
    r.require("n", "--n");
    r.require("fs", "--fs");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const Signal s = white_noise(r.eff["n"].get<std::size_t>(), r.eff["fs"].get<double>(),
                                 r.eff["seed"].get<std::uint64_t>(),
                                 parse_kind(r.eff["kind"].get<std::string>()));
    write_signal_csv(r.eff["out"].get<std::string>(), s);
    return 0;
  }

  if (c_chirp->parsed()) {
    Resolver r(c_chirp,
               json{{"n", nullptr}, {"fs", nullptr}, {"f0", nullptr}, {"f1", nullptr},
                    {"t_start", nullptr}, {"t_end", nullptr}, {"taper", 0.0}, {"out", nullptr}},
               config);
    r.flag("--n", "n", chirp_n);
    r.flag("--fs", "fs", chirp_fs);
    r.flag("--f0", "f0", chirp_f0);
    r.flag("--f1", "f1", chirp_f1);
    r.flag("--t-start", "t_start", chirp_t0);
    r.flag("--t-end", "t_end", chirp_t1);
    r.flag("--taper", "taper", chirp_taper);
    r.flag("--out", "out", chirp_out);
    r.require("n", "--n");
    r.require("fs", "--fs");
    r.require("f0", "--f0");
    r.require("f1", "--f1");
    r.require("t_start", "--t-start");
    r.require("t_end", "--t-end");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    ChirpSpec spec;
    spec.f0 = r.eff["f0"].get<double>();
    spec.f1 = r.eff["f1"].get<double>();
    spec.t_start = r.eff["t_start"].get<double>();
    spec.t_end = r.eff["t_end"].get<double>();
    spec.taper_fraction = r.eff["taper"].get<double>();
    const Signal s =
        linear_chirp(spec, r.eff["n"].get<std::size_t>(), r.eff["fs"].get<double>());
    write_signal_csv(r.eff["out"].get<std::string>(), s);
    return 0;
  }

  if (c_mix->parsed()) {
    Resolver r(c_mix, json{{"signal", nullptr}, {"noise", nullptr}, {"snr", nullptr},
                           {"out", nullptr}},
               config);
    r.flag("--signal", "signal", mix_signal);
    r.flag("--noise", "noise", mix_noise);
    r.flag("--snr", "snr", mix_snr_v);
    r.flag("--out", "out", mix_out);
    r.require("signal", "--signal");
    r.require("noise", "--noise");
    r.require("snr", "--snr");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const Signal s = read_signal_csv(r.eff["signal"].get<std::string>());
    const Signal n = read_signal_csv(r.eff["noise"].get<std::string>());
    write_signal_csv(r.eff["out"].get<std::string>(),
                     mix_snr(s, n, r.eff["snr"].get<double>()));
    return 0;
  }

  if (c_spg->parsed()) {
    Resolver r(c_spg, json{{"in", nullptr}, {"k", nullptr}, {"n", nullptr}, {"a", nullptr},
                           {"out", nullptr}, {"oracle", nullptr}},
               config);
    r.flag("--in", "in", spg_in);
    r.flag("--k", "k", spg_k);
    r.flag("--n", "n", spg_n);
    r.flag("--a", "a", spg_a);
    r.flag("--out", "out", spg_out);
    r.flag("--oracle", "oracle", spg_oracle);
    r.require("k", "--k");
    const bool oracle_mode = !r.eff["oracle"].is_null();
    if (!oracle_mode) {
      r.require("in", "--in");
      r.require("out", "--out");
    }
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const std::size_t K = r.eff["k"].get<std::size_t>();

    if (oracle_mode) {
      const std::string spec = r.eff["oracle"].get<std::string>();
      const std::string prefix = "hermite:";
      if (spec.rfind(prefix, 0) != 0) {
        throw ValidationError("oracle spec must look like hermite:<order>");
      }
      const std::string tail = spec.substr(prefix.size());
      char* end = nullptr;
      const long order_l = std::strtol(tail.c_str(), &end, 10);
      if (end == tail.c_str() || *end != '\0' || order_l < 0) {
        throw ValidationError("oracle spec must look like hermite:<order>");
      }
      const int order = static_cast<int>(order_l);
      const std::size_t N = r.eff["n"].is_null() ? 2 * K : r.eff["n"].get<std::size_t>();
      const double a = r.eff["a"].is_null() ? 1.0 : r.eff["a"].get<double>();
      const GridSpec grid = GridSpec::from_a(N, K, a);
      const Signal sig = sampled_hermite(order, grid);
      const Spectrogram spg = spectrogram(sig, grid, static_cast<int>(threads));
      double peak = 0.0;
      for (double v : spg.values) peak = std::max(peak, v);
      double max_rel = 0.0;
      const double s = std::sqrt(static_cast<double>(K));
      const double centre = static_cast<double>(N) / 2.0;
      for (std::size_t n = 0; n <= N; ++n) {
        for (std::size_t k2 = 0; k2 <= K / 2; ++k2) {
          const double u = (static_cast<double>(n) - centre) / s;
          const double v = static_cast<double>(k2) / s;
          const double want = std::norm(hermite_stft_closed_form(order, u, v));
          if (want < 1e-30 * peak) continue;
          const double got = spg.at(n, k2);
          max_rel = std::max(max_rel, std::fabs(got - want) / want);
        }
      }
      json report{{"oracle", "hermite"}, {"order", order}, {"K", K}, {"N", N},
                  {"max_rel_error", max_rel}};
      std::cout << report.dump(2) << '\n';
      if (!r.eff["out"].is_null()) {
        write_spectrogram(r.eff["out"].get<std::string>(), spg);
      }
      return 0;
    }

    const Signal sig = read_signal_csv(r.eff["in"].get<std::string>());
    if (sig.samples.empty()) throw ValidationError("input signal is empty");
    const std::size_t N =
        r.eff["n"].is_null() ? sig.samples.size() - 1 : r.eff["n"].get<std::size_t>();
    const double a = r.eff["a"].is_null() ? sig.fs / std::sqrt(static_cast<double>(K))
                                          : r.eff["a"].get<double>();
    const GridSpec grid = GridSpec::from_a(N, K, a);
    write_spectrogram(r.eff["out"].get<std::string>(),
                      spectrogram(sig, grid, static_cast<int>(threads)));
    return 0;
  }

  if (c_zeros->parsed()) {
    Resolver r(c_zeros, json{{"in", nullptr}, {"out", nullptr}}, config);
    r.flag("--in", "in", zeros_in);
    r.flag("--out", "out", zeros_out);
    r.require("in", "--in");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const Spectrogram spg = read_spectrogram(r.eff["in"].get<std::string>());
    write_pattern_csv(r.eff["out"].get<std::string>(), extract_zeros(spg));
    return 0;
  }

  if (c_stats->parsed()) {
    Resolver r(c_stats,
               json{{"in", nullptr}, {"stat", nullptr}, {"rmax", nullptr}, {"steps", 512},
                    {"spacing", 0.05}, {"bandwidth", nullptr}, {"out", nullptr}},
               config);
    r.flag("--in", "in", stats_in);
    r.flag("--stat", "stat", stats_stat);
    r.flag("--rmax", "rmax", stats_rmax);
    r.flag("--steps", "steps", stats_steps);
    r.flag("--spacing", "spacing", stats_spacing);
    r.flag("--bandwidth", "bandwidth", stats_bandwidth);
    r.flag("--out", "out", stats_out);
    r.require("in", "--in");
    r.require("stat", "--stat");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const PointPattern pat = read_pattern_csv(r.eff["in"].get<std::string>());
    const std::size_t steps = r.eff["steps"].get<std::size_t>();
    std::vector<double> grid;
    if (r.eff["rmax"].is_null()) {
      grid = default_r_grid(pat.window, steps);
    } else {
      const double rmax = r.eff["rmax"].get<double>();
      if (!(rmax > 0.0)) throw ValidationError("--rmax must be positive");
      if (steps < 2) throw ValidationError("--steps must be at least 2");
      grid.resize(steps);
      for (std::size_t i = 0; i < steps; ++i) {
        grid[i] = rmax * static_cast<double>(i) / static_cast<double>(steps - 1);
      }
    }
    const std::string stat = r.eff["stat"].get<std::string>();
    FunctionalCurve curve;
    if (stat == "K") {
      curve = estimate_K(pat, grid);
    } else if (stat == "L") {
      curve = estimate_L(pat, grid);
    } else if (stat == "F") {
      curve = estimate_F(pat, grid, r.eff["spacing"].get<double>());
    } else if (stat == "G") {
      curve = estimate_G(pat, grid);
    } else if (stat == "pcf") {
      std::optional<double> bw;
      if (!r.eff["bandwidth"].is_null()) bw = r.eff["bandwidth"].get<double>();
      curve = estimate_pcf(pat, grid, bw);
    } else {
      throw ValidationError("--stat must be one of K, L, F, G, pcf");
    }
    write_curve_csv(r.eff["out"].get<std::string>(), curve);
    return 0;
  }

  if (c_theory->parsed()) {
    Resolver r(c_theory,
               json{{"curve", nullptr}, {"rmax", 2.0}, {"steps", 512}, {"r", nullptr},
                    {"y", nullptr}, {"out", nullptr}},
               config);
    r.flag("--curve", "curve", th_curve);
    r.flag("--rmax", "rmax", th_rmax);
    r.flag("--steps", "steps", th_steps);
    r.flag("--r", "r", th_r);
    r.flag("--y", "y", th_y);
    r.flag("--out", "out", th_out);
    r.require("curve", "--curve");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const std::string name = r.eff["curve"].get<std::string>();

    const auto scalar = [&name](double x) -> double {
      if (name == "g0_gaf") return g0_planar_gaf(x);
      if (name == "g0_ginibre") return g0_ginibre(x);
      if (name == "g0_poisson") return g0_poisson(x);
      if (name == "S") return horizontal_density_S(x);
      if (name.rfind("K0_", 0) == 0 || name.rfind("L0_", 0) == 0) {
        PointProcess proc;
        const std::string model = name.substr(3);
        if (model == "gaf") {
          proc = PointProcess::Gaf;
        } else if (model == "ginibre") {
          proc = PointProcess::Ginibre;
        } else if (model == "poisson") {
          proc = PointProcess::Poisson;
        } else {
          throw ValidationError("unknown model in --curve: " + model);
        }
        const auto [K0, L0] = K0_L0(proc, std::vector<double>{x});
        return name[0] == 'K' ? K0.value[0] : L0.value[0];
      }
      throw ValidationError("unknown curve: " + name);
    };

    if (!r.eff["r"].is_null() || !r.eff["y"].is_null()) {
      const bool is_y = !r.eff["y"].is_null();
      if (is_y && name != "S") {
        throw ValidationError("--y applies to the S curve only");
      }
      const double x = is_y ? r.eff["y"].get<double>() : r.eff["r"].get<double>();
      std::cout << format_double(scalar(x)) << '\n';
      return 0;
    }

    r.require("out", "--out (or a single --r / --y)");
    const double rmax = r.eff["rmax"].get<double>();
    const std::size_t steps = r.eff["steps"].get<std::size_t>();
    if (!(rmax > 0.0)) throw ValidationError("--rmax must be positive");
    if (steps < 2) throw ValidationError("--steps must be at least 2");
    TheoryCurve curve;
    curve.kind = name;
    curve.r.resize(steps);
    for (std::size_t i = 0; i < steps; ++i) {
      curve.r[i] = rmax * static_cast<double>(i) / static_cast<double>(steps - 1);
    }
    if (name.rfind("K0_", 0) == 0 || name.rfind("L0_", 0) == 0) {
      // one quadrature pass over the whole grid
      PointProcess proc;
      const std::string model = name.substr(3);
      if (model == "gaf") {
        proc = PointProcess::Gaf;
      } else if (model == "ginibre") {
        proc = PointProcess::Ginibre;
      } else if (model == "poisson") {
        proc = PointProcess::Poisson;
      } else {
        throw ValidationError("unknown model in --curve: " + model);
      }
      const auto [K0, L0] = K0_L0(proc, curve.r);
      curve.value = name[0] == 'K' ? K0.value : L0.value;
    } else {
      curve.value.resize(steps);
      for (std::size_t i = 0; i < steps; ++i) curve.value[i] = scalar(curve.r[i]);
    }
    write_theory_csv(r.eff["out"].get<std::string>(), curve);
    return 0;
  }

  if (c_test->parsed()) {
    Resolver r(c_test,
               json{{"in", nullptr}, {"k", nullptr}, {"n", nullptr}, {"a", 1.0},
                    {"statistic", "F"}, {"norm", "two"}, {"null_curve", "pointwise_average"},
                    {"r_min", 0.0}, {"r_max", -1.0}, {"m", 199}, {"rank", 10}, {"seed", 1},
                    {"out", nullptr}},
               config);
    r.flag("--in", "in", test_in);
    r.flag("--k", "k", test_k);
    r.flag("--n", "n", test_n);
    r.flag("--a", "a", test_a);
    r.flag("--stat", "statistic", test_stat);
    r.flag("--norm", "norm", test_norm);
    r.flag("--null", "null_curve", test_null);
    r.flag("--rmin", "r_min", test_rmin);
    r.flag("--rmax", "r_max", test_rmax);
    r.flag("--m", "m", test_m);
    r.flag("--rank", "rank", test_rank);
    r.flag("--seed", "seed", test_seed);
    r.flag("--out", "out", test_out);
    r.require("in", "--in");
    r.require("k", "--k");
    r.require("n", "--n");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const PointPattern pat = read_pattern_csv(r.eff["in"].get<std::string>());
    const TestConfig cfg = test_config_from_eff(r.eff);
    const EnvelopeTestResult res = envelope_test(pat, cfg, static_cast<int>(threads));
    if (r.eff["out"].is_null()) {
      json doc{{"alpha", res.alpha}, {"t_exp", res.t_exp}, {"t_sorted", res.t_sorted},
               {"rank", res.rank}, {"reject", res.reject}};
      std::cout << doc.dump(2) << '\n';
    } else {
      write_test_json(r.eff["out"].get<std::string>(), res, cfg);
    }
    return 0;
  }

  if (c_env->parsed()) {
    Resolver r(c_env,
               json{{"in", nullptr}, {"k", nullptr}, {"n", nullptr}, {"a", 1.0},
                    {"statistic", "F"}, {"norm", "two"}, {"null_curve", "pointwise_average"},
                    {"r_min", 0.0}, {"r_max", -1.0}, {"m", 199}, {"rank", 10}, {"seed", 1},
                    {"rmax_count", 10}, {"out", nullptr}},
               config);
    r.flag("--in", "in", env_in);
    r.flag("--k", "k", env_k);
    r.flag("--n", "n", env_n);
    r.flag("--a", "a", env_a);
    r.flag("--stat", "statistic", env_stat);
    r.flag("--norm", "norm", env_norm);
    r.flag("--null", "null_curve", env_null);
    r.flag("--m", "m", env_m);
    r.flag("--rank", "rank", env_rank);
    r.flag("--seed", "seed", env_seed);
    r.flag("--rmax-count", "rmax_count", env_count);
    r.flag("--out", "out", env_out);
    r.require("in", "--in");
    r.require("k", "--k");
    r.require("n", "--n");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const PointPattern pat = read_pattern_csv(r.eff["in"].get<std::string>());
    const TestConfig cfg = test_config_from_eff(r.eff);
    const std::size_t count = r.eff["rmax_count"].get<std::size_t>();
    if (count < 1) throw ValidationError("--rmax-count must be positive");
    const double half = 0.5 * crop_window(cfg.grid).shorter_side();
    std::vector<double> rmaxes(count);
    for (std::size_t j = 0; j < count; ++j) {
      rmaxes[j] = half * static_cast<double>(j + 1) / static_cast<double>(count);
    }
    write_envelope_csv(r.eff["out"].get<std::string>(),
                       envelope_curves(pat, cfg, rmaxes, static_cast<int>(threads)));
    return 0;
  }

  if (c_power->parsed()) {
    Resolver r(c_power,
               json{{"signal", nullptr}, {"snrs", "1"}, {"reps", 50}, {"k", nullptr},
                    {"n", nullptr}, {"a", 1.0}, {"statistic", "F"}, {"norm", "two"},
                    {"null_curve", "pointwise_average"}, {"r_min", 0.0}, {"r_max", -1.0},
                    {"m", 199}, {"rank", 10}, {"confidence", 0.95}, {"n_rmax", 5},
                    {"seed", 1}, {"cached_null", false}, {"out", nullptr}},
               config);
    r.flag("--signal", "signal", pow_signal);
    r.flag("--snrs", "snrs", pow_snrs);
    r.flag("--reps", "reps", pow_reps);
    r.flag("--k", "k", pow_k);
    r.flag("--n", "n", pow_n);
    r.flag("--a", "a", pow_a);
    r.flag("--stat", "statistic", pow_stat);
    r.flag("--norm", "norm", pow_norm);
    r.flag("--null", "null_curve", pow_null);
    r.flag("--rmin", "r_min", pow_rmin);
    r.flag("--m", "m", pow_m);
    r.flag("--rank", "rank", pow_rank);
    r.flag("--confidence", "confidence", pow_conf);
    r.flag("--n-rmax", "n_rmax", pow_nrmax);
    r.flag("--seed", "seed", pow_seed);
    r.flag("--cached-null", "cached_null", pow_cached);
    r.flag("--out", "out", pow_out);
    r.require("signal", "--signal");
    r.require("k", "--k");
    r.require("n", "--n");
    r.require("out", "--out");
    if (int rc = finish_resolve(r, print_config, threads); rc >= 0) return rc;
    const Signal sig = read_signal_csv(r.eff["signal"].get<std::string>());
    const TestConfig cfg = test_config_from_eff(r.eff);
    std::vector<double> snrs;
    if (r.eff["snrs"].is_array()) {
      snrs = r.eff["snrs"].get<std::vector<double>>();
    } else if (r.eff["snrs"].is_number()) {
      snrs = {r.eff["snrs"].get<double>()};
    } else {
      snrs = parse_list(r.eff["snrs"].get<std::string>());
    }
    const int reps = r.eff["reps"].get<int>();
    const double confidence = r.eff["confidence"].get<double>();
    const int n_rmax = r.eff["n_rmax"].get<int>();
    const bool cached = r.eff["cached_null"].get<bool>();
    const std::string out = r.eff["out"].get<std::string>();
    for (std::size_t i = 0; i < snrs.size(); ++i) {
      const auto rows = estimate_power(sig, cfg, snrs[i], reps, confidence, n_rmax,
                                       !cached, static_cast<int>(threads));
      std::string path = out;
      if (snrs.size() > 1) {
        char tag[32];
        std::snprintf(tag, sizeof(tag), "_snr%g", snrs[i]);
        path = with_suffix(out, tag);
      }
      write_power_csv(path, rows);
    }
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}
