// rmsolve command line: run, sweep, verify, gamma-bench.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <variant>

#include "rmsolve/driver.hpp"
#include "rmsolve/efg.hpp"
#include "rmsolve/gamma.hpp"
#include "rmsolve/random.hpp"
#include "rmsolve/trace_io.hpp"
#include "rmsolve/verify.hpp"

namespace {

using namespace rmsolve;

enum Exit { kOk = 0, kConfig = 1, kIo = 2, kViolation = 3 };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using AnyGame = std::variant<NormalFormGame, GameTree>;

AnyGame parse_game(const std::string& spec, std::uint64_t seed) {
  if (spec == "counterexample") return counterexample_game();
  if (spec == "pennies") return matching_pennies();
  if (spec == "kuhn") return build_kuhn_poker();
  if (spec == "goofspiel3") return build_goofspiel3();
  if (spec.rfind("tree:", 0) == 0) {
    const std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw IoError("cannot open tree file " + path);
    try {
      return read_tree(in);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(path + ": " + e.what());
    }
  }
  if (spec.rfind("random:", 0) == 0) {
    int m = 0, n = 0;
    unsigned long long s = seed;
    char tail = 0;
    const int got = std::sscanf(spec.c_str() + 7, "%dx%d:%llu%c", &m, &n, &s, &tail);
    if ((got != 2 && got != 3) || m < 1 || n < 1) {
      throw ConfigError("bad random game '" + spec + "' (expected random:MxN or random:MxN:SEED)");
    }
    return random_matrix_game(m, n, s);
  }
  throw ConfigError("unknown game '" + spec + "'");
}

struct LearnerFlags {
  double eta = 1.0;
  std::string adogd_mode = "scale-invariant";
  std::string gamma = "select";
  bool truncate_g = false;
  double dcfr_alpha = 1.5;
  double dcfr_beta = 0.0;
  double dcfr_gamma = 2.0;
};

LearnerSpec parse_algo(const std::string& name, const LearnerFlags& f) {
  if (name == "adogd") {
    AdOGDOptions o;
    if (!(f.eta > 0.0)) throw ConfigError("--eta must be positive");
    o.eta = f.eta;
    if (f.adogd_mode == "scale-invariant") {
      o.mode = AdOGDMode::ScaleInvariant;
    } else if (f.adogd_mode == "theorem") {
      o.mode = AdOGDMode::Theorem;
    } else {
      throw ConfigError("unknown --adogd-mode '" + f.adogd_mode + "'");
    }
    return LearnerSpec::gradient(o);
  }
  MatcherOptions o;
  if (f.gamma == "select") {
    o.gamma_method = GammaMethod::Select;
  } else if (f.gamma == "sorted") {
    o.gamma_method = GammaMethod::Sorted;
  } else if (f.gamma == "bisect") {
    o.gamma_method = GammaMethod::Bisect;
  } else {
    throw ConfigError("unknown --gamma '" + f.gamma + "'");
  }
  o.ir_truncate_g = f.truncate_g;
  o.dcfr.alpha = f.dcfr_alpha;
  o.dcfr.beta = f.dcfr_beta;
  o.dcfr.avg_exponent = f.dcfr_gamma;
  if (name == "rm") return LearnerSpec::regret_matching(MatcherFlavor::RM, o);
  if (name == "rm+") return LearnerSpec::regret_matching(MatcherFlavor::RMPlus, o);
  if (name == "prm+") return LearnerSpec::regret_matching(MatcherFlavor::PRMPlus, o);
  if (name == "dcfr") return LearnerSpec::regret_matching(MatcherFlavor::DCFR, o);
  if (name == "ir-prm") return LearnerSpec::regret_matching(MatcherFlavor::IRPRM, o);
  if (name == "ir-prm+") return LearnerSpec::regret_matching(MatcherFlavor::IRPRMPlus, o);
  throw ConfigError("unknown algorithm '" + name + "'");
}

Setup parse_setup(const std::string& s) {
  if (s == "sim") return Setup::Simultaneous;
  if (s == "alt") return Setup::Alternating;
  if (s == "eg") return Setup::Extragradient;
  throw ConfigError("unknown setup '" + s + "'");
}

Averaging parse_averaging(const std::string& s) {
  if (s == "uniform") return Averaging::Uniform;
  if (s == "lasthalf") return Averaging::LastHalf;
  if (s == "both") return Averaging::Both;
  throw ConfigError("unknown averaging '" + s + "'");
}

void reject_invalid(const std::string& algo, Setup setup) {
  if (algo == "dcfr" && setup == Setup::Extragradient) {
    throw ConfigError("dcfr does not take predictions; it is not run with the eg setup");
  }
}

struct RunResult {
  Trace trace;
  MonitorReport report;
};

RunResult execute(const AnyGame& game, const RunConfig& cfg) {
  RunResult out;
  if (const auto* g = std::get_if<NormalFormGame>(&game)) {
    out.trace = run_self_play(*g, cfg);
  } else {
    out.trace = run_cfr(std::get<GameTree>(game), cfg);
  }
  out.report = monitor_suite(out.trace, cfg);
  return out;
}

void write_csv(const std::string& path, const Trace& trace) {
  if (path == "-") {
    write_trace_csv(std::cout, trace);
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to standard output");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  write_trace_csv(out, trace);
  out.close();
  if (!out) throw IoError("write to " + path + " failed");
}

/// Prints the first violated monitor; returns true when all passed.
bool report_monitors(const MonitorReport& report, const std::string& label) {
  for (const auto& e : report.entries) {
    if (!e.pass) {
      std::fprintf(stderr, "%s: monitor %s violated (player %s, iter %ld, slack %.6e)\n",
                   label.c_str(), e.monitor.c_str(), e.player == Player::X ? "X" : "Y", e.iter,
                   e.slack);
      return false;
    }
  }
  return true;
}

void summarize(const RunResult& r, Averaging averaging, const std::string& label) {
  const IterationRecord& last = r.trace.records.back();
  std::fprintf(stderr, "%s: T=%ld grad_evals=%ld gap_last=%.6e best_gap=%.6e", label.c_str(),
               last.iter, last.grad_evals, last.gap_last, last.best_gap_last);
  if (averaging != Averaging::LastHalf) std::fprintf(stderr, " gap_avg=%.6e", last.gap_avg_uniform);
  if (averaging != Averaging::Uniform) std::fprintf(stderr, " gap_lasthalf=%.6e", last.gap_avg_lasthalf);
  std::fprintf(stderr, " monitor_checks=%zu\n", r.report.entries.size());
}

void add_learner_flags(CLI::App* app, LearnerFlags& f) {
  app->add_option("--eta", f.eta, "AdOGD step size scale")->capture_default_str();
  app->add_option("--adogd-mode", f.adogd_mode, "scale-invariant or theorem")->capture_default_str();
  app->add_option("--gamma", f.gamma, "gamma solver: select, sorted or bisect")->capture_default_str();
  app->add_flag("--ir-truncate-g", f.truncate_g, "IR-PRM: accumulate only the positive part of g");
  app->add_option("--dcfr-alpha", f.dcfr_alpha)->capture_default_str();
  app->add_option("--dcfr-beta", f.dcfr_beta)->capture_default_str();
  app->add_option("--dcfr-gamma", f.dcfr_gamma, "DCFR averaging exponent")->capture_default_str();
}

std::string file_stem(const std::string& game, const std::string& algo, const std::string& setup) {
  std::string s = game + "_" + algo + "_" + setup;
  std::string out;
  for (char c : s) {
    if (c == '+') {
      out += "plus";
    } else if (c == ':' || c == '/' || c == '\\') {
      out += '-';
    } else {
      out += c;
    }
  }
  return out;
}

double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  return loglog_slope(x, y, 0.0, std::numeric_limits<double>::infinity());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regret matching and adaptive optimistic gradient solvers for zero-sum games"};
  app.require_subcommand(1);

  // run
  std::string game_spec = "counterexample", algo = "ir-prm+", algo_y, setup_name = "eg", out_path = "-",
              averaging_name = "both";
  long iters = 1000;
  std::uint64_t seed = 0;
  LearnerFlags flags;
  auto* run = app.add_subcommand("run", "Run one self-play experiment and write its CSV trace");
  run->add_option("--game", game_spec,
                  "counterexample, pennies, random:MxN[:SEED], kuhn, goofspiel3 or tree:PATH")
      ->capture_default_str();
  run->add_option("--algo", algo, "rm, rm+, prm+, dcfr, adogd, ir-prm, ir-prm+")->capture_default_str();
  run->add_option("--algo-y", algo_y, "algorithm of the second player (default: --algo)");
  run->add_option("--setup", setup_name, "sim, alt or eg")->capture_default_str();
  run->add_option("--iters", iters, "number of iterations")->capture_default_str()->check(CLI::PositiveNumber);
  run->add_option("--seed", seed, "seed for random:MxN games")->capture_default_str();
  run->add_option("--out", out_path, "CSV output path ('-' for standard output)")->capture_default_str();
  run->add_option("--averaging", averaging_name, "uniform, lasthalf or both (summary line)")
      ->capture_default_str();
  add_learner_flags(run, flags);

  // sweep
  std::vector<std::string> sweep_games{"counterexample"}, sweep_algos{"prm+", "ir-prm+"},
      sweep_setups{"sim", "eg"};
  std::string out_dir = "traces";
  long sweep_iters = 10000;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  auto* sweep = app.add_subcommand("sweep", "Run a grid of experiments in parallel, one CSV per run");
  sweep->add_option("--games", sweep_games)->capture_default_str();
  sweep->add_option("--algos", sweep_algos)->capture_default_str();
  sweep->add_option("--setups", sweep_setups)->capture_default_str();
  sweep->add_option("--iters", sweep_iters)->capture_default_str()->check(CLI::PositiveNumber);
  sweep->add_option("--seed", seed)->capture_default_str();
  sweep->add_option("--out-dir", out_dir)->capture_default_str();
  sweep->add_option("--threads", threads)->capture_default_str()->check(CLI::PositiveNumber);
  add_learner_flags(sweep, flags);

  // verify
  std::string suite = "all";
  std::uint64_t verify_seed = 1;
  auto* verify = app.add_subcommand("verify", "Check the inequalities and invariants on random instances");
  verify->add_option("suite", suite, "gamma, matchers, gradient, rvu, lemmaC, scale or all")
      ->capture_default_str();
  verify->add_option("--seed", verify_seed)->capture_default_str();

  // gamma-bench
  long nmax = 1L << 16;
  int reps = 5;
  std::uint64_t bench_seed = 7;
  auto* bench = app.add_subcommand("gamma-bench", "Time the sorting and selection gamma solvers");
  bench->add_option("--nmax", nmax, "largest n (powers of two from 256)")->capture_default_str();
  bench->add_option("--reps", reps, "instances per n")->capture_default_str()->check(CLI::PositiveNumber);
  bench->add_option("--seed", bench_seed)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kConfig;
  }

  try {
    if (run->parsed()) {
      const Setup setup = parse_setup(setup_name);
      if (algo_y.empty()) algo_y = algo;
      reject_invalid(algo, setup);
      reject_invalid(algo_y, setup);
      RunConfig cfg;
      cfg.x_learner = parse_algo(algo, flags);
      cfg.y_learner = parse_algo(algo_y, flags);
      cfg.setup = setup;
      cfg.iterations = iters;
      cfg.seed = seed;
      cfg.averaging = parse_averaging(averaging_name);
      const AnyGame game = parse_game(game_spec, seed);
      const RunResult r = execute(game, cfg);
      write_csv(out_path, r.trace);
      summarize(r, cfg.averaging, game_spec + " " + algo + " " + setup_name);
      return report_monitors(r.report, "run") ? kOk : kViolation;
    }

    if (sweep->parsed()) {
      struct Job {
        std::string game, algo, setup;
      };
      std::vector<Job> jobs;
      for (const auto& g : sweep_games) {
        parse_game(g, seed);  // validate up front
        for (const auto& a : sweep_algos) {
          parse_algo(a, flags);
          for (const auto& s : sweep_setups) {
            reject_invalid(a, parse_setup(s));
            jobs.push_back({g, a, s});
          }
        }
      }
      std::error_code ec;
      std::filesystem::create_directories(out_dir, ec);
      if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());

      std::atomic<std::size_t> next{0};
      std::atomic<int> worst{kOk};
      std::mutex log;
      auto worker = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
          const Job& j = jobs[k];
          const std::string label = j.game + " " + j.algo + " " + j.setup;
          int code = kOk;
          try {
            RunConfig cfg;
            cfg.x_learner = cfg.y_learner = parse_algo(j.algo, flags);
            cfg.setup = parse_setup(j.setup);
            cfg.iterations = sweep_iters;
            cfg.seed = seed;
            const RunResult r = execute(parse_game(j.game, seed), cfg);
            const std::string path =
                (std::filesystem::path(out_dir) / (file_stem(j.game, j.algo, j.setup) + ".csv")).string();
            write_csv(path, r.trace);
            std::lock_guard<std::mutex> lock(log);
            summarize(r, Averaging::Both, label);
            if (!report_monitors(r.report, label)) code = kViolation;
          } catch (const IoError& e) {
            std::lock_guard<std::mutex> lock(log);
            std::fprintf(stderr, "%s: %s\n", label.c_str(), e.what());
            code = kIo;
          }
          int cur = worst.load();
          while (code > cur && !worst.compare_exchange_weak(cur, code)) {
          }
        }
      };
      std::vector<std::thread> pool;
      const unsigned n = std::min<unsigned>(threads, static_cast<unsigned>(jobs.size()));
      for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
      for (auto& t : pool) t.join();
      return worst.load();
    }

    if (verify->parsed()) {
      const std::vector<std::string> known{"gamma", "matchers", "gradient", "rvu", "lemmaC", "scale"};
      if (suite != "all" && std::find(known.begin(), known.end(), suite) == known.end()) {
        throw ConfigError("unknown suite '" + suite + "'");
      }
      bool ok = true;
      for (const auto& name : known) {
        if (suite != "all" && suite != name) continue;
        SuiteResult r;
        if (name == "gamma") r = verify_gamma(verify_seed);
        if (name == "matchers") r = verify_matchers(verify_seed);
        if (name == "gradient") r = verify_gradient(verify_seed);
        if (name == "rvu") r = verify_rvu(verify_seed);
        if (name == "lemmaC") r = verify_lemma_c(verify_seed);
        if (name == "scale") r = verify_scale(verify_seed);
        print_suite(std::cout, r);
        ok = ok && r.pass();
      }
      return ok ? kOk : kViolation;
    }

    if (bench->parsed()) {
      if (nmax < 256) throw ConfigError("--nmax must be at least 256");
      std::mt19937_64 g(bench_seed);
      std::printf("algorithm,n,mean_time_us,mean_comparisons\n");
      std::vector<double> ns, sel_cmp, sort_cmp;
      for (long n = 256; n <= nmax; n *= 2) {
        double t_sel = 0.0, t_sort = 0.0, c_sel = 0.0, c_sort = 0.0;
        for (int r = 0; r < reps; ++r) {
          GammaProblem p;
          p.v.resize(static_cast<std::size_t>(n));
          for (double& e : p.v) e = uniform_real(g, -1.0, 1.0);
          p.target = uniform_real(g, 0.1, 2.0);
          GammaStats s1, s2;
          const auto a = std::chrono::steady_clock::now();
          gamma_select(p, &s1);
          const auto b = std::chrono::steady_clock::now();
          gamma_sorted(p, &s2);
          const auto c = std::chrono::steady_clock::now();
          t_sel += std::chrono::duration<double, std::micro>(b - a).count();
          t_sort += std::chrono::duration<double, std::micro>(c - b).count();
          c_sel += static_cast<double>(s1.comparisons);
          c_sort += static_cast<double>(s2.comparisons);
        }
        const double k = static_cast<double>(reps);
        std::printf("select,%ld,%.3f,%.1f\n", n, t_sel / k, c_sel / k);
        std::printf("sorted,%ld,%.3f,%.1f\n", n, t_sort / k, c_sort / k);
        ns.push_back(static_cast<double>(n));
        sel_cmp.push_back(c_sel / k);
        sort_cmp.push_back(c_sort / k);
      }
      if (ns.size() >= 2) {
        std::printf("# comparison slope select=%.4f sorted=%.4f\n", fit_slope(ns, sel_cmp),
                    fit_slope(ns, sort_cmp));
      }
      return kOk;
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kConfig;
  }
  return kOk;
}
