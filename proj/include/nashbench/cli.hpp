#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage error, 2 data error.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "nashbench/bench.hpp"
#include "nashbench/game.hpp"
#include "nashbench/gamegen.hpp"
#include "nashbench/nfg.hpp"
#include "nashbench/solvers.hpp"

namespace nashbench::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline GameKind parse_kind(const std::string& kind) {
  if (kind == "uniform") return GameKind::UniformRandom;
  if (kind == "zs") return GameKind::ConstantSum2P;
  throw UsageError("unknown --kind '" + kind + "' (expected uniform or zs)");
}

inline unsigned parse_threads(const std::string& s) {
  if (s == "max") return std::max(1u, std::thread::hardware_concurrency());
  try {
    std::size_t used = 0;
    const int n = std::stoi(s, &used);
    if (used == s.size() && n >= 1) return static_cast<unsigned>(n);
  } catch (const std::exception&) {
  }
  throw UsageError("--threads expects a positive integer or 'max'");
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f || !(f << text) || !f.flush()) throw DataError("cannot write " + path.string());
}

inline Game load_game(const std::string& path) {
  std::string text;
  try {
    text = read_text_file(path);
  } catch (const std::exception& e) {
    throw DataError(e.what());
  }
  try {
    return parse_nfg(text);
  } catch (const NfgError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline GenSpec make_spec(int players, int actions, const std::string& kind, std::uint64_t seed) {
  GenSpec spec{players, actions, parse_kind(kind), seed};
  try {
    validate(spec);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return spec;
}

}  // namespace detail

/// Runs one invocation; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fictitious play vs. regret-matching CFR on strategic-form games", "nashbench"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate random games as .nfg files");
  int gen_players = 0;
  int gen_actions = 0;
  int gen_count = 1;
  std::string gen_kind = "uniform";
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  gen->add_option("--players", gen_players, "Number of players")->required();
  gen->add_option("--actions", gen_actions, "Pure strategies per player")->required();
  gen->add_option("--kind", gen_kind, "uniform | zs (two-player constant-sum)");
  gen->add_option("--seed", gen_seed, "Game seed (batch master seed when --count > 1)");
  gen->add_option("--count", gen_count, "Number of games; > 1 writes a directory");
  gen->add_option("--out", gen_out, "Output file, or directory when --count > 1")->required();

  // solve
  auto* solve = app.add_subcommand("solve", "Run one solver on a game file");
  std::string solve_game;
  std::string solve_algo;
  int solve_iters = 10000;
  bool solve_trace = false;
  std::vector<int> solve_checkpoints;
  solve->add_option("--game", solve_game, "Input .nfg file")->required();
  solve->add_option("--algo", solve_algo, "fp | cfr")->required();
  solve->add_option("--iters", solve_iters, "Iterations");
  solve->add_flag("--trace", solve_trace, "Print epsilon of the running average at checkpoints");
  solve->add_option("--checkpoints", solve_checkpoints,
                    "Explicit trace checkpoints (default: powers of ten and the last iteration)")
      ->delimiter(',');

  // eval
  auto* eval = app.add_subcommand("eval", "Run both solvers on a game file and compare epsilon");
  std::string eval_game;
  int eval_iters = 10000;
  eval->add_option("--game", eval_game, "Input .nfg file")->required();
  eval->add_option("--iters", eval_iters, "Iterations for both solvers");

  // bench
  auto* bench = app.add_subcommand("bench", "Head-to-head benchmark with escalation");
  int bench_players = 0;
  int bench_actions = 0;
  std::string bench_kind = "uniform";
  int bench_games = 10000;
  int bench_iters = 0;
  std::uint64_t bench_seed = 0;
  int bench_escalate = 100000;
  std::string bench_format = "markdown";
  std::string bench_per_game;
  std::string bench_threads = "max";
  std::string bench_in_dir;
  std::string bench_label;
  bool bench_normalize = false;
  bench->add_option("--players", bench_players, "Number of players");
  bench->add_option("--actions", bench_actions, "Pure strategies per player");
  bench->add_option("--kind", bench_kind, "uniform | zs");
  bench->add_option("--games", bench_games, "Games in the first stage");
  bench->add_option("--iters", bench_iters,
                    "Solver iterations (default 10000, or 1000 for 5 players x 10 actions)");
  bench->add_option("--seed", bench_seed, "Master seed");
  auto* escalate_opt =
      bench->add_option("--escalate-games", bench_escalate, "Total games after escalation");
  bench->add_option("--format", bench_format, "markdown | csv");
  bench->add_option("--per-game-out", bench_per_game, "Write per-game results CSV here");
  bench->add_option("--threads", bench_threads, "Worker threads (integer or 'max')");
  bench->add_option("--in-dir", bench_in_dir, "Benchmark a directory of .nfg files instead");
  bench->add_flag("--normalize", bench_normalize, "Normalize ingested games to [0,1]");
  bench->add_option("--label", bench_label, "Row label");

  // convert
  auto* convert = app.add_subcommand("convert", "Ingest a directory of .nfg files");
  std::string conv_in;
  std::string conv_out;
  std::string conv_report;
  bool conv_normalize = false;
  convert->add_option("--in-dir", conv_in, "Input directory")->required();
  convert->add_option("--out-dir", conv_out, "Write accepted games here");
  convert->add_flag("--normalize", conv_normalize, "Map payoffs onto [0,1]");
  convert->add_option("--report", conv_report, "Also write the report to this file");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      const GenSpec spec = detail::make_spec(gen_players, gen_actions, gen_kind, gen_seed);
      if (gen_count < 1) throw UsageError("--count must be >= 1");
      if (gen_count == 1) {
        detail::write_file(gen_out, write_nfg(generate(spec)));
      } else {
        std::error_code ec;
        std::filesystem::create_directories(gen_out, ec);
        for (int k = 0; k < gen_count; ++k) {
          char name[32];
          std::snprintf(name, sizeof name, "game_%06d.nfg", k);
          detail::write_file(std::filesystem::path(gen_out) / name,
                             write_nfg(batch_game(spec, gen_seed, static_cast<std::size_t>(k))));
        }
      }
      return kExitOk;
    }

    if (solve->parsed()) {
      if (solve_algo != "fp" && solve_algo != "cfr") throw UsageError("--algo must be fp or cfr");
      if (solve_iters < 1) throw UsageError("--iters must be >= 1");
      SolveOptions options;
      if (!solve_checkpoints.empty()) {
        options.checkpoints = solve_checkpoints;
        for (int c : solve_checkpoints) {
          if (c < 1 || c > solve_iters) throw UsageError("checkpoints must lie in [1, --iters]");
        }
      } else if (solve_trace) {
        for (long c = 1; c < solve_iters; c *= 10) options.checkpoints.push_back(static_cast<int>(c));
        options.checkpoints.push_back(solve_iters);
      }
      const Game game = detail::load_game(solve_game);
      const SolveResult result =
          solve_algo == "fp" ? fp_run(game, solve_iters, options) : cfr_run(game, solve_iters, options);
      out << "algorithm " << solve_algo << "\n";
      out << "iterations " << result.iterations << "\n";
      out << "epsilon " << detail::format_double(epsilon(game, result.average_profile)) << "\n";
      for (int i = 0; i < game.num_players(); ++i) {
        out << "player " << i + 1 << ":";
        for (double p : result.average_profile[i].probs()) out << " " << detail::format_double(p);
        out << "\n";
      }
      if (!result.epsilon_trace.empty()) {
        out << "iteration,epsilon\n";
        for (std::size_t k = 0; k < result.epsilon_trace.size(); ++k) {
          out << result.checkpoints[k] << "," << detail::format_double(result.epsilon_trace[k]) << "\n";
        }
      }
      return kExitOk;
    }

    if (eval->parsed()) {
      if (eval_iters < 1) throw UsageError("--iters must be >= 1");
      const Game game = detail::load_game(eval_game);
      const GameEval e = evaluate_game(game, eval_iters);
      out << "eps_cfr " << detail::format_double(e.eps_cfr) << "\n";
      out << "eps_fp " << detail::format_double(e.eps_fp) << "\n";
      out << "diff " << detail::format_double(e.diff) << "\n";
      return kExitOk;
    }

    if (bench->parsed()) {
      TableFormat format;
      if (bench_format == "markdown") {
        format = TableFormat::Markdown;
      } else if (bench_format == "csv") {
        format = TableFormat::Csv;
      } else {
        throw UsageError("--format must be markdown or csv");
      }
      ExperimentConfig config;
      config.label = bench_label;
      config.master_seed = bench_seed;
      config.threads = detail::parse_threads(bench_threads);
      if (!bench_in_dir.empty()) {
        if (bench_players != 0 || bench_actions != 0) {
          throw UsageError("--in-dir cannot be combined with --players/--actions");
        }
        IngestReport report;
        try {
          report = ingest_dir(bench_in_dir, bench_normalize);
        } catch (const std::exception& e) {
          throw DataError(e.what());
        }
        for (auto& [name, game] : report.accepted) config.games.push_back(std::move(game));
        for (const auto& [name, reason] : report.rejected) err << "skipped " << name << ": " << reason << "\n";
        if (config.games.size() < 2) throw DataError("need at least 2 valid games in " + bench_in_dir);
        config.iterations = bench_iters != 0 ? bench_iters : 10000;
      } else {
        if (bench_players == 0 || bench_actions == 0) {
          throw UsageError("--players and --actions are required (or use --in-dir)");
        }
        config.spec = detail::make_spec(bench_players, bench_actions, bench_kind, 0);
        if (bench_games < 2) throw UsageError("--games must be >= 2 for a confidence interval");
        if (escalate_opt->count() == 0) bench_escalate = std::max(bench_escalate, bench_games);
        if (bench_escalate < bench_games) throw UsageError("--escalate-games must be >= --games");
        config.stage1_games = bench_games;
        config.stage2_games = bench_escalate;
        config.iterations = bench_iters != 0 ? bench_iters : default_iterations(bench_players, bench_actions);
      }
      if (config.iterations < 1) throw UsageError("--iters must be >= 1");

      const SuiteResult result = run_suite_detailed(config);
      if (!bench_per_game.empty()) {
        detail::write_file(bench_per_game, render_per_game(result.per_game));
      }
      out << render(std::span(&result.row, 1), format);
      return kExitOk;
    }

    if (convert->parsed()) {
      IngestReport report;
      try {
        report = ingest_dir(conv_in, conv_normalize);
      } catch (const std::exception& e) {
        throw DataError(e.what());
      }
      if (!conv_out.empty()) {
        std::error_code ec;
        std::filesystem::create_directories(conv_out, ec);
        for (const auto& [name, game] : report.accepted) {
          detail::write_file(std::filesystem::path(conv_out) / name, write_nfg(game, name));
        }
      }
      const std::string text = format_report(report);
      if (!conv_report.empty()) detail::write_file(conv_report, text);
      out << text;
      return kExitOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace nashbench::cli
