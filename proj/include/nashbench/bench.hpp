#pragma once

// Head-to-head harness: evaluate CFR and FP on the same games, aggregate the
// paired epsilon differences into a normal-approximation confidence interval
// and call a winner, escalating to a larger batch when the first one is
// inconclusive.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "nashbench/game.hpp"
#include "nashbench/gamegen.hpp"
#include "nashbench/solvers.hpp"

namespace nashbench {

struct GameEval {
  double eps_cfr = 0.0;
  double eps_fp = 0.0;
  double diff = 0.0;  // eps_cfr - eps_fp; positive favours FP
};

inline GameEval evaluate_game(const Game& game, int iterations) {
  const double cfr = epsilon(game, cfr_run(game, iterations).average_profile);
  const double fp = epsilon(game, fp_run(game, iterations).average_profile);
  return {cfr, fp, cfr - fp};
}

struct Aggregate {
  double mean = 0.0;
  double halfwidth = 0.0;
};

/// Sample mean and z * s / sqrt(N), with s the (N-1) sample deviation.
inline Aggregate aggregate(std::span<const double> samples, double z) {
  if (samples.size() < 2) throw std::invalid_argument("aggregate needs at least 2 samples");
  const auto n = static_cast<double>(samples.size());
  double sum = 0.0;
  for (double x : samples) sum += x;
  const double mean = sum / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double s = std::sqrt(ss / (n - 1.0));
  return {mean, z * s / std::sqrt(n)};
}

enum class Verdict { FP, CFR, Tie, Escalate };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::FP: return "FP";
    case Verdict::CFR: return "CFR";
    case Verdict::Tie: return "Tie";
    case Verdict::Escalate: return "Escalate";
  }
  return "?";
}

inline Verdict parse_verdict(std::string_view s) {
  if (s == "FP") return Verdict::FP;
  if (s == "CFR") return Verdict::CFR;
  if (s == "Tie") return Verdict::Tie;
  if (s == "Escalate") return Verdict::Escalate;
  throw std::invalid_argument("unknown verdict: " + std::string(s));
}

/// Significant when |mean| > halfwidth (strict).
inline Verdict decide(double mean, double halfwidth, bool final_stage) {
  if (halfwidth < 0.0) throw std::invalid_argument("halfwidth must be >= 0");
  if (std::abs(mean) > halfwidth) return mean > 0.0 ? Verdict::FP : Verdict::CFR;
  return final_stage ? Verdict::Tie : Verdict::Escalate;
}

/// 10,000 iterations, except 1,000 for five players with ten actions each.
inline int default_iterations(int players, int actions) {
  return players == 5 && actions == 10 ? 1000 : 10000;
}

struct ExperimentConfig {
  std::string label;
  /// Generated batch; the spec's own seed is ignored in favour of
  /// batch_seed(master_seed, index).
  std::optional<GenSpec> spec;
  /// Used when `spec` is empty. Every game is evaluated in a single, final
  /// stage.
  std::vector<Game> games;
  int iterations = 10000;
  int stage1_games = 10000;
  int stage2_games = 100000;
  double z_value = 1.96;
  std::uint64_t master_seed = 0;
  unsigned threads = 0;  // 0 = hardware concurrency
};

struct SummaryRow {
  std::string label;
  int actions = 0;
  int games_used = 0;
  int iterations = 0;
  double mean_cfr_eps = 0.0;
  double mean_fp_eps = 0.0;
  double mean_diff = 0.0;
  double ci_halfwidth = 0.0;
  Verdict winner = Verdict::Tie;
};

using GameEvaluator = std::function<GameEval(std::size_t index)>;

struct SuiteResult {
  SummaryRow row;
  std::vector<GameEval> per_game;
};

/// Evaluates indices [begin, end) into out[begin, end). Results are written
/// by index, so scheduling never changes the output.
inline void evaluate_range(const GameEvaluator& evaluator, std::size_t begin, std::size_t end,
                           unsigned threads, std::vector<GameEval>& out) {
  out.resize(std::max(out.size(), end));
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, end - begin));
  if (threads <= 1) {
    for (std::size_t k = begin; k < end; ++k) out[k] = evaluator(k);
    return;
  }
  std::atomic<std::size_t> next{begin};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t k = next++; k < end; k = next++) {
        try {
          out[k] = evaluator(k);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = end;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

namespace detail {

inline void validate(const ExperimentConfig& config) {
  if (config.iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  if (config.spec) {
    nashbench::validate(*config.spec);
    if (config.stage1_games < 2) throw std::invalid_argument("need at least 2 games");
    if (config.stage2_games < config.stage1_games) {
      throw std::invalid_argument("escalation batch must be at least the first batch");
    }
  } else if (config.games.size() < 2) {
    throw std::invalid_argument("need at least 2 games");
  }
}

inline std::string default_label(const ExperimentConfig& config) {
  if (!config.label.empty()) return config.label;
  if (!config.spec) return "corpus";
  return config.spec->kind == GameKind::ConstantSum2P
             ? std::to_string(config.spec->num_players) + " (zs)"
             : std::to_string(config.spec->num_players);
}

}  // namespace detail

/// Game `index` of a generated batch.
inline Game batch_game(const GenSpec& spec, std::uint64_t master_seed, std::size_t index) {
  GenSpec s = spec;
  s.seed = batch_seed(master_seed, index);
  return generate(s);
}

/// Full protocol. `evaluator` overrides per-game evaluation (it must be a
/// pure function of the index); by default games come from the config.
inline SuiteResult run_suite_detailed(const ExperimentConfig& config,
                                      GameEvaluator evaluator = {}) {
  detail::validate(config);
  if (!evaluator) {
    if (config.spec) {
      evaluator = [&config](std::size_t k) {
        return evaluate_game(batch_game(*config.spec, config.master_seed, k), config.iterations);
      };
    } else {
      evaluator = [&config](std::size_t k) {
        return evaluate_game(config.games[k], config.iterations);
      };
    }
  }

  const bool generated = config.spec.has_value();
  const auto first = generated ? static_cast<std::size_t>(config.stage1_games) : config.games.size();
  const auto second = generated ? static_cast<std::size_t>(config.stage2_games) : first;

  SuiteResult result;
  std::vector<double> diffs;
  auto summarize = [&](std::size_t used, bool final_stage) {
    diffs.resize(used);
    double cfr = 0.0;
    double fp = 0.0;
    for (std::size_t k = 0; k < used; ++k) {
      diffs[k] = result.per_game[k].diff;
      cfr += result.per_game[k].eps_cfr;
      fp += result.per_game[k].eps_fp;
    }
    const Aggregate agg = aggregate(diffs, config.z_value);
    SummaryRow& row = result.row;
    row.games_used = static_cast<int>(used);
    row.mean_cfr_eps = cfr / static_cast<double>(used);
    row.mean_fp_eps = fp / static_cast<double>(used);
    row.mean_diff = agg.mean;
    row.ci_halfwidth = agg.halfwidth;
    row.winner = decide(agg.mean, agg.halfwidth, final_stage);
  };

  evaluate_range(evaluator, 0, first, config.threads, result.per_game);
  summarize(first, second == first);
  if (result.row.winner == Verdict::Escalate) {
    evaluate_range(evaluator, first, second, config.threads, result.per_game);
    summarize(second, true);
  }

  result.row.label = detail::default_label(config);
  result.row.actions = generated ? config.spec->actions_per_player : config.games.front().num_strategies(0);
  result.row.iterations = config.iterations;
  return result;
}

inline SummaryRow run_suite(const ExperimentConfig& config) {
  return run_suite_detailed(config).row;
}

// ---------------------------------------------------------------------------
// Presentation

enum class TableFormat { Csv, Markdown };

inline constexpr std::string_view kCsvHeader =
    "label,m,games,iterations,cfr_eps,fp_eps,diff,ci95,winner";

namespace detail {

inline std::string format_number(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

inline std::string sig4(double x) { return format_number("%.4g", x); }
inline std::string sci4(double x) { return format_number("%.3e", x); }

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t k = 0; k < line.size(); ++k) {
    const char c = line[k];
    if (quoted) {
      if (c == '"' && k + 1 < line.size() && line[k + 1] == '"') {
        fields.back() += '"';
        ++k;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  return fields;
}

}  // namespace detail

inline std::string render(std::span<const SummaryRow> rows, TableFormat format) {
  if (rows.empty()) throw std::invalid_argument("nothing to render");
  std::string out;
  if (format == TableFormat::Csv) {
    out += kCsvHeader;
    out += '\n';
    for (const auto& r : rows) {
      out += detail::csv_field(r.label) + ',' + std::to_string(r.actions) + ',' +
             std::to_string(r.games_used) + ',' + std::to_string(r.iterations) + ',' +
             detail::sig4(r.mean_cfr_eps) + ',' + detail::sig4(r.mean_fp_eps) + ',' +
             detail::sci4(r.mean_diff) + ',' + detail::sci4(r.ci_halfwidth) + ',' +
             std::string(to_string(r.winner)) + '\n';
    }
    return out;
  }
  out += "| n | m | # games | # iterations | Avg. CFR ε | Avg. FP ε | Avg. difference in ε | Winner |\n";
  out += "|---|---|---|---|---|---|---|---|\n";
  for (const auto& r : rows) {
    out += "| " + r.label + " | " + std::to_string(r.actions) + " | " +
           std::to_string(r.games_used) + " | " + std::to_string(r.iterations) + " | " +
           detail::sig4(r.mean_cfr_eps) + " | " + detail::sig4(r.mean_fp_eps) + " | " +
           detail::sci4(r.mean_diff) + " ± " + detail::sci4(r.ci_halfwidth) + " | " +
           std::string(to_string(r.winner)) + " |\n";
  }
  return out;
}

/// Inverse of the CSV rendering, to printed precision.
inline std::vector<SummaryRow> parse_summary_csv(std::string_view text) {
  std::vector<SummaryRow> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || detail::split_csv_line(line) != detail::split_csv_line(kCsvHeader)) {
    throw std::invalid_argument("missing or unexpected CSV header");
  }
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto f = detail::split_csv_line(line);
    if (f.size() != 9) throw std::invalid_argument("expected 9 CSV fields: " + line);
    SummaryRow r;
    r.label = f[0];
    r.actions = std::stoi(f[1]);
    r.games_used = std::stoi(f[2]);
    r.iterations = std::stoi(f[3]);
    r.mean_cfr_eps = std::stod(f[4]);
    r.mean_fp_eps = std::stod(f[5]);
    r.mean_diff = std::stod(f[6]);
    r.ci_halfwidth = std::stod(f[7]);
    r.winner = parse_verdict(f[8]);
    rows.push_back(std::move(r));
  }
  return rows;
}

/// `game_index,eps_cfr,eps_fp,diff` with round-trip precision.
inline std::string render_per_game(std::span<const GameEval> evals) {
  std::string out = "game_index,eps_cfr,eps_fp,diff\n";
  for (std::size_t k = 0; k < evals.size(); ++k) {
    out += std::to_string(k) + ',' + detail::format_number("%.17g", evals[k].eps_cfr) + ',' +
           detail::format_number("%.17g", evals[k].eps_fp) + ',' +
           detail::format_number("%.17g", evals[k].diff) + '\n';
  }
  return out;
}

}  // namespace nashbench
