#pragma once

// Reader and writer for payoff-form `.nfg` documents:
//
//   NFG 1 R "title" { "P1" "P2" } { 2 2 }
//   [optional quoted comment]
//   u1(1,1) u2(1,1) u1(2,1) u2(2,1) u1(1,2) u2(1,2) ...
//
// Profiles run with player 1's strategy fastest; each profile lists every
// player's payoff in player order. Outcome-form documents are rejected.

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include "nashbench/game.hpp"

namespace nashbench {

class NfgError : public std::runtime_error {
 public:
  enum class Kind { MalformedHeader, OutcomeForm, CountMismatch, NonFinitePayoff, BadLiteral };

  NfgError(Kind kind, std::size_t offset, const std::string& message)
      : std::runtime_error(message + " (at byte " + std::to_string(offset) + ")"),
        kind_(kind),
        offset_(offset) {}

  Kind kind() const { return kind_; }
  std::size_t offset() const { return offset_; }

 private:
  Kind kind_;
  std::size_t offset_;
};

namespace detail {

struct NfgToken {
  enum class Type { Word, String, Open, Close, End } type = Type::End;
  std::string text;
  std::size_t offset = 0;
};

class NfgLexer {
 public:
  explicit NfgLexer(std::string_view text) : text_(text) {}

  NfgToken next() {
    while (pos_ < text_.size() && is_space(text_[pos_])) ++pos_;
    NfgToken tok;
    tok.offset = pos_;
    if (pos_ >= text_.size()) return tok;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      tok.type = NfgToken::Type::Open;
      return tok;
    }
    if (c == '}') {
      ++pos_;
      tok.type = NfgToken::Type::Close;
      return tok;
    }
    if (c == '"') {
      tok.type = NfgToken::Type::String;
      ++pos_;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
        tok.text += text_[pos_++];
      }
      if (pos_ >= text_.size()) {
        throw NfgError(NfgError::Kind::MalformedHeader, tok.offset, "unterminated string");
      }
      ++pos_;
      return tok;
    }
    tok.type = NfgToken::Type::Word;
    while (pos_ < text_.size() && !is_space(text_[pos_]) && text_[pos_] != '{' &&
           text_[pos_] != '}' && text_[pos_] != '"') {
      tok.text += text_[pos_++];
    }
    return tok;
  }

  NfgToken peek() {
    const std::size_t saved = pos_;
    NfgToken tok = next();
    pos_ = saved;
    return tok;
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline bool looks_non_finite(std::string_view word) {
  std::string lower;
  for (char c : word) {
    if (c != '+' && c != '-') lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return lower == "nan" || lower == "inf" || lower == "infinity" || lower.starts_with("nan(");
}

inline double parse_payoff(const NfgToken& tok) {
  using Kind = NfgError::Kind;
  if (tok.type != NfgToken::Type::Word) {
    throw NfgError(Kind::BadLiteral, tok.offset, "expected a payoff literal");
  }
  std::string_view word = tok.text;
  if (looks_non_finite(word)) {
    throw NfgError(Kind::NonFinitePayoff, tok.offset, "non-finite payoff '" + tok.text + "'");
  }
  if (word.starts_with('+')) word.remove_prefix(1);
  double value = 0.0;
  const auto [end, ec] = std::from_chars(word.data(), word.data() + word.size(), value);
  if (ec == std::errc::result_out_of_range) {
    throw NfgError(Kind::NonFinitePayoff, tok.offset, "non-finite payoff '" + tok.text + "'");
  }
  if (ec != std::errc{} || end != word.data() + word.size() || word.empty() ||
      !(std::isdigit(static_cast<unsigned char>(word.front())) || word.front() == '-' ||
        word.front() == '.')) {
    throw NfgError(Kind::BadLiteral, tok.offset, "invalid payoff literal '" + tok.text + "'");
  }
  if (!std::isfinite(value)) {
    throw NfgError(Kind::NonFinitePayoff, tok.offset, "non-finite payoff '" + tok.text + "'");
  }
  return value;
}

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace detail

inline Game parse_nfg(std::string_view text) {
  using Kind = NfgError::Kind;
  using Type = detail::NfgToken::Type;
  detail::NfgLexer lex(text);

  auto expect_word = [&](std::string_view word) {
    const auto tok = lex.next();
    if (tok.type != Type::Word || tok.text != word) {
      throw NfgError(Kind::MalformedHeader, tok.offset,
                     "expected '" + std::string(word) + "' in header");
    }
  };
  auto expect = [&](Type type, const char* what) {
    auto tok = lex.next();
    if (tok.type != type) {
      throw NfgError(Kind::MalformedHeader, tok.offset, std::string("expected ") + what);
    }
    return tok;
  };

  expect_word("NFG");
  const auto version = lex.next();
  if (version.type == Type::Word && version.text == "2") {
    throw NfgError(Kind::OutcomeForm, version.offset, "outcome-form (version 2) documents are not supported");
  }
  if (version.type != Type::Word || version.text != "1") {
    throw NfgError(Kind::MalformedHeader, version.offset, "expected version '1'");
  }
  expect_word("R");
  expect(Type::String, "quoted title");

  expect(Type::Open, "'{' before player names");
  std::size_t num_players = 0;
  for (auto tok = lex.next(); tok.type != Type::Close; tok = lex.next()) {
    if (tok.type != Type::String) {
      throw NfgError(Kind::MalformedHeader, tok.offset, "expected quoted player name");
    }
    ++num_players;
  }
  if (num_players == 0) throw NfgError(Kind::MalformedHeader, 0, "no players declared");

  expect(Type::Open, "'{' before strategy counts");
  std::vector<int> counts;
  for (auto tok = lex.next(); tok.type != Type::Close; tok = lex.next()) {
    if (tok.type == Type::Open) {
      throw NfgError(Kind::OutcomeForm, tok.offset,
                     "strategy name lists indicate an outcome-form document");
    }
    int c = 0;
    const auto [end, ec] = std::from_chars(tok.text.data(), tok.text.data() + tok.text.size(), c);
    if (tok.type != Type::Word || ec != std::errc{} || end != tok.text.data() + tok.text.size() ||
        c < 1) {
      throw NfgError(Kind::MalformedHeader, tok.offset, "invalid strategy count");
    }
    counts.push_back(c);
  }
  if (counts.size() != num_players) {
    throw NfgError(Kind::MalformedHeader, 0,
                   "declared " + std::to_string(num_players) + " players but " +
                       std::to_string(counts.size()) + " strategy counts");
  }

  std::size_t profiles = 1;
  for (int c : counts) {
    if (profiles > (std::size_t{1} << 32) / static_cast<std::size_t>(c)) {
      throw NfgError(Kind::MalformedHeader, 0, "game too large");
    }
    profiles *= static_cast<std::size_t>(c);
  }

  if (lex.peek().type == Type::String) lex.next();  // comment
  if (lex.peek().type == Type::Open) {
    throw NfgError(Kind::OutcomeForm, lex.peek().offset, "outcome lists are not supported");
  }

  // Payoffs are buffered before shaping so a bogus header cannot force a
  // large allocation.
  const std::size_t expected = profiles * num_players;
  std::vector<double> flat;
  for (auto tok = lex.next(); tok.type != Type::End; tok = lex.next()) {
    if (flat.size() == expected) {
      throw NfgError(Kind::CountMismatch, tok.offset,
                     "more than " + std::to_string(expected) + " payoffs");
    }
    flat.push_back(detail::parse_payoff(tok));
  }
  if (flat.size() != expected) {
    throw NfgError(Kind::CountMismatch, text.size(),
                   "expected " + std::to_string(expected) + " payoffs, found " +
                       std::to_string(flat.size()));
  }
  std::vector<std::vector<double>> payoffs(num_players, std::vector<double>(profiles));
  for (std::size_t s = 0; s < profiles; ++s) {
    for (std::size_t i = 0; i < num_players; ++i) payoffs[i][s] = flat[s * num_players + i];
  }
  return Game(std::move(counts), std::move(payoffs));
}

/// Payoffs are written with the shortest decimal form that round-trips.
inline std::string write_nfg(const Game& game, std::string_view title = "") {
  std::string out = "NFG 1 R " + detail::quote(title) + " {";
  for (int i = 0; i < game.num_players(); ++i) {
    out += " " + detail::quote("Player " + std::to_string(i + 1));
  }
  out += " } {";
  for (int c : game.strategy_counts()) out += " " + std::to_string(c);
  out += " }\n\n";

  char buf[64];
  for (std::size_t s = 0; s < game.num_profiles(); ++s) {
    for (int i = 0; i < game.num_players(); ++i) {
      const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, game.payoffs(i)[s]);
      if (i > 0) out += ' ';
      out.append(buf, end);
    }
    out += '\n';
  }
  return out;
}

struct IngestReport {
  std::vector<std::pair<std::string, Game>> accepted;
  std::vector<std::pair<std::string, std::string>> rejected;
  bool normalized = false;
};

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Parses every `*.nfg` file in `dir`, in filename order. Documents with a
/// non-finite payoff are rejected with reason "non-finite payoff"; other
/// parse failures carry the parser's message.
inline IngestReport ingest_dir(const std::filesystem::path& dir, bool normalize_payoffs) {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw std::runtime_error("not a readable directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file() && it->path().extension() == ".nfg") files.push_back(it->path());
  }
  if (ec) throw std::runtime_error("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  IngestReport report;
  report.normalized = normalize_payoffs;
  for (const auto& path : files) {
    const std::string name = path.filename().string();
    try {
      Game game = parse_nfg(read_text_file(path));
      report.accepted.emplace_back(name, normalize_payoffs ? normalize(game) : std::move(game));
    } catch (const NfgError& e) {
      report.rejected.emplace_back(
          name, e.kind() == NfgError::Kind::NonFinitePayoff ? "non-finite payoff" : e.what());
    } catch (const std::exception& e) {
      report.rejected.emplace_back(name, e.what());
    }
  }
  return report;
}

inline std::string format_report(const IngestReport& report) {
  std::string out = "accepted " + std::to_string(report.accepted.size()) + "\nrejected " +
                    std::to_string(report.rejected.size()) + "\nnormalized " +
                    (report.normalized ? "true" : "false") + "\n";
  for (const auto& [name, game] : report.accepted) out += "ok " + name + "\n";
  for (const auto& [name, reason] : report.rejected) out += "rejected " + name + ": " + reason + "\n";
  return out;
}

}  // namespace nashbench
