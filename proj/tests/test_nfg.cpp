#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "nashbench/gamegen.hpp"
#include "nashbench/nfg.hpp"
#include "oracle.hpp"

using namespace nashbench;
namespace fs = std::filesystem;

namespace {

NfgError::Kind error_kind(std::string_view text) {
  try {
    parse_nfg(text);
  } catch (const NfgError& e) {
    return e.kind();
  }
  FAIL("document was accepted: " << text);
  return NfgError::Kind::MalformedHeader;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const {
    std::ofstream(path / name, std::ios::binary) << text;
  }
};

const char* kPenniesDoc =
    "NFG 1 R \"Matching pennies\" { \"Player 1\" \"Player 2\" } { 2 2 }\n"
    "\n"
    "1 0 0 1 0 1 1 0\n";

}  // namespace

TEST_CASE("parse_nfg examples", "[nfg]") {
  SECTION("minimal one-player document") {
    const Game g = parse_nfg("NFG 1 R \"\" { \"P\" } { 1 }\n0\n");
    CHECK(g.num_players() == 1);
    CHECK(g.strategy_counts() == std::vector<int>{1});
    CHECK(g.payoffs(0)[0] == 0.0);
  }
  SECTION("matching pennies") {
    CHECK(parse_nfg(kPenniesDoc) == named_game(NamedGame::MatchingPennies01));
  }
  SECTION("NaN payoff is rejected with its position") {
    const std::string doc = "NFG 1 R \"x\" { \"A\" \"B\" } { 2 1 }\n1 2 NaN 4\n";
    try {
      parse_nfg(doc);
      FAIL("accepted NaN");
    } catch (const NfgError& e) {
      CHECK(e.kind() == NfgError::Kind::NonFinitePayoff);
      CHECK(e.offset() == doc.find("NaN"));
      CHECK(std::string(e.what()).find("NaN") != std::string::npos);
    }
  }
}

TEST_CASE("parse_nfg tolerates comments, CRLF and number formats", "[nfg]") {
  const Game g = parse_nfg(
      "NFG 1 R \"t\" { \"a\" \"b\" }\r\n{ 2 1 }\r\n\"a comment\"\r\n"
      "  1e0\t-2.5\r\n+3 .25\r\n");
  CHECK(g.payoffs(0)[0] == 1.0);
  CHECK(g.payoffs(1)[0] == -2.5);
  CHECK(g.payoffs(0)[1] == 3.0);
  CHECK(g.payoffs(1)[1] == 0.25);
}

TEST_CASE("parse_nfg error kinds", "[nfg]") {
  using K = NfgError::Kind;
  CHECK(error_kind("") == K::MalformedHeader);
  CHECK(error_kind("EFG 2 R \"\" { \"a\" } { 1 } 0") == K::MalformedHeader);
  CHECK(error_kind("NFG 1 D \"\" { \"a\" } { 1 } 0") == K::MalformedHeader);
  CHECK(error_kind("NFG 1 R { \"a\" } { 1 } 0") == K::MalformedHeader);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" \"b\" } { 1 } 0") == K::MalformedHeader);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 0 } 0") == K::MalformedHeader);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { x } 0") == K::MalformedHeader);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0") == K::CountMismatch);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 1 } 0 1") == K::CountMismatch);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 inf") == K::NonFinitePayoff);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 -Infinity") == K::NonFinitePayoff);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 1e999") == K::NonFinitePayoff);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 1,5") == K::BadLiteral);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 1/2") == K::BadLiteral);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 0x10") == K::BadLiteral);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 2 } 0 \"1\"") == K::BadLiteral);
  CHECK(error_kind("NFG 2 R \"\" { \"a\" } { 1 } 0") == K::OutcomeForm);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" \"b\" } { { \"1\" \"2\" } { \"1\" } }\n"
                   "{ { \"\" 1, 0 } } 1 1") == K::OutcomeForm);
  CHECK(error_kind("NFG 1 R \"\" { \"a\" } { 1 } { \"\" 1 } 1") == K::OutcomeForm);
  CHECK(error_kind("NFG 1 R \"unterminated { \"a\" } { 1 } 0") == K::MalformedHeader);
}

TEST_CASE("write_nfg examples", "[nfg]") {
  const std::string doc = write_nfg(named_game(NamedGame::MatchingPennies01));
  const std::string body = doc.substr(doc.find("}\n") + 2);
  std::istringstream in(body);
  std::string literal;
  int count = 0;
  while (in >> literal) ++count;
  CHECK(count == 8);

  const Game tenth({1}, {{0.1}});
  CHECK(parse_nfg(write_nfg(tenth)).payoffs(0)[0] == 0.1);

  // Quotes in titles survive.
  CHECK(parse_nfg(write_nfg(tenth, "a \"quoted\" title")) == tenth);
}

TEST_CASE("write/parse round trip is bit exact", "[nfg][property]") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Game g = oracle::random_shaped_game(seed, 4, 256, -1e6, 2e6);
    CHECK(parse_nfg(write_nfg(g)) == g);
  }
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Game g = random_game({3, 3, GameKind::UniformRandom, seed});
    CHECK(parse_nfg(write_nfg(g)) == g);
  }
}

TEST_CASE("mutated documents never yield invalid games", "[nfg][property]") {
  const std::string base = write_nfg(random_game({2, 2, GameKind::UniformRandom, 3}), "fuzz");
  const std::string alphabet = "{}\" \n0123456789.-eNaIf,R";
  SplitMix64 rng(2024);
  int accepted = 0;
  for (int trial = 0; trial < 3000; ++trial) {
    std::string doc = base;
    const int edits = 1 + static_cast<int>(rng.next() % 4);
    for (int e = 0; e < edits; ++e) {
      const std::size_t pos = rng.next() % doc.size();
      switch (rng.next() % 3) {
        case 0: doc[pos] = alphabet[rng.next() % alphabet.size()]; break;
        case 1: doc.erase(pos, 1); break;
        default: doc.insert(pos, 1, alphabet[rng.next() % alphabet.size()]); break;
      }
    }
    try {
      const Game g = parse_nfg(doc);
      ++accepted;
      std::size_t profiles = 1;
      for (int c : g.strategy_counts()) {
        REQUIRE(c >= 1);
        profiles *= static_cast<std::size_t>(c);
      }
      for (int i = 0; i < g.num_players(); ++i) {
        REQUIRE(g.payoffs(i).size() == profiles);
        for (double u : g.payoffs(i)) REQUIRE(std::isfinite(u));
      }
    } catch (const NfgError&) {
    }
  }
  CHECK(accepted > 0);
}

TEST_CASE("ingest_dir", "[nfg][ingest]") {
  SECTION("three valid and one NaN file") {
    TempDir dir("nashbench_ingest_mixed");
    dir.write("b.nfg", kPenniesDoc);
    dir.write("a.nfg", write_nfg(random_game({2, 2, GameKind::UniformRandom, 1})));
    dir.write("d.nfg", "NFG 1 R \"\" { \"a\" } { 2 } 0 NaN\n");
    dir.write("c.nfg", write_nfg(Game({3}, {{2, 4, 6}})));
    dir.write("notes.txt", "ignored");
    const auto report = ingest_dir(dir.path, false);
    REQUIRE(report.accepted.size() == 3);
    REQUIRE(report.rejected.size() == 1);
    CHECK(report.accepted[0].first == "a.nfg");
    CHECK(report.accepted[1].first == "b.nfg");
    CHECK(report.accepted[2].first == "c.nfg");
    CHECK(report.rejected[0] == std::pair<std::string, std::string>{"d.nfg", "non-finite payoff"});
    CHECK_FALSE(report.normalized);
  }
  SECTION("normalization is applied on request") {
    TempDir dir("nashbench_ingest_norm");
    dir.write("g.nfg", write_nfg(Game({3}, {{2, 4, 6}})));
    const auto report = ingest_dir(dir.path, true);
    REQUIRE(report.accepted.size() == 1);
    const auto u = report.accepted[0].second.payoffs(0);
    CHECK(std::vector<double>(u.begin(), u.end()) == std::vector<double>{0, 0.5, 1});
    CHECK(report.normalized);
  }
  SECTION("empty directory") {
    TempDir dir("nashbench_ingest_empty");
    const auto report = ingest_dir(dir.path, false);
    CHECK(report.accepted.empty());
    CHECK(report.rejected.empty());
  }
  SECTION("missing directory") {
    CHECK_THROWS(ingest_dir(fs::temp_directory_path() / "nashbench_does_not_exist", false));
  }
  SECTION("malformed files are rejected with the parser message") {
    TempDir dir("nashbench_ingest_bad");
    dir.write("x.nfg", "NFG 1 R \"\" { \"a\" } { 2 } 0");
    const auto report = ingest_dir(dir.path, false);
    REQUIRE(report.rejected.size() == 1);
    CHECK(report.rejected[0].second.find("expected 2 payoffs") != std::string::npos);
  }
}

TEST_CASE("ingestion order does not change the accepted set", "[nfg][ingest][property]") {
  // Same files written in two different creation orders.
  std::vector<std::pair<std::string, std::string>> files;
  for (int k = 0; k < 6; ++k) {
    files.emplace_back("g" + std::to_string(k) + ".nfg",
                       write_nfg(random_game({2, 3, GameKind::UniformRandom, static_cast<std::uint64_t>(k)})));
  }
  files.emplace_back("bad.nfg", "NFG 1 R \"\" { \"a\" } { 1 } nan");
  TempDir forward("nashbench_order_fwd");
  TempDir backward("nashbench_order_bwd");
  for (const auto& [n, t] : files) forward.write(n, t);
  for (auto it = files.rbegin(); it != files.rend(); ++it) backward.write(it->first, it->second);
  const auto a = ingest_dir(forward.path, true);
  const auto b = ingest_dir(backward.path, true);
  CHECK(a.accepted == b.accepted);
  CHECK(a.rejected == b.rejected);
}
