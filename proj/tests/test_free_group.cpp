#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "pdp/free_group.hpp"

using namespace pdp;

static ReducedWord W(const std::string& s) { return ReducedWord::parse(s); }

TEST_CASE("product reduces at the seam") {
  CHECK(W("1.2") * W("2'.3") == W("1.3"));
  CHECK(W("1.2") * W("2'.1'") == W("e"));
  CHECK(W("1") * W("1") == W("1.1"));
  CHECK(W("e") * W("3'") == W("3'"));
}

TEST_CASE("inverse and involution") {
  CHECK(W("1.2'.3").inverse() == W("3'.2.1'"));
  ReducedWord w = W("2.1.1.3'");
  CHECK(w.inverse().inverse() == w);
  CHECK(w * w.inverse() == W("e"));
  CHECK(w.inverse() * w == W("e"));
}

TEST_CASE("smaller is the prefix order") {
  CHECK(is_smaller(W("e"), W("1.2")));
  CHECK(is_smaller(W("1"), W("1.2")));
  CHECK(is_smaller(W("1.2"), W("1.2")));
  CHECK_FALSE(is_smaller(W("2"), W("1.2")));
  CHECK_FALSE(is_smaller(W("1.2.3"), W("1.2")));
}

TEST_CASE("join is the smallest common extension or nothing") {
  CHECK(join(W("1"), W("1.2")) == W("1.2"));
  CHECK(join(W("1.2"), W("1")) == W("1.2"));
  CHECK(join(W("e"), W("3.1")) == W("3.1"));
  CHECK(join(W("1.2"), W("1.2")) == W("1.2"));
  CHECK_FALSE(join(W("1.2"), W("1.3")).has_value());
  CHECK_FALSE(join(W("1"), W("2")).has_value());
}

TEST_CASE("parse/str round trip") {
  for (const char* s : {"e", "1", "2'", "1.2'.3", "3.3.3'"}) {
    ReducedWord w = W(s);
    CHECK(ReducedWord::parse(w.str()) == w);
  }
  // parse reduces raw text
  CHECK(W("3.3.3'") == W("3"));
}

TEST_CASE("candidate set: empty admits only epsilon") {
  auto c = CandidateSet::empty_set();
  CHECK(c.contains(W("e")));
  CHECK_FALSE(c.contains(W("1")));
  CHECK_FALSE(c.contains(W("1'")));
}

TEST_CASE("candidate set: single symbol or epsilon") {
  auto c = CandidateSet::single_symbol_or_epsilon();
  CHECK(c.contains(W("e")));
  CHECK(c.contains(W("2")));
  CHECK(c.contains(W("2'")));
  CHECK_FALSE(c.contains(W("1.1")));
  CHECK_FALSE(c.contains(W("1.2'")));
}

TEST_CASE("candidate set: exactly(w) is the hereditary closure") {
  auto c = CandidateSet::exactly(W("1.2"));
  for (const char* in : {"e", "1", "2", "1'", "2'", "1.2", "2'.1'"})
    CHECK(c.contains(W(in)));
  for (const char* out : {"2.1", "1.1", "1.2'", "1.2.1", "3"})
    CHECK_FALSE(c.contains(W(out)));
}

TEST_CASE("hereditary closure is closed under prefixes and inverse") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> sym(1, 3), sgn(0, 1), len(0, 5);
  for (int iter = 0; iter < 500; ++iter) {
    std::vector<Symbol> raw;
    int n = len(rng);
    for (int i = 0; i < n; ++i) raw.push_back(sgn(rng) ? sym(rng) : -sym(rng));
    ReducedWord base = ReducedWord::from_symbols(raw);
    auto c = CandidateSet::exactly(base);
    // sample members by taking infixes of base
    for (std::size_t i = 0; i <= base.size(); ++i) {
      for (std::size_t j = i; j <= base.size(); ++j) {
        std::vector<Symbol> part(base.symbols().begin() + i, base.symbols().begin() + j);
        ReducedWord m = ReducedWord::from_symbols(part);
        REQUIRE(c.contains(m));
        REQUIRE(c.contains(m.inverse()));
        for (std::size_t p = 0; p <= m.size(); ++p) REQUIRE(c.contains(m.prefix(p)));
      }
    }
  }
}

TEST_CASE("randomized algebra laws") {
  std::mt19937_64 rng(42);
  std::uniform_int_distribution<int> sym(1, 4), sgn(0, 1), len(0, 8);
  auto rand_word = [&]() {
    std::vector<Symbol> raw;
    int n = len(rng);
    for (int i = 0; i < n; ++i) raw.push_back(sgn(rng) ? sym(rng) : -sym(rng));
    return ReducedWord::from_symbols(raw);
  };
  for (int iter = 0; iter < 2000; ++iter) {
    ReducedWord a = rand_word(), b = rand_word(), c = rand_word();
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * a.inverse() == ReducedWord());
    CHECK((a * b).inverse() == b.inverse() * a.inverse());
    // no adjacent cancelling pair survives
    const auto& s = (a * b).symbols();
    for (std::size_t i = 0; i + 1 < s.size(); ++i) CHECK(s[i] != -s[i + 1]);
    auto j = join(a, b);
    if (j) {
      CHECK(is_smaller(a, *j));
      CHECK(is_smaller(b, *j));
      CHECK((*j == a || *j == b));
    } else {
      CHECK_FALSE(is_smaller(a, b));
      CHECK_FALSE(is_smaller(b, a));
    }
  }
}
