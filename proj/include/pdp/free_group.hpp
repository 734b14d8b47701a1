#pragma once
// Reduced words over the free group on k generators, and the admissible sets
// ("candidate sets") used to constrain path values during homology repair.
//
// A symbol is a nonzero integer: +i is the i-th generator, -i its inverse
// (1-based).  Words are kept freely reduced at all times: no adjacent s, -s.
#include <cstdint>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdp {

using Symbol = std::int32_t;

class ReducedWord {
 public:
  ReducedWord() = default;

  static ReducedWord symbol(Symbol s) {
    if (s == 0) throw std::invalid_argument("symbol 0 is not a generator");
    ReducedWord w;
    w.sym_.push_back(s);
    return w;
  }

  // Reduces an arbitrary symbol sequence.
  static ReducedWord from_symbols(const std::vector<Symbol>& raw) {
    ReducedWord w;
    for (Symbol s : raw) w.push(s);
    return w;
  }

  bool empty() const { return sym_.empty(); }
  std::size_t size() const { return sym_.size(); }
  Symbol at(std::size_t i) const { return sym_[i]; }
  Symbol front() const { return sym_.front(); }
  Symbol back() const { return sym_.back(); }
  const std::vector<Symbol>& symbols() const { return sym_; }

  // Appends one symbol, cancelling at the seam.
  void push(Symbol s) {
    if (s == 0) throw std::invalid_argument("symbol 0 is not a generator");
    if (!sym_.empty() && sym_.back() == -s)
      sym_.pop_back();
    else
      sym_.push_back(s);
  }

  ReducedWord inverse() const {
    ReducedWord w;
    w.sym_.reserve(sym_.size());
    for (auto it = sym_.rbegin(); it != sym_.rend(); ++it) w.sym_.push_back(-*it);
    return w;
  }

  ReducedWord prefix(std::size_t n) const {
    ReducedWord w;
    w.sym_.assign(sym_.begin(), sym_.begin() + std::min(n, sym_.size()));
    return w;
  }

  friend ReducedWord operator*(const ReducedWord& a, const ReducedWord& b) {
    ReducedWord w = a;
    for (Symbol s : b.sym_) w.push(s);
    return w;
  }

  bool operator==(const ReducedWord&) const = default;

  // Debug text: symbols joined by '.', apostrophe suffix marks an inverse.
  // Example: 1.2'.3 is g1 * g2^-1 * g3.  Empty word prints as "e".
  std::string str() const {
    if (sym_.empty()) return "e";
    std::string out;
    for (std::size_t i = 0; i < sym_.size(); ++i) {
      if (i) out += '.';
      out += std::to_string(std::abs(sym_[i]));
      if (sym_[i] < 0) out += '\'';
    }
    return out;
  }

  static ReducedWord parse(const std::string& text) {
    ReducedWord w;
    if (text == "e" || text.empty()) return w;
    std::size_t i = 0;
    while (i < text.size()) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j == i) throw std::invalid_argument("bad word text: " + text);
      Symbol s = std::stoi(text.substr(i, j - i));
      if (j < text.size() && text[j] == '\'') {
        s = -s;
        ++j;
      }
      w.push(s);
      if (j < text.size()) {
        if (text[j] != '.') throw std::invalid_argument("bad word text: " + text);
        ++j;
      }
      i = j;
    }
    return w;
  }

 private:
  std::vector<Symbol> sym_;
};

// a is "smaller" than b when b starts with a.  Reflexive; epsilon is smallest.
inline bool is_prefix(const ReducedWord& a, const ReducedWord& b) {
  if (a.size() > b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.at(i) != b.at(i)) return false;
  return true;
}

inline bool is_smaller(const ReducedWord& a, const ReducedWord& b) {
  return is_prefix(a, b);
}

// Smallest word starting with both, or nothing when none exists: exactly one
// of a, b when one is a prefix of the other.
inline std::optional<ReducedWord> join(const ReducedWord& a, const ReducedWord& b) {
  if (is_prefix(a, b)) return b;
  if (is_prefix(b, a)) return a;
  return std::nullopt;
}

namespace detail {
inline bool infix_search(const ReducedWord& pat, const ReducedWord& text) {
  if (pat.empty()) return true;
  if (pat.size() > text.size()) return false;
  for (std::size_t off = 0; off + pat.size() <= text.size(); ++off) {
    bool ok = true;
    for (std::size_t i = 0; i < pat.size(); ++i)
      if (text.at(off + i) != pat.at(i)) {
        ok = false;
        break;
      }
    if (ok) return true;
  }
  return false;
}
}  // namespace detail

// Admissible value sets for constrained paths.  Three shapes arise:
//   Empty                 -- only the empty word (the edge must stay unused)
//   SingleSymbolOrEpsilon -- words of length at most one
//   Exactly(w)            -- the hereditary closure of {w}: every infix of w
//                            and every inverse of an infix
// All three are hereditary: closed under prefixes and under inverse.
class CandidateSet {
 public:
  enum class Tag { Empty, SingleSymbolOrEpsilon, Exactly };

  static CandidateSet empty_set() { return CandidateSet(Tag::Empty, {}); }
  static CandidateSet single_symbol_or_epsilon() {
    return CandidateSet(Tag::SingleSymbolOrEpsilon, {});
  }
  static CandidateSet exactly(ReducedWord w) {
    CandidateSet c(Tag::Exactly, std::move(w));
    c.base_inv_ = c.base_.inverse();
    return c;
  }

  Tag tag() const { return tag_; }
  const ReducedWord& base() const { return base_; }

  bool contains(const ReducedWord& w) const {
    switch (tag_) {
      case Tag::Empty:
        return w.empty();
      case Tag::SingleSymbolOrEpsilon:
        return w.size() <= 1;
      case Tag::Exactly:
        return detail::infix_search(w, base_) || detail::infix_search(w, base_inv_);
    }
    return false;
  }

  bool operator==(const CandidateSet& o) const {
    return tag_ == o.tag_ && base_ == o.base_;
  }

 private:
  CandidateSet(Tag t, ReducedWord b) : tag_(t), base_(std::move(b)) {}
  Tag tag_;
  ReducedWord base_;
  ReducedWord base_inv_;
};

}  // namespace pdp
