#pragma once
// Ground-truth solver for small instances: exact vertex-disjoint paths by
// pruned backtracking, plus a plain enumerator used to cross-check it.
#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <stdexcept>
#include <vector>

#include "pdp/homology.hpp"
#include "pdp/linkage.hpp"
#include "pdp/plane_graph.hpp"

namespace pdp {

struct OracleBudget {
  std::int64_t node_limit = 50'000'000;
  double time_limit = 60.0;
};

enum class OracleStatus { Yes, No, BudgetExceeded };

struct OracleResult {
  OracleStatus status = OracleStatus::No;
  std::optional<Linkage> linkage;
  std::int64_t nodes = 0;
};

namespace detail {

class DisjointPathSearch {
 public:
  DisjointPathSearch(const PlaneGraph& g, const Terminals& t, const OracleBudget& b)
      : g_(g), t_(t), budget_(b), start_(std::chrono::steady_clock::now()) {
    if (auto r = validate_terminals(g, t); !r) throw std::invalid_argument("oracle: " + r.reason);
    blocked_.assign(g.vertex_count(), 0);
    for (VertexId v : t.all()) blocked_[v.v] = 1;
    order_ = route_order();
    paths_.resize(t.k());
  }

  // first == true stops at the first linkage; otherwise counts all of them
  OracleResult run(bool first) {
    first_only_ = first;
    count_ = 0;
    found_.reset();
    tripped_ = false;
    route(0);
    OracleResult out;
    out.nodes = nodes_;
    if (tripped_ && !found_) {
      out.status = OracleStatus::BudgetExceeded;
    } else if (found_) {
      out.status = OracleStatus::Yes;
      out.linkage = found_;
    } else {
      out.status = OracleStatus::No;
    }
    return out;
  }

  std::int64_t count() const { return count_; }

 private:
  // fewest shortest paths routed first
  std::vector<int> route_order() const {
    std::vector<std::pair<long long, int>> keyed;
    for (int i = 0; i < t_.k(); ++i) keyed.push_back({shortest_path_count(i), i});
    std::stable_sort(keyed.begin(), keyed.end());
    std::vector<int> out;
    for (auto& [c, i] : keyed) out.push_back(i);
    return out;
  }

  long long shortest_path_count(int i) const {
    // BFS layer DAG count, avoiding other pairs' terminals, capped
    std::vector<char> avoid(g_.vertex_count(), 0);
    for (int j = 0; j < t_.k(); ++j) {
      if (j == i) continue;
      avoid[t_.s(j).v] = avoid[t_.t(j).v] = 1;
    }
    std::vector<int> dist(g_.vertex_count(), -1);
    std::vector<long long> ways(g_.vertex_count(), 0);
    constexpr long long kCap = 1'000'000'000;
    std::queue<int> q;
    dist[t_.s(i).v] = 0;
    ways[t_.s(i).v] = 1;
    q.push(t_.s(i).v);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (DartId d : g_.rotation(VertexId(u))) {
        int w = g_.head(d).v;
        if (avoid[w]) continue;
        if (dist[w] == -1) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
        if (dist[w] == dist[u] + 1) ways[w] = std::min(kCap, ways[w] + ways[u]);
      }
    }
    return ways[t_.t(i).v] == 0 ? kCap + 1 : ways[t_.t(i).v];
  }

  bool tick() {
    ++nodes_;
    if (nodes_ > budget_.node_limit) tripped_ = true;
    if ((nodes_ & 1023) == 0) {
      double el = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
      if (el > budget_.time_limit) tripped_ = true;
    }
    return !tripped_;
  }

  bool reachable(VertexId from, VertexId to) const {
    if (from == to) return true;
    std::vector<char> seen(g_.vertex_count(), 0);
    std::queue<int> q;
    seen[from.v] = 1;
    q.push(from.v);
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (DartId d : g_.rotation(VertexId(u))) {
        int w = g_.head(d).v;
        if (seen[w]) continue;
        if (VertexId(w) == to) return true;
        if (blocked_[w]) continue;
        seen[w] = 1;
        q.push(w);
      }
    }
    return false;
  }

  bool remaining_pairs_viable(int idx, VertexId cur) const {
    int i = order_[idx];
    if (!reachable(cur, t_.t(i))) return false;
    for (int jdx = idx + 1; jdx < t_.k(); ++jdx) {
      int j = order_[jdx];
      if (!reachable(t_.s(j), t_.t(j))) return false;
    }
    return true;
  }

  void route(int idx) {
    if (stop()) return;
    if (idx == t_.k()) {
      ++count_;
      if (first_only_ || !found_) {
        Linkage l;
        l.paths = paths_;
        found_ = l;
      }
      return;
    }
    int i = order_[idx];
    paths_[i] = {t_.s(i)};
    extend(idx, t_.s(i));
    paths_[i].clear();
  }

  void extend(int idx, VertexId cur) {
    if (stop()) return;
    int i = order_[idx];
    if (cur == t_.t(i)) {
      route(idx + 1);
      return;
    }
    if (!remaining_pairs_viable(idx, cur)) return;
    // deterministic: neighbors in ascending vertex id
    std::vector<int> nbrs;
    for (DartId d : g_.rotation(cur)) nbrs.push_back(g_.head(d).v);
    std::sort(nbrs.begin(), nbrs.end());
    nbrs.erase(std::unique(nbrs.begin(), nbrs.end()), nbrs.end());
    for (int w : nbrs) {
      if (!tick()) return;
      bool is_goal = VertexId(w) == t_.t(i);
      if (blocked_[w] && !is_goal) continue;
      paths_[i].push_back(VertexId(w));
      if (!is_goal) blocked_[w] = 1;
      extend(idx, VertexId(w));
      if (!is_goal) blocked_[w] = 0;
      paths_[i].pop_back();
      if (stop()) return;
    }
  }

  bool stop() const { return tripped_ || (first_only_ && found_.has_value()); }

  const PlaneGraph& g_;
  const Terminals& t_;
  OracleBudget budget_;
  std::chrono::steady_clock::time_point start_;
  std::vector<char> blocked_;
  std::vector<int> order_;
  std::vector<std::vector<VertexId>> paths_;
  std::optional<Linkage> found_;
  std::int64_t nodes_ = 0;
  std::int64_t count_ = 0;
  bool first_only_ = true;
  bool tripped_ = false;
};

}  // namespace detail

inline OracleResult solve_exact(const PlaneGraph& g, const Terminals& t, const OracleBudget& b = {}) {
  detail::DisjointPathSearch s(g, t, b);
  return s.run(true);
}

// Exhaustive count of vertex-disjoint path systems via the pruned searcher.
inline std::int64_t count_linkages(const PlaneGraph& g, const Terminals& t, const OracleBudget& b = {}) {
  detail::DisjointPathSearch s(g, t, b);
  OracleResult r = s.run(false);
  if (r.status == OracleStatus::BudgetExceeded) throw std::runtime_error("count_linkages: budget exceeded");
  return s.count();
}

// Independent plain enumerator: fixed pair order, no pruning, no ordering
// heuristics.  Cross-checks count_linkages.
namespace detail {
inline void plain_extend(const PlaneGraph& g, const Terminals& t, std::vector<char>& blocked, int i,
                         VertexId cur, std::int64_t& count) {
  if (cur == t.t(i)) {
    if (i + 1 == t.k()) {
      ++count;
      return;
    }
    std::vector<char> saved = blocked;  // terminals of pair i+1 stay blocked
    plain_extend(g, t, blocked, i + 1, t.s(i + 1), count);
    blocked = saved;
    return;
  }
  for (DartId d : g.rotation(cur)) {
    VertexId w = g.head(d);
    bool is_goal = w == t.t(i);
    if (blocked[w.v] && !is_goal) continue;
    if (is_goal) {
      // parallel edges reach the goal once per edge; count vertex paths once
      bool first_parallel = true;
      for (DartId d2 : g.rotation(cur)) {
        if (d2 == d) break;
        if (g.head(d2) == w) first_parallel = false;
      }
      if (!first_parallel) continue;
      plain_extend(g, t, blocked, i, w, count);
      continue;
    }
    bool first_parallel = true;
    for (DartId d2 : g.rotation(cur)) {
      if (d2 == d) break;
      if (g.head(d2) == w) first_parallel = false;
    }
    if (!first_parallel) continue;
    blocked[w.v] = 1;
    plain_extend(g, t, blocked, i, w, count);
    blocked[w.v] = 0;
  }
}
}  // namespace detail

inline std::int64_t count_linkages_plain(const PlaneGraph& g, const Terminals& t) {
  if (auto r = validate_terminals(g, t); !r) throw std::invalid_argument("oracle: " + r.reason);
  std::vector<char> blocked(g.vertex_count(), 0);
  for (VertexId v : t.all()) blocked[v.v] = 1;
  std::int64_t count = 0;
  detail::plain_extend(g, t, blocked, 0, t.s(0), count);
  return count;
}

// Exhaustive reference minimizer for pre-feasibility on tiny systems.  Grows
// face words one symbol at a time, branching only on the end faces of some
// currently violated path (a fix can live nowhere else), and collects every
// pre-feasible state reached first along its branch.  The answer is their
// face-wise longest-common-prefix meet, provided that meet is itself one of
// the collected states; otherwise no minimum exists within the length bound.
inline std::optional<HomologyFunction> min_prefeasible_bruteforce(const HomologyFunction& f0,
                                                                  const FlowFunction& phi,
                                                                  const ConstraintSystem& cs,
                                                                  std::size_t max_len) {
  const PlaneGraph& g = phi.graph();
  if (g.face_count() > 8) throw std::invalid_argument("bruteforce: too many faces");
  if (max_len > 4) throw std::invalid_argument("bruteforce: length bound too large");
  if (!f0.word(f0.anchor()).empty()) throw std::invalid_argument("anchor face word must be empty");

  struct Path {
    FaceId F, Fp;
    ReducedWord phi_pi;
    CandidateSet gamma;
  };
  std::vector<Path> paths;
  for (int v = 0; v < g.vertex_count(); ++v)
    detail::for_each_fan_window(g, VertexId(v), [&](const FaceEdgePath& pi) {
      paths.push_back({pi.first_face(g), pi.last_face(g), path_value(phi, pi), cs.fan_gamma(pi)});
    });
  for (std::size_t i = 0; i < cs.frame_paths.size(); ++i) {
    const auto& pi = cs.frame_paths[i];
    paths.push_back({pi.first_face(g), pi.last_face(g), path_value(phi, pi), cs.frame_gamma[i]});
  }

  auto violated = [&](const HomologyFunction& f) -> const Path* {
    for (const Path& p : paths) {
      if (f.word(p.F).empty() && f.word(p.Fp).empty()) continue;
      if (p.gamma.contains(f.word(p.F).inverse() * p.phi_pi * f.word(p.Fp))) continue;
      return &p;
    }
    return nullptr;
  };
  auto state_key = [&](const HomologyFunction& f) {
    std::string k;
    for (int F = 0; F < f.face_count(); ++F) k += f.word(FaceId(F)).str() + "|";
    return k;
  };

  std::vector<HomologyFunction> found;
  std::set<std::string> visited;
  std::vector<HomologyFunction> stack{f0};
  while (!stack.empty()) {
    HomologyFunction f = std::move(stack.back());
    stack.pop_back();
    if (!visited.insert(state_key(f)).second) continue;
    const Path* p = violated(f);
    if (!p) {
      found.push_back(std::move(f));
      continue;
    }
    for (FaceId face : {p->F, p->Fp}) {
      if (face == f.anchor()) continue;
      const ReducedWord& cur = f.word(face);
      if (cur.size() >= max_len) continue;
      for (int a = 1; a <= cs.k; ++a)
        for (Symbol s : {Symbol(a), Symbol(-a)}) {
          if (!cur.empty() && cur.back() == -s) continue;  // must extend, not cancel
          HomologyFunction nf = f;
          ReducedWord w = cur;
          w.push(s);
          nf.set_word(face, std::move(w));
          stack.push_back(std::move(nf));
        }
    }
  }
  if (found.empty()) return std::nullopt;

  HomologyFunction meet = found[0];
  for (const HomologyFunction& f : found)
    for (int F = 0; F < meet.face_count(); ++F) {
      const ReducedWord& a = meet.word(FaceId(F));
      const ReducedWord& b = f.word(FaceId(F));
      std::size_t n = 0;
      while (n < a.size() && n < b.size() && a.at(n) == b.at(n)) ++n;
      meet.set_word(FaceId(F), a.prefix(n));
    }
  // The meet lower-bounds every pre-feasible extension via found; if it is
  // itself pre-feasible it is the minimum, otherwise no minimum exists.
  if (violated(meet)) return std::nullopt;
  return meet;
}

}  // namespace pdp
