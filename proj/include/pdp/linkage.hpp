#pragma once
// Linkages, weak linkages, the crossing predicate, verification, and the
// discrete-homotopy face operations (move / pull / push).
//
// Walks are dart sequences so parallel-edge traversals stay unambiguous
// after edge duplication.  Linkage paths are vertex sequences.
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "pdp/plane_graph.hpp"

namespace pdp {

struct NotApplicable : std::runtime_error {
  explicit NotApplicable(const std::string& m) : std::runtime_error("NotApplicable: " + m) {}
};
struct InvalidWalk : std::runtime_error {
  explicit InvalidWalk(const std::string& m) : std::runtime_error("InvalidWalk: " + m) {}
};

struct Terminals {
  std::vector<std::pair<VertexId, VertexId>> pairs;

  int k() const { return static_cast<int>(pairs.size()); }
  VertexId s(int i) const { return pairs[i].first; }
  VertexId t(int i) const { return pairs[i].second; }
  std::vector<VertexId> all() const {
    std::vector<VertexId> out;
    for (auto& [a, b] : pairs) {
      out.push_back(a);
      out.push_back(b);
    }
    return out;
  }
};

struct VerifyResult {
  bool ok = true;
  std::string reason;
  explicit operator bool() const { return ok; }
  static VerifyResult fail(std::string r) { return {false, std::move(r)}; }
};

inline VerifyResult validate_terminals(const PlaneGraph& g, const Terminals& t) {
  if (t.k() < 1) return VerifyResult::fail("no terminal pairs");
  std::set<int> seen;
  for (VertexId v : t.all()) {
    if (v.v < 0 || v.v >= g.vertex_count()) return VerifyResult::fail("terminal out of range");
    if (!seen.insert(v.v).second) return VerifyResult::fail("terminals not distinct");
  }
  return {};
}

struct Linkage {
  std::vector<std::vector<VertexId>> paths;
};

struct WeakLinkage {
  std::vector<std::vector<DartId>> walks;
};

inline std::vector<VertexId> walk_vertices(const PlaneGraph& g, const std::vector<DartId>& w) {
  std::vector<VertexId> out;
  if (w.empty()) return out;
  out.push_back(g.tail(w.front()));
  for (DartId d : w) out.push_back(g.head(d));
  return out;
}

// Dart sequence for a vertex path; the smallest dart id is used when
// parallel edges offer a choice.
inline std::vector<DartId> darts_of_vertex_path(const PlaneGraph& g, const std::vector<VertexId>& p) {
  std::vector<DartId> out;
  for (std::size_t i = 0; i + 1 < p.size(); ++i) {
    std::optional<DartId> best;
    for (DartId d : g.rotation(p[i]))
      if (g.head(d) == p[i + 1] && (!best || d.v < best->v)) best = d;
    if (!best) throw InvalidWalk("consecutive path vertices not adjacent");
    out.push_back(*best);
  }
  return out;
}

inline WeakLinkage as_weak_linkage(const PlaneGraph& g, const Linkage& l) {
  WeakLinkage w;
  for (const auto& p : l.paths) w.walks.push_back(darts_of_vertex_path(g, p));
  return w;
}

// ── Crossing predicate ───────────────────────────────────────────────

namespace detail {

// (in-dart at v, out-dart at v) for every interior visit of the walk
struct Visit {
  VertexId v;
  DartId in, out;
};

inline std::vector<Visit> interior_visits(const PlaneGraph& g, const std::vector<DartId>& w) {
  std::vector<Visit> out;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    if (g.head(w[j]) != g.tail(w[j + 1])) throw InvalidWalk("darts not chained");
    out.push_back({g.head(w[j]), twin(w[j]), w[j + 1]});
  }
  return out;
}

}  // namespace detail

// True iff the walks cross: some shared vertex has a consecutive edge pair of
// each walk interleaved in clockwise order.  Shared darts touch, not cross.
inline bool crossing(const PlaneGraph& g, const std::vector<DartId>& w1, const std::vector<DartId>& w2) {
  auto v1 = detail::interior_visits(g, w1);
  auto v2 = detail::interior_visits(g, w2);
  for (const auto& a : v1)
    for (const auto& b : v2) {
      if (a.v != b.v) continue;
      int deg = g.degree(a.v);
      int i1 = g.rot_index(a.in), j1 = g.rot_index(a.out);
      int arc = (j1 - i1 + deg) % deg;
      if (arc == 0) continue;  // bounce pair encloses no sector
      auto side = [&](DartId d) {
        int o = (g.rot_index(d) - i1 + deg) % deg;
        if (o == 0 || o == arc) return 0;  // on the pair itself
        return o < arc ? 1 : 2;
      };
      int sb1 = side(b.in), sb2 = side(b.out);
      if (sb1 != 0 && sb2 != 0 && sb1 != sb2) return true;
    }
  return false;
}

// ── Verification ─────────────────────────────────────────────────────

inline VerifyResult verify_linkage(const PlaneGraph& g, const Terminals& t, const Linkage& l) {
  if (auto r = validate_terminals(g, t); !r) return r;
  if (static_cast<int>(l.paths.size()) != t.k()) return VerifyResult::fail("path count != k");
  std::set<int> used;
  for (int i = 0; i < t.k(); ++i) {
    const auto& p = l.paths[i];
    if (p.empty()) return VerifyResult::fail("empty path " + std::to_string(i));
    if (p.front() != t.s(i)) return VerifyResult::fail("path " + std::to_string(i) + " does not start at its source");
    if (p.back() != t.t(i)) return VerifyResult::fail("path " + std::to_string(i) + " does not end at its sink");
    for (std::size_t j = 0; j + 1 < p.size(); ++j)
      if (!g.find_dart(p[j], p[j + 1]))
        return VerifyResult::fail("path " + std::to_string(i) + " uses a non-edge");
    for (VertexId v : p)
      if (!used.insert(v.v).second)
        return VerifyResult::fail("vertex " + std::to_string(v.v) + " used twice");
  }
  return {};
}

inline bool is_edge_disjoint(const WeakLinkage& w) {
  std::set<int> used;
  for (const auto& walk : w.walks)
    for (DartId d : walk)
      if (!used.insert(edge_of(d).v).second) return false;
  return true;
}

inline VerifyResult verify_weak_linkage(const PlaneGraph& g, const Terminals& t, const WeakLinkage& w,
                                        bool require_edge_disjoint = false) {
  if (auto r = validate_terminals(g, t); !r) return r;
  if (static_cast<int>(w.walks.size()) != t.k()) return VerifyResult::fail("walk count != k");
  for (int i = 0; i < t.k(); ++i) {
    const auto& walk = w.walks[i];
    if (walk.empty()) return VerifyResult::fail("empty walk " + std::to_string(i));
    for (DartId d : walk)
      if (d.v < 0 || d.v >= g.dart_count()) return VerifyResult::fail("dart out of range");
    for (std::size_t j = 0; j + 1 < walk.size(); ++j)
      if (g.head(walk[j]) != g.tail(walk[j + 1]))
        return VerifyResult::fail("walk " + std::to_string(i) + " not chained");
    if (g.tail(walk.front()) != t.s(i))
      return VerifyResult::fail("walk " + std::to_string(i) + " does not start at its source");
    if (g.head(walk.back()) != t.t(i))
      return VerifyResult::fail("walk " + std::to_string(i) + " does not end at its sink");
  }
  for (int i = 0; i < t.k(); ++i)
    for (int j = i + 1; j < t.k(); ++j)
      if (crossing(g, w.walks[i], w.walks[j]))
        return VerifyResult::fail("walks " + std::to_string(i) + " and " + std::to_string(j) + " cross");
  if (require_edge_disjoint && !is_edge_disjoint(w)) return VerifyResult::fail("walks share an edge");
  return {};
}

// ── Face operations ──────────────────────────────────────────────────

namespace detail {

inline std::set<int> edge_ids_of_face(const PlaneGraph& g, FaceId f) {
  std::set<int> out;
  for (DartId d : g.face_boundary(f)) out.insert(edge_of(d).v);
  return out;
}

inline bool any_walk_uses(const WeakLinkage& wl, const std::set<int>& edges) {
  for (const auto& w : wl.walks)
    for (DartId d : w)
      if (edges.count(edge_of(d).v)) return true;
  return false;
}

// Darts of the complement subpath of the triangle f from tail(skip_first) to
// head(skip_last), edge-disjoint from the skipped run.
inline std::vector<DartId> triangle_complement(const PlaneGraph& g, FaceId f, const std::vector<DartId>& run) {
  std::set<int> skip;
  for (DartId d : run) skip.insert(edge_of(d).v);
  VertexId from = g.tail(run.front()), to = g.head(run.back());
  // the complement traverses the remaining edges of the triangle; chase from
  // `from` to `to` using only unskipped triangle edges
  std::set<int> avail = edge_ids_of_face(g, f);
  for (int e : skip) avail.erase(e);
  std::vector<DartId> out;
  VertexId at = from;
  while (at != to) {
    bool advanced = false;
    for (DartId d : g.rotation(at)) {
      if (!avail.count(edge_of(d).v)) continue;
      out.push_back(d);
      avail.erase(edge_of(d).v);
      at = g.head(d);
      advanced = true;
      break;
    }
    if (!advanced) throw NotApplicable("triangle complement does not connect");
  }
  return out;
}

}  // namespace detail

// Replace the first occurrence in walk i of a run of one or two boundary
// edges of F by the complementary subpath of the triangle.  Applicable only
// when the remaining boundary edges are unused by every walk.
inline WeakLinkage face_move(const PlaneGraph& g, const WeakLinkage& wl, FaceId f, int i) {
  const auto& orbit = g.face_boundary(f);
  if (orbit.size() != 3) throw NotApplicable("face is not a triangle");
  std::set<int> ef = detail::edge_ids_of_face(g, f);
  if (ef.size() != 3) throw NotApplicable("degenerate triangle");
  const auto& w = wl.walks[i];
  for (std::size_t j = 0; j < w.size(); ++j) {
    if (!ef.count(edge_of(w[j]).v)) continue;
    // greedy run of distinct triangle edges starting at j, length <= 2
    std::vector<DartId> run{w[j]};
    if (j + 1 < w.size() && ef.count(edge_of(w[j + 1]).v) && edge_of(w[j + 1]) != edge_of(w[j]))
      run.push_back(w[j + 1]);
    std::set<int> rest = ef;
    for (DartId d : run) rest.erase(edge_of(d).v);
    // the untouched triangle edges must be unused by every walk
    if (detail::any_walk_uses(wl, rest)) continue;
    std::vector<DartId> repl = detail::triangle_complement(g, f, run);
    WeakLinkage out = wl;
    auto& nw = out.walks[i];
    nw.erase(nw.begin() + static_cast<long>(j), nw.begin() + static_cast<long>(j + run.size()));
    nw.insert(nw.begin() + static_cast<long>(j), repl.begin(), repl.end());
    return out;
  }
  throw NotApplicable("no movable boundary run in walk");
}

// Remove the first closed traversal of the full triangle boundary from walk i.
inline WeakLinkage face_pull(const PlaneGraph& g, const WeakLinkage& wl, FaceId f, int i) {
  const auto& orbit = g.face_boundary(f);
  if (orbit.size() != 3) throw NotApplicable("face is not a triangle");
  std::set<int> ef = detail::edge_ids_of_face(g, f);
  if (ef.size() != 3) throw NotApplicable("degenerate triangle");
  const auto& w = wl.walks[i];
  for (std::size_t j = 0; j + 2 < w.size(); ++j) {
    std::set<int> used{edge_of(w[j]).v, edge_of(w[j + 1]).v, edge_of(w[j + 2]).v};
    if (used != ef) continue;
    if (g.tail(w[j]) != g.head(w[j + 2])) continue;
    WeakLinkage out = wl;
    auto& nw = out.walks[i];
    nw.erase(nw.begin() + static_cast<long>(j), nw.begin() + static_cast<long>(j + 3));
    return out;
  }
  throw NotApplicable("boundary is not a subwalk");
}

// Inverse rewriting of face_pull: insert a closed traversal of the triangle
// boundary at the first visit of walk i to a boundary vertex.  Applicable
// only when no walk uses a boundary edge.
inline WeakLinkage face_push(const PlaneGraph& g, const WeakLinkage& wl, FaceId f, int i) {
  const auto& orbit = g.face_boundary(f);
  if (orbit.size() != 3) throw NotApplicable("face is not a triangle");
  std::set<int> ef = detail::edge_ids_of_face(g, f);
  if (ef.size() != 3) throw NotApplicable("degenerate triangle");
  if (detail::any_walk_uses(wl, ef)) throw NotApplicable("boundary edge in use");
  std::set<int> fv;
  for (DartId d : orbit) fv.insert(g.tail(d).v);
  const auto& w = wl.walks[i];
  if (w.empty()) throw NotApplicable("empty walk");
  auto vs = walk_vertices(g, w);
  for (std::size_t p = 0; p < vs.size(); ++p) {
    if (!fv.count(vs[p].v)) continue;
    // rotate the boundary to start at this vertex
    std::vector<DartId> tri;
    std::size_t s = 0;
    while (g.tail(orbit[s]) != vs[p]) ++s;
    for (std::size_t q = 0; q < 3; ++q) tri.push_back(orbit[(s + q) % 3]);
    WeakLinkage out = wl;
    auto& nw = out.walks[i];
    nw.insert(nw.begin() + static_cast<long>(p), tri.begin(), tri.end());
    return out;
  }
  throw NotApplicable("walk does not visit the boundary");
}

// ── Text dumps ───────────────────────────────────────────────────────

inline std::string linkage_to_text(const Linkage& l) {
  std::ostringstream os;
  for (std::size_t i = 0; i < l.paths.size(); ++i) {
    os << "path " << i << ":";
    for (VertexId v : l.paths[i]) os << ' ' << v.v;
    os << '\n';
  }
  return os.str();
}

inline std::optional<Linkage> linkage_from_text(const std::string& text) {
  Linkage l;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    int idx;
    char colon;
    if (!(ls >> word >> idx >> std::noskipws >> colon) || word != "path" || colon != ':') return std::nullopt;
    if (idx != static_cast<int>(l.paths.size())) return std::nullopt;
    l.paths.emplace_back();
    ls >> std::skipws;
    int v;
    while (ls >> v) l.paths.back().push_back(VertexId(v));
  }
  if (l.paths.empty()) return std::nullopt;
  return l;
}

inline std::string weak_linkage_to_text(const WeakLinkage& w) {
  std::ostringstream os;
  for (std::size_t i = 0; i < w.walks.size(); ++i) {
    os << "walk " << i << ":";
    for (DartId d : w.walks[i]) os << ' ' << d.v;
    os << '\n';
  }
  return os.str();
}

inline std::optional<WeakLinkage> weak_linkage_from_text(const std::string& text) {
  WeakLinkage w;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string word;
    int idx;
    char colon;
    if (!(ls >> word >> idx >> std::noskipws >> colon) || word != "walk" || colon != ':') return std::nullopt;
    if (idx != static_cast<int>(w.walks.size())) return std::nullopt;
    w.walks.emplace_back();
    ls >> std::skipws;
    int d;
    while (ls >> d) w.walks.back().push_back(DartId(d));
  }
  if (w.walks.empty()) return std::nullopt;
  return w;
}

}  // namespace pdp
