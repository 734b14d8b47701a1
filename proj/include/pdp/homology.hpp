#pragma once
// Flow functions on a plane graph and the homology machinery that repairs a
// weak-linkage flow into a linkage flow: vertex-fan and frame constraints,
// smallest pre-feasible extensions, seed functions, co-viable selection via
// 2-SAT, and linkage extraction.
//
// Orientation bookkeeping: every edge e stores one word on its canonical
// dart 2e; value(2e+1) is the inverse.  Traversing a dart d in a face-edge
// path crosses from left_face(d) to right_face(d), so a clockwise fan around
// a vertex is exactly a run of its outgoing darts in rotation order.
#include <algorithm>
#include <array>
#include <cstdint>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pdp/free_group.hpp"
#include "pdp/linkage.hpp"
#include "pdp/plane_graph.hpp"

namespace pdp {

struct NotEdgeDisjoint : std::runtime_error {
  explicit NotEdgeDisjoint(const std::string& m) : std::runtime_error("NotEdgeDisjoint: " + m) {}
};
struct NotALinkageFlow : std::runtime_error {
  explicit NotALinkageFlow(const std::string& m) : std::runtime_error("NotALinkageFlow: " + m) {}
};
struct FlowInvariantViolation : std::runtime_error {
  explicit FlowInvariantViolation(const std::string& m)
      : std::runtime_error("FlowInvariantViolation: " + m) {}
};

// Word-valued flow on the darts of a plane graph.  The vertex invariant: the
// clockwise product of outgoing-dart values, read from the start that makes
// it shortest, is the pair symbol at a source, its inverse at a sink, and
// empty elsewhere.
class FlowFunction {
 public:
  FlowFunction() = default;

  static FlowFunction zero(const PlaneGraph& g, Terminals terms) {
    FlowFunction f;
    f.g_ = &g;
    f.terms_ = std::move(terms);
    f.word_.assign(g.edge_count(), ReducedWord());
    return f;
  }

  // Unchecked construction for toys and intermediate states.
  static FlowFunction from_words(const PlaneGraph& g, Terminals terms,
                                 std::vector<ReducedWord> words) {
    if (static_cast<int>(words.size()) != g.edge_count())
      throw std::invalid_argument("word count != edge count");
    FlowFunction f;
    f.g_ = &g;
    f.terms_ = std::move(terms);
    f.word_ = std::move(words);
    return f;
  }

  const PlaneGraph& graph() const { return *g_; }
  const Terminals& terminals() const { return terms_; }
  int k() const { return terms_.k(); }

  const ReducedWord& word(EdgeId e) const { return word_[e.v]; }
  void set_word(EdgeId e, ReducedWord w) { word_[e.v] = std::move(w); }

  // Value read along dart d.
  ReducedWord value(DartId d) const {
    const ReducedWord& w = word_[edge_of(d).v];
    return (d.v & 1) ? w.inverse() : w;
  }

  // Clockwise product of outgoing-dart values at v, minimized over the
  // starting position (ties: earliest start).
  ReducedWord vertex_word(VertexId v) const {
    const auto& rot = g_->rotation(v);
    std::size_t m = rot.size();
    if (m == 0) return {};
    std::optional<ReducedWord> best;
    for (std::size_t s = 0; s < m; ++s) {
      ReducedWord w;
      for (std::size_t i = 0; i < m; ++i) w = w * value(rot[(s + i) % m]);
      if (!best || w.size() < best->size()) best = std::move(w);
    }
    return *best;
  }

  // Checks the vertex invariant everywhere; returns the first offender.
  std::optional<VertexId> vertex_invariant_offender() const {
    std::vector<ReducedWord> expect(g_->vertex_count());
    for (int i = 0; i < terms_.k(); ++i) {
      expect[terms_.s(i).v] = ReducedWord::symbol(i + 1);
      expect[terms_.t(i).v] = ReducedWord::symbol(-(i + 1));
    }
    for (int v = 0; v < g_->vertex_count(); ++v)
      if (vertex_word(VertexId(v)) != expect[v]) return VertexId(v);
    return std::nullopt;
  }

  bool operator==(const FlowFunction& o) const { return word_ == o.word_; }

 private:
  const PlaneGraph* g_ = nullptr;
  Terminals terms_;
  std::vector<ReducedWord> word_;
};

// Flow of an edge-disjoint weak linkage: the walk of pair i writes symbol
// i+1 along its darts.  Vertex invariants are validated, which rejects walks
// that cross at a shared vertex.
inline FlowFunction flow_of(const PlaneGraph& g, const Terminals& terms, const WeakLinkage& wl) {
  if (auto r = validate_terminals(g, terms); !r) throw FlowInvariantViolation(r.reason);
  if (static_cast<int>(wl.walks.size()) != terms.k())
    throw FlowInvariantViolation("walk count != pair count");
  FlowFunction f = FlowFunction::zero(g, terms);
  for (int i = 0; i < terms.k(); ++i) {
    for (DartId d : wl.walks[i]) {
      EdgeId e = edge_of(d);
      if (!f.word(e).empty()) throw NotEdgeDisjoint("edge " + std::to_string(e.v) + " reused");
      Symbol s = i + 1;
      f.set_word(e, ReducedWord::symbol((d.v & 1) ? -s : s));
    }
  }
  if (auto bad = f.vertex_invariant_offender())
    throw FlowInvariantViolation("vertex " + std::to_string(bad->v));
  return f;
}

// Word per face; the word on the anchor face stays empty.
class HomologyFunction {
 public:
  HomologyFunction() = default;
  HomologyFunction(int num_faces, FaceId anchor)
      : anchor_(anchor), face_word_(num_faces) {}

  FaceId anchor() const { return anchor_; }
  int face_count() const { return static_cast<int>(face_word_.size()); }
  const ReducedWord& word(FaceId f) const { return face_word_[f.v]; }
  void set_word(FaceId f, ReducedWord w) {
    if (f == anchor_ && !w.empty()) throw std::invalid_argument("anchor face word must stay empty");
    face_word_[f.v] = std::move(w);
  }

  std::size_t total_size() const {
    std::size_t s = 0;
    for (const auto& w : face_word_) s += w.size();
    return s;
  }

  bool operator==(const HomologyFunction& o) const {
    return anchor_ == o.anchor_ && face_word_ == o.face_word_;
  }

 private:
  FaceId anchor_;
  std::vector<ReducedWord> face_word_;
};

// Face-wise product; used to compose homology rewrites.
inline HomologyFunction pointwise_product(const HomologyFunction& a, const HomologyFunction& b) {
  if (a.anchor() != b.anchor() || a.face_count() != b.face_count())
    throw std::invalid_argument("mismatched homology functions");
  HomologyFunction out(a.face_count(), a.anchor());
  for (int f = 0; f < a.face_count(); ++f)
    out.set_word(FaceId(f), a.word(FaceId(f)) * b.word(FaceId(f)));
  return out;
}

// Face-wise prefix join; nothing when some face's words are incomparable.
inline std::optional<HomologyFunction> join_functions(const HomologyFunction& a,
                                                      const HomologyFunction& b) {
  if (a.anchor() != b.anchor() || a.face_count() != b.face_count())
    throw std::invalid_argument("mismatched homology functions");
  HomologyFunction out(a.face_count(), a.anchor());
  for (int f = 0; f < a.face_count(); ++f) {
    auto j = join(a.word(FaceId(f)), b.word(FaceId(f)));
    if (!j) return std::nullopt;
    out.set_word(FaceId(f), *j);
  }
  return out;
}

// Conjugates the flow across every edge: the rewrite keeps vertex words in
// the same cyclic-reduction class, so the result is again a flow.
inline FlowFunction apply_homology(const FlowFunction& phi, const HomologyFunction& f) {
  const PlaneGraph& g = phi.graph();
  if (f.face_count() != g.face_count()) throw std::invalid_argument("face count mismatch");
  if (!f.word(f.anchor()).empty()) throw std::invalid_argument("anchor face word must be empty");
  FlowFunction psi = FlowFunction::zero(g, phi.terminals());
  for (int e = 0; e < g.edge_count(); ++e) {
    DartId d(2 * e);
    ReducedWord w =
        f.word(g.left_face(d)).inverse() * phi.word(EdgeId(e)) * f.word(g.right_face(d));
    psi.set_word(EdgeId(e), std::move(w));
  }
  return psi;
}

// Product of per-dart values along a face-edge path.
inline ReducedWord path_value(const FlowFunction& phi, const FaceEdgePath& pi) {
  ReducedWord w;
  for (DartId d : pi.darts) w = w * phi.value(d);
  return w;
}

// Constraint family: implicit vertex fans plus explicit frame paths.  A fan
// window admits words of length at most one, except that a lone
// radial-completion edge must stay unused.  A frame path must keep exactly
// the value it had in the input flow.
struct ConstraintSystem {
  const PlaneGraph* g = nullptr;
  FaceId anchor;
  int k = 0;
  std::vector<FaceEdgePath> frame_paths;
  std::vector<CandidateSet> frame_gamma;

  static ConstraintSystem build(const PlaneGraph& g, FaceId anchor, int k,
                                const FlowFunction& phi,
                                std::vector<FaceEdgePath> frames = {}) {
    ConstraintSystem cs;
    cs.g = &g;
    cs.anchor = anchor;
    cs.k = k;
    cs.frame_paths = std::move(frames);
    for (const auto& pi : cs.frame_paths) {
      if (pi.darts.empty() || !pi.chained(g))
        throw std::invalid_argument("frame path not chained");
      cs.frame_gamma.push_back(CandidateSet::exactly(path_value(phi, pi)));
    }
    return cs;
  }

  CandidateSet fan_gamma(const FaceEdgePath& pi) const {
    if (pi.darts.size() == 1 && g->kind(edge_of(pi.darts[0])) == EdgeKind::Radial)
      return CandidateSet::empty_set();
    return CandidateSet::single_symbol_or_epsilon();
  }
};

namespace detail {

// Clockwise fan window: `len` outgoing darts of v starting at rotation
// position `start`.  Windows cover lengths 1..deg-1 (the full turn is closed
// and is governed by the vertex invariant instead); a degree-1 vertex keeps
// its single edge as a window.
inline FaceEdgePath fan_window(const PlaneGraph& g, VertexId v, int start, int len) {
  const auto& rot = g.rotation(v);
  FaceEdgePath pi;
  pi.darts.reserve(len);
  for (int i = 0; i < len; ++i) pi.darts.push_back(rot[(start + i) % rot.size()]);
  return pi;
}

template <class Fn>
void for_each_fan_window(const PlaneGraph& g, VertexId v, Fn&& fn) {
  int deg = g.degree(v);
  if (deg == 0) return;
  if (deg == 1) {
    fn(fan_window(g, v, 0, 1));
    return;
  }
  for (int len = 1; len < deg; ++len)
    for (int start = 0; start < deg; ++start) fn(fan_window(g, v, start, len));
}

}  // namespace detail

// A concrete constraint violation: the path, its admissible set, its end
// faces, and the current path value.
struct Violation {
  FaceEdgePath path;
  CandidateSet gamma = CandidateSet::single_symbol_or_epsilon();
  FaceId first_face;
  FaceId last_face;
  ReducedWord psi;
};

// Tracks where constraint violations can currently live.  Per vertex it
// keeps one edge list per pair symbol (a vertex whose incident edges carry
// two different symbols is marked un-feasible), plus dirty queues fed by
// face rewrites and cached frame-path values.  A final sweep certifies a
// clean state; the sweep finding anything the queues missed is counted as a
// miss.
class ViolationIndex {
 public:
  struct Counters {
    std::size_t queries = 0;
    std::size_t vertex_scans = 0;
    std::size_t frame_scans = 0;
    std::size_t face_changes = 0;
    std::size_t sweep_nodes = 0;
    std::size_t sweep_misses = 0;
  };

  ViolationIndex(const FlowFunction& phi, const ConstraintSystem& cs, const HomologyFunction& f)
      : g_(&phi.graph()), phi_(&phi), cs_(&cs) {
    int ne = g_->edge_count();
    psi_.resize(ne);
    for (int e = 0; e < ne; ++e) psi_[e] = conjugated(EdgeId(e), f);
    lists_.assign(g_->vertex_count(), std::vector<std::vector<EdgeId>>(cs.k));
    unfeasible_.assign(g_->vertex_count(), false);
    for (int e = 0; e < ne; ++e) add_to_lists(EdgeId(e));
    for (int v = 0; v < g_->vertex_count(); ++v) {
      refresh_mark(VertexId(v));
      enqueue_vertex(VertexId(v));
    }
    frame_psi_.resize(cs.frame_paths.size());
    frame_faces_.resize(cs.frame_paths.size());
    for (std::size_t i = 0; i < cs.frame_paths.size(); ++i) {
      const auto& pi = cs.frame_paths[i];
      frame_psi_[i] = windowed_value(pi);
      std::set<FaceId> fs;
      for (DartId d : pi.darts) {
        fs.insert(g_->left_face(d));
        fs.insert(g_->right_face(d));
      }
      frame_faces_[i].assign(fs.begin(), fs.end());
      for (FaceId F : frame_faces_[i]) frames_at_face_[F].push_back(i);
      enqueue_frame(i);
    }
  }

  // Refreshes the edges around F after f(F) changed and re-queues everything
  // whose value or escape condition the rewrite can have touched.
  void note_face_change(FaceId F, const HomologyFunction& f) {
    ++counters_.face_changes;
    certified_ = false;
    std::set<EdgeId> edges;
    for (DartId d : g_->face_boundary(F)) edges.insert(edge_of(d));
    for (EdgeId e : edges) {
      remove_from_lists(e);
      psi_[e.v] = conjugated(e, f);
      add_to_lists(e);
      VertexId u = g_->tail(dart_of(e, 0));
      VertexId w = g_->head(dart_of(e, 0));
      refresh_mark(u);
      refresh_mark(w);
      enqueue_vertex(u);
      enqueue_vertex(w);
    }
    auto it = frames_at_face_.find(F);
    if (it != frames_at_face_.end())
      for (std::size_t i : it->second) {
        frame_psi_[i] = windowed_value(cs_->frame_paths[i]);
        enqueue_frame(i);
      }
  }

  // Next violation, or nothing once a full sweep certifies a clean state.
  std::optional<Violation> query(const HomologyFunction& f) {
    ++counters_.queries;
    while (!dirty_v_.empty() || !dirty_f_.empty()) {
      if (!dirty_v_.empty()) {
        VertexId v = dirty_v_.front();
        dirty_v_.pop_front();
        in_vq_[v.v] = false;
        ++counters_.vertex_scans;
        if (auto viol = scan_vertex(v, f)) {
          enqueue_vertex(v);
          return viol;
        }
      } else {
        std::size_t i = dirty_f_.front();
        dirty_f_.pop_front();
        in_fq_[i] = false;
        ++counters_.frame_scans;
        if (auto viol = scan_frame(i, f)) {
          enqueue_frame(i);
          return viol;
        }
      }
    }
    if (!certified_) {
      for (int v = 0; v < g_->vertex_count(); ++v) {
        ++counters_.sweep_nodes;
        if (auto viol = scan_vertex(VertexId(v), f)) {
          ++counters_.sweep_misses;
          enqueue_vertex(VertexId(v));
          return viol;
        }
      }
      for (std::size_t i = 0; i < cs_->frame_paths.size(); ++i) {
        ++counters_.sweep_nodes;
        if (auto viol = scan_frame(i, f)) {
          ++counters_.sweep_misses;
          enqueue_frame(i);
          return viol;
        }
      }
      certified_ = true;
    }
    return std::nullopt;
  }

  const ReducedWord& edge_value(EdgeId e) const { return psi_[e.v]; }
  bool unfeasible(VertexId v) const { return unfeasible_[v.v]; }
  const Counters& counters() const { return counters_; }

 private:
  ReducedWord conjugated(EdgeId e, const HomologyFunction& f) const {
    DartId d = dart_of(e, 0);
    return f.word(g_->left_face(d)).inverse() * phi_->word(e) * f.word(g_->right_face(d));
  }

  ReducedWord dart_value(DartId d) const {
    const ReducedWord& w = psi_[edge_of(d).v];
    return (d.v & 1) ? w.inverse() : w;
  }

  ReducedWord windowed_value(const FaceEdgePath& pi) const {
    ReducedWord w;
    for (DartId d : pi.darts) w = w * dart_value(d);
    return w;
  }

  void add_to_lists(EdgeId e) {
    std::set<int> syms;
    for (Symbol s : psi_[e.v].symbols()) syms.insert(std::abs(s));
    for (int side = 0; side < 2; ++side) {
      VertexId v = g_->tail(dart_of(e, side));
      for (int s : syms)
        if (s >= 1 && s <= cs_->k) lists_[v.v][s - 1].push_back(e);
    }
  }

  void remove_from_lists(EdgeId e) {
    for (int side = 0; side < 2; ++side) {
      VertexId v = g_->tail(dart_of(e, side));
      for (auto& lst : lists_[v.v]) std::erase(lst, e);
    }
  }

  void refresh_mark(VertexId v) {
    int nonempty = 0;
    for (const auto& lst : lists_[v.v])
      if (!lst.empty()) ++nonempty;
    unfeasible_[v.v] = nonempty >= 2;
  }

  void enqueue_vertex(VertexId v) {
    if (in_vq_.empty()) in_vq_.assign(g_->vertex_count(), false);
    if (in_vq_[v.v]) return;
    in_vq_[v.v] = true;
    dirty_v_.push_back(v);
    certified_ = false;
  }

  void enqueue_frame(std::size_t i) {
    if (in_fq_.empty()) in_fq_.assign(cs_->frame_paths.size(), false);
    if (in_fq_[i]) return;
    in_fq_[i] = true;
    dirty_f_.push_back(i);
    certified_ = false;
  }

  std::optional<Violation> scan_vertex(VertexId v, const HomologyFunction& f) const {
    std::optional<Violation> out;
    int deg = g_->degree(v);
    if (deg == 0) return out;
    auto consider = [&](const FaceEdgePath& pi) {
      if (out) return;
      FaceId F = pi.first_face(*g_);
      FaceId Fp = pi.last_face(*g_);
      if (f.word(F).empty() && f.word(Fp).empty()) return;
      CandidateSet gamma = cs_->fan_gamma(pi);
      ReducedWord w = windowed_value(pi);
      if (gamma.contains(w)) return;
      out = Violation{pi, gamma, F, Fp, std::move(w)};
    };
    // Shortest windows first so single-edge violations are repaired before
    // the longer fans they sit inside.
    if (deg == 1) {
      consider(detail::fan_window(*g_, v, 0, 1));
      return out;
    }
    for (int len = 1; len < deg && !out; ++len)
      for (int start = 0; start < deg && !out; ++start)
        consider(detail::fan_window(*g_, v, start, len));
    return out;
  }

  std::optional<Violation> scan_frame(std::size_t i, const HomologyFunction& f) const {
    const FaceEdgePath& pi = cs_->frame_paths[i];
    FaceId F = pi.first_face(*g_);
    FaceId Fp = pi.last_face(*g_);
    if (f.word(F).empty() && f.word(Fp).empty()) return std::nullopt;
    ReducedWord w = windowed_value(pi);
    if (cs_->frame_gamma[i].contains(w)) return std::nullopt;
    return Violation{pi, cs_->frame_gamma[i], F, Fp, std::move(w)};
  }

  const PlaneGraph* g_;
  const FlowFunction* phi_;
  const ConstraintSystem* cs_;
  std::vector<ReducedWord> psi_;
  std::vector<std::vector<std::vector<EdgeId>>> lists_;
  std::vector<bool> unfeasible_;
  std::vector<ReducedWord> frame_psi_;
  std::vector<std::vector<FaceId>> frame_faces_;
  std::map<FaceId, std::vector<std::size_t>> frames_at_face_;
  std::deque<VertexId> dirty_v_;
  std::deque<std::size_t> dirty_f_;
  std::vector<bool> in_vq_;
  std::vector<bool> in_fq_;
  bool certified_ = false;
  Counters counters_;
};

struct FeasibilityCaps {
  std::size_t length_cap = 64;     // per-face word length before giving up
  std::size_t iteration_cap = 200000;
};

namespace detail {

// One repair step for a violated path: grow the end face whose word is a
// prefix of its target value, by as few target symbols as the admissible set
// allows.  Returns the grown face, or nothing when no finite repair exists.
inline std::optional<FaceId> repair_violation(HomologyFunction& f, const ReducedWord& phi_pi,
                                              const Violation& viol, std::size_t length_cap) {
  FaceId F = viol.first_face;
  FaceId Fp = viol.last_face;
  const CandidateSet& gamma = viol.gamma;
  if (F == Fp) {
    // Conjugation step: strip one matched end pair per growth symbol.
    ReducedWord w = f.word(F).inverse() * phi_pi * f.word(F);
    ReducedWord grow;
    while (w.size() >= 2 && w.front() == -w.back()) {
      grow.push(w.front());
      std::vector<Symbol> mid(w.symbols().begin() + 1, w.symbols().end() - 1);
      w = ReducedWord::from_symbols(mid);
      if (gamma.contains(w)) {
        ReducedWord nw = f.word(F) * grow;
        if (!is_prefix(f.word(F), nw)) return std::nullopt;
        if (nw.size() > length_cap) return std::nullopt;
        f.set_word(F, std::move(nw));
        return F;
      }
    }
    return std::nullopt;
  }
  auto try_grow = [&](FaceId face, const ReducedWord& target) -> bool {
    if (face == f.anchor()) return false;
    const ReducedWord& cur = f.word(face);
    if (!is_prefix(cur, target) || cur.size() >= target.size()) return false;
    for (std::size_t j = cur.size() + 1; j <= target.size(); ++j) {
      std::vector<Symbol> rest(target.symbols().begin() + j, target.symbols().end());
      if (!gamma.contains(ReducedWord::from_symbols(rest))) continue;
      if (j > length_cap) return false;
      f.set_word(face, target.prefix(j));
      return true;
    }
    return false;
  };
  ReducedWord target_f = phi_pi * f.word(Fp);
  if (try_grow(F, target_f)) return F;
  ReducedWord target_fp = phi_pi.inverse() * f.word(F);
  if (try_grow(Fp, target_fp)) return Fp;
  return std::nullopt;
}

}  // namespace detail

// Grows f minimally until every constrained path either meets its admissible
// set or has empty words on both end faces.  Nothing means no finite
// pre-feasible extension within the caps.
inline std::optional<HomologyFunction> smallest_prefeasible(const HomologyFunction& f0,
                                                            const FlowFunction& phi,
                                                            const ConstraintSystem& cs,
                                                            const FeasibilityCaps& caps = {},
                                                            ViolationIndex::Counters* stats = nullptr) {
  if (!f0.word(f0.anchor()).empty()) throw std::invalid_argument("anchor face word must be empty");
  HomologyFunction f = f0;
  ViolationIndex idx(phi, cs, f);
  for (std::size_t iter = 0; iter < caps.iteration_cap; ++iter) {
    auto viol = idx.query(f);
    if (!viol) {
      if (stats) *stats = idx.counters();
      return f;
    }
    ReducedWord phi_pi = path_value(phi, viol->path);
    auto grown = detail::repair_violation(f, phi_pi, *viol, caps.length_cap);
    if (!grown) {
      if (stats) *stats = idx.counters();
      return std::nullopt;
    }
    idx.note_face_change(*grown, f);
  }
  if (stats) *stats = idx.counters();
  return std::nullopt;
}

// Seed for a constraint-violating path: its first face takes the value of
// its first edge.  The path must not start at the anchor face.
inline HomologyFunction initial_function(const FaceEdgePath& pi, const FlowFunction& phi,
                                         FaceId anchor) {
  const PlaneGraph& g = phi.graph();
  HomologyFunction f(g.face_count(), anchor);
  FaceId F = pi.first_face(g);
  if (F == anchor) throw std::invalid_argument("seed path starts at the anchor face");
  f.set_word(F, phi.value(pi.darts.front()));
  return f;
}

// Linkage criterion: radial edges unused, every fan window carries at most
// one symbol, and the vertex invariant holds everywhere.
inline bool is_linkage_flow(const FlowFunction& psi) {
  const PlaneGraph& g = psi.graph();
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.kind(EdgeId(e)) == EdgeKind::Radial && !psi.word(EdgeId(e)).empty()) return false;
  for (int v = 0; v < g.vertex_count(); ++v) {
    bool ok = true;
    detail::for_each_fan_window(g, VertexId(v), [&](const FaceEdgePath& pi) {
      if (ok && path_value(psi, pi).size() > 1) ok = false;
    });
    if (!ok) return false;
  }
  return !psi.vertex_invariant_offender().has_value();
}

// Walks each pair's path by following matching symbols; at a revisited
// vertex the continuation is the first matching dart counterclockwise from
// the arrival, which detaches spurious cycles instead of threading them in.
inline Linkage linkage_from_flow(const FlowFunction& psi) {
  if (!is_linkage_flow(psi)) throw NotALinkageFlow("flow fails the linkage criterion");
  const PlaneGraph& g = psi.graph();
  const Terminals& terms = psi.terminals();
  std::vector<bool> used_edge(g.edge_count(), false);
  Linkage out;
  for (int i = 0; i < terms.k(); ++i) {
    ReducedWord fwd = ReducedWord::symbol(i + 1);
    std::vector<VertexId> path{terms.s(i)};
    DartId cur;
    for (DartId d : g.rotation(terms.s(i)))
      if (!used_edge[edge_of(d).v] && psi.value(d) == fwd) {
        cur = d;
        break;
      }
    if (!cur.valid()) throw NotALinkageFlow("no start at source " + std::to_string(i));
    int guard = g.edge_count() + 1;
    while (true) {
      if (--guard < 0) throw NotALinkageFlow("walk does not terminate");
      used_edge[edge_of(cur).v] = true;
      VertexId v = g.head(cur);
      path.push_back(v);
      if (v == terms.t(i)) break;
      const auto& rot = g.rotation(v);
      int p = g.rot_index(twin(cur));
      DartId nxt;
      for (std::size_t step = 1; step <= rot.size(); ++step) {
        DartId d = rot[(p + rot.size() - step) % rot.size()];
        if (!used_edge[edge_of(d).v] && psi.value(d) == fwd) {
          nxt = d;
          break;
        }
      }
      if (!nxt.valid()) throw NotALinkageFlow("dead end at vertex " + std::to_string(v.v));
      cur = nxt;
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

enum class FeasibilityFailure {
  None,
  SeedUnusable,   // some violated pair has no usable orientation
  Selection,      // no co-viable orientation choice exists
  JoinInfinite,   // chosen repairs do not join
  FinalCheck,     // joined rewrite still breaks a constraint
};

struct FeasibilityReport {
  FeasibilityFailure failure = FeasibilityFailure::None;
  std::size_t violated_pairs = 0;
  std::size_t repairs_run = 0;
};

namespace detail {

// 2-SAT over one orientation variable per violated pair, solved by implication
// graph SCC.  Literal 2p = first orientation, 2p+1 = second.
class TwoSat {
 public:
  explicit TwoSat(std::size_t vars) : n_(vars), adj_(2 * vars) {}

  void forbid(std::size_t lit_a, std::size_t lit_b) {
    // not(a and b): a -> !b, b -> !a
    adj_[lit_a].push_back(lit_b ^ 1);
    adj_[lit_b].push_back(lit_a ^ 1);
  }
  void force(std::size_t lit) { adj_[lit ^ 1].push_back(lit); }

  std::optional<std::vector<int>> solve() const {
    std::size_t n = 2 * n_;
    std::vector<int> comp(n, -1), low(n), num(n, -1), stk;
    int idx = 0, ncomp = 0;
    std::vector<char> on(n, 0);
    // Iterative Tarjan.
    for (std::size_t root = 0; root < n; ++root) {
      if (num[root] >= 0) continue;
      std::vector<std::pair<std::size_t, std::size_t>> call{{root, 0}};
      while (!call.empty()) {
        auto& [u, ei] = call.back();
        if (ei == 0) {
          num[u] = low[u] = idx++;
          stk.push_back(static_cast<int>(u));
          on[u] = 1;
        }
        if (ei < adj_[u].size()) {
          std::size_t w = adj_[u][ei++];
          if (num[w] < 0)
            call.push_back({w, 0});
          else if (on[w])
            low[u] = std::min(low[u], num[w]);
        } else {
          if (low[u] == num[u]) {
            while (true) {
              int w = stk.back();
              stk.pop_back();
              on[w] = 0;
              comp[w] = ncomp;
              if (w == static_cast<int>(u)) break;
            }
            ++ncomp;
          }
          std::size_t u_done = u;
          call.pop_back();
          if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[u_done]);
        }
      }
    }
    std::vector<int> assign(n_);
    for (std::size_t p = 0; p < n_; ++p) {
      if (comp[2 * p] == comp[2 * p + 1]) return std::nullopt;
      // Tarjan numbers components in reverse topological order.
      assign[p] = comp[2 * p] < comp[2 * p + 1] ? 0 : 1;
    }
    return assign;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<std::size_t>> adj_;
};

}  // namespace detail

// Repairs phi into a flow meeting every constraint: enumerate violated
// paths, compute the smallest pre-feasible extension seeded by each usable
// orientation, pick a co-viable orientation per pair, join, rewrite, and
// re-check everything.
inline std::optional<FlowFunction> solve_feasibility(const FlowFunction& phi,
                                                     const ConstraintSystem& cs,
                                                     const FeasibilityCaps& caps = {},
                                                     FeasibilityReport* report = nullptr) {
  const PlaneGraph& g = phi.graph();
  FeasibilityReport local;
  auto fail = [&](FeasibilityFailure why) -> std::optional<FlowFunction> {
    local.failure = why;
    if (report) *report = local;
    return std::nullopt;
  };

  // Violated pairs {pi, pi^-1}, deduplicated on the dart sequence.
  std::vector<std::array<FaceEdgePath, 2>> pairs;
  std::set<std::vector<std::int32_t>> seen;
  auto key_of = [](const FaceEdgePath& pi) {
    std::vector<std::int32_t> k;
    for (DartId d : pi.darts) k.push_back(d.v);
    return k;
  };
  auto note_violated = [&](const FaceEdgePath& pi, const CandidateSet& gamma) {
    if (gamma.contains(path_value(phi, pi))) return;
    auto k1 = key_of(pi);
    auto k2 = key_of(pi.reversed());
    if (seen.count(k1) || seen.count(k2)) return;
    seen.insert(k1);
    pairs.push_back({pi, pi.reversed()});
  };
  for (int v = 0; v < g.vertex_count(); ++v)
    detail::for_each_fan_window(g, VertexId(v),
                                [&](const FaceEdgePath& pi) { note_violated(pi, cs.fan_gamma(pi)); });
  for (std::size_t i = 0; i < cs.frame_paths.size(); ++i)
    note_violated(cs.frame_paths[i], cs.frame_gamma[i]);
  local.violated_pairs = pairs.size();

  // Smallest pre-feasible extension per usable orientation.
  std::vector<std::array<std::optional<HomologyFunction>, 2>> bar(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    for (int o = 0; o < 2; ++o) {
      const FaceEdgePath& pi = pairs[p][o];
      if (pi.first_face(g) == cs.anchor) continue;
      if (phi.value(pi.darts.front()).empty()) continue;
      ++local.repairs_run;
      bar[p][o] = smallest_prefeasible(initial_function(pi, phi, cs.anchor), phi, cs, caps);
    }
    if (!bar[p][0] && !bar[p][1]) return fail(FeasibilityFailure::SeedUnusable);
  }

  // Orientation choice: forbid non-joining combinations.
  detail::TwoSat sat(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (!bar[p][0]) sat.force(2 * p + 1);
    if (!bar[p][1]) sat.force(2 * p);
  }
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t q = p + 1; q < pairs.size(); ++q)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (!bar[p][a] || !bar[q][b]) continue;
          if (!join_functions(*bar[p][a], *bar[q][b]))
            sat.forbid(2 * p + a, 2 * q + b);
        }
  auto assign = sat.solve();
  if (!assign) return fail(FeasibilityFailure::Selection);

  HomologyFunction joined(g.face_count(), cs.anchor);
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto j = join_functions(joined, *bar[p][(*assign)[p]]);
    if (!j) return fail(FeasibilityFailure::JoinInfinite);
    joined = std::move(*j);
  }

  FlowFunction psi = apply_homology(phi, joined);
  // Full re-check, with no empty-ends escape.
  bool ok = true;
  for (int v = 0; v < g.vertex_count() && ok; ++v)
    detail::for_each_fan_window(g, VertexId(v), [&](const FaceEdgePath& pi) {
      if (ok && !cs.fan_gamma(pi).contains(path_value(psi, pi))) ok = false;
    });
  for (std::size_t i = 0; i < cs.frame_paths.size() && ok; ++i)
    if (!cs.frame_gamma[i].contains(path_value(psi, cs.frame_paths[i]))) ok = false;
  if (!ok) return fail(FeasibilityFailure::FinalCheck);
  if (report) *report = local;
  return psi;
}

// Textual dumps used by the CLI.
inline std::string flow_to_text(const FlowFunction& phi) {
  std::string out;
  for (int e = 0; e < phi.graph().edge_count(); ++e)
    out += "edge " + std::to_string(e) + " " + phi.word(EdgeId(e)).str() + "\n";
  return out;
}

inline std::string homology_to_text(const HomologyFunction& f) {
  std::string out;
  for (int F = 0; F < f.face_count(); ++F)
    out += "face " + std::to_string(F) + " " + f.word(FaceId(F)).str() + "\n";
  return out;
}

}  // namespace pdp
