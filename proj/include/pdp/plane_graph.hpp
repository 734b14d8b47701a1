#pragma once
// Plane multigraph with a fixed combinatorial embedding.
//
// Representation: darts (directed half-edges).  Edge e owns darts 2e (the
// canonical side) and 2e+1; twin(d) = d^1.  rot[v] lists the outgoing darts
// of v in clockwise order as drawn.  Faces are the orbits of
// next(d) = rot_next(twin(d)); with clockwise rotations the orbit of d is the
// face on the LEFT of d.  The outer face's orbit therefore walks the graph
// boundary clockwise.
//
// Values are immutable after construction.  Mutating operations build a new
// graph and return it together with a mapping object.
#include <algorithm>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pdp/ids.hpp"

namespace pdp {

struct MalformedRotation : std::runtime_error {
  explicit MalformedRotation(const std::string& m) : std::runtime_error("MalformedRotation: " + m) {}
};
struct EulerViolation : std::runtime_error {
  explicit EulerViolation(const std::string& m) : std::runtime_error("EulerViolation: " + m) {}
};
struct NotACycle : std::runtime_error {
  explicit NotACycle(const std::string& m) : std::runtime_error("NotACycle: " + m) {}
};
struct DisconnectedPair : std::runtime_error {
  explicit DisconnectedPair(const std::string& m) : std::runtime_error("DisconnectedPair: " + m) {}
};

enum class EdgeKind : std::uint8_t {
  Original,   // edge of the underlying graph G
  Radial,     // added by radial completion (face-vertex to vertex)
  Copy,       // parallel copy added by duplicate_edges
  Connector,  // added by split_wedges
};

class PlaneGraph {
 public:
  PlaneGraph() = default;

  // rot[v]: clockwise outgoing darts.  Darts must be 0..2m-1, each exactly
  // once; twin(d) = d^1.  kinds, if given, is per-edge.
  static PlaneGraph from_rotations(int nv, std::vector<std::vector<DartId>> rot,
                                   std::optional<DartId> outer_hint = std::nullopt,
                                   std::vector<EdgeKind> kinds = {}) {
    PlaneGraph g;
    g.nv_ = nv;
    g.rot_ = std::move(rot);
    if (static_cast<int>(g.rot_.size()) != nv) throw MalformedRotation("rotation list count != nv");
    std::size_t nd = 0;
    for (const auto& r : g.rot_) nd += r.size();
    if (nd % 2 != 0) throw MalformedRotation("odd dart count");
    g.tail_.assign(nd, VertexId());
    g.rpos_.assign(nd, -1);
    std::vector<char> seen(nd, 0);
    for (int v = 0; v < nv; ++v) {
      for (std::size_t i = 0; i < g.rot_[v].size(); ++i) {
        DartId d = g.rot_[v][i];
        if (d.v < 0 || d.v >= static_cast<int>(nd)) throw MalformedRotation("dart id out of range");
        if (seen[d.v]) throw MalformedRotation("dart listed twice");
        seen[d.v] = 1;
        g.tail_[d.v] = VertexId(v);
        g.rpos_[d.v] = static_cast<int>(i);
      }
    }
    for (std::size_t d = 0; d < nd; ++d)
      if (!seen[d]) throw MalformedRotation("dart missing from rotations");
    g.kind_ = std::move(kinds);
    if (g.kind_.empty()) g.kind_.assign(nd / 2, EdgeKind::Original);
    if (g.kind_.size() != nd / 2) throw MalformedRotation("edge kind list size mismatch");
    g.compute_faces();
    g.check_euler();
    g.pick_outer(outer_hint);
    return g;
  }

  // Simple-graph convenience: clockwise neighbor lists.  Rejects loops and
  // parallel edges (use from_rotations for those).
  static PlaneGraph from_neighbors(const std::vector<std::vector<int>>& nbrs,
                                   std::optional<std::pair<int, int>> outer_edge = std::nullopt) {
    int nv = static_cast<int>(nbrs.size());
    std::map<std::pair<int, int>, DartId> dart_at;
    int m = 0;
    for (int u = 0; u < nv; ++u)
      for (int v : nbrs[u]) {
        if (v == u) throw MalformedRotation("loop in neighbor form");
        if (u < v) {
          auto key = std::make_pair(u, v);
          if (dart_at.count(key)) throw MalformedRotation("parallel edge in neighbor form");
          dart_at[key] = DartId(2 * m);
          ++m;
        }
      }
    std::vector<std::vector<DartId>> rot(nv);
    for (int u = 0; u < nv; ++u)
      for (int v : nbrs[u]) {
        DartId d = u < v ? dart_at.at({u, v}) : twin(dart_at.at({v, u}));
        rot[u].push_back(d);
      }
    std::optional<DartId> hint;
    if (outer_edge) {
      auto [a, b] = *outer_edge;
      DartId d = a < b ? dart_at.at({a, b}) : twin(dart_at.at({b, a}));
      hint = d;
    }
    return from_rotations(nv, std::move(rot), hint);
  }

  int vertex_count() const { return nv_; }
  int edge_count() const { return static_cast<int>(tail_.size() / 2); }
  int dart_count() const { return static_cast<int>(tail_.size()); }
  int face_count() const { return static_cast<int>(faces_.size()); }

  VertexId tail(DartId d) const { return tail_[d.v]; }
  VertexId head(DartId d) const { return tail_[twin(d).v]; }
  const std::vector<DartId>& rotation(VertexId v) const { return rot_[v.v]; }
  int degree(VertexId v) const { return static_cast<int>(rot_[v.v].size()); }

  DartId rot_next(DartId d) const {
    const auto& r = rot_[tail_[d.v].v];
    return r[(rpos_[d.v] + 1) % r.size()];
  }
  DartId rot_prev(DartId d) const {
    const auto& r = rot_[tail_[d.v].v];
    return r[(rpos_[d.v] + r.size() - 1) % r.size()];
  }
  int rot_index(DartId d) const { return rpos_[d.v]; }

  // Boundary successor; the orbit is the face on the left of d.
  DartId next_in_face(DartId d) const { return rot_next(twin(d)); }

  FaceId left_face(DartId d) const { return face_of_[d.v]; }
  FaceId right_face(DartId d) const { return face_of_[twin(d).v]; }
  const std::vector<DartId>& face_boundary(FaceId f) const { return faces_[f.v]; }
  FaceId outer_face() const { return outer_; }

  EdgeKind kind(EdgeId e) const { return kind_[e.v]; }
  bool is_original(EdgeId e) const { return kind_[e.v] == EdgeKind::Original; }
  const std::vector<EdgeKind>& kinds() const { return kind_; }

  // First dart from u to v in rotation order, if any.
  std::optional<DartId> find_dart(VertexId u, VertexId v) const {
    for (DartId d : rot_[u.v])
      if (head(d) == v) return d;
    return std::nullopt;
  }

  std::vector<VertexId> face_vertices(FaceId f) const {
    std::vector<VertexId> out;
    for (DartId d : faces_[f.v]) out.push_back(tail(d));
    return out;
  }

  std::vector<int> component_of_vertex() const {
    std::vector<int> comp(nv_, -1);
    int c = 0;
    for (int s = 0; s < nv_; ++s) {
      if (comp[s] != -1) continue;
      std::queue<int> q;
      q.push(s);
      comp[s] = c;
      while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (DartId d : rot_[u]) {
          int w = head(d).v;
          if (comp[w] == -1) {
            comp[w] = c;
            q.push(w);
          }
        }
      }
      ++c;
    }
    return comp;
  }

  bool connected() const {
    if (nv_ == 0) return true;
    auto c = component_of_vertex();
    return *std::max_element(c.begin(), c.end()) == 0;
  }

 private:
  void compute_faces() {
    face_of_.assign(tail_.size(), FaceId());
    faces_.clear();
    for (std::size_t d0 = 0; d0 < tail_.size(); ++d0) {
      if (face_of_[d0].valid()) continue;
      FaceId f(static_cast<int>(faces_.size()));
      faces_.emplace_back();
      DartId d(static_cast<int>(d0));
      while (!face_of_[d.v].valid()) {
        face_of_[d.v] = f;
        faces_.back().push_back(d);
        d = next_in_face(d);
      }
      if (d.v != static_cast<int>(d0)) throw MalformedRotation("face orbit not closed");
    }
  }

  void check_euler() const {
    auto comp = component_of_vertex();
    int nc = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    std::vector<int> vs(nc, 0), es(nc, 0);
    std::vector<std::set<int>> fs(nc);
    for (int v = 0; v < nv_; ++v) ++vs[comp[v]];
    for (int e = 0; e < edge_count(); ++e) ++es[comp[tail_[2 * e].v]];
    for (std::size_t d = 0; d < tail_.size(); ++d) fs[comp[tail_[d].v]].insert(face_of_[d].v);
    for (int c = 0; c < nc; ++c) {
      int f = static_cast<int>(fs[c].size());
      if (es[c] == 0) f = 1;  // isolated vertex: one face around it
      if (vs[c] - es[c] + f != 2)
        throw EulerViolation("component " + std::to_string(c) + ": V-E+F = " +
                             std::to_string(vs[c] - es[c] + f));
    }
  }

  void pick_outer(std::optional<DartId> hint) {
    if (faces_.empty()) {
      outer_ = FaceId();
      return;
    }
    if (hint) {
      if (hint->v < 0 || hint->v >= dart_count()) throw MalformedRotation("outer hint out of range");
      outer_ = face_of_[hint->v];
      return;
    }
    std::size_t best = 0;
    for (std::size_t f = 1; f < faces_.size(); ++f)
      if (faces_[f].size() > faces_[best].size()) best = f;
    outer_ = FaceId(static_cast<int>(best));
  }

  int nv_ = 0;
  std::vector<std::vector<DartId>> rot_;
  std::vector<VertexId> tail_;
  std::vector<int> rpos_;
  std::vector<FaceId> face_of_;
  std::vector<std::vector<DartId>> faces_;
  FaceId outer_;
  std::vector<EdgeKind> kind_;
};

// ── Radial completion ────────────────────────────────────────────────

struct RadialCompletion {
  PlaneGraph rad;
  std::vector<VertexId> face_vertex;   // per face id of the source graph
  std::vector<FaceId> face_of_vertex;  // per rad vertex id: source face, or invalid
  int source_vertices = 0;             // rad vertex ids < this are source vertices
  int source_edges = 0;                // rad edge ids < this are source edges

  bool is_face_vertex(VertexId v) const { return v.v >= source_vertices; }
};

// One new vertex per face of g, joined to every incidence of a vertex on the
// face boundary (multiple incidences give parallel edges).  Source vertex,
// edge, and dart ids are preserved.
inline RadialCompletion radial_completion(const PlaneGraph& g) {
  RadialCompletion out;
  out.source_vertices = g.vertex_count();
  out.source_edges = g.edge_count();
  int nv = g.vertex_count() + g.face_count();
  out.face_vertex.resize(g.face_count());
  out.face_of_vertex.assign(nv, FaceId());
  for (int f = 0; f < g.face_count(); ++f) {
    out.face_vertex[f] = VertexId(g.vertex_count() + f);
    out.face_of_vertex[g.vertex_count() + f] = FaceId(f);
  }

  // Radial edge per corner.  Corner p of face f sits at head(x_p) where x_p
  // is the p-th boundary dart; its vertex-side dart slots in right after
  // twin(x_p)'s successor... recorded directly below by walking each face.
  int next_edge = g.edge_count();
  // corner_dart[f][p] = dart at the corner's vertex pointing to the face vertex
  std::vector<std::vector<DartId>> corner_dart(g.face_count());
  for (int f = 0; f < g.face_count(); ++f) {
    corner_dart[f].resize(g.face_boundary(FaceId(f)).size());
    for (std::size_t p = 0; p < corner_dart[f].size(); ++p) {
      corner_dart[f][p] = DartId(2 * next_edge);
      ++next_edge;
    }
  }

  std::vector<std::vector<DartId>> rot(nv);
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (DartId d : g.rotation(VertexId(v))) {
      rot[v].push_back(d);
      // corner after d (clockwise) lies in the face left of rot_next(d),
      // i.e. right of d; find its position in that face's orbit.
      DartId nxt = g.rot_next(d);
      FaceId cf = g.left_face(nxt);
      // the corner's in-dart is twin(d)'s... the corner is (twin(d), nxt) as
      // (in-dart, out-dart); locate twin(d) in the face orbit.
      const auto& orbit = g.face_boundary(cf);
      std::size_t pos = 0;
      for (std::size_t p = 0; p < orbit.size(); ++p)
        if (orbit[p] == twin(d)) {
          pos = p;
          break;
        }
      rot[v].push_back(corner_dart[cf.v][pos]);
    }
    if (rot[v].empty()) {
      // isolated vertex: still joined to its surrounding face once? leave
      // untouched; radial completion of graphs with isolated vertices is not
      // needed by the pipeline.
      ;
    }
  }
  // Face vertices: corners in reverse orbit order seen clockwise from inside.
  for (int f = 0; f < g.face_count(); ++f) {
    int fv = g.vertex_count() + f;
    for (int p = static_cast<int>(corner_dart[f].size()) - 1; p >= 0; --p)
      rot[fv].push_back(twin(corner_dart[f][p]));
  }

  std::vector<EdgeKind> kinds(next_edge, EdgeKind::Radial);
  for (int e = 0; e < g.edge_count(); ++e) kinds[e] = g.kind(EdgeId(e));

  // Outer face of the completion: a face incident to the old outer face's
  // vertex; deterministic via the first corner dart of the old outer face.
  DartId outer_hint = corner_dart[g.outer_face().v][0];
  out.rad = PlaneGraph::from_rotations(nv, std::move(rot), outer_hint, std::move(kinds));
  return out;
}

// ── Vertex–face incidence BFS (radial metric) ────────────────────────

// Node space: vertices 0..nv-1, then faces nv..nv+nf-1.
class IncidenceBfs {
 public:
  explicit IncidenceBfs(const PlaneGraph& g) : g_(g), nv_(g.vertex_count()) {}

  // Multi-source BFS.  Sources may be vertices and/or faces.
  std::vector<int> run(const std::vector<VertexId>& src_v, const std::vector<FaceId>& src_f) const {
    int n = nv_ + g_.face_count();
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    auto push = [&](int node, int d) {
      if (dist[node] == -1) {
        dist[node] = d;
        q.push(node);
      }
    };
    for (VertexId v : src_v) push(v.v, 0);
    for (FaceId f : src_f) push(nv_ + f.v, 0);
    while (!q.empty()) {
      int x = q.front();
      q.pop();
      if (x < nv_) {
        for (DartId d : g_.rotation(VertexId(x))) {
          push(nv_ + g_.left_face(d).v, dist[x] + 1);
          push(nv_ + g_.right_face(d).v, dist[x] + 1);
        }
        if (g_.degree(VertexId(x)) == 0) {
          // isolated vertices are incident to no recorded face
        }
      } else {
        for (DartId d : g_.face_boundary(FaceId(x - nv_))) push(g_.tail(d).v, dist[x] + 1);
      }
    }
    return dist;
  }

 private:
  const PlaneGraph& g_;
  int nv_;
};

// rdist(u,v): number of intermediate vertices on an optimal radial curve;
// zero when u = v or when they share a face.
inline int radial_distance(const PlaneGraph& g, VertexId u, VertexId v) {
  if (u == v) return 0;
  auto dist = IncidenceBfs(g).run({u}, {});
  int d = dist[v.v];
  if (d < 0) throw DisconnectedPair("radial_distance");
  return d / 2 - 1;
}

// Alternating face/vertex sequence connecting a and b while crossing no edge:
// a, faces[0], inner[0], faces[1], ..., faces[t-1], b.
struct RadialCurve {
  VertexId a, b;
  std::vector<FaceId> faces;
  std::vector<VertexId> inner;  // |inner| = |faces| - 1
};

inline RadialCurve radial_curve(const PlaneGraph& g, VertexId u, VertexId v) {
  RadialCurve c;
  c.a = u;
  c.b = v;
  if (u == v) return c;
  int nv = g.vertex_count();
  int n = nv + g.face_count();
  std::vector<int> dist(n, -1), par(n, -1);
  // deterministic BFS: expand neighbor sets in ascending node id
  std::vector<std::vector<int>> adj(n);
  for (int x = 0; x < nv; ++x) {
    std::set<int> fs;
    for (DartId d : g.rotation(VertexId(x))) {
      fs.insert(nv + g.left_face(d).v);
      fs.insert(nv + g.right_face(d).v);
    }
    adj[x].assign(fs.begin(), fs.end());
    for (int f : fs) adj[f].push_back(x);
  }
  for (int f = nv; f < n; ++f) {
    std::sort(adj[f].begin(), adj[f].end());
    adj[f].erase(std::unique(adj[f].begin(), adj[f].end()), adj[f].end());
  }
  std::queue<int> q;
  dist[u.v] = 0;
  q.push(u.v);
  while (!q.empty()) {
    int x = q.front();
    q.pop();
    for (int y : adj[x])
      if (dist[y] == -1) {
        dist[y] = dist[x] + 1;
        par[y] = x;
        q.push(y);
      }
  }
  if (dist[v.v] == -1) throw DisconnectedPair("radial_curve");
  std::vector<int> path;
  for (int x = v.v; x != -1; x = par[x]) path.push_back(x);
  std::reverse(path.begin(), path.end());
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    if (path[i] >= nv)
      c.faces.push_back(FaceId(path[i] - nv));
    else
      c.inner.push_back(VertexId(path[i]));
  }
  return c;
}

// Face farthest from the outer face in the radial metric; smallest id wins ties.
inline FaceId innermost_face(const PlaneGraph& g) {
  auto dist = IncidenceBfs(g).run({}, {g.outer_face()});
  int nv = g.vertex_count();
  int best = g.outer_face().v, bestd = 0;
  for (int f = 0; f < g.face_count(); ++f) {
    int d = dist[nv + f];
    if (d > bestd || (d == bestd && f < best)) {
      bestd = d;
      best = f;
    }
  }
  return FaceId(best);
}

// ── Cycle contraction ────────────────────────────────────────────────

// Contraction of a simple cycle to its origin vertex, keeping the cycle edge
// leaving the origin as a loop.  Built by absorbing the other cycle edges one
// at a time (standard combinatorial-map edge contraction), so the merged
// rotation is correct by construction.  Stores enough to rebuild the original
// graph and to expand walks through the merged vertex.
struct CycleContraction {
  PlaneGraph contracted;
  // cycle data in the given traversal order starting at the origin
  std::vector<VertexId> cycle_vertices;  // c_0 = origin
  std::vector<DartId> cycle_darts;       // old dart c_i -> c_{i+1}
  VertexId origin;                       // in the old graph
  VertexId merged;                       // in the new graph
  EdgeId loop_edge;                      // new id of the kept cycle edge
  std::vector<DartId> old_to_new_dart;   // per old dart; invalid if removed
  std::vector<DartId> new_to_old_dart;   // per new dart
  std::vector<VertexId> old_to_new_vertex;
  std::vector<VertexId> new_to_old_vertex;  // merged maps to origin
  // per old dart with tail on the cycle: index of that cycle vertex
  std::map<int, int> cycle_index_of_old_dart;
  // rebuild data, all in old id space
  int old_nv = 0;
  std::vector<std::vector<DartId>> old_cycle_rot;  // per cycle index
  std::vector<EdgeKind> old_kinds;
  DartId old_outer_dart;
};

// cycle: vertices in traversal order, consecutive ones adjacent.  Orientation
// is taken as given; pass it clockwise (interior on the right) when the
// loop's turning direction matters downstream.
inline CycleContraction contract_cycle(const PlaneGraph& g, const std::vector<VertexId>& cycle,
                                       std::optional<VertexId> origin_opt = std::nullopt) {
  std::size_t p = cycle.size();
  if (p < 2) throw NotACycle("cycle too short");
  CycleContraction out;
  VertexId origin = origin_opt.value_or(*std::min_element(cycle.begin(), cycle.end()));
  std::size_t o = 0;
  while (o < p && cycle[o] != origin) ++o;
  if (o == p) throw NotACycle("origin not on cycle");
  for (std::size_t i = 0; i < p; ++i) out.cycle_vertices.push_back(cycle[(o + i) % p]);
  out.origin = origin;
  std::vector<int> cyc_idx(g.vertex_count(), -1);
  for (std::size_t i = 0; i < p; ++i) {
    if (cyc_idx[out.cycle_vertices[i].v] != -1) throw NotACycle("repeated cycle vertex");
    cyc_idx[out.cycle_vertices[i].v] = static_cast<int>(i);
  }
  std::vector<char> is_cycle_dart(g.dart_count(), 0);
  for (std::size_t i = 0; i < p; ++i) {
    VertexId a = out.cycle_vertices[i], b = out.cycle_vertices[(i + 1) % p];
    std::optional<DartId> link;
    for (DartId d : g.rotation(a))
      if (g.head(d) == b && !is_cycle_dart[d.v]) {
        link = d;
        break;
      }
    if (!link) throw NotACycle("consecutive cycle vertices not adjacent");
    out.cycle_darts.push_back(*link);
    is_cycle_dart[link->v] = is_cycle_dart[twin(*link).v] = 1;
  }
  for (std::size_t i = 0; i < p; ++i)
    for (DartId d : g.rotation(out.cycle_vertices[i])) out.cycle_index_of_old_dart[d.v] = static_cast<int>(i);

  out.old_nv = g.vertex_count();
  for (std::size_t i = 0; i < p; ++i) out.old_cycle_rot.push_back(g.rotation(out.cycle_vertices[i]));
  out.old_kinds = g.kinds();
  out.old_outer_dart = g.face_boundary(g.outer_face()).front();

  // Mutable rotation table in old id space; absorb c_{p-1}, ..., c_1 into
  // c_0 along the cycle darts.
  std::vector<std::vector<DartId>> rot(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) rot[v] = g.rotation(VertexId(v));
  std::vector<char> removed_dart(g.dart_count(), 0);
  auto absorb = [&](DartId into_dart) {
    // into_dart runs from the cluster to the absorbed vertex
    VertexId a = VertexId(-1), b = VertexId(-1);
    for (int v = 0; v < g.vertex_count(); ++v) {
      for (DartId d : rot[v]) {
        if (d == into_dart) a = VertexId(v);
        if (d == twin(into_dart)) b = VertexId(v);
      }
    }
    auto& ra = rot[a.v];
    auto& rb = rot[b.v];
    std::size_t ia = std::find(ra.begin(), ra.end(), into_dart) - ra.begin();
    std::size_t ib = std::find(rb.begin(), rb.end(), twin(into_dart)) - rb.begin();
    std::vector<DartId> spliced;
    for (std::size_t t = 1; t < rb.size(); ++t) spliced.push_back(rb[(ib + t) % rb.size()]);
    std::vector<DartId> merged;
    merged.insert(merged.end(), ra.begin(), ra.begin() + static_cast<long>(ia));
    merged.insert(merged.end(), spliced.begin(), spliced.end());
    merged.insert(merged.end(), ra.begin() + static_cast<long>(ia) + 1, ra.end());
    ra = std::move(merged);
    rb.clear();
    removed_dart[into_dart.v] = removed_dart[twin(into_dart).v] = 1;
  };
  // absorb from the far end: twin(cycle_darts[i]) runs c_{i+1} -> c_i and at
  // that point c_{i+1} already sits in the cluster rooted at c_0
  for (std::size_t i = p; i-- > 1;) absorb(twin(out.cycle_darts[i]));

  // New ids: merged vertex takes the slot of the smallest old cycle id.
  int small = std::min_element(cycle.begin(), cycle.end())->v;
  out.old_to_new_vertex.assign(g.vertex_count(), VertexId());
  int next = 0;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (cyc_idx[v] != -1 && v != small) continue;
    out.old_to_new_vertex[v] = VertexId(next++);
  }
  for (int v = 0; v < g.vertex_count(); ++v)
    if (cyc_idx[v] != -1) out.old_to_new_vertex[v] = out.old_to_new_vertex[small];
  out.merged = out.old_to_new_vertex[small];
  out.new_to_old_vertex.assign(next, VertexId());
  for (int v = 0; v < g.vertex_count(); ++v)
    if (cyc_idx[v] == -1) out.new_to_old_vertex[out.old_to_new_vertex[v].v] = VertexId(v);
  out.new_to_old_vertex[out.merged.v] = origin;

  out.old_to_new_dart.assign(g.dart_count(), DartId());
  int ne = 0;
  std::vector<EdgeKind> kinds;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (removed_dart[2 * e]) continue;
    out.old_to_new_dart[2 * e] = DartId(2 * ne);
    out.old_to_new_dart[2 * e + 1] = DartId(2 * ne + 1);
    kinds.push_back(g.kind(EdgeId(e)));
    ++ne;
  }
  out.new_to_old_dart.assign(2 * ne, DartId());
  for (int d = 0; d < g.dart_count(); ++d)
    if (out.old_to_new_dart[d].valid()) out.new_to_old_dart[out.old_to_new_dart[d].v] = DartId(d);
  out.loop_edge = edge_of(out.old_to_new_dart[out.cycle_darts[0].v]);

  std::vector<std::vector<DartId>> new_rot(next);
  // cluster rotation lives at old vertex c_0 (the origin)
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (rot[v].empty()) continue;
    auto& dst = new_rot[out.old_to_new_vertex[v].v];
    for (DartId d : rot[v]) dst.push_back(out.old_to_new_dart[d.v]);
  }
  std::optional<DartId> hint;
  if (out.old_to_new_dart[out.old_outer_dart.v].valid()) hint = out.old_to_new_dart[out.old_outer_dart.v];
  out.contracted = PlaneGraph::from_rotations(next, std::move(new_rot), hint, std::move(kinds));
  return out;
}

// Rebuild the original graph from the contraction record.  Non-cycle
// rotations are read back through the dart mapping; cycle rotations come from
// the stored per-vertex lists.
inline PlaneGraph uncontract_cycle(const CycleContraction& c) {
  std::vector<std::vector<DartId>> rot(c.old_nv);
  for (int v = 0; v < c.contracted.vertex_count(); ++v) {
    if (VertexId(v) == c.merged) continue;
    VertexId old_v = c.new_to_old_vertex[v];
    for (DartId d : c.contracted.rotation(VertexId(v))) rot[old_v.v].push_back(c.new_to_old_dart[d.v]);
  }
  for (std::size_t i = 0; i < c.cycle_vertices.size(); ++i) rot[c.cycle_vertices[i].v] = c.old_cycle_rot[i];
  return PlaneGraph::from_rotations(c.old_nv, std::move(rot), c.old_outer_dart, c.old_kinds);
}

// ── Wedge splitting ──────────────────────────────────────────────────

struct WedgeSplit {
  PlaneGraph split;
  std::vector<DartId> old_to_new_dart;      // old darts keep their edges
  std::vector<DartId> new_to_old_dart;      // invalid for connector darts
  std::vector<VertexId> new_to_old_vertex;  // satellite maps to its target
  int old_vertices = 0;                     // new ids < this are old vertices
  std::vector<EdgeId> connector_edges;
};

// For each maximal run of non-linkage edges between two clockwise-consecutive
// linkage edges at a target vertex, move the run onto a fresh satellite
// vertex attached by one connector edge.
inline WedgeSplit split_wedges(const PlaneGraph& g, const std::set<EdgeId>& linkage_edges,
                               const std::vector<VertexId>& targets) {
  WedgeSplit out;
  out.old_vertices = g.vertex_count();
  std::vector<char> is_target(g.vertex_count(), 0);
  for (VertexId v : targets) is_target[v.v] = 1;
  auto anchored = [&](DartId d) { return linkage_edges.count(edge_of(d)) > 0; };

  int next_vertex = g.vertex_count();
  int next_edge = g.edge_count();
  std::vector<std::vector<DartId>> rot(g.vertex_count());
  std::vector<std::vector<DartId>> extra_rot;  // satellites
  out.new_to_old_vertex.assign(g.vertex_count(), VertexId());
  for (int v = 0; v < g.vertex_count(); ++v) out.new_to_old_vertex[v] = VertexId(v);

  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& r = g.rotation(VertexId(v));
    int na = 0;
    for (DartId d : r) na += anchored(d);
    if (!is_target[v] || na == 0 || na == static_cast<int>(r.size())) {
      rot[v] = r;
      continue;
    }
    // rotate so r starts at an anchor
    std::size_t start = 0;
    while (!anchored(r[start])) ++start;
    std::vector<DartId> run;
    auto flush = [&](std::vector<DartId>& vr) {
      if (run.empty()) return;
      VertexId sat(next_vertex++);
      EdgeId ce(next_edge++);
      out.connector_edges.push_back(ce);
      out.new_to_old_vertex.push_back(VertexId(v));
      vr.push_back(dart_of(ce, 0));  // v -> satellite
      std::vector<DartId> srot;
      srot.push_back(dart_of(ce, 1));
      for (DartId d : run) srot.push_back(d);
      extra_rot.push_back(std::move(srot));
      run.clear();
    };
    for (std::size_t i = 0; i < r.size(); ++i) {
      DartId d = r[(start + i) % r.size()];
      if (anchored(d)) {
        flush(rot[v]);
        rot[v].push_back(d);
      } else {
        run.push_back(d);
      }
    }
    flush(rot[v]);
  }
  for (auto& sr : extra_rot) rot.push_back(std::move(sr));

  std::vector<EdgeKind> kinds(next_edge, EdgeKind::Connector);
  for (int e = 0; e < g.edge_count(); ++e) kinds[e] = g.kind(EdgeId(e));
  out.old_to_new_dart.resize(g.dart_count());
  for (int d = 0; d < g.dart_count(); ++d) out.old_to_new_dart[d] = DartId(d);
  out.new_to_old_dart.resize(2 * next_edge, DartId());
  for (int d = 0; d < g.dart_count(); ++d) out.new_to_old_dart[d] = DartId(d);
  out.split = PlaneGraph::from_rotations(next_vertex, std::move(rot), std::nullopt, std::move(kinds));
  return out;
}

// ── Edge duplication ─────────────────────────────────────────────────

struct EdgeDuplication {
  PlaneGraph dup;
  std::vector<EdgeId> origin;               // per new edge: source edge
  std::vector<std::vector<EdgeId>> copies;  // per old edge: its copies, original first
};

// Parallel copies inserted next to each edge in rotation order.  The original
// edge keeps its id; copy t of edge e sits t slots clockwise of e at the tail
// of dart 2e (mirrored at the other endpoint).
inline EdgeDuplication duplicate_edges(const PlaneGraph& g, const std::vector<int>& multiplicity) {
  EdgeDuplication out;
  int next_edge = g.edge_count();
  out.copies.resize(g.edge_count());
  out.origin.resize(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    out.origin[e] = EdgeId(e);
    out.copies[e].push_back(EdgeId(e));
  }
  for (int e = 0; e < g.edge_count(); ++e)
    for (int t = 1; t < multiplicity[e]; ++t) {
      out.copies[e].push_back(EdgeId(next_edge));
      out.origin.push_back(EdgeId(e));
      ++next_edge;
    }
  std::vector<std::vector<DartId>> rot(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) {
    for (DartId d : g.rotation(VertexId(v))) {
      EdgeId e = edge_of(d);
      int side = d.v & 1;
      if (side == 0) {
        rot[v].push_back(d);
        for (std::size_t t = 1; t < out.copies[e.v].size(); ++t)
          rot[v].push_back(dart_of(out.copies[e.v][t], 0));
      } else {
        for (std::size_t t = out.copies[e.v].size(); t-- > 1;)
          rot[v].push_back(dart_of(out.copies[e.v][t], 1));
        rot[v].push_back(d);
      }
    }
  }
  std::vector<EdgeKind> kinds(next_edge, EdgeKind::Copy);
  for (int e = 0; e < g.edge_count(); ++e) kinds[e] = g.kind(EdgeId(e));
  out.dup = PlaneGraph::from_rotations(g.vertex_count(), std::move(rot), std::nullopt, std::move(kinds));
  return out;
}

// ── Restriction ──────────────────────────────────────────────────────

struct Restriction {
  PlaneGraph sub;
  std::vector<VertexId> old_to_new_vertex;  // invalid when dropped
  std::vector<VertexId> new_to_old_vertex;
  std::vector<DartId> old_to_new_dart;
  std::vector<DartId> new_to_old_dart;
  VertexId to_new(VertexId v) const { return old_to_new_vertex[v.v]; }
  DartId to_new(DartId d) const { return old_to_new_dart[d.v]; }
};

// Subgraph on kept vertices and kept edges (an edge also needs both ends
// kept); rotation order inherited, faces recomputed.
inline Restriction restrict_graph(const PlaneGraph& g, const std::vector<char>& keep_vertex,
                                  const std::vector<char>& keep_edge,
                                  std::optional<DartId> outer_hint_old = std::nullopt) {
  Restriction out;
  out.old_to_new_vertex.assign(g.vertex_count(), VertexId());
  int nv = 0;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (keep_vertex[v]) out.old_to_new_vertex[v] = VertexId(nv++);
  out.new_to_old_vertex.resize(nv);
  for (int v = 0; v < g.vertex_count(); ++v)
    if (keep_vertex[v]) out.new_to_old_vertex[out.old_to_new_vertex[v].v] = VertexId(v);

  auto edge_kept = [&](EdgeId e) {
    return keep_edge[e.v] && keep_vertex[g.tail(dart_of(e, 0)).v] && keep_vertex[g.head(dart_of(e, 0)).v];
  };
  out.old_to_new_dart.assign(g.dart_count(), DartId());
  int ne = 0;
  std::vector<EdgeKind> kinds;
  for (int e = 0; e < g.edge_count(); ++e) {
    if (!edge_kept(EdgeId(e))) continue;
    out.old_to_new_dart[2 * e] = DartId(2 * ne);
    out.old_to_new_dart[2 * e + 1] = DartId(2 * ne + 1);
    kinds.push_back(g.kind(EdgeId(e)));
    ++ne;
  }
  out.new_to_old_dart.assign(2 * ne, DartId());
  for (int d = 0; d < g.dart_count(); ++d)
    if (out.old_to_new_dart[d].valid()) out.new_to_old_dart[out.old_to_new_dart[d].v] = DartId(d);

  std::vector<std::vector<DartId>> rot(nv);
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (!keep_vertex[v]) continue;
    for (DartId d : g.rotation(VertexId(v)))
      if (out.old_to_new_dart[d.v].valid()) rot[out.old_to_new_vertex[v].v].push_back(out.old_to_new_dart[d.v]);
  }
  std::optional<DartId> hint;
  if (outer_hint_old && out.old_to_new_dart[outer_hint_old->v].valid())
    hint = out.old_to_new_dart[outer_hint_old->v];
  out.sub = PlaneGraph::from_rotations(nv, std::move(rot), hint, std::move(kinds));
  return out;
}

// ── Shared small types ───────────────────────────────────────────────

// Closed curve through faces and vertices: (f_0, v_0, f_1, v_1, ...), cyclic.
struct Noose {
  std::vector<FaceId> faces;
  std::vector<VertexId> vertices;  // same length; vertex i lies between faces i and i+1
};

// Alternating face/edge sequence for homology constraints, stored as darts:
// traversing dart d crosses its edge from left_face(d) to right_face(d), so
// consecutive darts satisfy right(d_i) = left(d_{i+1}).
struct FaceEdgePath {
  std::vector<DartId> darts;

  FaceId first_face(const PlaneGraph& g) const { return g.left_face(darts.front()); }
  FaceId last_face(const PlaneGraph& g) const { return g.right_face(darts.back()); }
  FaceEdgePath reversed() const {
    FaceEdgePath r;
    for (auto it = darts.rbegin(); it != darts.rend(); ++it) r.darts.push_back(twin(*it));
    return r;
  }
  bool chained(const PlaneGraph& g) const {
    for (std::size_t i = 0; i + 1 < darts.size(); ++i)
      if (g.right_face(darts[i]) != g.left_face(darts[i + 1])) return false;
    return true;
  }
};

}  // namespace pdp
