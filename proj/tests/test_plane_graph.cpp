#include "pdp/plane_graph.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <set>

using namespace pdp;

namespace {

// rows x cols grid of vertices, row-major ids, clockwise neighbor order
// (north, east, south, west as drawn); outer face hinted via the top edge.
PlaneGraph make_grid(int rows, int cols) {
  auto id = [&](int r, int c) { return r * cols + c; };
  std::vector<std::vector<int>> nbrs(rows * cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      auto& out = nbrs[id(r, c)];
      if (r > 0) out.push_back(id(r - 1, c));
      if (c + 1 < cols) out.push_back(id(r, c + 1));
      if (r + 1 < rows) out.push_back(id(r + 1, c));
      if (c > 0) out.push_back(id(r, c - 1));
    }
  return PlaneGraph::from_neighbors(nbrs, std::make_pair(0, 1));
}

PlaneGraph make_triangle() {
  return PlaneGraph::from_neighbors({{1, 2}, {0, 2}, {0, 1}}, std::make_pair(0, 1));
}

// hexagon 1..6 around center 0, all spokes present
PlaneGraph make_wheel6() {
  std::vector<std::vector<int>> nbrs(7);
  for (int i = 1; i <= 6; ++i) {
    nbrs[0].push_back(i);
    int prev = i == 1 ? 6 : i - 1;
    int next = i == 6 ? 1 : i + 1;
    nbrs[i] = {next, 0, prev};  // rim is clockwise 1,2,...,6 as drawn
  }
  return PlaneGraph::from_neighbors(nbrs, std::make_pair(1, 2));
}

// two triangles sharing vertex 0; explicit darts for the multi-incidence
PlaneGraph make_bowtie() {
  // edges: 0:(0,1) 1:(1,2) 2:(2,0) 3:(0,3) 4:(3,4) 5:(4,0)
  std::vector<std::vector<DartId>> rot(5);
  rot[0] = {DartId(6), DartId(11), DartId(5), DartId(0)};
  rot[1] = {DartId(1), DartId(2)};
  rot[2] = {DartId(3), DartId(4)};
  rot[3] = {DartId(7), DartId(8)};
  rot[4] = {DartId(9), DartId(10)};
  return PlaneGraph::from_rotations(5, rot);
}

}  // namespace

TEST_CASE("face orbits partition the darts") {
  for (const PlaneGraph& g : {make_grid(3, 3), make_triangle(), make_wheel6(), make_bowtie()}) {
    std::size_t total = 0;
    for (int f = 0; f < g.face_count(); ++f) {
      for (DartId d : g.face_boundary(FaceId(f))) {
        REQUIRE(g.left_face(d) == FaceId(f));
        ++total;
      }
    }
    REQUIRE(total == static_cast<std::size_t>(g.dart_count()));
    for (int d = 0; d < g.dart_count(); ++d)
      REQUIRE(g.left_face(g.next_in_face(DartId(d))) == g.left_face(DartId(d)));
  }
}

TEST_CASE("triangle has two faces") {
  PlaneGraph g = make_triangle();
  REQUIRE(g.face_count() == 2);
  REQUIRE(g.face_boundary(g.outer_face()).size() == 3);
}

TEST_CASE("single edge has one face of boundary length two") {
  PlaneGraph g = PlaneGraph::from_neighbors({{1}, {0}});
  REQUIRE(g.face_count() == 1);
  REQUIRE(g.face_boundary(FaceId(0)).size() == 2);
}

TEST_CASE("3x3 grid has five faces and an eight-dart outer boundary") {
  PlaneGraph g = make_grid(3, 3);
  REQUIRE(g.vertex_count() == 9);
  REQUIRE(g.edge_count() == 12);
  REQUIRE(g.face_count() == 5);
  REQUIRE(g.face_boundary(g.outer_face()).size() == 8);
}

TEST_CASE("outer face orbit walks the grid boundary clockwise") {
  PlaneGraph g = make_grid(3, 3);
  // collect the outer orbit's tails starting from vertex 0
  const auto& orbit = g.face_boundary(g.outer_face());
  std::vector<int> walk;
  std::size_t start = 0;
  while (g.tail(orbit[start]).v != 0) ++start;
  for (std::size_t i = 0; i < orbit.size(); ++i) walk.push_back(g.tail(orbit[(start + i) % orbit.size()]).v);
  REQUIRE(walk == std::vector<int>{0, 1, 2, 5, 8, 7, 6, 3});
}

TEST_CASE("malformed rotations are rejected") {
  // dart listed twice
  REQUIRE_THROWS_AS(PlaneGraph::from_rotations(2, {{DartId(0), DartId(0)}, {DartId(1)}}), MalformedRotation);
  // K5-like twisting is impossible planar; simplest Euler violation: K4 with
  // one rotation flipped embeds on the torus
  std::vector<std::vector<DartId>> rot(4);
  // edges 0:(0,1) 1:(0,2) 2:(0,3) 3:(1,2) 4:(1,3) 5:(2,3)
  rot[0] = {DartId(0), DartId(2), DartId(4)};
  rot[1] = {DartId(1), DartId(6), DartId(8)};
  rot[2] = {DartId(3), DartId(11), DartId(7)};
  rot[3] = {DartId(5), DartId(9), DartId(10)};
  REQUIRE_THROWS_AS(PlaneGraph::from_rotations(4, rot), EulerViolation);
}

TEST_CASE("radial completion of a triangle") {
  PlaneGraph g = make_triangle();
  RadialCompletion rc = radial_completion(g);
  REQUIRE(rc.rad.vertex_count() == 5);
  REQUIRE(rc.rad.edge_count() == 9);
  REQUIRE(rc.rad.face_count() == 6);
  for (int f = 0; f < rc.rad.face_count(); ++f) REQUIRE(rc.rad.face_boundary(FaceId(f)).size() == 3);
  // source ids survive
  for (int e = 0; e < g.edge_count(); ++e) {
    REQUIRE(rc.rad.kind(EdgeId(e)) == EdgeKind::Original);
    REQUIRE(rc.rad.tail(DartId(2 * e)) == g.tail(DartId(2 * e)));
    REQUIRE(rc.rad.head(DartId(2 * e)) == g.head(DartId(2 * e)));
  }
  for (int e = g.edge_count(); e < rc.rad.edge_count(); ++e) REQUIRE(rc.rad.kind(EdgeId(e)) == EdgeKind::Radial);
}

TEST_CASE("radial completion of a four-cycle has eight triangular faces") {
  PlaneGraph g = PlaneGraph::from_neighbors({{3, 1}, {0, 2}, {1, 3}, {2, 0}}, std::make_pair(0, 1));
  RadialCompletion rc = radial_completion(g);
  REQUIRE(rc.rad.vertex_count() == 6);
  REQUIRE(rc.rad.edge_count() == 12);
  REQUIRE(rc.rad.face_count() == 8);
  for (int f = 0; f < rc.rad.face_count(); ++f) REQUIRE(rc.rad.face_boundary(FaceId(f)).size() == 3);
}

TEST_CASE("radial completion of the 3x3 grid") {
  PlaneGraph g = make_grid(3, 3);
  RadialCompletion rc = radial_completion(g);
  REQUIRE(rc.rad.vertex_count() == 14);
  REQUIRE(rc.rad.edge_count() == 36);
  REQUIRE(rc.rad.face_count() == 24);
  for (int f = 0; f < rc.rad.face_count(); ++f) REQUIRE(rc.rad.face_boundary(FaceId(f)).size() == 3);
}

TEST_CASE("radial completion gives parallel edges for repeated incidences") {
  PlaneGraph g = make_bowtie();
  REQUIRE(g.face_count() == 3);
  REQUIRE(g.face_boundary(g.outer_face()).size() == 6);
  RadialCompletion rc = radial_completion(g);
  VertexId fv = rc.face_vertex[g.outer_face().v];
  int parallel = 0;
  for (DartId d : rc.rad.rotation(VertexId(0)))
    if (rc.rad.head(d) == fv) ++parallel;
  REQUIRE(parallel == 2);
  for (int f = 0; f < rc.rad.face_count(); ++f) REQUIRE(rc.rad.face_boundary(FaceId(f)).size() == 3);
}

TEST_CASE("radial distance is zero for face-sharing vertices") {
  PlaneGraph g = make_grid(3, 3);
  REQUIRE(radial_distance(g, VertexId(0), VertexId(1)) == 0);   // adjacent
  REQUIRE(radial_distance(g, VertexId(0), VertexId(4)) == 0);   // share a cell
  REQUIRE(radial_distance(g, VertexId(0), VertexId(8)) == 0);   // share the outer face
  REQUIRE(radial_distance(g, VertexId(4), VertexId(4)) == 0);
}

TEST_CASE("radial distance counts intermediate vertices") {
  PlaneGraph g = make_grid(5, 5);
  REQUIRE(radial_distance(g, VertexId(0), VertexId(12)) == 1);
  REQUIRE(radial_distance(g, VertexId(12), VertexId(0)) == 1);

  RadialCurve c = radial_curve(g, VertexId(0), VertexId(12));
  REQUIRE(c.faces.size() == 2);
  REQUIRE(c.inner.size() == 1);
  REQUIRE(c.inner[0] == VertexId(6));

  RadialCurve trivial = radial_curve(g, VertexId(3), VertexId(3));
  REQUIRE(trivial.faces.empty());
  REQUIRE(trivial.inner.empty());
}

TEST_CASE("radial distance triangle inequality") {
  PlaneGraph g = make_grid(5, 5);
  for (int u = 0; u < 25; u += 3)
    for (int v = 1; v < 25; v += 4)
      for (int w = 2; w < 25; w += 5) {
        int uw = radial_distance(g, VertexId(u), VertexId(w));
        int uv = radial_distance(g, VertexId(u), VertexId(v));
        int vw = radial_distance(g, VertexId(v), VertexId(w));
        REQUIRE(uw <= uv + vw + 1);
      }
}

TEST_CASE("innermost face of a triangle is the bounded face") {
  PlaneGraph g = make_triangle();
  REQUIRE(innermost_face(g) != g.outer_face());
}

TEST_CASE("innermost face of a path is the outer face") {
  PlaneGraph g = PlaneGraph::from_neighbors({{1}, {0, 2}, {1}});
  REQUIRE(g.face_count() == 1);
  REQUIRE(innermost_face(g) == g.outer_face());
}

TEST_CASE("innermost face of the 4x4 grid is the center cell") {
  PlaneGraph g = make_grid(4, 4);
  FaceId f = innermost_face(g);
  std::set<int> vs;
  for (VertexId v : g.face_vertices(f)) vs.insert(v.v);
  REQUIRE(vs == std::set<int>{5, 6, 9, 10});
}

TEST_CASE("contracting a triangle of the complete graph on four vertices") {
  // K4 planar: 3 outer vertices 0,1,2, center 3
  std::vector<std::vector<DartId>> rot(4);
  // edges 0:(0,1) 1:(1,2) 2:(2,0) 3:(0,3) 4:(1,3) 5:(2,3)
  rot[0] = {DartId(0), DartId(6), DartId(5)};    // 1, center, 2
  rot[1] = {DartId(2), DartId(8), DartId(1)};    // 2, center, 0
  rot[2] = {DartId(4), DartId(10), DartId(3)};   // 0, center, 1
  rot[3] = {DartId(7), DartId(9), DartId(11)};
  PlaneGraph g = PlaneGraph::from_rotations(4, rot, DartId(0));
  REQUIRE(g.face_count() == 4);

  CycleContraction cc = contract_cycle(g, {VertexId(0), VertexId(1), VertexId(2)});
  REQUIRE(cc.contracted.vertex_count() == 2);
  REQUIRE(cc.contracted.edge_count() == 4);
  REQUIRE(cc.origin == VertexId(0));
  // kept cycle edge is a loop at the merged vertex
  DartId loop = dart_of(cc.loop_edge, 0);
  REQUIRE(cc.contracted.tail(loop) == cc.merged);
  REQUIRE(cc.contracted.head(loop) == cc.merged);
  REQUIRE(cc.contracted.face_count() == 4);
}

TEST_CASE("contracting the rim of a wheel leaves loop plus spokes") {
  PlaneGraph g = make_wheel6();
  std::vector<VertexId> rim;
  for (int i = 1; i <= 6; ++i) rim.push_back(VertexId(i));
  CycleContraction cc = contract_cycle(g, rim);
  REQUIRE(cc.contracted.vertex_count() == 2);
  REQUIRE(cc.contracted.edge_count() == 7);
  REQUIRE(cc.contracted.face_count() == 7);
  REQUIRE(cc.origin == VertexId(1));
  int loops = 0, spokes = 0;
  for (int e = 0; e < 7; ++e) {
    DartId d = dart_of(EdgeId(e), 0);
    if (cc.contracted.tail(d) == cc.contracted.head(d))
      ++loops;
    else
      ++spokes;
  }
  REQUIRE(loops == 1);
  REQUIRE(spokes == 6);
}

TEST_CASE("uncontract rebuilds the original graph") {
  for (const PlaneGraph& g : {make_wheel6(), make_grid(3, 3)}) {
    // contract the boundary of the first bounded face
    FaceId f(g.outer_face() == FaceId(0) ? 1 : 0);
    std::vector<VertexId> cyc;
    for (DartId d : g.face_boundary(f)) cyc.push_back(g.tail(d));
    CycleContraction cc = contract_cycle(g, cyc);
    PlaneGraph back = uncontract_cycle(cc);
    REQUIRE(back.vertex_count() == g.vertex_count());
    REQUIRE(back.edge_count() == g.edge_count());
    REQUIRE(back.face_count() == g.face_count());
    for (int v = 0; v < g.vertex_count(); ++v) REQUIRE(back.rotation(VertexId(v)) == g.rotation(VertexId(v)));
    REQUIRE(back.outer_face() == g.outer_face());
  }
}

TEST_CASE("walk expansion data marks every cycle dart with its vertex") {
  PlaneGraph g = make_wheel6();
  std::vector<VertexId> rim;
  for (int i = 1; i <= 6; ++i) rim.push_back(VertexId(i));
  CycleContraction cc = contract_cycle(g, rim);
  for (int i = 0; i < 6; ++i) {
    // every spoke dart from rim vertex i+1 carries cycle index i
    auto d = g.find_dart(VertexId(i + 1), VertexId(0));
    REQUIRE(d.has_value());
    REQUIRE(cc.cycle_index_of_old_dart.at(d->v) == i);
  }
}

TEST_CASE("splitting wedges at a degree-six vertex with opposite anchors") {
  PlaneGraph g = make_wheel6();
  // spokes to 1 and 4 are the linkage edges; find their ids
  std::set<EdgeId> linkage;
  for (int t : {1, 4}) linkage.insert(edge_of(*g.find_dart(VertexId(0), VertexId(t))));
  WedgeSplit ws = split_wedges(g, linkage, {VertexId(0)});
  REQUIRE(ws.split.vertex_count() == 9);
  REQUIRE(ws.split.degree(VertexId(0)) == 4);
  REQUIRE(ws.connector_edges.size() == 2);
  REQUIRE(ws.split.face_count() == g.face_count());
  for (std::size_t s = 0; s < ws.connector_edges.size(); ++s) {
    REQUIRE(ws.split.kind(ws.connector_edges[s]) == EdgeKind::Connector);
    REQUIRE(ws.new_to_old_vertex[7 + s] == VertexId(0));
    REQUIRE(ws.split.degree(VertexId(static_cast<int>(7 + s))) == 3);
  }
  // linkage darts still attach to the target
  for (EdgeId e : linkage) {
    REQUIRE((ws.split.tail(dart_of(e, 0)) == VertexId(0) || ws.split.head(dart_of(e, 0)) == VertexId(0)));
  }
}

TEST_CASE("wedge splitting skips vertices whose edges are all anchors") {
  PlaneGraph g = make_triangle();
  std::set<EdgeId> all{EdgeId(0), EdgeId(1), EdgeId(2)};
  WedgeSplit ws = split_wedges(g, all, {VertexId(0), VertexId(1)});
  REQUIRE(ws.split.vertex_count() == 3);
  REQUIRE(ws.connector_edges.empty());
}

TEST_CASE("tripling an edge adds two faces") {
  PlaneGraph g = PlaneGraph::from_neighbors({{3, 1}, {0, 2}, {1, 3}, {2, 0}}, std::make_pair(0, 1));
  std::vector<int> mult(g.edge_count(), 1);
  mult[0] = 3;
  EdgeDuplication ed = duplicate_edges(g, mult);
  REQUIRE(ed.dup.vertex_count() == 4);
  REQUIRE(ed.dup.edge_count() == 6);
  REQUIRE(ed.dup.face_count() == g.face_count() + 2);
  REQUIRE(ed.copies[0].size() == 3);
  for (EdgeId c : ed.copies[0]) {
    REQUIRE(ed.origin[c.v] == EdgeId(0));
    REQUIRE(ed.dup.tail(dart_of(c, 0)) == g.tail(DartId(0)));
    REQUIRE(ed.dup.head(dart_of(c, 0)) == g.head(DartId(0)));
  }
  REQUIRE(ed.dup.kind(ed.copies[0][1]) == EdgeKind::Copy);
  // copies sit next to each other in the rotation at both endpoints
  const auto& r = ed.dup.rotation(g.tail(DartId(0)));
  std::vector<int> pos;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (ed.origin[edge_of(r[i]).v] == EdgeId(0)) pos.push_back(static_cast<int>(i));
  REQUIRE(pos.size() == 3);
  REQUIRE(pos[1] == pos[0] + 1);
  REQUIRE(pos[2] == pos[1] + 1);
}

TEST_CASE("duplication with all multiplicities one is the identity") {
  PlaneGraph g = make_grid(3, 3);
  EdgeDuplication ed = duplicate_edges(g, std::vector<int>(g.edge_count(), 1));
  REQUIRE(ed.dup.edge_count() == g.edge_count());
  REQUIRE(ed.dup.face_count() == g.face_count());
  for (int v = 0; v < g.vertex_count(); ++v) REQUIRE(ed.dup.rotation(VertexId(v)) == g.rotation(VertexId(v)));
}

TEST_CASE("restriction keeps rotation order and remaps ids") {
  PlaneGraph g = make_grid(3, 3);
  std::vector<char> keep_v(g.vertex_count(), 1);
  keep_v[8] = 0;
  std::vector<char> keep_e(g.edge_count(), 1);
  Restriction r = restrict_graph(g, keep_v, keep_e, g.face_boundary(g.outer_face()).front());
  REQUIRE(r.sub.vertex_count() == 8);
  REQUIRE(r.sub.edge_count() == 10);
  REQUIRE(r.sub.face_count() == 4);
  REQUIRE_FALSE(r.old_to_new_vertex[8].valid());
  for (int v = 0; v < 8; ++v) {
    VertexId nv = r.old_to_new_vertex[v];
    REQUIRE(nv.valid());
    REQUIRE(r.new_to_old_vertex[nv.v] == VertexId(v));
  }
}

TEST_CASE("face edge paths chain and reverse") {
  PlaneGraph g = make_grid(3, 3);
  // walk from the outer face across the top-left cell: pick darts by faces
  DartId d0 = *g.find_dart(VertexId(0), VertexId(1));
  // choose orientation so the outer face is on the left
  if (g.left_face(d0) != g.outer_face()) d0 = twin(d0);
  FaceEdgePath p;
  p.darts.push_back(d0);
  // continue across the next horizontal edge below
  DartId d1 = *g.find_dart(VertexId(3), VertexId(4));
  if (g.left_face(d1) != g.right_face(d0)) d1 = twin(d1);
  p.darts.push_back(d1);
  REQUIRE(p.chained(g));
  REQUIRE(p.first_face(g) == g.outer_face());
  FaceEdgePath q = p.reversed();
  REQUIRE(q.chained(g));
  REQUIRE(q.first_face(g) == p.last_face(g));
  REQUIRE(q.last_face(g) == p.first_face(g));
}
