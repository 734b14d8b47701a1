#include "pdp/exact_oracle.hpp"

#include <catch2/catch_amalgamated.hpp>
#include <random>

using namespace pdp;

namespace {

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

}  // namespace

TEST_CASE("one pair across the 2x2 grid") {
  PlaneGraph g = make_grid(2, 2);
  Terminals t{{{VertexId(0), VertexId(3)}}};
  OracleResult r = solve_exact(g, t);
  REQUIRE(r.status == OracleStatus::Yes);
  REQUIRE(r.linkage.has_value());
  REQUIRE(verify_linkage(g, t, *r.linkage).ok);
}

TEST_CASE("crossing chords of a four-cycle are infeasible") {
  PlaneGraph g = PlaneGraph::from_neighbors({{3, 1}, {0, 2}, {1, 3}, {2, 0}}, std::make_pair(0, 1));
  Terminals t{{{VertexId(0), VertexId(2)}, {VertexId(1), VertexId(3)}}};
  REQUIRE(solve_exact(g, t).status == OracleStatus::No);
}

TEST_CASE("crossing corner pairs of the 3x3 grid are infeasible") {
  PlaneGraph g = make_grid(3, 3);
  Terminals t{{{VertexId(0), VertexId(8)}, {VertexId(2), VertexId(6)}}};
  REQUIRE(solve_exact(g, t).status == OracleStatus::No);
}

TEST_CASE("two parallel pairs across the 4x4 grid") {
  PlaneGraph g = make_grid(4, 4);
  Terminals t{{{VertexId(0), VertexId(3)}, {VertexId(12), VertexId(15)}}};
  OracleResult r = solve_exact(g, t);
  REQUIRE(r.status == OracleStatus::Yes);
  REQUIRE(verify_linkage(g, t, *r.linkage).ok);
  // both enumerators agree on the full system count
  std::int64_t pruned = count_linkages(g, t);
  std::int64_t plain = count_linkages_plain(g, t);
  REQUIRE(pruned == plain);
  REQUIRE(pruned == 142);
}

TEST_CASE("single-pair path count on the 4x4 grid") {
  PlaneGraph g = make_grid(4, 4);
  Terminals t{{{VertexId(0), VertexId(3)}}};
  REQUIRE(count_linkages(g, t) == 178);
  REQUIRE(count_linkages_plain(g, t) == 178);
}

TEST_CASE("node budget exhaustion reports BudgetExceeded") {
  PlaneGraph g = make_grid(4, 4);
  Terminals t{{{VertexId(0), VertexId(15)}, {VertexId(3), VertexId(12)}}};
  OracleBudget b;
  b.node_limit = 3;
  OracleResult r = solve_exact(g, t, b);
  REQUIRE(r.status == OracleStatus::BudgetExceeded);
}

TEST_CASE("oracle is deterministic") {
  PlaneGraph g = make_grid(4, 4);
  Terminals t{{{VertexId(0), VertexId(15)}, {VertexId(3), VertexId(12)}}};
  OracleResult a = solve_exact(g, t);
  OracleResult b = solve_exact(g, t);
  REQUIRE(a.status == b.status);
  if (a.status == OracleStatus::Yes) REQUIRE(a.linkage->paths == b.linkage->paths);
}

TEST_CASE("yes answers match positive counts on random grid instances") {
  std::mt19937 rng(987123);
  for (int trial = 0; trial < 40; ++trial) {
    int rows = 2 + static_cast<int>(rng() % 3);
    int cols = 2 + static_cast<int>(rng() % 3);
    PlaneGraph g = make_grid(rows, cols);
    int n = g.vertex_count();
    int k = 1 + static_cast<int>(rng() % 2);
    if (2 * k > n) k = 1;
    std::vector<int> ids(n);
    for (int i = 0; i < n; ++i) ids[i] = i;
    std::shuffle(ids.begin(), ids.end(), rng);
    Terminals t;
    for (int i = 0; i < k; ++i) t.pairs.push_back({VertexId(ids[2 * i]), VertexId(ids[2 * i + 1])});
    OracleResult r = solve_exact(g, t);
    std::int64_t cnt = count_linkages_plain(g, t);
    if (r.status == OracleStatus::Yes) {
      REQUIRE(cnt > 0);
      REQUIRE(verify_linkage(g, t, *r.linkage).ok);
    } else {
      REQUIRE(r.status == OracleStatus::No);
      REQUIRE(cnt == 0);
    }
  }
}
