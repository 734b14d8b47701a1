#pragma once
// Strong integer ids for the combinatorial-map substrate.  A dart is a
// directed half of an edge; edge e owns darts 2e and 2e+1, which are twins.
#include <cstdint>
#include <functional>

namespace pdp {

template <class Tag>
struct Id {
  std::int32_t v = -1;
  constexpr Id() = default;
  constexpr explicit Id(std::int32_t x) : v(x) {}
  constexpr bool valid() const { return v >= 0; }
  constexpr auto operator<=>(const Id&) const = default;
};

struct VertexTag {};
struct EdgeTag {};
struct DartTag {};
struct FaceTag {};

using VertexId = Id<VertexTag>;
using EdgeId = Id<EdgeTag>;
using DartId = Id<DartTag>;
using FaceId = Id<FaceTag>;

constexpr DartId twin(DartId d) { return DartId(d.v ^ 1); }
constexpr EdgeId edge_of(DartId d) { return EdgeId(d.v >> 1); }
constexpr DartId dart_of(EdgeId e, int side) { return DartId(2 * e.v + side); }

}  // namespace pdp

template <class Tag>
struct std::hash<pdp::Id<Tag>> {
  std::size_t operator()(const pdp::Id<Tag>& id) const noexcept {
    return std::hash<std::int32_t>()(id.v);
  }
};
