#pragma once

#include "lambdatree/lex_value.hpp"
#include "lambdatree/word.hpp"

#include <compare>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace lambdatree {

/// Immutable heap box giving value semantics to recursive point types.
template <class T>
class Box
{
  public:
    Box(T value) : ptr_(std::make_shared<const T>(std::move(value))) {}

    const T& operator*() const { return *ptr_; }
    const T* operator->() const { return ptr_.get(); }

    friend bool operator==(const Box& a, const Box& b) { return a.ptr_ == b.ptr_ || *a.ptr_ == *b.ptr_; }
    friend std::strong_ordering operator<=>(const Box& a, const Box& b) { return *a.ptr_ <=> *b.ptr_; }

  private:
    std::shared_ptr<const T> ptr_;
};

/// Vertex of a finite edge tree.
struct VertexPt
{
    int id = 0;
    friend auto operator<=>(const VertexPt&, const VertexPt&) = default;
};

/// Interior point of a finite-tree edge, `offset` measured from the edge's first endpoint.
struct EdgePt
{
    int edge = 0;
    LexValue offset;
    friend auto operator<=>(const EdgePt&, const EdgePt&) = default;
};

/// Coordinate on a Λ-line.
struct LinePt
{
    LexValue x;
    friend auto operator<=>(const LinePt&, const LinePt&) = default;
};

/// Point of a free-group Cayley tree: the reduced word `word` (letters are +-(i+1)),
/// or, when `dir != 0`, the point at distance `offset` from `word` toward `word*dir`.
/// Canonical form keeps `word` as the endpoint nearer the identity.
struct CayleyPt
{
    std::vector<int> word;
    int dir = 0;
    LexValue offset;
    friend auto operator<=>(const CayleyPt&, const CayleyPt&) = default;
};

struct DualPt;

using TreePoint = std::variant<VertexPt, EdgePt, LinePt, CayleyPt, Box<DualPt>>;

/// Point of a glued tree: a vertex of the skeleton plus a point of its vertex tree.
/// For finite skeletons `vertex` is the vertex id and `coset` is empty; for
/// Bass-Serre skeletons `vertex` is the side (0 or 1) and `coset` the canonical
/// coset representative, so the point is `coset . local`.
struct DualPt
{
    int vertex = 0;
    Word coset;
    TreePoint local;
    friend std::strong_ordering operator<=>(const DualPt&, const DualPt&) = default;
};

inline TreePoint make_dual(int vertex, TreePoint local, Word coset = {})
{
    return Box<DualPt>(DualPt{vertex, std::move(coset), std::move(local)});
}

inline const DualPt& as_dual(const TreePoint& p)
{
    if (auto b = std::get_if<Box<DualPt>>(&p)) return **b;
    throw Error("expected a point of a glued tree");
}

}  // namespace lambdatree
