#pragma once

#include <functional>
#include <vector>

#include "core.hpp"

namespace gaugesurf {

// Rectangular parameter grid. Vertex (i, j) sits at
// (origin[0] + i*step[0], origin[1] + j*step[1]); storage is row-major with
// i running fastest.
struct Grid2 {
  int n[2] = {0, 0};
  double step[2] = {1.0, 1.0};
  double origin[2] = {0.0, 0.0};

  Grid2() = default;
  Grid2(int n0, int n1, double h0, double h1, double o0 = 0.0, double o1 = 0.0)
      : n{n0, n1}, step{h0, h1}, origin{o0, o1} {
    validate();
  }

  void validate() const {
    if (n[0] < 2 || n[1] < 2) throw ContractError("grid: need at least 2 vertices per axis");
    if (!(step[0] > 0.0) || !(step[1] > 0.0)) throw ContractError("grid: steps must be positive");
  }

  std::size_t size() const { return static_cast<std::size_t>(n[0]) * static_cast<std::size_t>(n[1]); }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * n[0] + i; }
  int i_of(std::size_t v) const { return static_cast<int>(v % static_cast<std::size_t>(n[0])); }
  int j_of(std::size_t v) const { return static_cast<int>(v / static_cast<std::size_t>(n[0])); }
  double coord(int axis, int k) const { return origin[axis] + k * step[axis]; }

  // Edge (i,j)->(i+1,j) along axis 0, (i,j)->(i,j+1) along axis 1.
  std::size_t edge_count(int axis) const {
    return axis == 0 ? static_cast<std::size_t>(n[0] - 1) * n[1] : static_cast<std::size_t>(n[0]) * (n[1] - 1);
  }
  std::size_t edge(int axis, int i, int j) const {
    return axis == 0 ? static_cast<std::size_t>(j) * (n[0] - 1) + i : static_cast<std::size_t>(j) * n[0] + i;
  }
  double plaquette_area() const { return step[0] * step[1]; }

  bool same_shape(const Grid2& o) const { return n[0] == o.n[0] && n[1] == o.n[1]; }
};

using CharGrid = Grid2;

template <class T>
struct Field {
  Grid2 grid;
  std::vector<T> values;

  Field() = default;
  explicit Field(const Grid2& g, const T& init = T{}) : grid(g), values(g.size(), init) {}

  T& operator()(int i, int j) { return values[grid.index(i, j)]; }
  const T& operator()(int i, int j) const { return values[grid.index(i, j)]; }
  T& operator[](std::size_t v) { return values[v]; }
  const T& operator[](std::size_t v) const { return values[v]; }
};

using ScalarField = Field<double>;
using VecField = Field<Vec3>;

template <class T, class F>
Field<T> sample(const Grid2& g, F&& fn) {
  Field<T> out(g);
  for (int j = 0; j < g.n[1]; ++j)
    for (int i = 0; i < g.n[0]; ++i) out(i, j) = fn(g.coord(0, i), g.coord(1, j));
  return out;
}

// A tree edge visited while sweeping a spanning tree: `from` is already
// reached, `to` is new; `forward` is true when the edge is traversed in its
// positive axis direction.
struct TreeStep {
  std::size_t from, to;
  int axis;
  std::size_t edge;
  bool forward;
};

enum class SpanningOrder { RowThenColumns, ColumnThenRows };

// Row 0 left to right, then every column bottom to top (or the transpose).
inline void for_each_tree_step(const Grid2& g, SpanningOrder order, const std::function<void(const TreeStep&)>& fn) {
  if (order == SpanningOrder::RowThenColumns) {
    for (int i = 0; i + 1 < g.n[0]; ++i) fn({g.index(i, 0), g.index(i + 1, 0), 0, g.edge(0, i, 0), true});
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j + 1 < g.n[1]; ++j) fn({g.index(i, j), g.index(i, j + 1), 1, g.edge(1, i, j), true});
  } else {
    for (int j = 0; j + 1 < g.n[1]; ++j) fn({g.index(0, j), g.index(0, j + 1), 1, g.edge(1, 0, j), true});
    for (int j = 0; j < g.n[1]; ++j)
      for (int i = 0; i + 1 < g.n[0]; ++i) fn({g.index(i, j), g.index(i + 1, j), 0, g.edge(0, i, j), true});
  }
}

// Finite differences along one axis: 4th-order central where the stencil
// fits, 2nd-order central next to the boundary, 2nd-order one-sided at it.
template <class T>
T fd_first(const Field<T>& f, int axis, int i, int j) {
  const int n = f.grid.n[axis];
  const int k = axis == 0 ? i : j;
  const double h = f.grid.step[axis];
  auto at = [&](int m) -> const T& { return axis == 0 ? f(m, j) : f(i, m); };
  if (k >= 2 && k <= n - 3) return T((at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h));
  if (k >= 1 && k <= n - 2) return T((at(k + 1) - at(k - 1)) / (2.0 * h));
  if (n < 3) return T((at(1) - at(0)) / h);
  if (k == 0) return T((-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * h));
  return T((3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * h));
}

template <class T>
T fd_second(const Field<T>& f, int axis, int i, int j) {
  const int n = f.grid.n[axis];
  const int k = axis == 0 ? i : j;
  const double h = f.grid.step[axis];
  auto at = [&](int m) -> const T& { return axis == 0 ? f(m, j) : f(i, m); };
  if (k >= 2 && k <= n - 3)
    return T((-at(k - 2) + 16.0 * at(k - 1) - 30.0 * at(k) + 16.0 * at(k + 1) - at(k + 2)) / (12.0 * h * h));
  if (k >= 1 && k <= n - 2) return T((at(k + 1) - 2.0 * at(k) + at(k - 1)) / (h * h));
  if (n < 4) return T(at(0) * 0.0);
  if (k == 0) return T((2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (h * h));
  return T((2.0 * at(n - 1) - 5.0 * at(n - 2) + 4.0 * at(n - 3) - at(n - 4)) / (h * h));
}

template <class T>
Field<T> fd_field(const Field<T>& f, int axis) {
  Field<T> out(f.grid);
  for (int j = 0; j < f.grid.n[1]; ++j)
    for (int i = 0; i < f.grid.n[0]; ++i) out(i, j) = fd_first(f, axis, i, j);
  return out;
}

// Vertices where both 4th-order stencils fit.
inline bool fd_interior(const Grid2& g, int i, int j) {
  return i >= 2 && i <= g.n[0] - 3 && j >= 2 && j <= g.n[1] - 3;
}

}  // namespace gaugesurf
