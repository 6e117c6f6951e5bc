// Convex polygons on a euclidean cone, built from support numbers against a
// cyclic wedge decomposition. All geometry is computed chartwise: a cone has
// no global planar chart, so every length or area term is evaluated inside
// the development of one wedge pair and then summed. The developed chart for
// side i spans the two wedges adjacent to ray i; rays are placed at the
// cumulative angles of the wedge sequence, starting from the cut ray at
// angle zero and ending at the same cut ray developed at angle omega.

#ifndef CONELAP_CONE_HPP
#define CONELAP_CONE_HPP

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "conelap/wirtinger.hpp"

namespace conelap {

template <class Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;

// Wedge decomposition of the cone: closed angle data, cumulative angle sums
// (cumulative[0] = 0, cumulative[n] = total angle), and the developed unit
// direction of each ray. Ray i (0-based) separates wedge i from wedge i+1
// and develops at angle cumulative[i+1].
template <class Scalar>
struct ConeWedges {
  AngleVector<Scalar> angles;
  VectorX<Scalar> cumulative;
  MatrixX<Scalar> ray_directions;  // n x 2

  Index size() const { return angles.size(); }
  Scalar ray_angle(Index i) const { return cumulative[i + 1]; }
};

template <class Scalar>
ConeWedges<Scalar> make_wedges(const AngleVector<Scalar>& a) {
  if (a.mode() != Mode::Closed)
    throw std::invalid_argument("make_wedges: closed mode required");
  const Index n = a.size();
  ConeWedges<Scalar> w{a, VectorX<Scalar>(n + 1), MatrixX<Scalar>(n, 2)};
  w.cumulative[0] = Scalar(0);
  for (Index i = 0; i < n; ++i) {
    w.cumulative[i + 1] = w.cumulative[i] + a.angle(i);
    w.ray_directions(i, 0) = std::cos(w.cumulative[i + 1]);
    w.ray_directions(i, 1) = std::sin(w.cumulative[i + 1]);
  }
  return w;
}

// Signed side lengths from the two-term support-number formula, evaluated
// per wedge pair. Cyclic indices; independent of the matrix construction,
// which makes the operator identity length(x) = M x a real cross-check.
template <class Scalar>
VectorX<Scalar> edge_lengths(const ConeWedges<Scalar>& w,
                             const VectorX<Scalar>& x) {
  const Index n = w.size();
  if (x.size() != n)
    throw std::invalid_argument("edge_lengths: support vector length mismatch");
  const auto& a = w.angles;
  VectorX<Scalar> ell(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar ai = a.cyclic(i);
    const Scalar an = a.cyclic(i + 1);
    const Scalar prev = x[(i + n - 1) % n];
    const Scalar next = x[(i + 1) % n];
    ell[i] = (prev - x[i] * std::cos(ai)) / std::sin(ai) +
             (next - x[i] * std::cos(an)) / std::sin(an);
  }
  return ell;
}

// Endpoints of one polygon side, in the developed chart of its wedge pair.
template <class Scalar>
struct DevelopedSide {
  Vector2<Scalar> start;
  Vector2<Scalar> end;
};

template <class Scalar>
struct ConePolygon {
  VectorX<Scalar> support;
  VectorX<Scalar> edge_lengths;           // from the support-number formula
  std::vector<DevelopedSide<Scalar>> sides;
  Scalar perimeter = 0;                   // sum of signed lengths
  Scalar area = 0;                        // half of sum support * length
  Scalar geometric_perimeter = 0;         // developed euclidean measurements
  Scalar geometric_area = 0;              // developed shoelace
  bool convex = false;
};

namespace detail {

// Intersection of the two support lines <p, u(ta)> = ha, <p, u(tb)> = hb
// with u(t) = (cos t, sin t). The determinant is sin(tb - ta), the wedge
// angle between the rays, which the angle invariants keep away from zero.
template <class Scalar>
Vector2<Scalar> support_line_intersection(Scalar ta, Scalar ha, Scalar tb,
                                          Scalar hb) {
  const Scalar det = std::sin(tb - ta);
  if (std::abs(det) < Scalar(1e-12))
    throw std::runtime_error("support_line_intersection: degenerate wedge");
  return Vector2<Scalar>((ha * std::sin(tb) - hb * std::sin(ta)) / det,
                         (hb * std::cos(ta) - ha * std::cos(tb)) / det);
}

}  // namespace detail

// Builds the closed polygonal line with the given support numbers. Vertices
// come from intersecting consecutive support lines inside one developed
// wedge pair; the chain starts at the cut ray (angle 0, carrying the last
// support number) and the final side continues past the cut into the lifted
// first line, so the development is that of the universal branched cover.
template <class Scalar>
ConePolygon<Scalar> build_polygon(const ConeWedges<Scalar>& w,
                                  const VectorX<Scalar>& h) {
  const Index n = w.size();
  if (h.size() != n)
    throw std::invalid_argument("build_polygon: support vector length mismatch");
  ConePolygon<Scalar> poly;
  poly.support = h;
  poly.edge_lengths = edge_lengths(w, h);
  poly.sides.resize(static_cast<std::size_t>(n));

  // theta(j), offset(j) describe support line j in the development, with the
  // cut ray duplicated at angles 0 and omega (+ first wedge for the lift).
  const auto theta = [&](Index j) -> Scalar {
    if (j < 0) return Scalar(0);
    if (j < n) return w.ray_angle(j);
    return w.cumulative[n] + w.angles.angle(0);
  };
  const auto offset = [&](Index j) -> Scalar {
    if (j < 0) return h[n - 1];
    if (j < n) return h[j];
    return h[0];
  };

  for (Index i = 0; i < n; ++i) {
    auto& side = poly.sides[static_cast<std::size_t>(i)];
    side.start = detail::support_line_intersection(theta(i - 1), offset(i - 1),
                                                   theta(i), offset(i));
    side.end = detail::support_line_intersection(theta(i), offset(i),
                                                 theta(i + 1), offset(i + 1));
    const Vector2<Scalar> delta = side.end - side.start;
    poly.geometric_perimeter += delta.norm();
    poly.geometric_area +=
        (side.start.x() * side.end.y() - side.start.y() * side.end.x()) / 2;
  }

  poly.perimeter = poly.edge_lengths.sum();
  poly.area = h.dot(poly.edge_lengths) / 2;
  poly.convex = (poly.edge_lengths.array() > Scalar(0)).all();
  return poly;
}

// Area shortfall of the polygon h against the circumscribed polygon of the
// same perimeter. Nonnegative for total angle <= one full turn and convex h;
// zero exactly on scalings of the circumscribed polygon plus, at resonance,
// its translates.
template <class Scalar>
Scalar isoperimetric_deficit(const ConeWedges<Scalar>& w,
                             const VectorX<Scalar>& h) {
  const WirtingerMatrix<Scalar> wm = build_closed(w.angles);
  const Scalar len_unit = wm.weights.sum();      // equals <M 1, 1>
  const Scalar len_h = wm.weights.dot(h);        // equals <M h, 1>
  const Scalar scale = len_h / len_unit;
  const Scalar area_scaled_unit = scale * scale * len_unit / 2;
  const Scalar area_h = h.dot(wm.matrix * h) / 2;
  return area_scaled_unit - area_h;
}

// For total angle beyond one full turn, produces a convex polygon with the
// perimeter of the circumscribed one and strictly larger area, as the
// circumscribed support numbers displaced along a violating direction. The
// step starts at min(w)/2 over the displaced-length sup norm and is halved
// until every side keeps a positive-length margin. Returns nullopt when the
// total angle does not exceed one full turn.
template <class Scalar>
std::optional<VectorX<Scalar>> improve_polygon(const ConeWedges<Scalar>& w) {
  const auto direction = find_violation(w.angles);
  if (!direction) return std::nullopt;

  const WirtingerMatrix<Scalar> wm = build_closed(w.angles);
  const VectorX<Scalar> displaced = wm.matrix * (*direction);
  const Scalar margin = Scalar(1e-8) * wm.weights.maxCoeff();
  Scalar t = wm.weights.minCoeff() /
             (Scalar(2) * displaced.cwiseAbs().maxCoeff());
  const VectorX<Scalar> ones = VectorX<Scalar>::Ones(w.size());
  for (int iter = 0; iter < 200; ++iter) {
    const VectorX<Scalar> h = ones + t * (*direction);
    const VectorX<Scalar> ell = edge_lengths(w, h);
    if (ell.minCoeff() >= margin) return h;
    t /= 2;
  }
  return std::nullopt;  // unreachable for valid angle data
}

}  // namespace conelap

#endif  // CONELAP_CONE_HPP
