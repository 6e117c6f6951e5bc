// Polytopes in R^3 with prescribed unit facet normals in general position:
// combinatorics from the convex hull of the normal points (hull triangles are
// the polytope vertices, hull edges the polytope edges), support-number
// evaluation of the polytope, the surface-area quadratic form, and the check
// that this form is negative semidefinite on the hyperplane where the
// weighted support sum vanishes, with translations as the equality cases.
//
// Within one combinatorial cell each vertex is a fixed linear function of the
// support numbers, so the surface area is an exact homogeneous quadratic.
// The form matrix is assembled from those linear maps facet cycle by facet
// cycle; no differencing is involved.

#ifndef CONELAP_POLYTOPE_HPP
#define CONELAP_POLYTOPE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conelap/spectral.hpp"

namespace conelap {

template <class Scalar>
using Vector3 = Eigen::Matrix<Scalar, 3, 1>;
template <class Scalar>
using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;

// Combinatorics of the polytope family P(h) near h = 1.
template <class Scalar>
struct NormalFan3 {
  MatrixX<Scalar> normals;  // n x 3, unit rows
  std::vector<std::array<Index, 3>> vertex_triples;   // facets meeting at a vertex
  std::vector<std::array<Index, 2>> facet_adjacency;  // facet pairs sharing an edge
  VectorX<Scalar> theta;    // dihedral normal angle per adjacency entry
  std::vector<std::vector<Index>> facet_cycles;  // vertex ids per facet, ccw outside

  Index size() const { return normals.rows(); }
};

namespace detail {

template <class Scalar>
Vector3<Scalar> fan_normal(const MatrixX<Scalar>& normals, Index i) {
  return normals.row(i).transpose();
}

// Orthonormal in-plane frame (u, v) with u x v = w, chosen deterministically.
template <class Scalar>
std::pair<Vector3<Scalar>, Vector3<Scalar>> plane_frame(const Vector3<Scalar>& w) {
  Index axis = 0;
  w.cwiseAbs().minCoeff(&axis);
  Vector3<Scalar> u = Vector3<Scalar>::Unit(axis) -
                      w * w[axis];
  u.normalize();
  Vector3<Scalar> v = w.cross(u);
  return {u, v};
}

}  // namespace detail

// Builds the fan combinatorics by enumerating supporting planes of the normal
// points (exhaustive over triples; the fans here are small). Degeneracies are
// input errors: repeated normals, four normals on one supporting plane, a
// normal that is not exposed, or normals that fail to surround the origin.
template <class Scalar>
NormalFan3<Scalar> build_fan(const MatrixX<Scalar>& normals) {
  const Index n = normals.rows();
  if (normals.cols() != 3)
    throw std::invalid_argument("build_fan: normals must be n x 3");
  if (n < 4) throw std::invalid_argument("build_fan: need at least 4 normals");
  if (!normals.allFinite())
    throw std::invalid_argument("build_fan: non-finite normal");
  for (Index i = 0; i < n; ++i)
    if (std::abs(normals.row(i).norm() - Scalar(1)) > Scalar(1e-12))
      throw std::invalid_argument("build_fan: normal " + std::to_string(i) +
                                  " is not unit length");
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if ((normals.row(i) - normals.row(j)).norm() < Scalar(1e-9))
        throw std::invalid_argument("build_fan: normals " + std::to_string(i) +
                                    " and " + std::to_string(j) +
                                    " coincide");

  NormalFan3<Scalar> fan;
  fan.normals = normals;

  const Scalar coplanar_tol = Scalar(1e-9);
  std::map<std::pair<Index, Index>, int> edge_count;
  for (Index i = 0; i < n; ++i) {
    const Vector3<Scalar> pi = detail::fan_normal(normals, i);
    for (Index j = i + 1; j < n; ++j) {
      const Vector3<Scalar> pj = detail::fan_normal(normals, j);
      for (Index k = j + 1; k < n; ++k) {
        const Vector3<Scalar> pk = detail::fan_normal(normals, k);
        Vector3<Scalar> c = (pj - pi).cross(pk - pi);
        const Scalar cn = c.norm();
        if (cn < Scalar(1e-12)) continue;  // collinear triple, never a facet
        const Scalar d = c.dot(pi);
        Scalar lo = Scalar(0), hi = Scalar(0);
        for (Index l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          const Scalar side = c.dot(detail::fan_normal(normals, l)) - d;
          lo = std::min(lo, side);
          hi = std::max(hi, side);
        }
        const Scalar band = coplanar_tol * cn;
        const bool below = hi <= band;
        const bool above = lo >= -band;
        if (!below && !above) continue;
        // Supporting plane found; a fourth point inside the band means the
        // hull facet has four or more vertices.
        for (Index l = 0; l < n; ++l) {
          if (l == i || l == j || l == k) continue;
          const Scalar side = c.dot(detail::fan_normal(normals, l)) - d;
          if (std::abs(side) <= band)
            throw std::invalid_argument(
                "build_fan: degenerate position, normals " + std::to_string(i) +
                "," + std::to_string(j) + "," + std::to_string(k) + "," +
                std::to_string(l) + " lie on one supporting plane");
        }
        Vector3<Scalar> outward = below ? c : Vector3<Scalar>(-c);
        const Scalar d_out = outward.dot(pi);
        if (d_out < coplanar_tol * outward.norm())
          throw std::invalid_argument(
              "build_fan: normals do not surround the origin (triple " +
              std::to_string(i) + "," + std::to_string(j) + "," +
              std::to_string(k) + "), P(1) is unbounded");
        fan.vertex_triples.push_back({i, j, k});
        for (auto [a, b] : {std::pair{i, j}, std::pair{j, k}, std::pair{i, k}})
          edge_count[{a, b}] += 1;
      }
    }
  }

  // Every normal must be exposed on the hull, i.e. carry a facet of P(1).
  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  for (const auto& t : fan.vertex_triples)
    for (Index a : t) seen[static_cast<std::size_t>(a)] = 1;
  for (Index i = 0; i < n; ++i)
    if (!seen[static_cast<std::size_t>(i)])
      throw std::invalid_argument("build_fan: normal " + std::to_string(i) +
                                  " does not support a facet of P(1)");

  for (const auto& [edge, count] : edge_count) {
    if (count != 2)
      throw std::invalid_argument(
          "build_fan: degenerate position near normals " +
          std::to_string(edge.first) + "," + std::to_string(edge.second));
    fan.facet_adjacency.push_back({edge.first, edge.second});
  }
  // Euler count for the triangulated sphere of normals.
  if (n - Index(fan.facet_adjacency.size()) + Index(fan.vertex_triples.size()) != 2)
    throw std::invalid_argument("build_fan: inconsistent hull combinatorics");

  fan.theta.resize(Index(fan.facet_adjacency.size()));
  for (std::size_t e = 0; e < fan.facet_adjacency.size(); ++e) {
    const Vector3<Scalar> a = detail::fan_normal(normals, fan.facet_adjacency[e][0]);
    const Vector3<Scalar> b = detail::fan_normal(normals, fan.facet_adjacency[e][1]);
    fan.theta[Index(e)] = std::atan2(a.cross(b).norm(), a.dot(b));
  }

  // Cross-validate each vertex of P(1) by direct plane-triple intersection:
  // it must sit strictly inside every other facet halfspace.
  std::vector<Vector3<Scalar>> base_vertices;
  base_vertices.reserve(fan.vertex_triples.size());
  for (const auto& t : fan.vertex_triples) {
    Matrix3<Scalar> system;
    for (int r = 0; r < 3; ++r)
      system.row(r) = normals.row(t[static_cast<std::size_t>(r)]);
    const Vector3<Scalar> x = system.partialPivLu().solve(Vector3<Scalar>::Ones());
    for (Index b = 0; b < n; ++b) {
      if (b == t[0] || b == t[1] || b == t[2]) continue;
      const Scalar slack = Scalar(1) - normals.row(b).dot(x);
      if (slack < Scalar(1e-9) * std::max(Scalar(1), x.norm()))
        throw std::invalid_argument(
            "build_fan: vertex of facets " + std::to_string(t[0]) + "," +
            std::to_string(t[1]) + "," + std::to_string(t[2]) +
            " is not in general position against facet " + std::to_string(b));
    }
    base_vertices.push_back(x);
  }

  // Fix each facet's vertex cycle at h = 1, counterclockwise seen from
  // outside; the cell combinatorics keep this cycle valid for all admissible h.
  fan.facet_cycles.assign(static_cast<std::size_t>(n), {});
  for (Index f = 0; f < n; ++f) {
    std::vector<Index> ids;
    for (std::size_t v = 0; v < fan.vertex_triples.size(); ++v) {
      const auto& t = fan.vertex_triples[v];
      if (t[0] == f || t[1] == f || t[2] == f) ids.push_back(Index(v));
    }
    if (ids.size() < 3)
      throw std::invalid_argument("build_fan: facet " + std::to_string(f) +
                                  " has fewer than three vertices");
    const Vector3<Scalar> w = detail::fan_normal(normals, f);
    const auto [u, v] = detail::plane_frame(w);
    Vector3<Scalar> centroid = Vector3<Scalar>::Zero();
    for (Index id : ids) centroid += base_vertices[static_cast<std::size_t>(id)];
    centroid /= Scalar(ids.size());
    std::sort(ids.begin(), ids.end(), [&](Index a, Index b) {
      const Vector3<Scalar> pa = base_vertices[static_cast<std::size_t>(a)] - centroid;
      const Vector3<Scalar> pb = base_vertices[static_cast<std::size_t>(b)] - centroid;
      return std::atan2(pa.dot(v), pa.dot(u)) < std::atan2(pb.dot(v), pb.dot(u));
    });
    fan.facet_cycles[static_cast<std::size_t>(f)] = std::move(ids);
  }
  return fan;
}

template <class Scalar>
struct Polytope3 {
  MatrixX<Scalar> vertices;  // one row per vertex triple
  VectorX<Scalar> facet_areas;
  Scalar surface_area = 0;
};

// Evaluates P(h). Throws std::domain_error when h leaves the combinatorial
// cell: every vertex must stay strictly inside all non-incident facet
// halfspaces with margin 1e-10.
template <class Scalar>
Polytope3<Scalar> support_polytope(const NormalFan3<Scalar>& fan,
                                   const VectorX<Scalar>& h) {
  const Index n = fan.size();
  if (h.size() != n)
    throw std::invalid_argument("support_polytope: h has wrong length");
  Polytope3<Scalar> poly;
  poly.vertices.resize(Index(fan.vertex_triples.size()), 3);
  for (std::size_t v = 0; v < fan.vertex_triples.size(); ++v) {
    const auto& t = fan.vertex_triples[v];
    Matrix3<Scalar> system;
    Vector3<Scalar> rhs;
    for (int r = 0; r < 3; ++r) {
      system.row(r) = fan.normals.row(t[static_cast<std::size_t>(r)]);
      rhs[r] = h[t[static_cast<std::size_t>(r)]];
    }
    const Vector3<Scalar> x = system.partialPivLu().solve(rhs);
    for (Index b = 0; b < n; ++b) {
      if (b == t[0] || b == t[1] || b == t[2]) continue;
      if (h[b] - fan.normals.row(b).dot(x) < Scalar(1e-10))
        throw std::domain_error(
            "support_polytope: combinatorics broken at vertex of facets " +
            std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
            std::to_string(t[2]) + " against facet " + std::to_string(b));
    }
    poly.vertices.row(Index(v)) = x.transpose();
  }

  poly.facet_areas = VectorX<Scalar>::Zero(n);
  for (Index f = 0; f < n; ++f) {
    const auto& cycle = fan.facet_cycles[static_cast<std::size_t>(f)];
    const Vector3<Scalar> w = detail::fan_normal(fan.normals, f);
    Scalar doubled = 0;
    for (std::size_t a = 0; a < cycle.size(); ++a) {
      const std::size_t b = (a + 1) % cycle.size();
      const Vector3<Scalar> pa = poly.vertices.row(cycle[a]).transpose();
      const Vector3<Scalar> pb = poly.vertices.row(cycle[b]).transpose();
      doubled += w.dot(pa.cross(pb));
    }
    poly.facet_areas[f] = doubled / 2;
  }
  poly.surface_area = poly.facet_areas.sum();
  return poly;
}

// The quadratic form of one third of the surface area, plus the verified
// combinatorial radius around h = 1.
template <class Scalar>
struct QuermassForm {
  MatrixX<Scalar> matrix;  // <matrix h, h> = surface_area(P(h)) / 3
  NormalFan3<Scalar> fan;
  Scalar valid_radius = 0;
};

namespace detail {

template <class Scalar>
bool cell_contains(const NormalFan3<Scalar>& fan, const VectorX<Scalar>& h) {
  try {
    support_polytope(fan, h);
    return true;
  } catch (const std::domain_error&) {
    return false;
  }
}

// Largest step along direction d (sup-norm one) keeping the combinatorics,
// found by bisection up to `cap`.
template <class Scalar>
Scalar cell_reach(const NormalFan3<Scalar>& fan, const VectorX<Scalar>& d,
                  Scalar cap) {
  const VectorX<Scalar> ones = VectorX<Scalar>::Ones(fan.size());
  if (cell_contains(fan, VectorX<Scalar>(ones + cap * d))) return cap;
  Scalar lo = 0, hi = cap;
  for (int it = 0; it < 60; ++it) {
    const Scalar mid = (lo + hi) / 2;
    if (cell_contains(fan, VectorX<Scalar>(ones + mid * d)))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

}  // namespace detail

// Conservative radius r such that the combinatorics were verified to hold at
// distance r along the coordinate directions and a seeded batch of random
// sup-norm directions.
template <class Scalar>
Scalar combinatorial_radius(const NormalFan3<Scalar>& fan,
                            std::uint64_t seed = 20250811u,
                            int random_directions = 20) {
  const Index n = fan.size();
  const Scalar cap = Scalar(0.5);
  Scalar radius = cap;
  VectorX<Scalar> d = VectorX<Scalar>::Zero(n);
  for (Index i = 0; i < n; ++i) {
    for (Scalar s : {Scalar(1), Scalar(-1)}) {
      d.setZero();
      d[i] = s;
      radius = std::min(radius, detail::cell_reach(fan, d, cap));
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < random_directions; ++k) {
    for (Index i = 0; i < n; ++i) d[i] = Scalar(unit(rng));
    d /= d.cwiseAbs().maxCoeff();
    radius = std::min(radius, detail::cell_reach(fan, d, cap));
  }
  return radius;
}

// Assembles the surface-area quadratic exactly. Every vertex is the linear
// image of its three support numbers under the inverse normal matrix, and
// each facet area is the cycle shoelace of those linear maps, so the
// coefficients come out of small products rather than differences.
template <class Scalar>
QuermassForm<Scalar> quermass_matrix(const NormalFan3<Scalar>& fan) {
  const Index n = fan.size();
  std::vector<Matrix3<Scalar>> vertex_maps;
  vertex_maps.reserve(fan.vertex_triples.size());
  for (const auto& t : fan.vertex_triples) {
    Matrix3<Scalar> system;
    for (int r = 0; r < 3; ++r)
      system.row(r) = fan.normals.row(t[static_cast<std::size_t>(r)]);
    vertex_maps.push_back(system.inverse());
  }

  MatrixX<Scalar> q = MatrixX<Scalar>::Zero(n, n);
  for (Index f = 0; f < n; ++f) {
    const auto& cycle = fan.facet_cycles[static_cast<std::size_t>(f)];
    const Vector3<Scalar> w = detail::fan_normal(fan.normals, f);
    for (std::size_t a = 0; a < cycle.size(); ++a) {
      const std::size_t b = (a + 1) % cycle.size();
      const auto& ta = fan.vertex_triples[static_cast<std::size_t>(cycle[a])];
      const auto& tb = fan.vertex_triples[static_cast<std::size_t>(cycle[b])];
      const Matrix3<Scalar>& la = vertex_maps[static_cast<std::size_t>(cycle[a])];
      const Matrix3<Scalar>& lb = vertex_maps[static_cast<std::size_t>(cycle[b])];
      for (int r = 0; r < 3; ++r) {
        for (int s = 0; s < 3; ++s) {
          // Monomial h_{ta[r]} h_{tb[s]} carries w . (la_r x lb_s) / 2 of
          // area; halved again because it lands in two mirrored slots.
          const Scalar coeff =
              w.dot(Vector3<Scalar>(la.col(r)).cross(Vector3<Scalar>(lb.col(s)))) /
              Scalar(4);
          const Index gi = ta[static_cast<std::size_t>(r)];
          const Index gj = tb[static_cast<std::size_t>(s)];
          q(gi, gj) += coeff;
          q(gj, gi) += coeff;
        }
      }
    }
  }

  QuermassForm<Scalar> form;
  form.matrix = q / Scalar(3);
  form.fan = fan;
  form.valid_radius = combinatorial_radius(fan);
  return form;
}

// Findings of the hyperplane-semidefiniteness check. The expected signature
// (1, 3, n-4) is reported, not enforced; the load-bearing facts are the
// nonpositivity of the form on the constraint hyperplane and the kernel
// being exactly the normal-component span of rigid translations.
template <class Scalar>
struct SemidefiniteReport {
  Signature<Scalar> signature;
  Signature<Scalar> expected;
  bool signature_matches = false;
  Scalar translation_residual = 0;   // max_c ||M t_c||_2
  Scalar max_constrained_value = 0;  // max <Mx, x> over sampled <Mx,1> = 0
  Scalar constraint_tolerance = 0;   // 1e-10 * spectral norm
  Index restricted_zero_dim = 0;
  Scalar kernel_alignment_angle = 0;  // max principal angle to translations
  Scalar min_adjacent_entry = 0;
  bool adjacency_positive = false;
  bool ok = false;
  MatrixX<Scalar> kernel;  // orthonormal columns spanning the restricted kernel
};

template <class Scalar>
SemidefiniteReport<Scalar> verify_semidefinite(const QuermassForm<Scalar>& form,
                                               std::uint64_t seed = 1,
                                               Index samples = 1000) {
  const MatrixX<Scalar>& m = form.matrix;
  const Index n = m.rows();
  SemidefiniteReport<Scalar> rep;

  const EigenDecomposition<Scalar> full = eigh(m);
  rep.signature = signature(full);
  rep.expected = {1, 3, n - 4, rep.signature.tolerance};
  rep.signature_matches = rep.signature.counts_equal(rep.expected);

  Scalar worst = 0;
  for (int c = 0; c < 3; ++c) {
    const VectorX<Scalar> t = form.fan.normals.col(c);
    worst = std::max(worst, (m * t).norm());
  }
  rep.translation_residual = worst;

  const Scalar norm = full.spectral_norm();
  rep.constraint_tolerance = Scalar(1e-10) * std::max(Scalar(1), norm);

  const VectorX<Scalar> constraint = m * VectorX<Scalar>::Ones(n);
  const MatrixX<Scalar> basis = hyperplane_basis(constraint);
  const MatrixX<Scalar> restricted = project_quadratic(m, basis);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Scalar max_value = std::numeric_limits<Scalar>::lowest();
  VectorX<Scalar> y(n - 1);
  for (Index s = 0; s < samples; ++s) {
    for (Index i = 0; i < n - 1; ++i) y[i] = Scalar(gauss(rng));
    y.normalize();
    max_value = std::max(max_value, Scalar(y.dot(restricted * y)));
  }
  rep.max_constrained_value = max_value;

  const EigenDecomposition<Scalar> rd = eigh(restricted);
  const Scalar zero_band = default_zero_tolerance(full);
  Index zero_dim = 0;
  for (Index i = 0; i < rd.size(); ++i)
    if (std::abs(rd.eigenvalues[i]) <= zero_band) ++zero_dim;
  rep.restricted_zero_dim = zero_dim;
  MatrixX<Scalar> kernel(n, zero_dim);
  Index k = 0;
  for (Index i = 0; i < rd.size(); ++i)
    if (std::abs(rd.eigenvalues[i]) <= zero_band)
      kernel.col(k++) = basis * rd.eigenvectors.col(i);
  rep.kernel = kernel;

  // Principal angles between the restricted kernel and the span of the
  // normal-component vectors of the three coordinate translations.
  rep.kernel_alignment_angle = Scalar(std::numbers::pi_v<double>) / 2;
  if (zero_dim > 0) {
    Eigen::HouseholderQR<MatrixX<Scalar>> tq(form.fan.normals);
    const MatrixX<Scalar> t_basis =
        (tq.householderQ() * MatrixX<Scalar>::Identity(n, 3));
    Eigen::JacobiSVD<MatrixX<Scalar>> svd(t_basis.transpose() * kernel);
    const Scalar smallest = svd.singularValues().minCoeff();
    rep.kernel_alignment_angle =
        std::acos(std::min(Scalar(1), std::max(Scalar(-1), smallest)));
  }

  Scalar min_adj = std::numeric_limits<Scalar>::max();
  for (const auto& e : form.fan.facet_adjacency)
    min_adj = std::min(min_adj, m(e[0], e[1]));
  rep.min_adjacent_entry = min_adj;
  rep.adjacency_positive = min_adj > Scalar(0);

  rep.ok = rep.max_constrained_value <= rep.constraint_tolerance &&
           rep.restricted_zero_dim == 3 &&
           rep.kernel_alignment_angle <= Scalar(1e-6);
  return rep;
}

}  // namespace conelap

#endif  // CONELAP_POLYTOPE_HPP
