// Discrete Wirtinger machinery on wedge-angle data: the circulant cotangent
// matrix for a closed cycle of wedges, its tridiagonal Dirichlet counterpart,
// the angle-sum signature prediction, closed-form equal-angle spectra,
// trigonometric kernel vectors at resonance, direct evaluation of the
// inequality, violation search above the critical total angle, and the
// weighted spectral gap.
//
// Index convention: angles are 0-based here. The matrix couples support
// number i to wedge angles a[i] and a[i+1] (cyclically in closed mode), so
// entry (i, i+1) carries 1/sin a[i+1] and the weight for position i is
// tan(a[i]/2) + tan(a[i+1]/2). Dirichlet mode takes n+1 angles for an n x n
// matrix; the two boundary values are pinned to zero and do not appear.

#ifndef CONELAP_WIRTINGER_HPP
#define CONELAP_WIRTINGER_HPP

#include <cmath>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <utility>

#include "conelap/spectral.hpp"

namespace conelap {

enum class Mode { Closed, Dirichlet };

// Absolute tolerance on the total angle for deciding resonance (the exact
// multiples of the period where the matrix acquires kernel).
inline constexpr double kResonanceTol = 1e-12;
// Total angles closer than this to resonance, but not within kResonanceTol,
// make the numeric signature ill-conditioned; callers may want to warn.
inline constexpr double kNearResonanceBand = 1e-9;

template <class Scalar>
class AngleVector {
 public:
  AngleVector(VectorX<Scalar> angles, Mode mode)
      : AngleVector(std::move(angles), mode, std::nullopt) {}

  // `omega_exact` overrides the compensated sum of the angles; use it when
  // the caller knows the total in exact arithmetic (rational multiples of pi)
  // so that resonance detection does not depend on summation rounding.
  AngleVector(VectorX<Scalar> angles, Mode mode,
              std::optional<Scalar> omega_exact)
      : angles_(std::move(angles)), mode_(mode) {
    const Scalar eps = Scalar(1e-12);
    const Scalar pi = Scalar(std::numbers::pi_v<double>);
    if (mode_ == Mode::Closed && angles_.size() < 3)
      throw std::invalid_argument("AngleVector: closed mode needs n >= 3 angles");
    if (mode_ == Mode::Dirichlet && angles_.size() < 2)
      throw std::invalid_argument(
          "AngleVector: dirichlet mode needs n+1 >= 2 angles");
    for (Index i = 0; i < angles_.size(); ++i) {
      const Scalar a = angles_[i];
      if (!(a > eps && a < pi - eps))
        throw std::invalid_argument("AngleVector: angle outside (0, pi)");
    }
    omega_ = omega_exact ? *omega_exact : compensated_sum(angles_);
  }

  Mode mode() const { return mode_; }
  const VectorX<Scalar>& angles() const { return angles_; }
  // Number of wedge angles.
  Index count() const { return angles_.size(); }
  // Dimension of the associated matrix.
  Index size() const {
    return mode_ == Mode::Closed ? angles_.size() : angles_.size() - 1;
  }
  // Total angle.
  Scalar total() const { return omega_; }

  Scalar angle(Index i) const { return angles_[i]; }
  // Closed-mode cyclic access.
  Scalar cyclic(Index i) const {
    const Index n = angles_.size();
    return angles_[((i % n) + n) % n];
  }

 private:
  static Scalar compensated_sum(const VectorX<Scalar>& v) {
    Scalar sum = 0, carry = 0;
    for (Index i = 0; i < v.size(); ++i) {
      const Scalar y = v[i] - carry;
      const Scalar t = sum + y;
      carry = (t - sum) - y;
      sum = t;
    }
    return sum;
  }

  VectorX<Scalar> angles_;
  Mode mode_;
  Scalar omega_;
};

// Matrix plus its construction data. `weights` holds
// tan(a[i]/2) + tan(a[i+1]/2) per position; in closed mode this equals the
// row sums M 1 (an exact trigonometric identity, tested, not assumed).
template <class Scalar>
struct WirtingerMatrix {
  MatrixX<Scalar> matrix;
  AngleVector<Scalar> angles;
  Scalar omega;
  VectorX<Scalar> weights;
};

namespace detail {

// Resonance classification of a total angle against multiples of `period`.
template <class Scalar>
struct Resonance {
  bool resonant = false;
  long multiplicity = 0;  // floor multiple below omega, or the exact one
  Scalar residual = Scalar(0);
};

template <class Scalar>
Resonance<Scalar> classify_total(Scalar omega, Scalar period, Scalar tol) {
  Resonance<Scalar> r;
  const long nearest = std::lround(static_cast<double>(omega / period));
  r.residual = omega - Scalar(nearest) * period;
  if (nearest >= 1 && std::abs(r.residual) <= tol) {
    r.resonant = true;
    r.multiplicity = nearest;
  } else {
    r.multiplicity = static_cast<long>(std::floor(static_cast<double>(omega / period)));
    // Guard against omega just below a multiple flooring one short.
    if (Scalar(r.multiplicity + 1) * period <= omega) ++r.multiplicity;
  }
  return r;
}

template <class Scalar>
Scalar period_for(const AngleVector<Scalar>& a) {
  const Scalar pi = Scalar(std::numbers::pi_v<double>);
  return a.mode() == Mode::Closed ? Scalar(2) * pi : pi;
}

}  // namespace detail

template <class Scalar>
detail::Resonance<Scalar> resonance(const AngleVector<Scalar>& a,
                                    Scalar tol = Scalar(kResonanceTol)) {
  return detail::classify_total(a.total(), detail::period_for(a), tol);
}

// True when the total angle sits inside the ill-conditioned band around a
// resonance without being classified as resonant.
template <class Scalar>
bool near_resonance(const AngleVector<Scalar>& a) {
  const auto r = resonance(a);
  return !r.resonant && std::abs(r.residual) < Scalar(kNearResonanceBand) &&
         std::lround(static_cast<double>(a.total() / detail::period_for(a))) >= 1;
}

// Circulant matrix of a closed wedge cycle. Assembled wedge by wedge: wedge k
// couples positions k-1 and k (mod n) through the 2x2 block
// [-cot a[k], 1/sin a[k]; 1/sin a[k], -cot a[k]], which also covers n = 3
// where band and corner positions coincide structurally.
template <class Scalar>
WirtingerMatrix<Scalar> build_closed(const AngleVector<Scalar>& a) {
  if (a.mode() != Mode::Closed)
    throw std::invalid_argument("build_closed: angle vector is not closed mode");
  const Index n = a.size();
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    const Index p = (k + n - 1) % n;
    const Scalar s = std::sin(a.angle(k));
    const Scalar c = std::cos(a.angle(k));
    m(p, p) -= c / s;
    m(k, k) -= c / s;
    m(p, k) += Scalar(1) / s;
    if (k != p) m(k, p) += Scalar(1) / s;
  }
  VectorX<Scalar> w(n);
  for (Index i = 0; i < n; ++i)
    w[i] = std::tan(a.angle(i) / 2) + std::tan(a.cyclic(i + 1) / 2);
  return {std::move(m), a, a.total(), std::move(w)};
}

// Tridiagonal matrix of a wedge chain with pinned boundary. n+1 angles give
// an n x n matrix; wedge k couples positions k-1 and k, entries falling
// outside 0..n-1 are dropped.
template <class Scalar>
WirtingerMatrix<Scalar> build_dirichlet(const AngleVector<Scalar>& a) {
  if (a.mode() != Mode::Dirichlet)
    throw std::invalid_argument(
        "build_dirichlet: angle vector is not dirichlet mode");
  const Index n = a.size();
  MatrixX<Scalar> m = MatrixX<Scalar>::Zero(n, n);
  for (Index k = 0; k <= n; ++k) {
    const Index p = k - 1;
    const Scalar s = std::sin(a.angle(k));
    const Scalar c = std::cos(a.angle(k));
    if (p >= 0 && p < n) m(p, p) -= c / s;
    if (k >= 0 && k < n) m(k, k) -= c / s;
    if (p >= 0 && k < n) {
      m(p, k) += Scalar(1) / s;
      m(k, p) += Scalar(1) / s;
    }
  }
  VectorX<Scalar> w(n);
  for (Index i = 0; i < n; ++i)
    w[i] = std::tan(a.angle(i) / 2) + std::tan(a.angle(i + 1) / 2);
  return {std::move(m), a, a.total(), std::move(w)};
}

template <class Scalar>
WirtingerMatrix<Scalar> build(const AngleVector<Scalar>& a) {
  return a.mode() == Mode::Closed ? build_closed(a) : build_dirichlet(a);
}

// Signature predicted from the total angle alone.
// Closed, total = 2m*pi:              (2m-1, 2, n-2m-1)
// Closed, 2m*pi < total < 2(m+1)*pi:  (2m+1, 0, n-2m-1)
// Dirichlet, total = m*pi:            (m-1, 1, n-m)
// Dirichlet, m*pi < total < (m+1)*pi: (m, 0, n-m)
template <class Scalar>
Signature<Scalar> predicted_signature(const AngleVector<Scalar>& a) {
  const auto res = resonance(a);
  const Index n = a.size();
  const long m = res.multiplicity;
  Signature<Scalar> s;
  s.tolerance = Scalar(kResonanceTol);
  if (a.mode() == Mode::Closed) {
    if (res.resonant)
      s = {Index(2 * m - 1), Index(2), n - Index(2 * m) - 1, s.tolerance};
    else
      s = {Index(2 * m + 1), Index(0), n - Index(2 * m) - 1, s.tolerance};
  } else {
    if (res.resonant)
      s = {Index(m - 1), Index(1), n - Index(m), s.tolerance};
    else
      s = {Index(m), Index(0), n - Index(m), s.tolerance};
  }
  if (s.positive < 0 || s.zero < 0 || s.negative < 0 || s.total() != n)
    throw std::logic_error("predicted_signature: inconsistent counts");
  return s;
}

// Closed-form spectrum of the equal-angle matrix after scaling by the
// positive factor `scale` (sin of the common angle). Values are listed in
// index order k = 1..n, not sorted.
template <class Scalar>
struct EqualAngleSpectrum {
  VectorX<Scalar> values;
  Scalar scale;
};

template <class Scalar>
EqualAngleSpectrum<Scalar> equal_angle_spectrum(Index n, Scalar omega,
                                                Mode mode) {
  if (n < 1) throw std::invalid_argument("equal_angle_spectrum: n >= 1");
  if (!(omega > Scalar(0)))
    throw std::invalid_argument("equal_angle_spectrum: omega must be positive");
  const Scalar pi = Scalar(std::numbers::pi_v<double>);
  EqualAngleSpectrum<Scalar> out;
  out.values.resize(n);
  if (mode == Mode::Closed) {
    const Scalar common = omega / Scalar(n);
    out.scale = std::sin(common);
    for (Index k = 1; k <= n; ++k)
      out.values[k - 1] =
          Scalar(2) * std::cos(Scalar(2) * pi * Scalar(k) / Scalar(n)) -
          Scalar(2) * std::cos(common);
  } else {
    const Scalar common = omega / Scalar(n + 1);
    out.scale = std::sin(common);
    for (Index k = 1; k <= n; ++k)
      out.values[k - 1] =
          Scalar(2) * std::cos(pi * Scalar(k) / Scalar(n + 1)) -
          Scalar(2) * std::cos(common);
  }
  return out;
}

// Kernel vectors at resonance, evaluated from partial angle sums S_k:
// closed mode returns the two columns cos(S_k) and sin(S_k); dirichlet mode
// the single column sin(S_k). Unnormalized. Throws if the total angle is not
// resonant.
template <class Scalar>
MatrixX<Scalar> trig_kernel(const AngleVector<Scalar>& a) {
  const auto res = resonance(a);
  if (!res.resonant)
    throw std::domain_error("trig_kernel: total angle is not resonant");
  const Index n = a.size();
  MatrixX<Scalar> out(n, a.mode() == Mode::Closed ? 2 : 1);
  Scalar partial = Scalar(0);
  for (Index k = 0; k < n; ++k) {
    partial += a.angle(k);
    if (a.mode() == Mode::Closed) {
      out(k, 0) = std::cos(partial);
      out(k, 1) = std::sin(partial);
    } else {
      out(k, 0) = std::sin(partial);
    }
  }
  return out;
}

// Direct evaluation of the inequality from its defining sums (not through the
// matrix, so matrix identities stay cross-checkable against this path).
template <class Scalar>
struct WirtingerVerdict {
  Scalar lhs = 0;                  // sum of (x_i - x_{i+1})^2 / sin a[i+1]
  Scalar rhs = 0;                  // sum of (tan(a[i]/2)+tan(a[i+1]/2)) x_i^2
  Scalar constraint_residual = 0;  // |sum of weights * x| (closed mode only)
  bool holds = false;
  bool equality_case = false;
};

template <class Scalar>
WirtingerVerdict<Scalar> check_wirtinger(const AngleVector<Scalar>& a,
                                         const VectorX<Scalar>& x) {
  const Index n = a.size();
  if (x.size() != n)
    throw std::invalid_argument("check_wirtinger: x has wrong length");
  WirtingerVerdict<Scalar> v;
  if (a.mode() == Mode::Closed) {
    for (Index i = 0; i < n; ++i) {
      const Scalar diff = x[i] - x[(i + 1) % n];
      v.lhs += diff * diff / std::sin(a.cyclic(i + 1));
      const Scalar w =
          std::tan(a.angle(i) / 2) + std::tan(a.cyclic(i + 1) / 2);
      v.rhs += w * x[i] * x[i];
      v.constraint_residual += w * x[i];
    }
    v.constraint_residual = std::abs(v.constraint_residual);
  } else {
    // Boundary values are zero; the difference sum runs over all n+1 wedges.
    for (Index i = 0; i <= n; ++i) {
      const Scalar lo = (i == 0) ? Scalar(0) : x[i - 1];
      const Scalar hi = (i == n) ? Scalar(0) : x[i];
      const Scalar diff = lo - hi;
      v.lhs += diff * diff / std::sin(a.angle(i));
    }
    for (Index i = 0; i < n; ++i) {
      const Scalar w = std::tan(a.angle(i) / 2) + std::tan(a.angle(i + 1) / 2);
      v.rhs += w * x[i] * x[i];
    }
    v.constraint_residual = Scalar(0);
  }
  const Scalar tol = Scalar(1e-9) * std::max(Scalar(1), std::abs(v.rhs));
  v.holds = v.lhs >= v.rhs - tol;
  v.equality_case = std::abs(v.lhs - v.rhs) <= tol;
  return v;
}

// Searches for a vector violating the inequality under the weight constraint.
// Returns the unit eigenvector of the largest positive eigenvalue of the
// matrix restricted to the constraint hyperplane, or nullopt when the total
// angle does not exceed one full turn (no violation exists there).
template <class Scalar>
std::optional<VectorX<Scalar>> find_violation(const AngleVector<Scalar>& a) {
  if (a.mode() != Mode::Closed)
    throw std::invalid_argument("find_violation: closed mode only");
  const Scalar two_pi = Scalar(2) * Scalar(std::numbers::pi_v<double>);
  if (a.total() <= two_pi + Scalar(kResonanceTol)) return std::nullopt;

  const WirtingerMatrix<Scalar> wm = build_closed(a);
  const MatrixX<Scalar> basis = hyperplane_basis(wm.weights);
  const EigenDecomposition<Scalar> restricted =
      eigh(project_quadratic(wm.matrix, basis));
  const Index top = restricted.size() - 1;
  if (!(restricted.eigenvalues[top] > Scalar(0))) return std::nullopt;

  VectorX<Scalar> x = basis * restricted.eigenvectors.col(top);
  x.normalize();
  for (Index i = 0; i < x.size(); ++i) {
    if (std::abs(x[i]) > Scalar(1e-12)) {
      if (x[i] < Scalar(0)) x = -x;
      break;
    }
  }
  return x;
}

// Generalized spectrum of (-M) x = mu W x with W = diag(weights): the
// weighted Laplacian-plus-identity reading of the closed-mode matrix.
// `gap` is mu_1 - mu_0 of the ascending generalized eigenvalues.
template <class Scalar>
struct GapReport {
  Scalar ground = 0;  // mu_0
  Scalar second = 0;  // mu_1
  Scalar gap = 0;
  VectorX<Scalar> spectrum;
};

template <class Scalar>
GapReport<Scalar> spectral_gap(const AngleVector<Scalar>& a) {
  if (a.mode() != Mode::Closed)
    throw std::invalid_argument("spectral_gap: closed mode only");
  const Scalar two_pi = Scalar(2) * Scalar(std::numbers::pi_v<double>);
  if (a.total() > two_pi + Scalar(kResonanceTol))
    throw std::domain_error(
        "spectral_gap: undefined for total angle above one full turn");
  const WirtingerMatrix<Scalar> wm = build_closed(a);
  const MatrixX<Scalar> neg = -wm.matrix;
  const EigenDecomposition<Scalar> d = geneigh(neg, wm.weights);
  GapReport<Scalar> g;
  g.spectrum = d.eigenvalues;
  g.ground = d.eigenvalues[0];
  g.second = d.eigenvalues.size() > 1 ? d.eigenvalues[1] : d.eigenvalues[0];
  g.gap = g.second - g.ground;
  return g;
}

}  // namespace conelap

#endif  // CONELAP_WIRTINGER_HPP
