// Shared seeded generators for the test and acceptance suites.

#ifndef CONELAP_TESTS_SUPPORT_HPP
#define CONELAP_TESTS_SUPPORT_HPP

#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <stdexcept>

#include "conelap/polytope.hpp"
#include "conelap/wirtinger.hpp"

namespace conelap::testing {

inline std::mt19937_64 make_rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline Eigen::MatrixXd random_symmetric(std::mt19937_64& rng, Eigen::Index n,
                                        double scale = 1.0) {
  std::normal_distribution<double> gauss(0.0, scale);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) {
      const double v = gauss(rng);
      m(i, j) = v;
      m(j, i) = v;
    }
  }
  return m;
}

inline Eigen::VectorXd random_vector(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

// Angles drawn uniformly and rescaled to the target total; the floor keeps
// the matrix entries at a moderate scale so zero bands stay meaningful.
inline AngleVector<double> random_angles(std::mt19937_64& rng,
                                         Eigen::Index count, double omega,
                                         Mode mode) {
  std::uniform_real_distribution<double> pick(0.05, std::numbers::pi - 0.05);
  Eigen::VectorXd raw(count);
  for (int attempt = 0; attempt < 5000; ++attempt) {
    for (Eigen::Index i = 0; i < count; ++i) raw[i] = pick(rng);
    raw *= omega / raw.sum();
    if ((raw.array() > 0.02).all() &&
        (raw.array() < std::numbers::pi - 0.02).all())
      return AngleVector<double>(raw, mode);
  }
  throw std::runtime_error("random_angles: rejection sampling failed");
}

// Resonant angles built from integer weights, so the total is an exact
// integer multiple of the period and can be attached as the exact total.
// Closed mode: total = 2m*pi over `count` angles; dirichlet: total = m*pi.
inline AngleVector<double> resonant_angles(std::mt19937_64& rng,
                                           Eigen::Index count, long m,
                                           Mode mode) {
  const double pi = std::numbers::pi;
  const long long mult = mode == Mode::Closed ? 2 * m : m;
  std::uniform_int_distribution<long long> pick(1, 64);
  std::vector<long long> c(static_cast<std::size_t>(count));
  for (int attempt = 0; attempt < 20000; ++attempt) {
    long long sum = 0;
    long long largest = 0;
    for (auto& v : c) {
      v = pick(rng);
      sum += v;
      largest = std::max(largest, v);
    }
    if (mult * largest >= sum) continue;  // some angle would reach pi
    Eigen::VectorXd raw(count);
    bool fine = true;
    for (Eigen::Index i = 0; i < count; ++i) {
      raw[i] = static_cast<double>(mult * c[static_cast<std::size_t>(i)]) * pi /
               static_cast<double>(sum);
      fine = fine && raw[i] > 1e-4 && raw[i] < pi - 1e-4;
    }
    if (!fine) continue;
    const double omega_exact = static_cast<double>(mult) * pi;
    return AngleVector<double>(raw, mode, omega_exact);
  }
  throw std::runtime_error("resonant_angles: rejection sampling failed");
}

inline Eigen::MatrixXd random_unit_normals(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd normals(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    Eigen::Vector3d v;
    do {
      v << gauss(rng), gauss(rng), gauss(rng);
    } while (v.norm() < 1e-3);
    normals.row(i) = (v / v.norm()).transpose();
  }
  return normals;
}

// Retries until the sampled normals are in general position and surround
// the origin.
inline NormalFan3<double> random_fan(std::mt19937_64& rng, Eigen::Index n) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    try {
      return build_fan<double>(random_unit_normals(rng, n));
    } catch (const std::invalid_argument&) {
    }
  }
  throw std::runtime_error("random_fan: no valid fan found");
}

}  // namespace conelap::testing

#endif  // CONELAP_TESTS_SUPPORT_HPP
