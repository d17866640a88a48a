#ifndef KGEOM_TESTS_SUPPORT_HPP
#define KGEOM_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include "kgeom/spaces.hpp"

namespace kgeom::testing {

inline Vec gaussian(std::mt19937_64& rng, Eigen::Index n, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

inline Vec unit(const Space& s, const Vec& v) { return v / s.norm(v); }

inline Vec e(int n, int i) { return Vec::Unit(n, i); }

inline Vec vec(std::initializer_list<double> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

/// Sampling oracle for the dual norm in R^3: max f(x / ||x||) over a dense
/// longitude/latitude grid of directions.
inline double sphere_grid_dual_norm(const Space& s, const Vec& f, int steps) {
  double best = 0.0;
  for (int a = 0; a <= steps; ++a) {
    const double theta = M_PI * a / steps;
    for (int b = 0; b < 2 * steps; ++b) {
      const double phi = M_PI * b / steps;
      Vec x(3);
      x << std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta);
      best = std::max(best, f.dot(x) / s.norm(x));
    }
  }
  return best;
}

/// Random-direction oracle for the dual norm in any dimension.
inline double sampled_dual_norm(const Space& s, const Vec& f, int samples, std::mt19937_64& rng) {
  double best = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Vec x = gaussian(rng, f.size());
    best = std::max(best, std::fabs(f.dot(x)) / s.norm(x));
  }
  return best;
}

}  // namespace kgeom::testing

#endif  // KGEOM_TESTS_SUPPORT_HPP
