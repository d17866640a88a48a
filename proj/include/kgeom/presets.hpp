#ifndef KGEOM_PRESETS_HPP
#define KGEOM_PRESETS_HPP

// Named diagnostic configurations reachable from `kgeom diagnose --preset`.

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "kgeom/approximation.hpp"
#include "kgeom/report.hpp"
#include "kgeom/volume.hpp"

namespace kgeom {

struct Preset {
  std::string name;
  std::string summary;
  int max_k;
  std::function<Json(int k, const Budget&)> run;
};

namespace detail {

inline std::vector<Vec> shifted_coordinate_functionals(int k, int dim) {
  std::vector<Vec> fs;
  for (int j = 1; j <= k; ++j) fs.push_back(Vec::Unit(dim, j));
  return fs;
}

/// Cube ball of l_inf^{k+1} seen from 3 e_1: the nearest points form the
/// whole face {y_1 = 1}, so determinants at e_2*, .., e_{k+1}* never shrink.
inline Json run_cube_3e1(int k, const Budget& budget) {
  const int d = k + 1;
  const NormDescriptor desc = NormDescriptor::lp(std::numeric_limits<double>::infinity(), d);
  const Space s = Space::make(desc);
  const SetDescriptor a = SetDescriptor::unit_ball();
  const Vec x = 3.0 * Vec::Unit(d, 0);
  const auto fs = shifted_coordinate_functionals(k, d);
  const DecayReport rep = ksch_diagnostic(s, a, x, k, fs, default_delta_schedule(), budget);
  const NearSample face = near_projection_sample(s, x, a, 0.0, budget);
  const std::vector<Vec> verts(face.points.begin(), face.points.begin() + face.extreme_count);
  const DiameterResult diam = diam_k(s, verts, k, budget);
  Json j;
  j["preset"] = "cube-3e1";
  j["k"] = k;
  j["space"] = to_json(desc);
  j["set"] = to_json(a);
  j["x"] = to_json(x);
  j["functionals"] = to_json(fs);
  j["report"] = to_json(rep);
  Json f;
  f["distance"] = number(face.distance);
  f["exhaustive"] = face.exhaustive;
  f["vertices"] = to_json(verts);
  f["diam_k"] = to_json(diam, verts);
  j["nearest_face"] = f;
  return j;
}

/// A = unit ball of the first factor inside (l_2^{k+1} + R)_inf and
/// B = {(2e_1, 0)} u {(0, 1 + 1/n)}.  With x_n^(i) = (e_i, 0) and
/// y_n = (0, 1 + 1/n) the distances tend to d(A, B) = 1 while D_k at
/// e_1*, .., e_k* stays 1.
inline Json run_line_sum(int k, const Budget&) {
  const int d = k + 2;
  const double inf = std::numeric_limits<double>::infinity();
  const NormDescriptor desc = NormDescriptor::product(inf, {NormDescriptor::lp(2.0, k + 1), NormDescriptor::lp(2.0, 1)});
  const Space s = Space::make(desc);
  std::vector<Vec> basis;
  for (int i = 0; i <= k; ++i) basis.push_back(Vec::Unit(d, i));
  const SetDescriptor a = SetDescriptor::ball_in_subspace(basis);
  const int n = 64;
  std::vector<Vec> bpts{2.0 * Vec::Unit(d, 0)};
  std::vector<Vec> ys;
  std::vector<std::vector<Vec>> xs(static_cast<std::size_t>(k + 1));
  for (int t = 1; t <= n; ++t) {
    ys.push_back((1.0 + 1.0 / t) * Vec::Unit(d, k + 1));
    bpts.push_back(ys.back());
    for (int i = 0; i <= k; ++i) xs[static_cast<std::size_t>(i)].push_back(Vec::Unit(d, i));
  }
  std::vector<Vec> fs;
  for (int j = 0; j < k; ++j) fs.push_back(Vec::Unit(d, j));
  const SetDescriptor b = SetDescriptor::points(bpts);
  const DecayReport rep = property_kwuc_test(s, a, b, k, {fs}, xs, ys);
  std::vector<Vec> pts;
  for (int i = 0; i <= k; ++i) pts.push_back(Vec::Unit(d, i));
  Json j;
  j["preset"] = "line-sum-kwuc";
  j["k"] = k;
  j["space"] = to_json(desc);
  j["set_a"] = to_json(a);
  j["set_b"] = to_json(b);
  j["functionals"] = to_json(fs);
  j["report"] = to_json(rep);
  Json c;
  c["points"] = to_json(pts);
  c["value"] = number(std::fabs(dk_determinant(pts, fs)));
  j["direct_constant"] = c;
  return j;
}

/// Unit ball of Euclidean R^3 against sample points of 2S: near-projection
/// sets shrink to the radial projection, uniformly over the sample.
inline Json run_sphere_kwusch(int k, const Budget& budget) {
  const NormDescriptor desc = NormDescriptor::lp(2.0, 3);
  const Space s = Space::make(desc);
  std::mt19937_64 rng(budget.seed);
  std::vector<Vec> b;
  for (int i = 0; i < 4; ++i) b.push_back(2.0 * random_gaussian(rng, 3).normalized());
  const auto fs = shifted_coordinate_functionals(k, 3);
  const DecayReport rep = kwusch_diagnostic(s, SetDescriptor::unit_ball(), b, k, fs, default_delta_schedule(), budget);
  Json j;
  j["preset"] = "sphere-kwusch";
  j["k"] = k;
  j["space"] = to_json(desc);
  j["set_a"] = to_json(SetDescriptor::unit_ball());
  j["b_points"] = to_json(b);
  j["functionals"] = to_json(fs);
  j["report"] = to_json(rep);
  return j;
}

}  // namespace detail

inline const std::vector<Preset>& presets() {
  static const std::vector<Preset> all{
      {"cube-3e1", "l_inf^{k+1} unit ball at 3e_1 with e_2*..e_{k+1}*: ksch stalls on the nearest face", 3,
       detail::run_cube_3e1},
      {"line-sum-kwuc", "Euclidean ball in (l_2^{k+1} + R)_inf against {(2e_1,0)} u {(0,1+1/n)}: property test stalls",
       6, detail::run_line_sum},
      {"sphere-kwusch", "Euclidean unit ball against points of 2S in R^3: uniform decay", 2,
       detail::run_sphere_kwusch},
  };
  return all;
}

inline const Preset& preset(const std::string& name) {
  for (const auto& p : presets())
    if (p.name == name) return p;
  throw ValidationError("preset: unknown name \"" + name + "\"");
}

inline Json run_preset(const std::string& name, int k, const Budget& budget = Budget{}) {
  const Preset& p = preset(name);
  if (k < 1 || k > p.max_k)
    throw ValidationError("preset " + name + ": k must lie in 1.." + std::to_string(p.max_k));
  return p.run(k, budget);
}

}  // namespace kgeom

#endif  // KGEOM_PRESETS_HPP
