#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kgeom/approximation.hpp"
#include "kgeom/zoo.hpp"
#include "support.hpp"

using namespace kgeom;
using kgeom::testing::e;
using kgeom::testing::gaussian;
using kgeom::testing::vec;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Largest determinant of a (k+1)x(k+1) matrix whose first row is all ones and
// whose other entries are +-1, by enumerating every sign pattern.
double max_signed_bordered_det(int k) {
  const int cells = k * (k + 1);
  double best = 0.0;
  for (long mask = 0; mask < (1L << cells); ++mask) {
    Mat m(k + 1, k + 1);
    m.row(0).setOnes();
    for (int c = 0; c < cells; ++c) m(1 + c / (k + 1), c % (k + 1)) = (mask >> c) & 1 ? 1.0 : -1.0;
    best = std::max(best, std::fabs(m.determinant()));
  }
  return best;
}

std::vector<Vec> shifted_functionals(int k) {
  std::vector<Vec> fs;
  for (int j = 1; j <= k; ++j) fs.push_back(e(k + 1, j));
  return fs;
}

Budget light() {
  Budget b;
  b.samples = 200;
  b.tuples = 1500;
  return b;
}

}  // namespace

TEST(DistanceToSet, Examples) {
  const Space eu = Space::make(NormDescriptor::lp(2.0, 3));
  EXPECT_DOUBLE_EQ(distance_to_set(eu, 3.0 * e(3, 0), SetDescriptor::unit_ball()).distance, 2.0);
  const SetDistance fp = distance_to_set(eu, e(3, 0), SetDescriptor::points({Vec::Zero(3), 3.0 * e(3, 0)}));
  EXPECT_DOUBLE_EQ(fp.distance, 1.0);
  EXPECT_EQ(fp.nearest, Vec::Zero(3));

  const Space sq = Space::make(NormDescriptor::lp(kInf, 2));
  const Vec x = vec({3.0, 0.0});
  double oracle = kInf;
  for (int i = 0; i <= 2000; ++i) {
    const double t = -1.0 + 2.0 * i / 2000.0;
    oracle = std::min(oracle, sq.norm(x - vec({1.0, t})));
  }
  const SetDistance seg = distance_to_set(sq, x, SetDescriptor::polytope({vec({1.0, 1.0}), vec({1.0, -1.0})}));
  EXPECT_NEAR(oracle, 2.0, 1e-12);
  EXPECT_NEAR(seg.distance, oracle, 1e-9);
  EXPECT_TRUE(seg.converged);

  EXPECT_DOUBLE_EQ(distance_to_set(eu, 0.5 * e(3, 1), SetDescriptor::scaled_sphere(2.0)).distance, 1.5);
  EXPECT_NEAR(distance_to_set(eu, vec({1.0, 1.0, 1.0}), SetDescriptor::subspace({e(3, 2)})).distance, std::sqrt(2.0),
              1e-14);
}

TEST(DistanceToSet, BallInSubspaceOfProduct) {
  // l2^3 (+)_inf R with A the unit ball of the first factor
  const Space s = Space::make(NormDescriptor::product(kInf, {NormDescriptor::lp(2.0, 3), NormDescriptor::lp(2.0, 1)}));
  const SetDescriptor a = SetDescriptor::ball_in_subspace({e(4, 0), e(4, 1), e(4, 2)});
  EXPECT_NEAR(distance_to_set(s, 2.0 * e(4, 0), a).distance, 1.0, 1e-9);
  EXPECT_NEAR(distance_to_set(s, 1.5 * e(4, 3), a).distance, 1.5, 1e-9);
  EXPECT_TRUE(set_contains(s, a, 0.5 * e(4, 1)));
  EXPECT_FALSE(set_contains(s, a, 0.5 * e(4, 3)));
}

TEST(DistanceToSet, Validation) {
  const Space eu = Space::make(NormDescriptor::lp(2.0, 2));
  EXPECT_THROW(distance_to_set(eu, e(2, 0), SetDescriptor::scaled_sphere(-1.0)), ValidationError);
  EXPECT_THROW(distance_to_set(eu, e(2, 0), SetDescriptor::points({})), ValidationError);
  EXPECT_THROW(distance_to_set(eu, e(2, 0), SetDescriptor::subspace({e(2, 0), 2.0 * e(2, 0)})), ValidationError);
  EXPECT_THROW(distance_to_set(eu, e(2, 0), SetDescriptor::points({e(3, 0)})), DimensionMismatch);
}

TEST(NearProjection, CubeFaceAtThreeE1) {
  for (int k = 1; k <= 3; ++k) {
    const Space s = Space::make(NormDescriptor::lp(kInf, k + 1));
    const NearSample ns = near_projection_sample(s, 3.0 * e(k + 1, 0), SetDescriptor::unit_ball(), 0.0);
    EXPECT_DOUBLE_EQ(ns.distance, 2.0);
    EXPECT_TRUE(ns.exhaustive);
    EXPECT_EQ(ns.extreme_count, 1 << k);
    for (const auto& y : ns.points) {
      EXPECT_NEAR(y(0), 1.0, 1e-12);
      EXPECT_LE(y.cwiseAbs().maxCoeff(), 1.0 + 1e-12);
    }
  }
}

TEST(NearProjection, PointOfTheSetGivesCluster) {
  const Space s = Space::make(NormDescriptor::lp(1.5, 3));
  const Vec x = vec({0.2, -0.1, 0.3});
  for (const auto& a : {SetDescriptor::unit_ball(), SetDescriptor::subspace({x}),
                        SetDescriptor::polytope({x, e(3, 0), e(3, 1)})}) {
    const NearSample ns = near_projection_sample(s, x, a, 0.0, light());
    ASSERT_FALSE(ns.points.empty());
    for (const auto& y : ns.points) EXPECT_LE((y - x).norm(), 1e-9) << set_kind_name(a.kind);
  }
}

TEST(NearProjection, SubspaceLineInPlane) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  const NearSample ns = near_projection_sample(s, e(2, 0), SetDescriptor::subspace({e(2, 1)}), 0.1);
  const double bound = std::sqrt(1.1 * 1.1 - 1.0);
  double widest = 0.0;
  for (const auto& y : ns.points) {
    EXPECT_NEAR(y(0), 0.0, 1e-15);
    EXPECT_LE(std::fabs(y(1)), bound + 1e-12);
    widest = std::max(widest, std::fabs(y(1)));
  }
  EXPECT_GT(widest, 0.8 * bound);
}

TEST(KschDiagnostic, RotundBallDecays) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  for (int k = 1; k <= 2; ++k) {
    std::vector<Vec> fs;
    for (int j = 0; j < k; ++j) fs.push_back(e(3, j + 1));
    const DecayReport r = ksch_diagnostic(s, SetDescriptor::unit_ball(), vec({2.0, 0.5, -0.3}), k, fs,
                                          default_delta_schedule(), light());
    EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol) << "k=" << k << " slope " << r.slope;
    EXPECT_EQ(r.sup_det.size(), 13u);
    EXPECT_EQ(r.diam.size(), 13u);
  }
}

TEST(KschDiagnostic, CubeStallsAtExtremeDeterminant) {
  for (int k = 1; k <= 3; ++k) {
    const double oracle = max_signed_bordered_det(k);
    const Space s = Space::make(NormDescriptor::lp(kInf, k + 1));
    const DecayReport r = ksch_diagnostic(s, SetDescriptor::unit_ball(), 3.0 * e(k + 1, 0), k, shifted_functionals(k),
                                          default_delta_schedule(), light());
    EXPECT_EQ(r.verdict, Verdict::StallsAboveFloor);
    EXPECT_NEAR(r.floor, oracle, 1e-9) << "k=" << k;
    for (double v : r.sup_det) EXPECT_NEAR(v, oracle, 1e-9);
    ASSERT_EQ(static_cast<int>(r.floor_points.size()), k + 1);
    EXPECT_NEAR(std::fabs(dk_determinant(r.floor_points, r.floor_functionals)), r.floor, 1e-12);
    for (double d : r.diam) EXPECT_GE(d, std::pow(2.0, k) - 1e-9);
  }
  EXPECT_DOUBLE_EQ(max_signed_bordered_det(1), 2.0);
  EXPECT_DOUBLE_EQ(max_signed_bordered_det(2), 4.0);
}

TEST(KschDiagnostic, UniqueNearestPointDecays) {
  const Space s = Space::make(NormDescriptor::lp(1.0, 2));
  const SetDescriptor a = SetDescriptor::points({vec({1.0, 0.0}), vec({0.0, 3.0}), vec({-2.0, 1.0})});
  const DecayReport r = ksch_diagnostic(s, a, vec({2.0, 0.0}), 1, {e(2, 0)}, default_delta_schedule());
  EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol);
  EXPECT_EQ(r.sup_det.back(), 0.0);
}

TEST(KschDiagnostic, Validation) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  EXPECT_THROW(ksch_diagnostic(s, SetDescriptor::unit_ball(), e(2, 0), 1, {e(2, 1)}, {0.5, 0.5}), ValidationError);
  EXPECT_THROW(ksch_diagnostic(s, SetDescriptor::unit_ball(), e(2, 0), 1, {2.0 * e(2, 1)}, {1.0}), ValidationError);
  EXPECT_THROW(ksch_diagnostic(s, SetDescriptor::unit_ball(), e(2, 0), 2, {e(2, 1)}, {1.0}), ValidationError);
}

TEST(KwuschDiagnostic, Examples) {
  std::mt19937_64 rng(3);
  const Space eu = Space::make(NormDescriptor::lp(2.0, 3));
  std::vector<Vec> b;
  for (int i = 0; i < 4; ++i) b.push_back(2.0 * gaussian(rng, 3).normalized());
  const DecayReport uni =
      kwusch_diagnostic(eu, SetDescriptor::unit_ball(), b, 1, {e(3, 1)}, default_delta_schedule(), light());
  EXPECT_EQ(uni.verdict, Verdict::DecaysBelowTol);

  const int k = 2;
  const Space cube = Space::make(NormDescriptor::lp(kInf, k + 1));
  const DecayReport st = kwusch_diagnostic(cube, SetDescriptor::unit_ball(), {3.0 * e(3, 0), 2.0 * e(3, 2)}, k,
                                           shifted_functionals(k), default_delta_schedule(), light());
  EXPECT_EQ(st.verdict, Verdict::StallsAboveFloor);
  EXPECT_GE(st.floor, std::pow(2.0, k) - 1e-9);

  const DecayReport one = kwusch_diagnostic(cube, SetDescriptor::unit_ball(), {3.0 * e(3, 0)}, k,
                                            shifted_functionals(k), default_delta_schedule(), light());
  const DecayReport direct = ksch_diagnostic(cube, SetDescriptor::unit_ball(), 3.0 * e(3, 0), k,
                                             shifted_functionals(k), default_delta_schedule(), light());
  EXPECT_EQ(one.sup_det, direct.sup_det);
  EXPECT_EQ(one.diam, direct.diam);
  EXPECT_EQ(one.verdict, direct.verdict);
}

TEST(PropertyKwuc, StallInLineSumOfEuclideanBall) {
  for (int k = 1; k <= 3; ++k) {
    const int d = k + 2;
    const Space s = Space::make(NormDescriptor::product(kInf, {NormDescriptor::lp(2.0, k + 1), NormDescriptor::lp(2.0, 1)}));
    std::vector<Vec> ybasis;
    for (int i = 0; i <= k; ++i) ybasis.push_back(e(d, i));
    const SetDescriptor a = SetDescriptor::ball_in_subspace(ybasis);
    const int n = 64;
    std::vector<Vec> bpts{2.0 * e(d, 0)};
    std::vector<Vec> ys;
    std::vector<std::vector<Vec>> xs(static_cast<std::size_t>(k + 1));
    for (int t = 1; t <= n; ++t) {
      ys.push_back((1.0 + 1.0 / t) * e(d, k + 1));
      bpts.push_back(ys.back());
      for (int i = 0; i <= k; ++i) xs[static_cast<std::size_t>(i)].push_back(e(d, i));
    }
    std::vector<Vec> g;
    for (int j = 0; j < k; ++j) g.push_back(e(d, j));
    const DecayReport r = property_kwuc_test(s, a, SetDescriptor::points(bpts), k, {g}, xs, ys);
    EXPECT_FALSE(r.vacuous) << "k=" << k;
    for (std::size_t t = 0; t < ys.size(); ++t) EXPECT_NEAR(r.hypothesis_residuals[t], 1.0 / (t + 1.0), 1e-12);
    // direct evaluation of the constant
    std::vector<Vec> pts;
    for (int i = 0; i <= k; ++i) pts.push_back(e(d, i));
    const double c = std::fabs(dk_determinant(pts, g));
    EXPECT_NEAR(c, 1.0, 1e-15);
    for (double v : r.sup_det) EXPECT_NEAR(v, c, 1e-9);
    EXPECT_EQ(r.verdict, Verdict::StallsAboveFloor);
  }
}

TEST(PropertyKwuc, SharedCollapsingSequencesDecay) {
  const Space s = Space::make(NormDescriptor::lp(kInf, 3));
  const SetDescriptor a = SetDescriptor::unit_ball();
  std::vector<std::vector<Vec>> xs(3);
  std::vector<Vec> ys;
  for (int t = 1; t <= 64; ++t) {
    const Vec c = vec({0.2, 0.1, 0.0});
    ys.push_back(c);
    xs[0].push_back(c);
    xs[1].push_back(c + 0.5 * e(3, 1) / t);
    xs[2].push_back(c + 0.5 * e(3, 2) / t);
  }
  const DecayReport r = property_kwuc_test(s, a, a, 2, {{e(3, 1), e(3, 2)}}, xs, ys);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol);
}

TEST(PropertyKwuc, RotundSphereTargetsDecay) {
  // A = unit ball, B = 2S in Euclidean R^3: tuples clustering at a unit vector
  std::mt19937_64 rng(4);
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  const Vec u = gaussian(rng, 3).normalized();
  std::vector<std::vector<Vec>> xs(3);
  std::vector<Vec> ys;
  for (int t = 1; t <= 64; ++t) {
    ys.push_back(2.0 * u);
    for (auto& seq : xs) seq.push_back((u + gaussian(rng, 3) / t).normalized());
  }
  const DecayReport r = property_kwuc_test(s, SetDescriptor::unit_ball(), SetDescriptor::scaled_sphere(2.0), 2,
                                           {{e(3, 0), e(3, 1)}}, xs, ys);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol);
}

TEST(PropertyKwuc, HypothesisViolationIsVacuous) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  std::vector<std::vector<Vec>> xs{std::vector<Vec>(8, e(2, 0)), std::vector<Vec>(8, -e(2, 0))};
  const std::vector<Vec> ys(8, 2.0 * e(2, 0));
  const DecayReport r =
      property_kwuc_test(s, SetDescriptor::unit_ball(), SetDescriptor::scaled_sphere(2.0), 1, {{e(2, 0)}}, xs, ys);
  EXPECT_TRUE(r.vacuous);
}

TEST(OrderLifting, Examples) {
  std::vector<std::vector<Vec>> same(4, std::vector<Vec>(16, e(3, 0)));
  const LiftingReport z = order_lifting_check(same, {e(3, 0), e(3, 1), e(3, 2)});
  EXPECT_EQ(z.order_k.verdict, Verdict::DecaysBelowTol);
  EXPECT_EQ(z.order_k_plus.verdict, Verdict::DecaysBelowTol);
  EXPECT_FALSE(z.violation);
  EXPECT_THROW(order_lifting_check(same, {e(3, 0)}), ValidationError);
}

TEST(Properties, MembershipSoundness) {
  std::mt19937_64 rng(20);
  const Budget b = light();
  for (const auto& z : zoo()) {
    const Space s = Space::make(z.descriptor);
    if (s.descriptor().variant == Variant::Quotient && !s.polyhedral() && !s.euclidean()) continue;
    const int d = s.dim();
    std::vector<SetDescriptor> sets{SetDescriptor::unit_ball(), SetDescriptor::scaled_sphere(1.5),
                                    SetDescriptor::subspace({gaussian(rng, d)}),
                                    SetDescriptor::points({gaussian(rng, d), gaussian(rng, d), gaussian(rng, d)})};
    if (d <= 3) sets.push_back(SetDescriptor::polytope({gaussian(rng, d), gaussian(rng, d), gaussian(rng, d)}));
    for (const auto& a : sets) {
      const Vec x = 2.0 * gaussian(rng, d);
      const double delta = kgeom::testing::uniform(rng, 0.0, 0.5);
      const NearSample ns = near_projection_sample(s, x, a, delta, b);
      ASSERT_FALSE(ns.points.empty());
      for (std::size_t i = 0; i < ns.points.size(); i += (a.kind == SetKind::Polytope ? 10 : 1)) {
        const Vec& y = ns.points[i];
        EXPECT_TRUE(set_contains(s, a, y, 1e-8)) << z.name << " " << set_kind_name(a.kind);
        EXPECT_LE(s.norm(x - y), ns.distance + delta + 1e-9) << z.name << " " << set_kind_name(a.kind);
      }
    }
  }
}

TEST(Properties, UnitBallDistanceFormula) {
  std::mt19937_64 rng(21);
  for (const auto& z : zoo()) {
    const Space s = Space::make(z.descriptor);
    for (int t = 0; t < 20; ++t) {
      Vec x = gaussian(rng, s.dim());
      x *= kgeom::testing::uniform(rng, 1.0, 4.0) / s.norm(x);
      EXPECT_LE(std::fabs(distance_to_set(s, x, SetDescriptor::unit_ball()).distance - (s.norm(x) - 1.0)), 1e-12);
    }
  }
}

TEST(Properties, UniformDecayImpliesPointwiseDecay) {
  std::mt19937_64 rng(22);
  const std::vector<NormDescriptor> spaces{NormDescriptor::lp(2.0, 3), NormDescriptor::lp(3.0, 3),
                                           NormDescriptor::lp(kInf, 3), NormDescriptor::lp(1.0, 3)};
  for (const auto& d : spaces) {
    const Space s = Space::make(d);
    std::vector<Vec> b;
    for (int i = 0; i < 3; ++i) b.push_back(2.0 * kgeom::testing::unit(s, gaussian(rng, 3)));
    const Vec g = gaussian(rng, 3);
    const std::vector<Vec> fs{g / s.dual_norm(g)};
    const DecayReport uni = kwusch_diagnostic(s, SetDescriptor::unit_ball(), b, 1, fs, default_delta_schedule(), light());
    if (uni.verdict != Verdict::DecaysBelowTol) continue;
    for (const auto& x : b)
      EXPECT_EQ(ksch_diagnostic(s, SetDescriptor::unit_ball(), x, 1, fs, default_delta_schedule(), light()).verdict,
                Verdict::DecaysBelowTol);
  }
}

TEST(Properties, OrderLiftingOnDecayingInstances) {
  std::mt19937_64 rng(23);
  int violations = 0;
  for (int inst = 0; inst < 50; ++inst) {
    const int k = kgeom::testing::uniform_int(rng, 1, 3);
    const int d = kgeom::testing::uniform_int(rng, k + 1, 5);
    const double rate = kgeom::testing::uniform(rng, 0.5, 2.0);
    const Vec c = gaussian(rng, d);
    std::vector<Vec> dirs;
    for (int i = 0; i < k + 2; ++i) dirs.push_back(gaussian(rng, d));
    std::vector<std::vector<Vec>> seqs(static_cast<std::size_t>(k + 2));
    for (int t = 1; t <= 64; ++t)
      for (int i = 0; i < k + 2; ++i) seqs[static_cast<std::size_t>(i)].push_back(c + std::pow(t, -rate) * dirs[static_cast<std::size_t>(i)]);
    std::vector<Vec> fs;
    for (int j = 0; j < k + 1; ++j) fs.push_back(gaussian(rng, d).normalized());
    const LiftingReport r = order_lifting_check(seqs, fs);
    ASSERT_EQ(r.order_k.verdict, Verdict::DecaysBelowTol) << "instance " << inst;
    if (r.violation) ++violations;
  }
  EXPECT_EQ(violations, 0);
}

TEST(Properties, UniformDecayFeedsPropertyTest) {
  // Sequences drawn from the near-projection samples used by the uniform
  // diagnostic also pass the property test for (A, B).
  std::mt19937_64 rng(24);
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  const SetDescriptor a = SetDescriptor::unit_ball();
  const Vec x = 2.0 * gaussian(rng, 3).normalized();
  const std::vector<Vec> fs{e(3, 0), e(3, 1)};
  const DecayReport uni = kwusch_diagnostic(s, a, {x}, 2, fs, default_delta_schedule(), light());
  ASSERT_EQ(uni.verdict, Verdict::DecaysBelowTol);
  std::vector<std::vector<Vec>> xs(3);
  std::vector<Vec> ys;
  for (double delta : default_delta_schedule()) {
    const NearSample ns = near_projection_sample(s, x, a, delta, light());
    ASSERT_GE(ns.points.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) xs[i].push_back(ns.points[ns.points.size() - 1 - i]);
    ys.push_back(x);
  }
  const DecayReport r = property_kwuc_test(s, a, SetDescriptor::points({x}), 2, {fs}, xs, ys);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol);
}
