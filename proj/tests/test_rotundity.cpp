#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "kgeom/rotundity.hpp"
#include "kgeom/zoo.hpp"
#include "support.hpp"

using namespace kgeom;
using kgeom::testing::e;
using kgeom::testing::gaussian;
using kgeom::testing::vec;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

// Unit pairs in a Euclidean plane at angular resolution 0.5 degrees, with
// V[x1, x2] = ||x1 - x2||.  Rotation invariance lets x1 = e1.
double euclidean_pair_grid_modulus(double eps) {
  double best = 1.0;
  for (int a = 0; a <= 360; ++a) {
    const double t = a * 0.5 * M_PI / 180.0;
    const Vec x1 = vec({1.0, 0.0});
    const Vec x2 = vec({std::cos(t), std::sin(t)});
    if ((x1 - x2).norm() >= eps * (1.0 - 1e-12)) best = std::min(best, 1.0 - (x1 + x2).norm() / 2.0);
  }
  return best;
}

void expect_valid_witness(const Space& s, const ModulusQuery& q, const ModulusEstimate& m) {
  ASSERT_TRUE(m.converged);
  Vec sum = Vec::Zero(s.dim());
  std::vector<Vec> pts;
  if (q.mode == Mode::kWLUR) pts.push_back(q.anchor);
  for (const auto& x : m.witness) {
    EXPECT_NEAR(s.norm(x), 1.0, 1e-7);
    pts.push_back(x);
  }
  for (const auto& x : pts) sum += x;
  EXPECT_NEAR(m.value, std::max(0.0, 1.0 - s.norm(sum) / (q.k + 1)), 1e-7);
  EXPECT_LE(m.value, 1.0);
  if (q.mode == Mode::kUR) {
    EXPECT_GE(vk_volume(s, pts).value, q.epsilon * (1.0 - 1e-9));
    EXPECT_GE(std::fabs(dk_determinant(pts, m.volume_functionals)), q.epsilon * (1.0 - 1e-6));
  } else {
    EXPECT_GE(std::fabs(dk_determinant(pts, q.functionals)), q.epsilon);
  }
}

Budget small_budget() {
  Budget b;
  b.starts = 12;
  b.local_steps = 200;
  return b;
}

}  // namespace

TEST(ModulusEstimate, EuclideanPairMatchesGridOracle) {
  const double oracle = euclidean_pair_grid_modulus(1.0);
  EXPECT_NEAR(oracle, 1.0 - std::sqrt(3.0) / 2.0, 1e-12);
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  ModulusQuery q;
  q.k = 1;
  q.epsilon = 1.0;
  const ModulusEstimate m = modulus_estimate(s, q);
  EXPECT_NEAR(m.value, oracle, 0.02);
  EXPECT_GE(m.value, oracle - 1e-9);
  expect_valid_witness(s, q, m);
}

TEST(ModulusEstimate, FlatFaceGivesExactZero) {
  const Space s = Space::make(NormDescriptor::lp(kInf, 2));
  ModulusQuery q;
  q.mode = Mode::kWUR;
  q.k = 1;
  q.epsilon = 1.5;
  q.functionals = {e(2, 1)};
  const ModulusEstimate m = modulus_estimate(s, q);
  EXPECT_EQ(m.value, 0.0);
  EXPECT_GE(m.feasibility_gap, 0.0);
  EXPECT_LE(m.feasibility_gap, 1e-9);
  expect_valid_witness(s, q, m);
}

TEST(ModulusEstimate, LocalModeAtCubeVertexDirection) {
  const Space s = Space::make(NormDescriptor::lp(kInf, 2));
  ModulusQuery q;
  q.mode = Mode::kWLUR;
  q.k = 1;
  q.epsilon = 0.5;
  q.functionals = {e(2, 1)};
  q.anchor = e(2, 0);
  const ModulusEstimate m = modulus_estimate(s, q, {});
  EXPECT_EQ(m.value, 0.0);
  ASSERT_EQ(m.witness.size(), 1u);
  expect_valid_witness(s, q, m);
}

TEST(ModulusEstimate, InfeasibleEpsilonReturnsOne) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  ModulusQuery q;
  q.k = 2;
  q.epsilon = hadamard_bound(2) * 1.01;
  const ModulusEstimate m = modulus_estimate(s, q);
  EXPECT_EQ(m.value, 1.0);
  EXPECT_TRUE(m.flagged);
  EXPECT_TRUE(m.witness.empty());
  EXPECT_FALSE(m.converged);
}

TEST(ModulusEstimate, ValidatesQuery) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  ModulusQuery q;
  q.mode = Mode::kWUR;
  q.k = 1;
  q.epsilon = 0.5;
  EXPECT_THROW(modulus_estimate(s, q), ValidationError);
  q.functionals = {2.0 * e(3, 0)};
  EXPECT_THROW(modulus_estimate(s, q), ValidationError);
  q.functionals = {e(3, 0)};
  q.epsilon = -1.0;
  EXPECT_THROW(modulus_estimate(s, q), ValidationError);
  q.epsilon = 0.5;
  q.mode = Mode::kWLUR;
  EXPECT_THROW(modulus_estimate(s, q), ValidationError);
  q.anchor = 0.5 * e(3, 0);
  EXPECT_THROW(modulus_estimate(s, q), ValidationError);
  EXPECT_THROW(parse_mode("kxur"), ValidationError);
  EXPECT_EQ(parse_mode("KWLUR"), Mode::kWLUR);
}

TEST(ModulusSweep, CsvHeaderAndGridOrder) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  ModulusQuery q;
  q.k = 1;
  q.budget = small_budget();
  const auto grid = default_epsilon_grid(1);
  ASSERT_EQ(grid.size(), 5u);
  EXPECT_DOUBLE_EQ(grid[3], 1.0);
  const auto sweep = modulus_sweep(s, q, grid);
  ASSERT_EQ(sweep.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) EXPECT_EQ(sweep[i].epsilon, grid[i]);
  const std::string csv = sweep_csv(sweep, Mode::kUR);
  EXPECT_EQ(csv.rfind("# kgeom modulus sweep v1: epsilon,mode,value,converged\n", 0), 0u);
}

TEST(ClassifyKRotund, CrossPolytopeFace) {
  const Space s = Space::make(NormDescriptor::lp(1.0, 3));
  const RotundityVerdict v = classify_k_rotund(s, 2);
  ASSERT_TRUE(v.witness_found);
  EXPECT_STREQ(v.classification(), "witness-found");
  ASSERT_EQ(v.points.size(), 3u);
  Vec sum = Vec::Zero(3);
  for (const auto& x : v.points) {
    EXPECT_NEAR(s.norm(x), 1.0, 1e-12);
    sum += x;
  }
  EXPECT_NEAR(s.norm(sum), 3.0, 1e-12);
  EXPECT_GT(vk_volume(s, v.points).value, 0.1);
  EXPECT_EQ(degeneracy_test(s, v.points).rank, 2);
}

TEST(ClassifyKRotund, PlaneTooSmallForOrderTwo) {
  const Space s = Space::make(NormDescriptor::lp(1.0, 2));
  EXPECT_THROW(classify_k_rotund(s, 2), ValidationError);
  // the flat triple e1, e2, (1/2, 1/2) has rank-one differences in the plane
  const std::vector<Vec> flat{e(2, 0), e(2, 1), vec({0.5, 0.5})};
  EXPECT_NEAR(s.norm(flat[0] + flat[1] + flat[2]), 3.0, 1e-15);
  EXPECT_TRUE(degeneracy_test(s, flat).degenerate);
}

TEST(ClassifyKRotund, EuclideanHasNoWitness) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  const RotundityVerdict v = classify_k_rotund(s, 1, small_budget());
  EXPECT_FALSE(v.witness_found);
  EXPECT_STREQ(v.classification(), "no-witness-at-budget");
  EXPECT_LT(v.best_volume, 0.1);
}

TEST(ClassifyKRotund, SullivanOrderSeparation) {
  const Space s = Space::make(NormDescriptor::sullivan(4, {1, 2}));
  const RotundityVerdict one = classify_k_rotund(s, 1, Budget{}, 0.5);
  ASSERT_TRUE(one.witness_found);
  Vec sum = Vec::Zero(4);
  for (const auto& x : one.points) {
    EXPECT_NEAR(s.norm(x), 1.0, 1e-7);
    sum += x;
  }
  EXPECT_GE(s.norm(sum), 2.0 * (1.0 - 1e-6));
  EXPECT_NEAR(one.volume, 2.0, 1e-9);
  EXPECT_NEAR(s.norm(e(4, 0) + e(4, 1)), 2.0, 1e-15);
  EXPECT_NEAR(vk_volume(s, {e(4, 0), e(4, 1)}).value, 2.0, 1e-12);

  const RotundityVerdict two = classify_k_rotund(s, 2, small_budget(), 0.5);
  EXPECT_FALSE(two.witness_found);
}

TEST(WmlurSequence, ConstantSequencesGiveZero) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  const std::vector<std::vector<Vec>> seqs(2, std::vector<Vec>(8, e(2, 0)));
  const DecayReport r = wmlur_sequence_test(s, 1, e(2, 0), seqs, {{e(2, 1)}});
  for (double v : r.sup_det) EXPECT_EQ(v, 0.0);
  EXPECT_FALSE(r.vacuous);
  EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol);
}

TEST(WmlurSequence, EuclideanRotationsDecayLikeOneOverN) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  std::vector<std::vector<Vec>> seqs(2);
  const int n = 64;
  for (int t = 1; t <= n; ++t) {
    const double a = 1.0 / t;
    seqs[0].push_back(vec({std::cos(a), std::sin(a)}));
    seqs[1].push_back(vec({std::cos(a), -std::sin(a)}));
  }
  const DecayReport r = wmlur_sequence_test(s, 1, e(2, 0), seqs, {{e(2, 1)}});
  EXPECT_FALSE(r.vacuous);
  for (int t = 1; t <= n; ++t) EXPECT_NEAR(r.sup_det[static_cast<std::size_t>(t - 1)], 2.0 * std::sin(1.0 / t), 1e-14);
  EXPECT_NEAR(r.slope, 1.0, 0.05);
  EXPECT_EQ(r.verdict, Verdict::DecaysBelowTol);
}

TEST(WmlurSequence, SquareStallsAtFlatFace) {
  const Space s = Space::make(NormDescriptor::lp(kInf, 2));
  std::vector<std::vector<Vec>> seqs{std::vector<Vec>(16, vec({1.0, 0.5})), std::vector<Vec>(16, vec({1.0, -0.5}))};
  const DecayReport r = wmlur_sequence_test(s, 1, e(2, 0), seqs, {{e(2, 1)}});
  EXPECT_FALSE(r.vacuous);
  for (double h : r.hypothesis_residuals) EXPECT_EQ(h, 0.0);
  for (double v : r.sup_det) EXPECT_DOUBLE_EQ(v, 1.0);
  EXPECT_EQ(r.verdict, Verdict::StallsAboveFloor);
}

TEST(WmlurSequence, HypothesisViolationIsVacuous) {
  const Space s = Space::make(NormDescriptor::lp(2.0, 2));
  std::vector<std::vector<Vec>> seqs{std::vector<Vec>(8, e(2, 0)), std::vector<Vec>(8, e(2, 1))};
  const DecayReport r = wmlur_sequence_test(s, 1, e(2, 0), seqs, {{e(2, 1)}});
  EXPECT_TRUE(r.vacuous);
  EXPECT_THROW(wmlur_sequence_test(s, 1, 2.0 * e(2, 0), seqs, {{e(2, 1)}}), ValidationError);
}

TEST(QuotientSweep, TrivialSubspaceEqualsBase) {
  const NormDescriptor base = NormDescriptor::lp(2.0, 3);
  const QuotientSweep q = quotient_modulus_sweep(base, {e(3, 0)}, {{}}, 1.0, Mode::kWUR, small_budget());
  ModulusQuery direct;
  direct.mode = Mode::kWUR;
  direct.k = 1;
  direct.epsilon = 1.0;
  direct.functionals = {e(3, 0)};
  direct.budget = small_budget();
  ASSERT_EQ(q.entries.size(), 1u);
  EXPECT_EQ(q.entries[0].estimate.value, modulus_estimate(Space::make(base), direct).value);
  EXPECT_EQ(q.infimum, q.entries[0].estimate.value);
}

TEST(QuotientSweep, EuclideanQuotientIsEuclidean) {
  const QuotientSweep q =
      quotient_modulus_sweep(NormDescriptor::lp(2.0, 4), {e(4, 0)}, {{e(4, 3)}}, 1.0, Mode::kWUR, small_budget());
  ASSERT_EQ(q.entries.size(), 1u);
  EXPECT_NEAR(q.entries[0].estimate.value, euclidean_pair_grid_modulus(1.0), 2e-2);
  EXPECT_TRUE(Space::make(q.entries[0].quotient).euclidean());
}

TEST(QuotientSweep, CubeQuotientKeepsFlatFace) {
  const QuotientSweep q =
      quotient_modulus_sweep(NormDescriptor::lp(kInf, 3), {e(3, 0)}, {{e(3, 2)}}, 0.5, Mode::kWUR, small_budget());
  ASSERT_EQ(q.entries.size(), 1u);
  EXPECT_EQ(q.entries[0].estimate.value, 0.0);
  EXPECT_EQ(q.infimum, 0.0);
}

TEST(QuotientSweep, RejectsSubspaceOutsideKernels) {
  EXPECT_THROW(quotient_modulus_sweep(NormDescriptor::lp(2.0, 3), {e(3, 0)}, {{vec({1.0, 1.0, 0.0})}}, 0.5),
               ValidationError);
}

TEST(ProductWitness, Examples) {
  const NormDescriptor sq = NormDescriptor::lp(kInf, 2);
  const FactorWitness w{sq, vec({1.0, 1.0}), vec({1.0, -1.0}), e(2, 1)};
  const ProductWitness two = product_witness_build({w, w}, 2.0);
  ASSERT_EQ(two.points.size(), 3u);
  EXPECT_NEAR(std::fabs(dk_determinant(two.points, two.functionals)), 2.0, 1e-12);
  EXPECT_NEAR(two.formula, 2.0, 1e-12);
  for (double n : two.point_norms) EXPECT_NEAR(n, 1.0, 1e-12);

  const FactorWitness zero{sq, vec({1.0, 1.0}), vec({1.0, 1.0}), e(2, 1)};
  EXPECT_EQ(product_witness_build({w, zero}, 2.0).determinant, 0.0);

  for (double p : {1.0, 2.0, kInf}) {
    const ProductWitness one = product_witness_build({w}, p);
    EXPECT_NEAR(one.determinant, std::fabs(e(2, 1).dot(w.x - w.y)), 1e-15);
  }
  const FactorWitness bad{sq, vec({2.0, 1.0}), vec({1.0, -1.0}), e(2, 1)};
  EXPECT_THROW(product_witness_build({bad}, 2.0), ValidationError);
}

TEST(SchurHarness, Examples) {
  const Space cube = Space::make(NormDescriptor::lp(kInf, 3));
  std::vector<std::vector<Vec>> collapsing;
  for (int n = 1; n <= 6; ++n) {
    const double h = std::pow(10.0, -n);
    collapsing.push_back({e(3, 0), e(3, 0) + h * e(3, 1), e(3, 0) + h * e(3, 2)});
  }
  const SchurReport c = schur_limit_harness(cube, 2, collapsing);
  EXPECT_TRUE(c.exact_sample);
  EXPECT_LE(c.sample_max.back(), 1e-11);
  EXPECT_LE(c.volume.back(), 1e-11);

  const std::vector<std::vector<Vec>> big{{Vec::Zero(3), 2.0 * e(3, 0), 2.0 * e(3, 1)}};
  const SchurReport b = schur_limit_harness(cube, 2, big);
  ASSERT_GE(b.volume[0], 1.0);
  EXPECT_GE(b.sample_max[0], 0.5);

  std::mt19937_64 rng(11);
  const Space eu = Space::make(NormDescriptor::lp(2.0, 3));
  std::vector<std::vector<Vec>> decaying;
  for (int n = 1; n <= 8; ++n) {
    const Vec c0 = gaussian(rng, 3);
    std::vector<Vec> t{c0};
    for (int i = 0; i < 2; ++i) t.push_back(c0 + std::pow(2.0, -n) * gaussian(rng, 3));
    decaying.push_back(t);
  }
  const SchurReport r = schur_limit_harness(eu, 2, decaying);
  EXPECT_FALSE(r.exact_sample);
  EXPECT_TRUE(std::isfinite(r.envelope));
  EXPECT_GE(r.envelope, 1.0 - 1e-12);
}

TEST(Properties, ModeOrdering) {
  std::mt19937_64 rng(12);
  const std::vector<NormDescriptor> spaces{NormDescriptor::lp(2.0, 3), NormDescriptor::lp(kInf, 3),
                                           NormDescriptor::polyhedral(hexagon_vertices())};
  for (const auto& d : spaces) {
    const Space s = Space::make(d);
    for (double eps : {0.25, 0.5, 1.0}) {
      ModulusQuery q;
      q.k = 1;
      q.epsilon = eps;
      q.budget = small_budget();
      const Vec g = gaussian(rng, s.dim());
      q.functionals = {g / s.dual_norm(g)};
      q.mode = Mode::kWUR;
      const double wur = modulus_estimate(s, q).value;
      q.mode = Mode::kUR;
      const double ur = modulus_estimate(s, q).value;
      EXPECT_GE(wur, ur - 1e-6) << variant_name(d.variant) << " eps " << eps;
    }
  }
}

TEST(Properties, MonotoneInEpsilon) {
  for (const auto& d : {NormDescriptor::lp(2.0, 3), NormDescriptor::lp(1.5, 3), NormDescriptor::lp(1.0, 3)}) {
    const Space s = Space::make(d);
    ModulusQuery q;
    q.k = 1;
    q.budget = small_budget();
    const auto sweep = modulus_sweep(s, q, default_epsilon_grid(1));
    for (std::size_t i = 1; i < sweep.size(); ++i)
      EXPECT_GE(sweep[i].estimate.value, sweep[i - 1].estimate.value - 1e-6);
    for (const auto& en : sweep) {
      q.epsilon = en.epsilon;
      expect_valid_witness(s, q, en.estimate);
    }
  }
}

TEST(Properties, WitnessesAgreeWithSubfamilyScan) {
  // Order-2 directional witnesses: every leave-one-out sum keeps norm at
  // least ||sum|| - 1 and the subfamily table reproduces the full value.
  std::mt19937_64 rng(13);
  const Space s = Space::make(NormDescriptor::lp(2.0, 3));
  for (int t = 0; t < 5; ++t) {
    ModulusQuery q;
    q.mode = Mode::kWUR;
    q.k = 2;
    q.epsilon = 0.5;
    q.budget = small_budget();
    q.budget.seed = 100 + static_cast<std::uint64_t>(t);
    for (int j = 0; j < 2; ++j) q.functionals.push_back(gaussian(rng, 3).normalized());
    const ModulusEstimate m = modulus_estimate(s, q);
    ASSERT_TRUE(m.converged);
    Vec sum = Vec::Zero(3);
    for (const auto& x : m.witness) sum += x;
    for (const auto& x : m.witness) EXPECT_GE(s.norm(sum - x), s.norm(sum) - 1.0 - 1e-12);
    const SubfamilyTable tab = subfamily_scan(m.witness, q.functionals);
    EXPECT_DOUBLE_EQ(tab.full, dk_determinant(m.witness, q.functionals));
    EXPECT_GE(std::fabs(tab.full), 0.5);
    EXPECT_GT(tab.max_abs(), 0.0);
  }
}

TEST(Properties, ProductFormulaExact) {
  std::mt19937_64 rng(14);
  const std::vector<NormDescriptor> factors{NormDescriptor::lp(2.0, 2), NormDescriptor::lp(kInf, 2),
                                            NormDescriptor::lp(1.0, 3), NormDescriptor::lp(3.0, 2)};
  for (double p : {1.0, 1.5, 2.0, 3.0, kInf}) {
    for (int t = 0; t < 100; ++t) {
      const int k = kgeom::testing::uniform_int(rng, 1, 3);
      std::vector<FactorWitness> ws;
      for (int i = 0; i < k; ++i) {
        const NormDescriptor& d = factors[static_cast<std::size_t>(kgeom::testing::uniform_int(rng, 0, 3))];
        const Space s = Space::make(d);
        const Vec x = gaussian(rng, s.dim()), y = gaussian(rng, s.dim()), f = gaussian(rng, s.dim());
        ws.push_back({d, x / s.norm(x), y / s.norm(y), f / s.dual_norm(f)});
      }
      const ProductWitness w = product_witness_build(ws, p);
      EXPECT_LE(w.relative_error, 1e-10);
      for (double n : w.point_norms) EXPECT_NEAR(n, 1.0, 1e-10);
    }
  }
}
