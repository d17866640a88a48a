#include <gtest/gtest.h>

#include <limits>

#include "kgeom/presets.hpp"
#include "kgeom/report.hpp"
#include "support.hpp"

using namespace kgeom;
using kgeom::testing::e;
using kgeom::testing::vec;

TEST(Report, SetDescriptorRoundTrip) {
  const std::vector<SetDescriptor> sets{
      SetDescriptor::unit_ball(), SetDescriptor::scaled_sphere(2.5), SetDescriptor::subspace({e(3, 1)}),
      SetDescriptor::polytope({e(3, 0), e(3, 1), vec({0.0, 0.0, 2.0})}), SetDescriptor::points({e(3, 2)}),
      SetDescriptor::ball_in_subspace({e(3, 0), e(3, 1)}, 0.5)};
  for (const auto& a : sets) {
    const SetDescriptor b = set_from_json(Json::parse(to_json(a).dump()));
    EXPECT_EQ(b.kind, a.kind);
    EXPECT_EQ(b.radius, a.radius);
    EXPECT_EQ(b.vectors, a.vectors);
  }
}

TEST(Report, SetDescriptorErrorsNameTheField) {
  try {
    set_from_json(Json::parse(R"({"kind":"ScaledSphere","radius":-1})"));
    FAIL();
  } catch (const ValidationError& err) {
    EXPECT_NE(std::string(err.what()).find("set.radius"), std::string::npos);
  }
  EXPECT_THROW(set_from_json(Json::parse(R"({"kind":"Donut"})")), ValidationError);
  EXPECT_THROW(set_from_json(Json::parse(R"({"kind":"Subspace"})")), ValidationError);
}

TEST(Report, BudgetAndToleranceOverrides) {
  const Budget b = budget_from_json(Json::parse(R"({"starts":3,"seed":11,"penalty_growth":4})"));
  EXPECT_EQ(b.starts, 3);
  EXPECT_EQ(b.seed, 11u);
  EXPECT_EQ(b.penalty_growth, 4.0);
  EXPECT_EQ(b.tuples, Budget{}.tuples);
  EXPECT_THROW(budget_from_json(Json::parse(R"({"starts":0})")), ValidationError);
  EXPECT_THROW(budget_from_json(Json::parse(R"({"bogus":1})")), ValidationError);
  const Tolerances t = tolerances_from_json(Json::parse(R"({"decay_floor":1e-5})"));
  EXPECT_EQ(t.decay_floor, 1e-5);
  EXPECT_EQ(t.ascoli, default_tolerances().ascoli);
  EXPECT_THROW(tolerances_from_json(Json::parse(R"({"decay_floor":-1})")), ValidationError);
}

TEST(Report, NonFiniteNumbersAreStrings) {
  EXPECT_EQ(number(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(number(-std::numeric_limits<double>::infinity()), "-inf");
  EXPECT_EQ(number(std::nan("")), "nan");
  EXPECT_EQ(number(0.25), 0.25);
}

TEST(Report, DecayPayloadCarriesCertificate) {
  const Json j = run_preset("cube-3e1", 1);
  const auto pts = vecs_from_json(j["report"]["floor_certificate"]["points"], "points");
  const auto fs = vecs_from_json(j["report"]["floor_certificate"]["functionals"], "functionals");
  EXPECT_DOUBLE_EQ(std::fabs(dk_determinant(pts, fs)), j["report"]["floor"].get<double>());
  EXPECT_EQ(j["report"]["schedule"].size(), j["report"]["sup_det"].size());
  EXPECT_EQ(j["nearest_face"]["vertices"].size(), 2u);
}

TEST(Report, PresetValidation) {
  EXPECT_THROW(run_preset("cube-3e1", 0), ValidationError);
  EXPECT_THROW(run_preset("sphere-kwusch", 3), ValidationError);
  EXPECT_THROW(run_preset("missing", 1), ValidationError);
}
