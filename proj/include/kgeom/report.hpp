#ifndef KGEOM_REPORT_HPP
#define KGEOM_REPORT_HPP

// JSON payloads for every result type.  Numeric claims are emitted together
// with the vectors or functionals that certify them.

#include <algorithm>
#include <cmath>
#include <utility>
#include <string>
#include <vector>

#include "kgeom/approximation.hpp"
#include "kgeom/decay.hpp"
#include "kgeom/determinant.hpp"
#include "kgeom/json_io.hpp"
#include "kgeom/rotundity.hpp"
#include "kgeom/volume.hpp"

namespace kgeom {

/// Finite values as numbers, the rest as "inf", "-inf" or "nan".
inline Json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

inline Json numbers(const std::vector<double>& vs) {
  Json a = Json::array();
  for (double v : vs) a.push_back(number(v));
  return a;
}

inline Json to_json(const Budget& b) {
  Json j;
  j["starts"] = b.starts;
  j["local_steps"] = b.local_steps;
  j["volume_starts"] = b.volume_starts;
  j["volume_rounds"] = b.volume_rounds;
  j["penalty_rounds"] = b.penalty_rounds;
  j["penalty_growth"] = b.penalty_growth;
  j["samples"] = b.samples;
  j["tuples"] = b.tuples;
  j["seed"] = b.seed;
  return j;
}

/// Overrides the fields present in `j`; unknown keys are rejected.
inline Budget budget_from_json(const Json& j, Budget b = Budget{}) {
  if (!j.is_object()) throw ValidationError("budget: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    const Json& v = it.value();
    auto as_int = [&]() {
      if (!v.is_number_integer() || v.get<long long>() < 1)
        throw ValidationError("budget." + key + ": expected a positive integer");
      return v.get<int>();
    };
    if (key == "starts") b.starts = as_int();
    else if (key == "local_steps") b.local_steps = as_int();
    else if (key == "volume_starts") b.volume_starts = as_int();
    else if (key == "volume_rounds") b.volume_rounds = as_int();
    else if (key == "penalty_rounds") b.penalty_rounds = as_int();
    else if (key == "samples") b.samples = as_int();
    else if (key == "tuples") b.tuples = as_int();
    else if (key == "penalty_growth") {
      if (!v.is_number() || v.get<double>() <= 1.0) throw ValidationError("budget.penalty_growth: expected a number > 1");
      b.penalty_growth = v.get<double>();
    } else if (key == "seed") {
      if (!v.is_number_unsigned()) throw ValidationError("budget.seed: expected a nonnegative integer");
      b.seed = v.get<std::uint64_t>();
    } else {
      throw ValidationError("budget: unknown field \"" + key + "\"");
    }
  }
  return b;
}

/// Overrides Tolerances fields by name, e.g. {"decay_floor": 1e-4}.
inline Tolerances tolerances_from_json(const Json& j, Tolerances t = default_tolerances()) {
  if (!j.is_object()) throw ValidationError("tol: expected a JSON object");
  const std::vector<std::pair<const char*, double Tolerances::*>> fields{
      {"norm_axiom", &Tolerances::norm_axiom},     {"dual_cache", &Tolerances::dual_cache},
      {"unit_dual", &Tolerances::unit_dual},       {"support_dual", &Tolerances::support_dual},
      {"support_value", &Tolerances::support_value}, {"dedupe", &Tolerances::dedupe},
      {"ascoli", &Tolerances::ascoli},             {"pivot", &Tolerances::pivot},
      {"rank", &Tolerances::rank},                 {"unit_vector", &Tolerances::unit_vector},
      {"witness_sum", &Tolerances::witness_sum},   {"decay_floor", &Tolerances::decay_floor},
      {"membership", &Tolerances::membership},     {"face", &Tolerances::face},
      {"conic_gap", &Tolerances::conic_gap}};
  for (auto it = j.begin(); it != j.end(); ++it) {
    auto f = std::find_if(fields.begin(), fields.end(), [&](const auto& p) { return it.key() == p.first; });
    if (f == fields.end()) throw ValidationError("tol: unknown field \"" + it.key() + "\"");
    if (!it.value().is_number() || !(it.value().get<double>() > 0.0))
      throw ValidationError("tol." + it.key() + ": expected a positive number");
    t.*(f->second) = it.value().get<double>();
  }
  return t;
}

inline Json to_json(const VolumeResult& r) {
  Json j;
  j["value"] = number(r.value);
  j["method"] = method_name(r.method);
  j["lower_bound"] = r.lower_bound;
  j["converged"] = r.converged;
  j["certificate"] = to_json(r.certificate);
  return j;
}

inline Json to_json(const DiameterResult& r, const std::vector<Vec>& pts) {
  Json j;
  j["value"] = number(r.value);
  j["lower_bound"] = r.lower_bound;
  j["witness_indices"] = r.witness;
  std::vector<Vec> w;
  for (int i : r.witness) w.push_back(pts[static_cast<std::size_t>(i)]);
  j["witness"] = to_json(w);
  j["volume"] = to_json(r.volume);
  return j;
}

inline Json to_json(const SubfamilyTable& t) {
  Json j;
  j["k"] = t.k;
  j["full"] = number(t.full);
  j["max_abs"] = number(t.max_abs());
  Json rows = Json::array();
  for (const auto& e : t.entries) {
    Json r;
    r["alpha"] = e.alpha;
    r["beta"] = e.beta;
    r["value"] = number(e.value);
    rows.push_back(r);
  }
  j["entries"] = rows;
  return j;
}

inline Json to_json(const SylvesterResult& r) {
  Json j;
  j["lhs"] = number(r.lhs);
  j["rhs"] = number(r.rhs);
  j["pivot"] = number(r.pivot);
  j["relative_error"] = number(r.relative_error);
  return j;
}

inline Json to_json(const DecayReport& r) {
  Json j;
  j["verdict"] = verdict_name(r.verdict);
  j["floor"] = number(r.floor);
  j["slope"] = number(r.slope);
  j["vacuous"] = r.vacuous;
  j["schedule"] = numbers(r.schedule);
  j["sup_det"] = numbers(r.sup_det);
  if (!r.diam.empty()) j["diam_k"] = numbers(r.diam);
  if (!r.hypothesis_residuals.empty()) j["hypothesis_residuals"] = numbers(r.hypothesis_residuals);
  Json cert;
  cert["points"] = to_json(r.floor_points);
  cert["functionals"] = to_json(r.floor_functionals);
  j["floor_certificate"] = cert;
  j["notes"] = r.notes;
  return j;
}

inline Json to_json(const ModulusQuery& q) {
  Json j;
  j["mode"] = mode_name(q.mode);
  j["k"] = q.k;
  j["epsilon"] = number(q.epsilon);
  j["functionals"] = to_json(q.functionals);
  if (q.anchor.size() > 0) j["anchor"] = to_json(q.anchor);
  j["budget"] = to_json(q.budget);
  return j;
}

inline Json to_json(const ModulusEstimate& e) {
  Json j;
  j["value"] = number(e.value);
  j["converged"] = e.converged;
  j["flagged"] = e.flagged;
  j["upper_bound"] = true;
  j["constraint"] = number(e.constraint);
  j["feasibility_gap"] = number(e.feasibility_gap);
  j["witness"] = to_json(e.witness);
  if (!e.volume_functionals.empty()) j["volume_functionals"] = to_json(e.volume_functionals);
  j["evaluations"] = e.evaluations;
  return j;
}

inline Json to_json(const std::vector<SweepEntry>& sweep) {
  Json a = Json::array();
  for (const auto& e : sweep) {
    Json j;
    j["epsilon"] = number(e.epsilon);
    j["estimate"] = to_json(e.estimate);
    a.push_back(j);
  }
  return a;
}

inline Json to_json(const RotundityVerdict& v) {
  Json j;
  j["classification"] = v.classification();
  j["method"] = v.method;
  j["volume"] = number(v.volume);
  j["sum_norm"] = number(v.sum_norm);
  j["points"] = to_json(v.points);
  j["functionals"] = to_json(v.functionals);
  j["best_volume"] = number(v.best_volume);
  j["evaluations"] = v.evaluations;
  return j;
}

inline Json to_json(const QuotientSweep& s) {
  Json j;
  j["infimum"] = number(s.infimum);
  Json a = Json::array();
  for (const auto& e : s.entries) {
    Json r;
    r["subspace"] = to_json(e.subspace);
    r["quotient"] = to_json(e.quotient);
    r["functionals"] = to_json(e.functionals);
    r["estimate"] = to_json(e.estimate);
    a.push_back(r);
  }
  j["entries"] = a;
  return j;
}

inline Json to_json(const ProductWitness& w) {
  Json j;
  j["product"] = to_json(w.product);
  j["points"] = to_json(w.points);
  j["functionals"] = to_json(w.functionals);
  j["point_norms"] = numbers(w.point_norms);
  j["factor_values"] = numbers(w.factor_values);
  j["determinant"] = number(w.determinant);
  j["formula"] = number(w.formula);
  j["relative_error"] = number(w.relative_error);
  return j;
}

inline Json to_json(const SchurReport& r) {
  Json j;
  j["envelope"] = number(r.envelope);
  j["exact_sample"] = r.exact_sample;
  j["sample_max"] = numbers(r.sample_max);
  j["volume"] = numbers(r.volume);
  return j;
}

inline Json to_json(const LiftingReport& r) {
  Json j;
  j["violation"] = r.violation;
  j["order_k"] = to_json(r.order_k);
  j["order_k_plus"] = to_json(r.order_k_plus);
  return j;
}

inline Json to_json(const SetDescriptor& a) {
  Json j;
  j["kind"] = set_kind_name(a.kind);
  if (a.kind == SetKind::ScaledSphere || a.kind == SetKind::BallInSubspace) j["radius"] = number(a.radius);
  switch (a.kind) {
    case SetKind::Subspace:
    case SetKind::BallInSubspace: j["basis"] = to_json(a.vectors); break;
    case SetKind::Polytope: j["vertices"] = to_json(a.vectors); break;
    case SetKind::FinitePointSet: j["points"] = to_json(a.vectors); break;
    default: break;
  }
  return j;
}

inline SetDescriptor set_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("set: expected a JSON object");
  const Json& kind = detail::require(j, "kind", "set");
  if (!kind.is_string()) throw ValidationError("set.kind: expected a string");
  const std::string k = kind.get<std::string>();
  auto radius = [&]() {
    const Json& r = detail::require(j, "radius", "set");
    if (!r.is_number() || r.get<double>() <= 0.0) throw ValidationError("set.radius: expected a positive number");
    return r.get<double>();
  };
  auto vectors = [&](const char* key) {
    return vecs_from_json(detail::require(j, key, "set"), std::string("set.") + key);
  };
  if (k == "UnitBall") return SetDescriptor::unit_ball();
  if (k == "ScaledSphere") return SetDescriptor::scaled_sphere(radius());
  if (k == "Subspace") return SetDescriptor::subspace(vectors("basis"));
  if (k == "Polytope") return SetDescriptor::polytope(vectors("vertices"));
  if (k == "FinitePointSet") return SetDescriptor::points(vectors("points"));
  if (k == "BallInSubspace") return SetDescriptor::ball_in_subspace(vectors("basis"), j.contains("radius") ? radius() : 1.0);
  throw ValidationError("set.kind: unknown kind \"" + k + "\"");
}

inline Json to_json(const SetDistance& d) {
  Json j;
  j["distance"] = number(d.distance);
  j["nearest"] = to_json(d.nearest);
  j["exact"] = d.exact;
  j["converged"] = d.converged;
  return j;
}

inline Json to_json(const NearSample& s) {
  Json j;
  j["method"] = s.method;
  j["distance"] = number(s.distance);
  j["nearest"] = to_json(s.nearest);
  j["exhaustive"] = s.exhaustive;
  j["flagged"] = s.flagged;
  j["extreme_count"] = s.extreme_count;
  j["points"] = to_json(s.points);
  return j;
}

/// Canonical text form: two-space indentation and a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace kgeom

#endif  // KGEOM_REPORT_HPP
