// kgeom: command-line front end for the k-rotundity toolkit.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kgeom/approximation.hpp"
#include "kgeom/determinant.hpp"
#include "kgeom/json_io.hpp"
#include "kgeom/presets.hpp"
#include "kgeom/report.hpp"
#include "kgeom/rotundity.hpp"
#include "kgeom/verify.hpp"
#include "kgeom/volume.hpp"
#include "kgeom/zoo.hpp"

using namespace kgeom;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSuite = 2;

struct Options {
  std::string space;
  int k = 1;
  std::string mode;  // kur for modulus, kwur for quotient-sweep when empty
  std::string eps;
  std::string budget;
  std::optional<std::uint64_t> seed;
  std::string tol;
  std::string format = "json";
  std::string out;
  std::string preset;
  std::vector<std::string> suites;
  bool all = false;
  std::string points;
  std::string functionals;
  std::string x;
  std::string set;
  std::string b_points;
  std::string factors;
  std::string family;
  std::string strategy = "auto";
  double delta = -1.0;
  double p = 2.0;
  double min_volume = 0.1;
  std::string zoo_name;
};

/// Inline JSON, or a path to a JSON file.
Json parse_json_arg(const std::string& text, const std::string& field) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) throw ValidationError(field + ": empty value");
  const char c = text[first];
  try {
    if (c == '{' || c == '[' || c == '-' || (c >= '0' && c <= '9')) return Json::parse(text);
    std::ifstream in(text);
    if (!in) throw ValidationError(field + ": not JSON and no such file: " + text);
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(field + ": malformed JSON: " + e.what());
  }
}

NormDescriptor space_arg(const Options& o) {
  if (o.space.empty()) throw ValidationError("space: --space is required");
  if (o.space.rfind("zoo:", 0) == 0) return zoo_entry(o.space.substr(4)).descriptor;
  return parse_descriptor(o.space);
}

Tolerances tol_arg(const Options& o) {
  return o.tol.empty() ? default_tolerances() : tolerances_from_json(parse_json_arg(o.tol, "tol"));
}

Space make_space(const Options& o) { return Space::make(space_arg(o), tol_arg(o)); }

Budget budget_arg(const Options& o) {
  Budget b = o.budget.empty() ? Budget{} : budget_from_json(parse_json_arg(o.budget, "budget"));
  if (o.seed) b.seed = *o.seed;
  return b;
}

std::vector<Vec> vecs_arg(const std::string& text, const char* field) {
  if (text.empty()) throw ValidationError(std::string(field) + ": --" + field + " is required");
  return vecs_from_json(parse_json_arg(text, field), field);
}

std::vector<double> eps_arg(const Options& o) {
  std::vector<double> out;
  for (const auto& t : detail::split(o.eps, ',')) out.push_back(detail::parse_number(t, "eps"));
  if (out.empty()) throw ValidationError("eps: empty list");
  return out;
}

SetDescriptor set_arg(const Options& o) {
  if (o.set.empty()) throw ValidationError("set: --set is required");
  return set_from_json(parse_json_arg(o.set, "set"));
}

VolumeStrategy strategy_arg(const Options& o) {
  if (o.strategy == "auto") return VolumeStrategy::Auto;
  if (o.strategy == "exact") return VolumeStrategy::Exact;
  if (o.strategy == "iterative") return VolumeStrategy::Iterative;
  throw ValidationError("strategy: expected auto, exact or iterative, got \"" + o.strategy + "\"");
}

[[noreturn]] void csv_unavailable(const char* command) {
  throw ValidationError(std::string("format: csv output is not available for ") + command);
}

struct Output {
  std::string text;
  int status = kExitOk;
};

Output json_out(const Json& j) { return {dump(j), kExitOk}; }

Output cmd_det(const Options& o) {
  const auto xs = vecs_arg(o.points, "points");
  const auto fs = vecs_arg(o.functionals, "functionals");
  const double v = dk_determinant(xs, fs);
  if (o.format == "csv") {
    std::ostringstream s;
    s.precision(17);
    s << "# kgeom det v1: value\n" << v << "\n";
    return {s.str()};
  }
  Json j;
  j["command"] = "det";
  j["points"] = to_json(xs);
  j["functionals"] = to_json(fs);
  j["value"] = number(v);
  return json_out(j);
}

Output cmd_volume(const Options& o) {
  const Space s = make_space(o);
  const auto xs = vecs_arg(o.points, "points");
  const VolumeResult r = vk_volume(s, xs, strategy_arg(o), budget_arg(o));
  if (o.format == "csv") {
    std::ostringstream c;
    c.precision(17);
    c << "# kgeom volume v1: value,method,lower_bound\n"
      << r.value << "," << method_name(r.method) << "," << (r.lower_bound ? 1 : 0) << "\n";
    return {c.str()};
  }
  Json j;
  j["command"] = "volume";
  j["space"] = to_json(s.descriptor());
  j["points"] = to_json(xs);
  j["result"] = to_json(r);
  return json_out(j);
}

Output cmd_diam(const Options& o) {
  const Space s = make_space(o);
  const auto xs = vecs_arg(o.points, "points");
  if (o.format == "csv") csv_unavailable("diam");
  const DiameterResult r = diam_k(s, xs, o.k, budget_arg(o));
  Json j;
  j["command"] = "diam";
  j["space"] = to_json(s.descriptor());
  j["k"] = o.k;
  j["points"] = to_json(xs);
  j["result"] = to_json(r, xs);
  return json_out(j);
}

ModulusQuery modulus_query(const Options& o) {
  ModulusQuery q;
  q.mode = parse_mode(o.mode.empty() ? "kur" : o.mode);
  q.k = o.k;
  q.budget = budget_arg(o);
  if (!o.functionals.empty()) q.functionals = vecs_arg(o.functionals, "functionals");
  if (!o.x.empty()) q.anchor = vec_from_json(parse_json_arg(o.x, "x"), "x");
  return q;
}

Output cmd_modulus(const Options& o) {
  const Space s = make_space(o);
  ModulusQuery q = modulus_query(o);
  const std::vector<double> grid = o.eps.empty() ? default_epsilon_grid(q.k) : eps_arg(o);
  if (grid.size() == 1) {
    q.epsilon = grid.front();
    const ModulusEstimate m = modulus_estimate(s, q);
    if (o.format == "csv") return {sweep_csv({{q.epsilon, m}}, q.mode)};
    Json j;
    j["command"] = "modulus";
    j["space"] = to_json(s.descriptor());
    j["query"] = to_json(q);
    j["estimate"] = to_json(m);
    return json_out(j);
  }
  const auto sweep = modulus_sweep(s, q, grid);
  if (o.format == "csv") return {sweep_csv(sweep, q.mode)};
  Json j;
  j["command"] = "modulus";
  j["space"] = to_json(s.descriptor());
  j["query"] = to_json(q);
  j["query"].erase("epsilon");
  j["sweep"] = to_json(sweep);
  return json_out(j);
}

Output cmd_classify(const Options& o) {
  const Space s = make_space(o);
  const Budget b = budget_arg(o);
  if (o.format == "csv") csv_unavailable("classify");
  const RotundityVerdict v = classify_k_rotund(s, o.k, b, o.min_volume);
  Json j;
  j["command"] = "classify";
  j["space"] = to_json(s.descriptor());
  j["k"] = o.k;
  j["min_volume"] = o.min_volume;
  j["budget"] = to_json(b);
  j["verdict"] = to_json(v);
  return json_out(j);
}

Output cmd_project(const Options& o) {
  const Space s = make_space(o);
  const SetDescriptor a = set_arg(o);
  if (o.x.empty()) throw ValidationError("x: --x is required");
  const Vec x = vec_from_json(parse_json_arg(o.x, "x"), "x");
  if (o.format == "csv") csv_unavailable("project");
  Json j;
  j["command"] = "project";
  j["space"] = to_json(s.descriptor());
  j["set"] = to_json(a);
  j["x"] = to_json(x);
  validate_set(s, a);
  j["distance"] = to_json(distance_to_set(s, x, a));
  if (o.delta >= 0.0) {
    j["delta"] = o.delta;
    j["near_sample"] = to_json(near_projection_sample(s, x, a, o.delta, budget_arg(o)));
  }
  return json_out(j);
}

Output cmd_diagnose(const Options& o) {
  if (!o.preset.empty()) {
    const Json j = run_preset(o.preset, o.k, budget_arg(o));
    if (o.format == "csv") {
      DecayReport r;
      for (const auto& v : j["report"]["schedule"]) r.schedule.push_back(v.get<double>());
      for (const auto& v : j["report"]["sup_det"]) r.sup_det.push_back(v.get<double>());
      if (j["report"].contains("diam_k"))
        for (const auto& v : j["report"]["diam_k"]) r.diam.push_back(v.get<double>());
      return {r.to_csv()};
    }
    return json_out(j);
  }
  const Space s = make_space(o);
  const SetDescriptor a = set_arg(o);
  const auto fs = vecs_arg(o.functionals, "functionals");
  const Budget b = budget_arg(o);
  const Tolerances tol = tol_arg(o);
  Json j;
  j["command"] = "diagnose";
  j["space"] = to_json(s.descriptor());
  j["set"] = to_json(a);
  j["k"] = o.k;
  j["functionals"] = to_json(fs);
  DecayReport r;
  if (!o.b_points.empty()) {
    const auto bs = vecs_arg(o.b_points, "b-points");
    j["b_points"] = to_json(bs);
    r = kwusch_diagnostic(s, a, bs, o.k, fs, default_delta_schedule(), b, tol);
  } else {
    if (o.x.empty()) throw ValidationError("x: --x or --b-points is required");
    const Vec x = vec_from_json(parse_json_arg(o.x, "x"), "x");
    j["x"] = to_json(x);
    r = ksch_diagnostic(s, a, x, o.k, fs, default_delta_schedule(), b, tol);
  }
  if (o.format == "csv") return {r.to_csv()};
  j["report"] = to_json(r);
  return json_out(j);
}

Output cmd_product_witness(const Options& o) {
  if (o.factors.empty()) throw ValidationError("factors: --factors is required");
  const Json fj = parse_json_arg(o.factors, "factors");
  if (!fj.is_array()) throw ValidationError("factors: expected an array of {space, x, y, f}");
  std::vector<FactorWitness> ws;
  for (std::size_t i = 0; i < fj.size(); ++i) {
    const std::string path = "factors[" + std::to_string(i) + "]";
    const Json& e = fj[i];
    if (!e.is_object()) throw ValidationError(path + ": expected an object");
    FactorWitness w;
    w.space = descriptor_from_json(detail::require(e, "space", path));
    w.x = vec_from_json(detail::require(e, "x", path), path + ".x");
    w.y = vec_from_json(detail::require(e, "y", path), path + ".y");
    w.f = vec_from_json(detail::require(e, "f", path), path + ".f");
    ws.push_back(std::move(w));
  }
  const ProductWitness w = product_witness_build(ws, o.p, tol_arg(o));
  if (o.format == "csv") csv_unavailable("product-witness");
  Json j;
  j["command"] = "product-witness";
  j["p"] = number(o.p);
  j["witness"] = to_json(w);
  return json_out(j);
}

Output cmd_quotient_sweep(const Options& o) {
  const NormDescriptor base = space_arg(o);
  const auto fs = vecs_arg(o.functionals, "functionals");
  if (o.family.empty()) throw ValidationError("family: --family is required");
  const Json fam = parse_json_arg(o.family, "family");
  if (!fam.is_array()) throw ValidationError("family: expected an array of subspace bases");
  std::vector<std::vector<Vec>> family;
  for (std::size_t i = 0; i < fam.size(); ++i) family.push_back(vecs_from_json(fam[i], "family[" + std::to_string(i) + "]"));
  if (o.eps.empty()) throw ValidationError("eps: --eps is required");
  const auto eps = eps_arg(o);
  if (eps.size() != 1) throw ValidationError("eps: quotient-sweep takes a single value");
  const Mode mode = parse_mode(o.mode.empty() ? "kwur" : o.mode);
  const QuotientSweep q = quotient_modulus_sweep(base, fs, family, eps.front(), mode, budget_arg(o));
  if (o.format == "csv") {
    std::ostringstream c;
    c.precision(17);
    c << "# kgeom quotient sweep v1: index,value,converged\n";
    for (std::size_t i = 0; i < q.entries.size(); ++i)
      c << i << "," << q.entries[i].estimate.value << "," << (q.entries[i].estimate.converged ? 1 : 0) << "\n";
    return {c.str()};
  }
  Json j;
  j["command"] = "quotient-sweep";
  j["space"] = to_json(base);
  j["mode"] = mode_name(mode);
  j["epsilon"] = number(eps.front());
  j["functionals"] = to_json(fs);
  j["result"] = to_json(q);
  return json_out(j);
}

Output cmd_verify(const Options& o) {
  std::vector<std::string> suites = o.suites;
  if (o.all) suites = suite_names();
  if (suites.empty()) throw ValidationError("suite: give --suite <name> or --all");
  const std::uint64_t seed = o.seed.value_or(Budget{}.seed);
  const Json j = run_verify(suites, seed);
  const int status = j["passed"].get<bool>() ? kExitOk : kExitSuite;
  if (o.format == "csv") {
    std::ostringstream c;
    c << "# kgeom verify v1: suite,check,passed,detail\n";
    for (const auto& s : j["suites"])
      for (const auto& ch : s["checks"])
        c << s["name"].get<std::string>() << "," << ch["name"].get<std::string>() << ","
          << (ch["passed"].get<bool>() ? "pass" : "fail") << ",\"" << ch["detail"].get<std::string>() << "\"\n";
    return {c.str(), status};
  }
  return {dump(j), status};
}

Output cmd_zoo(const Options& o) {
  if (o.zoo_name.empty()) {
    if (o.format == "csv") {
      std::ostringstream c;
      c << "# kgeom zoo v1: name,dim,summary\n";
      for (const auto& z : zoo()) c << z.name << "," << Space::make(z.descriptor).dim() << ",\"" << z.summary << "\"\n";
      return {c.str()};
    }
    Json a = Json::array();
    for (const auto& z : zoo()) {
      Json e;
      e["name"] = z.name;
      e["summary"] = z.summary;
      e["descriptor"] = to_json(z.descriptor);
      a.push_back(e);
    }
    Json j;
    j["command"] = "zoo";
    j["spaces"] = a;
    return json_out(j);
  }
  const ZooEntry& z = zoo_entry(o.zoo_name);
  const Space s = Space::make(z.descriptor);
  if (o.format == "csv") csv_unavailable("zoo <name>");
  Json j;
  j["command"] = "zoo";
  j["name"] = z.name;
  j["summary"] = z.summary;
  j["descriptor"] = to_json(z.descriptor);
  j["dim"] = s.dim();
  j["polyhedral"] = s.polyhedral();
  j["euclidean"] = s.euclidean();
  if (s.polyhedral()) {
    j["extreme_points"] = to_json(s.extreme_points(false));
    j["dual_extreme_points"] = to_json(s.extreme_points(true));
  }
  return json_out(j);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kgeom: determinants, volumes and k-rotundity diagnostics in finite-dimensional normed spaces"};
  app.require_subcommand(1);
  Options o;

  auto add_space = [&](CLI::App* c) {
    c->add_option("--space", o.space, "descriptor: inline JSON, JSON file, shorthand (lp:2:3) or zoo:<name>");
    c->add_option("--tol", o.tol, "tolerance overrides as JSON, e.g. {\"decay_floor\":1e-4}");
  };
  auto add_budget = [&](CLI::App* c) {
    c->add_option("--budget", o.budget, "budget overrides as JSON, e.g. {\"starts\":16}");
    c->add_option("--seed", o.seed, "random seed");
  };
  auto add_output = [&](CLI::App* c) {
    c->add_option("--format", o.format, "output format")->check(CLI::IsMember({"json", "csv"}));
    c->add_option("--out", o.out, "write the artifact to this path instead of stdout");
  };
  auto add_k = [&](CLI::App* c) { c->add_option("--k", o.k, "order k"); };

  std::vector<std::pair<CLI::App*, Output (*)(const Options&)>> commands;

  auto* det = app.add_subcommand("det", "bordered determinant D_k of k+1 points and k functionals");
  det->add_option("--points", o.points, "JSON array of k+1 vectors")->required();
  det->add_option("--functionals", o.functionals, "JSON array of k vectors")->required();
  add_output(det);
  commands.push_back({det, cmd_det});

  auto* vol = app.add_subcommand("volume", "k-dimensional volume V of k+1 points");
  add_space(vol);
  add_budget(vol);
  add_output(vol);
  vol->add_option("--points", o.points, "JSON array of k+1 vectors")->required();
  vol->add_option("--strategy", o.strategy, "auto, exact or iterative");
  commands.push_back({vol, cmd_volume});

  auto* diam = app.add_subcommand("diam", "diam_k of a finite point set");
  add_space(diam);
  add_budget(diam);
  add_output(diam);
  add_k(diam);
  diam->add_option("--points", o.points, "JSON array of vectors")->required();
  commands.push_back({diam, cmd_diam});

  auto* mod = app.add_subcommand("modulus", "modulus of k-rotundity (kur, kwur, kwlur)");
  add_space(mod);
  add_budget(mod);
  add_output(mod);
  add_k(mod);
  mod->add_option("--mode", o.mode, "kur, kwur or kwlur");
  mod->add_option("--eps", o.eps, "epsilon or comma separated grid (default grid when omitted)");
  mod->add_option("--functionals", o.functionals, "JSON array of k functionals (kwur, kwlur)");
  mod->add_option("--x", o.x, "anchor unit vector (kwlur)");
  commands.push_back({mod, cmd_modulus});

  auto* cls = app.add_subcommand("classify", "search for a flat (k+1)-tuple on the unit sphere");
  add_space(cls);
  add_budget(cls);
  add_output(cls);
  add_k(cls);
  cls->add_option("--min-volume", o.min_volume, "smallest volume accepted as a witness");
  commands.push_back({cls, cmd_classify});

  auto* prj = app.add_subcommand("project", "distance to a set and samples of P_A(x, delta)");
  add_space(prj);
  add_budget(prj);
  add_output(prj);
  prj->add_option("--set", o.set, "set descriptor JSON, e.g. {\"kind\":\"UnitBall\"}")->required();
  prj->add_option("--x", o.x, "JSON vector")->required();
  prj->add_option("--delta", o.delta, "near-projection slack; omit for the distance only");
  commands.push_back({prj, cmd_project});

  auto* dia = app.add_subcommand("diagnose", "Chebyshev-type decay diagnostics and named presets");
  add_space(dia);
  add_budget(dia);
  add_output(dia);
  add_k(dia);
  std::string preset_help = "named configuration:";
  for (const auto& p : presets()) preset_help += " " + p.name;
  dia->add_option("--preset", o.preset, preset_help);
  dia->add_option("--set", o.set, "set descriptor JSON");
  dia->add_option("--x", o.x, "point x (pointwise diagnostic)");
  dia->add_option("--b-points", o.b_points, "JSON array of points of B (uniform diagnostic)");
  dia->add_option("--functionals", o.functionals, "JSON array of k functionals");
  commands.push_back({dia, cmd_diagnose});

  auto* pw = app.add_subcommand("product-witness", "staircase witness in an l_p product of factor spaces");
  pw->add_option("--factors", o.factors, "JSON array of {space, x, y, f}")->required();
  pw->add_option("--p", o.p, "product exponent (>= 1)");
  pw->add_option("--tol", o.tol, "tolerance overrides as JSON");
  add_output(pw);
  commands.push_back({pw, cmd_product_witness});

  auto* qs = app.add_subcommand("quotient-sweep", "moduli of quotients by subspaces inside the kernels");
  add_space(qs);
  add_budget(qs);
  add_output(qs);
  qs->add_option("--functionals", o.functionals, "JSON array of k functionals")->required();
  qs->add_option("--family", o.family, "JSON array of subspace bases")->required();
  qs->add_option("--eps", o.eps, "epsilon")->required();
  qs->add_option("--mode", o.mode, "kwur or kur");
  commands.push_back({qs, cmd_quotient_sweep});

  auto* ver = app.add_subcommand("verify", "run the invariant suites");
  ver->add_option("--suite", o.suites, "suite name (repeatable)")->check(CLI::IsMember(suite_names()));
  ver->add_flag("--all", o.all, "run every suite");
  ver->add_option("--seed", o.seed, "random seed");
  add_output(ver);
  commands.push_back({ver, cmd_verify});

  auto* zoo_cmd = app.add_subcommand("zoo", "list the example spaces or describe one");
  zoo_cmd->add_option("name", o.zoo_name, "space name");
  add_output(zoo_cmd);
  commands.push_back({zoo_cmd, cmd_zoo});

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }
  try {
    for (const auto& [cmd, fn] : commands) {
      if (!cmd->parsed()) continue;
      const Output out = fn(o);
      if (o.out.empty()) {
        std::cout << out.text;
      } else {
        std::ofstream f(o.out, std::ios::binary);
        if (!f) throw ValidationError("out: cannot write " + o.out);
        f << out.text;
      }
      return out.status;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
