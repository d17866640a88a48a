#ifndef KGEOM_ROTUNDITY_HPP
#define KGEOM_ROTUNDITY_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kgeom/config.hpp"
#include "kgeom/decay.hpp"
#include "kgeom/determinant.hpp"
#include "kgeom/spaces.hpp"
#include "kgeom/volume.hpp"

namespace kgeom {

enum class Mode { kUR, kWUR, kWLUR };

inline const char* mode_name(Mode m) {
  switch (m) {
    case Mode::kUR: return "kUR";
    case Mode::kWUR: return "kWUR";
    case Mode::kWLUR: return "kWLUR";
  }
  return "?";
}

inline Mode parse_mode(const std::string& s) {
  std::string t;
  for (char c : s) t += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (t == "kur") return Mode::kUR;
  if (t == "kwur") return Mode::kWUR;
  if (t == "kwlur") return Mode::kWLUR;
  throw ValidationError("mode: expected kur, kwur or kwlur, got \"" + s + "\"");
}

struct ModulusQuery {
  Mode mode = Mode::kUR;
  int k = 1;
  double epsilon = 0.1;
  std::vector<Vec> functionals;  // required for kWUR / kWLUR, optional seeds for kUR
  Vec anchor;                    // required for kWLUR
  Budget budget;
};

struct ModulusEstimate {
  double value = 1.0;
  std::vector<Vec> witness;             // free unit vectors (k+1, or k for kWLUR)
  std::vector<Vec> volume_functionals;  // kUR: functionals certifying V at the witness
  double constraint = 0.0;              // V (kUR) or |D_k| at the witness
  double feasibility_gap = 0.0;         // constraint - epsilon at the witness
  bool converged = false;               // a feasible witness was found
  bool flagged = false;                 // epsilon above the Hadamard bound k! 2^k
  long evaluations = 0;
};

/// Upper bound for |D_k| over unit points and unit functionals.
inline double hadamard_bound(int k) { return factorial(k) * std::pow(2.0, k); }

/// Default epsilon grid: {0.1, 0.25, 0.5, 1, 1.5} times half the Hadamard bound.
inline std::vector<double> default_epsilon_grid(int k) {
  const double s = hadamard_bound(k) / 2.0;
  return {0.1 * s, 0.25 * s, 0.5 * s, 1.0 * s, 1.5 * s};
}

namespace detail {

inline Vec random_gaussian(std::mt19937_64& rng, Eigen::Index n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

/// Evaluates objective and constraint of a modulus query on tuples of free
/// unit vectors.
class ModulusProblem {
 public:
  ModulusProblem(const Space& s, const ModulusQuery& q) : s_(s), q_(q) {
    inner_ = q.budget;
    inner_.volume_starts = 2;
    inner_.volume_rounds = 30;
  }

  int free_points() const { return q_.mode == Mode::kWLUR ? q_.k : q_.k + 1; }

  std::vector<Vec> points(const std::vector<Vec>& xs) const {
    if (q_.mode != Mode::kWLUR) return xs;
    std::vector<Vec> p{q_.anchor};
    p.insert(p.end(), xs.begin(), xs.end());
    return p;
  }

  double objective(const std::vector<Vec>& xs) const {
    Vec sum = Vec::Zero(s_.dim());
    for (const auto& x : points(xs)) sum += x;
    return 1.0 - s_.norm(sum) / (q_.k + 1);
  }

  double constraint(const std::vector<Vec>& xs) const {
    ++evaluations;
    const std::vector<Vec> p = points(xs);
    if (q_.mode == Mode::kUR) return vk_volume(s_, p, VolumeStrategy::Auto, inner_).value;
    return std::fabs(dk_determinant(p, q_.functionals));
  }

  Vec unit(const Vec& y) const {
    const double n = s_.norm(y);
    return n > 0.0 ? Vec(y / n) : y;
  }

  const Space& space() const { return s_; }
  const ModulusQuery& query() const { return q_; }
  const Budget& inner_budget() const { return inner_; }

  mutable long evaluations = 0;

 private:
  const Space& s_;
  const ModulusQuery& q_;
  Budget inner_;
};

struct Candidate {
  std::vector<Vec> xs;
  double phi = 2.0;
  double c = 0.0;
};

inline bool lex_less(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i)
    for (Eigen::Index j = 0; j < std::min(a[i].size(), b[i].size()); ++j)
      if (a[i](j) != b[i](j)) return a[i](j) < b[i](j);
  return a.size() < b.size();
}

/// Moves a feasible tuple towards its normalised mean until the constraint
/// sits on epsilon, keeping the objective from getting worse.
inline void tighten(const ModulusProblem& pr, Candidate& cand) {
  const double eps = pr.query().epsilon;
  if (cand.c <= eps) return;
  Vec mean = Vec::Zero(pr.space().dim());
  for (const auto& x : pr.points(cand.xs)) mean += x;
  if (mean.cwiseAbs().maxCoeff() == 0.0) return;
  mean = pr.unit(mean);
  auto at = [&](double s) {
    std::vector<Vec> ys;
    for (const auto& x : cand.xs) {
      const Vec y = (1.0 - s) * x + s * mean;
      if (y.cwiseAbs().maxCoeff() == 0.0) return std::vector<Vec>{};
      ys.push_back(pr.unit(y));
    }
    return ys;
  };
  double lo = 0.0, hi = 1.0;
  std::vector<Vec> best = cand.xs;
  double best_c = cand.c;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const std::vector<Vec> ys = at(mid);
    if (ys.empty()) return;
    const double c = pr.constraint(ys);
    if (c >= eps) {
      lo = mid;
      best = ys;
      best_c = c;
      if (c - eps <= 1e-13 * std::max(1.0, eps)) break;
    } else {
      hi = mid;
    }
  }
  const double phi = pr.objective(best);
  if (phi <= cand.phi + 1e-12) {
    cand.xs = best;
    cand.c = best_c;
    cand.phi = phi;
  }
}

/// Penalty (1+1) evolution strategy from one starting tuple, followed by a
/// hard-constrained polish and boundary tightening.
inline Candidate local_search(const ModulusProblem& pr, std::vector<Vec> xs, std::mt19937_64& rng) {
  const Budget& b = pr.query().budget;
  const double eps = pr.query().epsilon;
  const double target = eps * (1.0 + 1e-3);
  const int rounds = std::max(1, b.penalty_rounds);
  const int steps = std::max(1, b.local_steps / (rounds + 1));
  const int m = static_cast<int>(xs.size());
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double sigma = 0.3;
  double phi = pr.objective(xs);
  double c = pr.constraint(xs);
  auto propose = [&](const std::vector<Vec>& cur) {
    std::vector<Vec> ys = cur;
    if (u01(rng) < 0.5) {
      const int i = static_cast<int>(u01(rng) * m) % m;
      ys[static_cast<std::size_t>(i)] = pr.unit(cur[static_cast<std::size_t>(i)] + sigma * random_gaussian(rng, cur[0].size()));
    } else {
      for (int i = 0; i < m; ++i)
        ys[static_cast<std::size_t>(i)] = pr.unit(cur[static_cast<std::size_t>(i)] + sigma * random_gaussian(rng, cur[0].size()));
    }
    for (const auto& y : ys)
      if (!y.allFinite() || y.cwiseAbs().maxCoeff() == 0.0) return cur;
    return ys;
  };
  double mu = 10.0;
  for (int r = 0; r < rounds; ++r, mu *= b.penalty_growth) {
    auto penalty = [&](double ph, double cc) {
      const double v = std::max(0.0, 1.0 - cc / target);
      return ph + mu * v * v;
    };
    double p = penalty(phi, c);
    for (int s = 0; s < steps; ++s) {
      const std::vector<Vec> ys = propose(xs);
      const double ph = pr.objective(ys);
      const double cc = pr.constraint(ys);
      const double pp = penalty(ph, cc);
      if (pp <= p) {
        xs = ys;
        phi = ph;
        c = cc;
        p = pp;
        sigma = std::min(1.0, sigma * 1.5);
      } else {
        sigma = std::max(1e-9, sigma * 0.9);
      }
    }
  }
  Candidate out{xs, phi, c};
  if (c < eps) return out;
  sigma = std::max(sigma, 1e-3);
  for (int s = 0; s < steps; ++s) {
    const std::vector<Vec> ys = propose(out.xs);
    const double cc = pr.constraint(ys);
    if (cc < eps) {
      sigma = std::max(1e-9, sigma * 0.9);
      continue;
    }
    const double ph = pr.objective(ys);
    if (ph <= out.phi) {
      out = {ys, ph, cc};
      sigma = std::min(1.0, sigma * 1.5);
    } else {
      sigma = std::max(1e-9, sigma * 0.9);
    }
  }
  tighten(pr, out);
  return out;
}

inline void validate_query(const Space& s, const ModulusQuery& q) {
  const Tolerances& tol = s.tolerances();
  if (q.k < 1 || q.k > kMaxOrder) throw ValidationError("modulus: k must lie in 1.." + std::to_string(kMaxOrder));
  if (!(q.epsilon > 0.0) || !std::isfinite(q.epsilon)) throw ValidationError("modulus: epsilon must be positive");
  const bool need_f = q.mode != Mode::kUR;
  if (need_f && static_cast<int>(q.functionals.size()) != q.k)
    throw ValidationError("modulus: " + std::string(mode_name(q.mode)) + " needs exactly k functionals");
  if (!q.functionals.empty()) {
    if (static_cast<int>(q.functionals.size()) != q.k) throw ValidationError("modulus: expected k functionals");
    for (const auto& f : q.functionals) {
      if (f.size() != s.dim()) throw DimensionMismatch("modulus: functional length differs from space dimension");
      if (std::fabs(s.dual_norm(f) - 1.0) > tol.unit_dual)
        throw ValidationError("modulus: functionals must lie on the unit dual sphere");
    }
  }
  if (q.mode == Mode::kWLUR) {
    if (q.anchor.size() != s.dim()) throw ValidationError("modulus: kWLUR needs an anchor of the space dimension");
    if (std::fabs(s.norm(q.anchor) - 1.0) > 1e-9) throw ValidationError("modulus: anchor must be a unit vector");
  }
}

}  // namespace detail

/// Upper estimate of the modulus inf{1 - ||sum x_i||/(k+1)} over feasible
/// unit tuples, with the {1} guard: returns 1 when nothing feasible is found.
/// `seeds` are extra starting tuples of free points (for example witnesses
/// of a larger epsilon).
inline ModulusEstimate modulus_estimate(const Space& s, const ModulusQuery& q,
                                        const std::vector<std::vector<Vec>>& seeds = {}) {
  detail::validate_query(s, q);
  ModulusEstimate out;
  if (q.epsilon > hadamard_bound(q.k)) {
    out.flagged = true;
    return out;
  }
  std::vector<std::vector<Vec>> starts = seeds;
  if (q.mode == Mode::kUR && static_cast<int>(q.functionals.size()) == q.k) {
    // any tuple with |D_k| >= eps for the given functionals has V >= eps
    ModulusQuery w = q;
    w.mode = Mode::kWUR;
    const ModulusEstimate directional = modulus_estimate(s, w, seeds);
    if (directional.converged) starts.insert(starts.begin(), directional.witness);
  }
  const detail::ModulusProblem pr(s, q);
  const int m = pr.free_points();
  const Eigen::Index d = s.dim();
  detail::Candidate best;
  bool have = false;
  auto consider = [&](detail::Candidate c) {
    if (c.c < q.epsilon) return;
    if (!have || c.phi < best.phi || (c.phi == best.phi && detail::lex_less(c.xs, best.xs))) {
      best = std::move(c);
      have = true;
    }
  };
  // every start owns its generator, so starts are independent of each other
  auto start_rng = [&](int st) { return std::mt19937_64(q.budget.seed * 0x9E3779B97F4A7C15ULL + static_cast<unsigned>(st)); };
  int label = 0;
  for (const auto& seed : starts) {
    std::mt19937_64 rng = start_rng(-1 - label++);
    if (static_cast<int>(seed.size()) != m) continue;
    std::vector<Vec> xs;
    for (const auto& x : seed) xs.push_back(pr.unit(x));
    detail::Candidate c{xs, pr.objective(xs), pr.constraint(xs)};
    detail::tighten(pr, c);
    consider(c);
    consider(detail::local_search(pr, xs, rng));
  }
  const double spreads[] = {0.3, 0.7, 1.5, 4.0};
  for (int st = 0; st < q.budget.starts; ++st) {
    if (have && best.phi <= 0.0) break;  // nothing can beat a flat witness
    std::mt19937_64 rng = start_rng(st);
    std::vector<Vec> xs;
    const Vec centre = detail::random_gaussian(rng, d);
    const double spread = spreads[st % 4];
    for (int i = 0; i < m; ++i) xs.push_back(pr.unit(centre + spread * detail::random_gaussian(rng, d)));
    consider(detail::local_search(pr, xs, rng));
  }
  out.evaluations = pr.evaluations;
  if (!have) return out;
  out.converged = true;
  out.witness = best.xs;
  out.value = std::clamp(best.phi, 0.0, 1.0);
  const std::vector<Vec> pts = pr.points(best.xs);
  if (q.mode == Mode::kUR) {
    const VolumeResult v = vk_volume(s, pts, VolumeStrategy::Auto, q.budget);
    out.constraint = std::max(v.value, best.c);
    out.volume_functionals = v.certificate;
  } else {
    out.constraint = best.c;
  }
  out.feasibility_gap = out.constraint - q.epsilon;
  return out;
}

struct SweepEntry {
  double epsilon = 0.0;
  ModulusEstimate estimate;
};

/// Runs the query over an epsilon grid.  Grid points are processed from the
/// largest down and every witness seeds the next, smaller epsilon.
inline std::vector<SweepEntry> modulus_sweep(const Space& s, const ModulusQuery& q, std::vector<double> grid) {
  std::vector<std::size_t> order(grid.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return grid[a] > grid[b]; });
  std::vector<SweepEntry> out(grid.size());
  std::vector<std::vector<Vec>> seeds;
  for (std::size_t i : order) {
    ModulusQuery qi = q;
    qi.epsilon = grid[i];
    out[i] = {grid[i], modulus_estimate(s, qi, seeds)};
    if (out[i].estimate.converged) seeds.insert(seeds.begin(), out[i].estimate.witness);
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepEntry>& entries, Mode mode) {
  std::ostringstream out;
  out.precision(17);
  out << "# kgeom modulus sweep v1: epsilon,mode,value,converged\n";
  for (const auto& e : entries)
    out << e.epsilon << "," << mode_name(mode) << "," << e.estimate.value << "," << (e.estimate.converged ? 1 : 0)
        << "\n";
  return out.str();
}

struct RotundityVerdict {
  bool witness_found = false;
  std::vector<Vec> points;
  std::vector<Vec> functionals;  // volume certificate
  double volume = 0.0;
  double sum_norm = 0.0;
  std::string method;
  double best_volume = 0.0;  // telemetry: largest V seen on near-flat tuples
  long evaluations = 0;

  const char* classification() const { return witness_found ? "witness-found" : "no-witness-at-budget"; }
};

/// Looks for unit x_1..x_{k+1} with ||sum|| = k+1 and V >= min_volume, i.e. a
/// certificate that the space is not k-rotund.
inline RotundityVerdict classify_k_rotund(const Space& s, int k, const Budget& budget = Budget{},
                                          double min_volume = 0.1) {
  if (k < 1 || k > kMaxOrder) throw ValidationError("classify: k must lie in 1.." + std::to_string(kMaxOrder));
  if (s.dim() < k + 1)
    throw ValidationError("classify: space dimension " + std::to_string(s.dim()) + " is below k+1 = " +
                          std::to_string(k + 1));
  const Tolerances& tol = s.tolerances();
  RotundityVerdict out;
  auto accept = [&](const std::vector<Vec>& pts, const VolumeResult& v) {
    Vec sum = Vec::Zero(s.dim());
    for (const auto& x : pts) sum += x;
    const double sn = s.norm(sum);
    const bool flat = sn >= (k + 1) * (1.0 - tol.witness_sum);
    if (flat) out.best_volume = std::max(out.best_volume, v.value);
    if (flat && v.value >= min_volume && v.value > out.volume) {
      out.witness_found = true;
      out.points = pts;
      out.functionals = v.certificate;
      out.volume = v.value;
      out.sum_norm = sn;
    }
  };
  if (s.polyhedral()) {
    out.method = "face-enumeration";
    const PolyData& pd = s.poly_data();
    std::vector<Vec> facets;
    for (const auto& a : pd.facets) {
      bool dup = false;
      for (const auto& b : facets)
        if ((a + b).cwiseAbs().maxCoeff() <= 1e-12) dup = true;
      if (!dup) facets.push_back(a);
    }
    for (const auto& a : facets) {
      std::vector<Vec> face;
      for (const auto& v : pd.vertices)
        if (std::fabs(a.dot(v) - 1.0) <= 1e-9) face.push_back(v);
      const int n = static_cast<int>(face.size());
      if (n < k + 1 || binomial(n, k + 1) > 2e5) continue;
      for_each_combination(n, k + 1, [&](const std::vector<int>& idx) {
        std::vector<Vec> pts;
        for (int i : idx) pts.push_back(face[static_cast<std::size_t>(i)]);
        ++out.evaluations;
        accept(pts, vk_volume(s, pts, VolumeStrategy::Auto, budget));
        return true;
      });
    }
    return out;
  }
  out.method = "penalty-search";
  const Eigen::Index d = s.dim();
  Budget inner = budget;
  inner.volume_starts = 2;
  inner.volume_rounds = 30;
  auto unit = [&](const Vec& y) { return Vec(y / s.norm(y)); };
  // structured candidates: +-e_i and +-(e_i +- e_j)
  std::vector<Vec> pool;
  for (Eigen::Index i = 0; i < d; ++i) {
    pool.push_back(unit(Vec::Unit(d, i)));
    pool.push_back(unit(-Vec::Unit(d, i)));
  }
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i + 1; j < d; ++j)
      for (double a : {1.0, -1.0})
        for (double b : {1.0, -1.0}) pool.push_back(unit(a * Vec::Unit(d, i) + b * Vec::Unit(d, j)));
  const int np = static_cast<int>(pool.size());
  if (binomial(np, k + 1) <= static_cast<double>(budget.tuples) * 5.0) {
    for_each_combination(np, k + 1, [&](const std::vector<int>& idx) {
      std::vector<Vec> pts;
      Vec sum = Vec::Zero(d);
      for (int i : idx) {
        pts.push_back(pool[static_cast<std::size_t>(i)]);
        sum += pool[static_cast<std::size_t>(i)];
      }
      if (s.norm(sum) < (k + 1) * (1.0 - tol.witness_sum)) return true;
      ++out.evaluations;
      accept(pts, vk_volume(s, pts, VolumeStrategy::Auto, budget));
      return true;
    });
  }
  if (out.witness_found) {
    out.method = "structured-candidates";
    return out;
  }
  std::mt19937_64 rng(budget.seed);
  const int rounds = std::max(1, budget.penalty_rounds);
  const int steps = std::max(1, budget.local_steps / rounds);
  for (int st = 0; st < budget.starts; ++st) {
    std::vector<Vec> xs;
    const Vec centre = detail::random_gaussian(rng, d);
    for (int i = 0; i <= k; ++i) xs.push_back(unit(centre + 0.5 * detail::random_gaussian(rng, d)));
    auto phi_of = [&](const std::vector<Vec>& ys) {
      Vec sum = Vec::Zero(d);
      for (const auto& y : ys) sum += y;
      return 1.0 - s.norm(sum) / (k + 1);
    };
    auto vol_of = [&](const std::vector<Vec>& ys) {
      ++out.evaluations;
      return vk_volume(s, ys, VolumeStrategy::Auto, inner).value;
    };
    double sigma = 0.3;
    double phi = phi_of(xs), vol = vol_of(xs);
    double mu = 10.0;
    for (int r = 0; r < rounds; ++r, mu *= budget.penalty_growth) {
      double p = -std::min(vol, 1.0) + mu * phi;
      for (int t = 0; t < steps; ++t) {
        std::vector<Vec> ys = xs;
        std::normal_distribution<double> g(0.0, sigma);
        for (auto& y : ys) {
          Vec step(d);
          for (Eigen::Index i = 0; i < d; ++i) step(i) = g(rng);
          y = unit(y + step);
        }
        const double ph = phi_of(ys), vv = vol_of(ys);
        const double pp = -std::min(vv, 1.0) + mu * ph;
        if (pp <= p) {
          xs = ys;
          phi = ph;
          vol = vv;
          p = pp;
          sigma = std::min(1.0, sigma * 1.5);
        } else {
          sigma = std::max(1e-9, sigma * 0.9);
        }
      }
    }
    const VolumeResult full = vk_volume(s, xs, VolumeStrategy::Auto, budget);
    accept(xs, full);
    if (out.witness_found) break;
  }
  return out;
}

/// Decay of D_k along supplied sequences x_n^(i) -> x in the midpoint sense
/// ||(k+1) x - sum_i x_n^(i)|| -> 0.  `functional_tuples` holds one or more
/// k-tuples; the maximum over them is tracked.
inline DecayReport wmlur_sequence_test(const Space& s, int k, const Vec& x,
                                       const std::vector<std::vector<Vec>>& sequences,
                                       const std::vector<std::vector<Vec>>& functional_tuples,
                                       const Tolerances& tol = default_tolerances()) {
  if (static_cast<int>(sequences.size()) != k + 1) throw ValidationError("wmlur: need k+1 sequences");
  if (functional_tuples.empty()) throw ValidationError("wmlur: at least one functional tuple required");
  for (const auto& ft : functional_tuples)
    if (static_cast<int>(ft.size()) != k) throw ValidationError("wmlur: functional tuples must have k entries");
  const std::size_t n = sequences.front().size();
  for (const auto& seq : sequences)
    if (seq.size() != n || n == 0) throw ValidationError("wmlur: sequences must share a positive length");
  if (std::fabs(s.norm(x) - 1.0) > tol.unit_vector) throw ValidationError("wmlur: x must be a unit vector");
  DecayReport rep;
  double floor = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    std::vector<Vec> pts;
    Vec sum = Vec::Zero(s.dim());
    for (const auto& seq : sequences) {
      if (std::fabs(s.norm(seq[t]) - 1.0) > tol.unit_vector) throw ValidationError("wmlur: sequence terms must be unit vectors");
      pts.push_back(seq[t]);
      sum += seq[t];
    }
    rep.hypothesis_residuals.push_back(s.norm((k + 1) * x - sum));
    double best = 0.0;
    const std::vector<Vec>* arg = &functional_tuples.front();
    for (const auto& ft : functional_tuples) {
      const double v = std::fabs(dk_determinant(pts, ft));
      if (v > best) {
        best = v;
        arg = &ft;
      }
    }
    rep.schedule.push_back(1.0 / static_cast<double>(t + 1));
    rep.sup_det.push_back(best);
    if (best < floor) {
      floor = best;
      rep.floor_points = pts;
      rep.floor_functionals = *arg;
    }
  }
  rep.floor = floor;
  const Verdict hyp = classify_decay(rep.schedule, rep.hypothesis_residuals, tol.decay_floor);
  rep.vacuous = hyp != Verdict::DecaysBelowTol;
  if (rep.vacuous) rep.notes.push_back("midpoint hypothesis ||(k+1)x - sum x_n|| -> 0 not observed");
  rep.verdict = classify_decay(rep.schedule, rep.sup_det, tol.decay_floor, &rep.slope);
  return rep;
}

struct QuotientSweepEntry {
  std::vector<Vec> subspace;
  NormDescriptor quotient;
  std::vector<Vec> functionals;  // descended functionals in quotient coordinates
  ModulusEstimate estimate;
};

struct QuotientSweep {
  std::vector<QuotientSweepEntry> entries;
  double infimum = 1.0;
};

/// Modulus of every quotient X/M over a finite family of subspaces M inside
/// the kernels of the functionals, with the family infimum.
inline QuotientSweep quotient_modulus_sweep(const NormDescriptor& base, const std::vector<Vec>& functionals,
                                            const std::vector<std::vector<Vec>>& family, double epsilon,
                                            Mode mode = Mode::kWUR, const Budget& budget = Budget{}) {
  if (mode == Mode::kWLUR) throw UnsupportedStrategy("quotient sweep: kWLUR needs a quotient anchor; use kWUR or kUR");
  const Space bs = Space::make(base);
  const int k = static_cast<int>(functionals.size());
  QuotientSweep out;
  for (const auto& m : family) {
    for (const auto& b : m) {
      if (b.size() != bs.dim()) throw DimensionMismatch("quotient sweep: subspace vector length differs from base");
      for (const auto& f : functionals)
        if (std::fabs(f.dot(b)) > 1e-10 * std::max(1.0, f.norm() * b.norm()))
          throw ValidationError("quotient sweep: subspace is not inside the kernels of the functionals");
    }
    QuotientSweepEntry e;
    e.subspace = m;
    ModulusQuery q;
    q.mode = mode;
    q.k = k;
    q.epsilon = epsilon;
    q.budget = budget;
    if (m.empty()) {
      e.quotient = base;
      q.functionals = functionals;
      e.functionals = functionals;
      e.estimate = modulus_estimate(bs, q);
    } else {
      e.quotient = NormDescriptor::quotient(base, m);
      const Space qs = Space::make(e.quotient);
      const Mat comp = orthogonal_complement(columns(m, bs.dim()));
      for (const auto& f : functionals) e.functionals.push_back(comp.transpose() * f);
      q.functionals = e.functionals;
      e.estimate = modulus_estimate(qs, q);
    }
    out.infimum = std::min(out.infimum, e.estimate.value);
    out.entries.push_back(std::move(e));
  }
  return out;
}

struct FactorWitness {
  NormDescriptor space;
  Vec x;
  Vec y;
  Vec f;
};

struct ProductWitness {
  NormDescriptor product;
  std::vector<Vec> points;       // z^(1) .. z^(k+1)
  std::vector<Vec> functionals;  // h_1 .. h_k
  std::vector<double> point_norms;
  std::vector<double> factor_values;  // f_i(x^(i) - y^(i))
  double determinant = 0.0;           // |D_k[(z^(t)); (h_j)]|
  double formula = 0.0;               // k^(-k/p) prod |f_i(x^(i) - y^(i))|
  double relative_error = 0.0;
};

/// Staircase construction in the l_p product of the factor spaces:
/// z^(t) = k^(-1/p) (y^(1), .., y^(t-1), x^(t), .., x^(k)), h_j = f_j in slot j.
inline ProductWitness product_witness_build(const std::vector<FactorWitness>& factors, double p,
                                            const Tolerances& tol = default_tolerances()) {
  const int k = static_cast<int>(factors.size());
  if (k < 1 || k > kMaxOrder) throw ValidationError("product witness: number of factors must lie in 1.." + std::to_string(kMaxOrder));
  if (!(p >= 1.0)) throw ValidationError("product witness: p must be >= 1");
  std::vector<NormDescriptor> descs;
  std::vector<Space> spaces;
  std::vector<int> offsets;
  int dim = 0;
  for (const auto& fw : factors) {
    Space s = Space::make(fw.space, tol);
    if (fw.x.size() != s.dim() || fw.y.size() != s.dim() || fw.f.size() != s.dim())
      throw DimensionMismatch("product witness: factor vectors must match the factor dimension");
    if (std::fabs(s.norm(fw.x) - 1.0) > tol.unit_vector || std::fabs(s.norm(fw.y) - 1.0) > tol.unit_vector)
      throw ValidationError("product witness: x and y must be unit vectors");
    if (std::fabs(s.dual_norm(fw.f) - 1.0) > tol.unit_dual)
      throw ValidationError("product witness: functionals must be unit");
    offsets.push_back(dim);
    dim += s.dim();
    descs.push_back(fw.space);
    spaces.push_back(std::move(s));
  }
  ProductWitness out;
  out.product = NormDescriptor::product(p, descs);
  const Space prod = Space::make(out.product, tol);
  const double c = std::isinf(p) ? 1.0 : std::pow(static_cast<double>(k), -1.0 / p);
  for (int t = 0; t <= k; ++t) {
    Vec z(dim);
    for (int i = 0; i < k; ++i) {
      const FactorWitness& fw = factors[static_cast<std::size_t>(i)];
      z.segment(offsets[static_cast<std::size_t>(i)], fw.x.size()) = (i < t ? fw.y : fw.x);
    }
    out.points.push_back(c * z);
    out.point_norms.push_back(prod.norm(c * z));
  }
  double prodv = 1.0;
  for (int j = 0; j < k; ++j) {
    const FactorWitness& fw = factors[static_cast<std::size_t>(j)];
    Vec h = Vec::Zero(dim);
    h.segment(offsets[static_cast<std::size_t>(j)], fw.f.size()) = fw.f;
    out.functionals.push_back(h);
    const double v = fw.f.dot(fw.x - fw.y);
    out.factor_values.push_back(v);
    prodv *= std::fabs(v);
  }
  out.determinant = std::fabs(dk_determinant(out.points, out.functionals));
  out.formula = std::pow(c, k) * prodv;
  const double scale = std::max(out.determinant, out.formula);
  out.relative_error = scale > 0.0 ? std::fabs(out.determinant - out.formula) / scale : 0.0;
  return out;
}

struct SchurReport {
  std::vector<double> sample_max;  // max |D_k| over the functional sample, per tuple
  std::vector<double> volume;      // V of the tuple
  double envelope = 0.0;           // max V / sample_max where sample_max > 0
  bool exact_sample = false;       // sample is every dual-vertex tuple (polyhedral)
};

/// For each tuple of a family, compares the largest |D_k| over a functional
/// sample with the volume V.  Without an explicit sample, polyhedral spaces
/// use every tuple of dual vertices and other spaces random unit functionals.
inline SchurReport schur_limit_harness(const Space& s, int k, const std::vector<std::vector<Vec>>& family,
                                       std::vector<std::vector<Vec>> sample = {}, const Budget& budget = Budget{}) {
  SchurReport out;
  if (sample.empty()) {
    if (s.polyhedral()) {
      const auto ext = s.extreme_points(true);
      out.exact_sample = true;
      for_each_combination(static_cast<int>(ext.size()), k, [&](const std::vector<int>& idx) {
        std::vector<Vec> t;
        for (int i : idx) t.push_back(ext[static_cast<std::size_t>(i)]);
        sample.push_back(t);
        return static_cast<int>(sample.size()) < 200000;
      });
    } else {
      std::mt19937_64 rng(budget.seed);
      for (int i = 0; i < budget.samples; ++i) {
        std::vector<Vec> t;
        for (int j = 0; j < k; ++j) {
          const Vec g = detail::random_gaussian(rng, s.dim());
          t.push_back(g / s.dual_norm(g));
        }
        sample.push_back(t);
      }
    }
  }
  for (const auto& tuple : family) {
    if (static_cast<int>(tuple.size()) != k + 1) throw ValidationError("schur harness: tuples must have k+1 points");
    double m = 0.0;
    for (const auto& ft : sample) m = std::max(m, std::fabs(dk_determinant(tuple, ft)));
    const double v = vk_volume(s, tuple, VolumeStrategy::Auto, budget).value;
    out.sample_max.push_back(m);
    out.volume.push_back(v);
    if (m > 0.0) out.envelope = std::max(out.envelope, v / m);
  }
  return out;
}

}  // namespace kgeom

#endif  // KGEOM_ROTUNDITY_HPP
