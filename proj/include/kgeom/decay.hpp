#ifndef KGEOM_DECAY_HPP
#define KGEOM_DECAY_HPP

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "kgeom/config.hpp"

namespace kgeom {

enum class Verdict { DecaysBelowTol, StallsAboveFloor, Inconclusive };

inline const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::DecaysBelowTol: return "decays-below-tol";
    case Verdict::StallsAboveFloor: return "stalls-above-floor";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

/// Per-step suprema of |D_k| along a schedule that tends to 0 (delta, or 1/n
/// for sequences), with the verdict and the tuple attaining the floor.
struct DecayReport {
  std::vector<double> schedule;
  std::vector<double> sup_det;
  std::vector<double> diam;  // empty when not computed
  Verdict verdict = Verdict::Inconclusive;
  double slope = 0.0;        // log-log slope of sup_det against the schedule, last half
  double floor = 0.0;        // min over the schedule of sup_det
  std::vector<Vec> floor_points;
  std::vector<Vec> floor_functionals;
  bool vacuous = false;      // hypothesis of the test not met
  std::vector<double> hypothesis_residuals;
  std::vector<std::string> notes;

  std::string to_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "# kgeom decay table v1: delta,supDet,diamK\n";
    for (std::size_t i = 0; i < schedule.size(); ++i) {
      out << schedule[i] << "," << sup_det[i] << ",";
      if (i < diam.size()) out << diam[i];
      out << "\n";
    }
    return out.str();
  }
};

/// Least-squares slope of log(value) against log(schedule) over the last
/// half of the points with positive value.
inline double decay_slope(const std::vector<double>& schedule, const std::vector<double>& values) {
  const std::size_t n = values.size();
  std::vector<double> lx, ly;
  for (std::size_t i = n / 2; i < n; ++i)
    if (values[i] > 0.0 && schedule[i] > 0.0) {
      lx.push_back(std::log(schedule[i]));
      ly.push_back(std::log(values[i]));
    }
  if (lx.size() < 2) return 0.0;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= static_cast<double>(lx.size());
  my /= static_cast<double>(ly.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

/// Decays when the last value is at most `tol`, or when the last half of the
/// schedule shows values shrinking at least like schedule^0.25.  Stalls when
/// the last value is above `tol` and the slope is at most 0.05.
inline Verdict classify_decay(const std::vector<double>& schedule, const std::vector<double>& values, double tol,
                              double* slope_out = nullptr) {
  const double slope = decay_slope(schedule, values);
  if (slope_out) *slope_out = slope;
  if (values.empty()) return Verdict::Inconclusive;
  if (values.back() <= tol) return Verdict::DecaysBelowTol;
  if (slope >= 0.25) return Verdict::DecaysBelowTol;
  if (slope <= 0.05) return Verdict::StallsAboveFloor;
  return Verdict::Inconclusive;
}

}  // namespace kgeom

#endif  // KGEOM_DECAY_HPP
