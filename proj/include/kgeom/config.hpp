#ifndef KGEOM_CONFIG_HPP
#define KGEOM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace kgeom {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input (bad descriptor field, p < 1, asymmetric vertex set ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

/// A strategy was requested that the given space cannot honor.
class UnsupportedStrategy : public Error {
 public:
  using Error::Error;
};

/// Pivot block or basis is numerically singular.
class DegenerateInput : public Error {
 public:
  using Error::Error;
};

/// All numeric thresholds used across the library.  One instance is passed
/// (or defaulted) wherever a comparison against a tolerance happens.
struct Tolerances {
  double norm_axiom = 1e-9;        // homogeneity / triangle checks
  double dual_cache = 1e-10;       // FunctionalRep cache consistency
  double unit_dual = 1e-9;         // membership in S_{X*}
  double support_dual = 1e-8;      // |dualNorm - 1| of a support functional
  double support_value = 1e-6;     // f(x) >= ||x|| - tol
  double dedupe = 1e-12;           // extreme point deduplication
  double ascoli = 1e-8;
  double pivot = 1e-12;            // Sylvester leading block
  double rank = 1e-10;             // relative singular value cut for ranks
  double unit_vector = 1e-7;       // witness vectors on S_X
  double witness_sum = 1e-6;       // relative slack on ||sum x_i|| = k+1
  double decay_floor = 1e-3;       // decay verdict floor
  double membership = 1e-9;        // set membership / P_A(x, delta) slack
  double face = 1e-12;             // relative tie tolerance for flat faces
  double conic_gap = 1e-11;        // interior point duality gap target
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

/// Determinant orders above this are rejected (matrix order <= 9).
inline constexpr int kMaxOrder = 8;

/// Search budgets for the optimisation-based routines.
struct Budget {
  int starts = 64;          // multi-starts for modulus / classification search
  int local_steps = 500;    // local steps per start
  int volume_starts = 16;   // alternating maximisation restarts
  int volume_rounds = 200;  // alternating maximisation rounds per start
  int penalty_rounds = 5;   // quadratic penalty schedule length
  double penalty_growth = 10.0;
  int samples = 400;        // near-projection samples per schedule step
  int tuples = 4000;        // random tuples examined per schedule step
  std::uint64_t seed = 7;
};

}  // namespace kgeom

#endif  // KGEOM_CONFIG_HPP
