#ifndef KGEOM_ZOO_HPP
#define KGEOM_ZOO_HPP

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "kgeom/spaces.hpp"

namespace kgeom {

struct ZooEntry {
  std::string name;
  std::string summary;
  NormDescriptor descriptor;
};

inline std::vector<Vec> hexagon_vertices() {
  std::vector<Vec> v;
  for (int i = 0; i < 6; ++i) {
    const double a = M_PI / 3.0 * i;
    Vec p(2);
    p << std::cos(a), std::sin(a);
    v.push_back(p);
  }
  return v;
}

/// Named example spaces used by the test suites and the `zoo` command.
inline const std::vector<ZooEntry>& zoo() {
  static const std::vector<ZooEntry> entries = [] {
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<ZooEntry> z;
    z.push_back({"l2-3", "Euclidean R^3", NormDescriptor::lp(2.0, 3)});
    z.push_back({"l1-3", "l_1 on R^3", NormDescriptor::lp(1.0, 3)});
    z.push_back({"linf-3", "l_inf on R^3 (cube ball)", NormDescriptor::lp(inf, 3)});
    z.push_back({"l3-3", "l_3 on R^3", NormDescriptor::lp(3.0, 3)});
    z.push_back({"l1.5-4", "l_1.5 on R^4", NormDescriptor::lp(1.5, 4)});
    z.push_back({"hexagon", "regular hexagon ball in R^2", NormDescriptor::polyhedral(hexagon_vertices())});
    z.push_back({"sullivan-4-12", "sum norm (|x1|+|x2|)^2 + x3^2 + x4^2 on R^4", NormDescriptor::sullivan(4, {1, 2})});
    z.push_back({"smith-turett-4", "||x||_1^2 + sum (x_n 2^(-n/2))^2 on R^4", NormDescriptor::smith_turett(4)});
    z.push_back({"product-inf-l2", "(l_2^2 + R) with the max norm",
                 NormDescriptor::product(inf, {NormDescriptor::lp(2.0, 2), NormDescriptor::lp(2.0, 1)})});
    z.push_back({"product-2-cubes", "l_2 sum of two l_inf^2 squares",
                 NormDescriptor::product(2.0, {NormDescriptor::lp(inf, 2), NormDescriptor::lp(inf, 2)})});
    z.push_back({"product-1-mixed", "l_1 sum of l_inf^2 and the hexagon",
                 NormDescriptor::product(1.0, {NormDescriptor::lp(inf, 2), NormDescriptor::polyhedral(hexagon_vertices())})});
    {
      Vec d(3);
      d << 1.0, 1.0, 1.0;
      z.push_back({"quotient-linf-diag", "l_inf^3 / span(1,1,1)", NormDescriptor::quotient(NormDescriptor::lp(inf, 3), {d})});
    }
    {
      Vec d(4);
      d << 0.0, 0.0, 1.0, 1.0;
      z.push_back({"quotient-sullivan", "sum norm on R^4 / span(e3+e4)",
                   NormDescriptor::quotient(NormDescriptor::sullivan(4, {1, 2}), {d})});
    }
    return z;
  }();
  return entries;
}

inline const ZooEntry& zoo_entry(const std::string& name) {
  for (const auto& e : zoo())
    if (e.name == name) return e;
  throw ValidationError("zoo: unknown space \"" + name + "\"");
}

}  // namespace kgeom

#endif  // KGEOM_ZOO_HPP
