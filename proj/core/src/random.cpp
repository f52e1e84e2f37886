#include "pme/random.hpp"

#include <cmath>

namespace pme::random {

double standard_normal(std::mt19937_64& engine) {
  for (;;) {
    const double u = 2.0 * unit_uniform(engine) - 1.0;
    const double v = 2.0 * unit_uniform(engine) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

}  // namespace pme::random
