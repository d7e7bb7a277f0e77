#ifndef BILINPDO_RNG_HPP
#define BILINPDO_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "bilinpdo/field.hpp"
#include "bilinpdo/grid.hpp"

namespace bilinpdo {

/// Seeded generator with hand-rolled transforms, so streams are identical
/// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {  // in [0, 1)
    return (eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double gauss() {  // Box-Muller, one value per call pair
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(kTwoPi * u2);
    have_spare_ = true;
    return r * std::cos(kTwoPi * u2);
  }

  cplx cgauss() { return {gauss(), gauss()}; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

/// Random field with spectrum supported in {|xi| <= radius}, returned in
/// physical space.
inline Field random_band_limited(const GridSpec& g, double radius, Rng& rng) {
  Field F(g, Space::frequency);
  for (std::size_t i = 0; i < F.size(); ++i) {
    Point xi = g.xi_of(i);
    if (norm2(xi, g.dim) <= radius) F.v[i] = rng.cgauss();
  }
  return idft(F);
}

}  // namespace bilinpdo

#endif
