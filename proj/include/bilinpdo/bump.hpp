#ifndef BILINPDO_BUMP_HPP
#define BILINPDO_BUMP_HPP

#include <cmath>
#include <stdexcept>

namespace bilinpdo {

/// exp(-s/t) mollifier half, zero for t <= 0.
inline double moll_half(double t, double s) {
  return t <= 0.0 ? 0.0 : std::exp(-s / t);
}

/// C^inf monotone ramp: 0 for t <= 0, 1 for t >= 1. The sharpness s
/// controls how flat the ramp sits against its endpoints.
inline double smooth_ramp(double t, double s = 1.0) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  double a = moll_half(t, s);
  double b = moll_half(1.0 - t, s);
  return a / (a + b);
}

/// Radial plateau profile: 1 on |z| <= plateau, 0 on |z| >= support,
/// mollifier ramp between. Evaluated on the radius.
struct RadialBump {
  double plateau = 1.0;
  double support = 2.0;
  double sharpness = 1.0;

  RadialBump() = default;
  RadialBump(double p, double s, double sh = 1.0)
      : plateau(p), support(s), sharpness(sh) {
    if (!(0.0 <= plateau && plateau < support))
      throw std::invalid_argument("RadialBump: need 0 <= plateau < support");
  }

  double operator()(double r) const {
    r = std::abs(r);
    if (r <= plateau) return 1.0;
    if (r >= support) return 0.0;
    return smooth_ramp((support - r) / (support - plateau), sharpness);
  }
};

/// Annular plateau profile: 1 on [pl_lo, pl_hi], 0 outside [su_lo, su_hi].
struct AnnularBump {
  double su_lo, pl_lo, pl_hi, su_hi;
  double sharpness = 1.0;

  AnnularBump(double a, double b, double c, double d, double sh = 1.0)
      : su_lo(a), pl_lo(b), pl_hi(c), su_hi(d), sharpness(sh) {
    if (!(a < b && b <= c && c < d))
      throw std::invalid_argument("AnnularBump: need su_lo<pl_lo<=pl_hi<su_hi");
  }

  double operator()(double r) const {
    r = std::abs(r);
    if (r <= su_lo || r >= su_hi) return 0.0;
    if (r < pl_lo) return smooth_ramp((r - su_lo) / (pl_lo - su_lo), sharpness);
    if (r > pl_hi) return smooth_ramp((su_hi - r) / (su_hi - pl_hi), sharpness);
    return 1.0;
  }
};

/// One-dimensional mollifier bump exp(-s/(1-(t/c)^2)) scaled to peak 1 at
/// the origin, supported on (-c, c).
struct MollifierBump {
  double half_width = 1.0;
  double sharpness = 1.0;

  double operator()(double t) const {
    double u = t / half_width;
    double q = 1.0 - u * u;
    if (q <= 0.0) return 0.0;
    return std::exp(sharpness - sharpness / q);
  }
};

}  // namespace bilinpdo

#endif
