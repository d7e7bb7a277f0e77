#ifndef BILINPDO_PARTITIONS_HPP
#define BILINPDO_PARTITIONS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilinpdo/bump.hpp"
#include "bilinpdo/field.hpp"
#include "bilinpdo/grid.hpp"

namespace bilinpdo {

/// Dyadic radial partition of unity {psi_k} built from a plateau profile
/// phi: psi_0 = phi, psi_k = psi(./2^k) with psi = phi - phi(2.). All
/// evaluations are radial; ambient_dim only records the intended space.
struct LittlewoodPaley {
  RadialBump base;   // phi
  int ambient_dim;   // n, or 2n for the double-frequency family
  int k_max;

  double phi(double r) const { return base(r); }

  /// phi_k = phi(./2^k), k may be negative.
  double phi_k(int k, double r) const { return base(r / std::ldexp(1.0, k)); }

  double psi(double r) const { return base(r) - base(2.0 * r); }

  double piece(int k, double r) const {
    if (k < 0) throw std::invalid_argument("piece: k must be >= 0");
    if (k == 0) return phi(r);
    return psi(r / std::ldexp(1.0, k));
  }

  /// Partial sum over k <= K; telescopes to phi_K.
  double partial_sum(int K, double r) const {
    double s = phi(r);
    for (int k = 1; k <= K; ++k) s += piece(k, r);
    return s;
  }

  /// Smallest K with the family summing to 1 on |xi| <= radius.
  int cover_index(double radius) const {
    int K = 0;
    while (std::ldexp(base.plateau, K) < radius) ++K;
    return K;
  }
};

inline LittlewoodPaley make_lp(int dim, int k_max, double sharpness = 1.0) {
  if (k_max < 1) throw std::invalid_argument("make_lp: k_max must be >= 1");
  return LittlewoodPaley{RadialBump(1.0, 2.0, sharpness), dim, k_max};
}

/// Variant base profile with plateau 2^{1/2-delta} and support 2^{1/2+delta}.
inline LittlewoodPaley make_lp_narrow(int dim, int k_max, double delta = 0.05,
                                      double sharpness = 1.0) {
  if (k_max < 1) throw std::invalid_argument("make_lp_narrow: k_max >= 1");
  if (!(delta > 0.0 && delta < 0.5))
    throw std::invalid_argument("make_lp_narrow: delta in (0, 1/2)");
  return LittlewoodPaley{
      RadialBump(std::exp2(0.5 - delta), std::exp2(0.5 + delta), sharpness),
      dim, k_max};
}

/// Frequency projection Delta_k f for an R^n family.
inline Field lp_block(const LittlewoodPaley& lp, int k, const Field& f) {
  return multiplier_apply(
      [&](const Point& xi) { return lp.piece(k, norm2(xi, f.grid.dim)); }, f);
}

/// Three-way split of the double-frequency annulus into the regions
/// |xi| << |eta|, |xi| >> |eta|, |xi| ~ |eta|. Profiles are radial on R^n
/// and scale as *_j = *(./2^j).
struct AppendixSplit {
  RadialBump base;  // the (plateau 1, support 2) profile the split is built on

  double phi_base(int k, double r) const {
    return base(r / std::ldexp(1.0, k));
  }

  double phi_prime(double r) const { return phi_base(-6, r); }
  double psi_prime(double r) const {
    return phi_base(1, r) * (1.0 - phi_base(-4, r));
  }
  double psi_dprime(double r) const {
    return phi_base(1, r) * (1.0 - phi_base(-6, r));
  }

  double phi_prime_j(int j, double r) const {
    return phi_prime(r / std::ldexp(1.0, j));
  }
  double psi_prime_j(int j, double r) const {
    return psi_prime(r / std::ldexp(1.0, j));
  }
  double psi_dprime_j(int j, double r) const {
    return psi_dprime(r / std::ldexp(1.0, j));
  }

  /// Low-frequency routing profile (plateau 2, support 4): phi(./2).
  double phi_route(double r) const { return phi_base(1, r); }
  double phi_route_j(int j, double r) const {
    return phi_route(r / std::ldexp(1.0, j));
  }
};

/// The split shares the bump profile of the given 2n-dimensional family.
inline AppendixSplit make_appendix_split(const LittlewoodPaley& lp2n) {
  if (lp2n.ambient_dim != 2 && lp2n.ambient_dim != 4)
    throw std::invalid_argument(
        "make_appendix_split: expected a double-frequency family");
  return AppendixSplit{RadialBump(1.0, 2.0, lp2n.base.sharpness)};
}

/// Pair (kappa, chi) with supp kappa in [-1,1]^n, band-limited chi bounded
/// away from zero on [-1,1]^n, and sum_nu kappa(xi-nu) chi(xi-nu) = 1.
/// Construction: chi = |w|^2 with w the inverse transform of a separable
/// nonnegative bump eta supported well inside B_{1/2}, and kappa = b / D
/// where D is the Z^n-periodization of b*chi.
class UniformPair {
 public:
  /// chi is built as a trigonometric polynomial: the eta-quadrature nodes
  /// sit on the lattice (2*pi/period) Z, so F chi is a sum of point masses
  /// strictly inside B_1 and chi is exactly representable on any grid whose
  /// extent divides `period`.
  static constexpr double kPeriod = 1024.0;

  explicit UniformPair(int dim) : dim_(dim) {
    if (dim != 1 && dim != 2)
      throw std::invalid_argument("UniformPair: dim must be 1 or 2");
    double c = 0.49 / std::sqrt(static_cast<double>(dim));
    MollifierBump eta{c, 1.0};
    double dt = kTwoPi / kPeriod;
    int K = static_cast<int>(std::floor(c / dt));
    nodes_.resize(K + 1);
    wts_.resize(K + 1);
    for (int k = 0; k <= K; ++k) {
      nodes_[k] = k * dt;
      wts_[k] = (k == 0 ? 1.0 : 2.0) * eta(k * dt) * dt / kTwoPi;
    }
    eta_half_width_ = c;
  }

  int dim() const { return dim_; }
  double eta_half_width() const { return eta_half_width_; }

  /// One-axis factor of chi.
  double chi1(double x) const {
    double w = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      w += wts_[i] * std::cos(x * nodes_[i]);
    return w * w;
  }

  double chi(const Point& xi) const {
    double v = 1.0;
    for (int a = 0; a < dim_; ++a) v *= chi1(xi[a]);
    return v;
  }

  /// One-axis factors of the pair; kappa and the periodized denominator
  /// are separable across axes.
  double b1(double t) const { return MollifierBump{1.0, 1.0}(t); }

  double denom1(double t) const {
    double s = 0.0;
    int lo = static_cast<int>(std::floor(t)) - 1;
    for (int m = lo; m <= lo + 3; ++m) {
      double bz = b1(t - m);
      if (bz > 0.0) s += bz * chi1(t - m);
    }
    return s;
  }

  double kappa1(double t) const {
    double bz = b1(t);
    if (bz == 0.0) return 0.0;
    return bz / denom1(t);
  }

  double b(const Point& z) const {
    double v = 1.0;
    MollifierBump one{1.0, 1.0};
    for (int a = 0; a < dim_; ++a) v *= one(z[a]);
    return v;
  }

  /// Z^n-periodic denominator D(xi) = sum_mu b(xi-mu) chi(xi-mu).
  double denom(const Point& xi) const {
    double s = 0.0;
    int lo[2] = {0, 0}, hi[2] = {0, 0};
    for (int a = 0; a < dim_; ++a) {
      lo[a] = static_cast<int>(std::floor(xi[a])) - 1;
      hi[a] = lo[a] + 3;
    }
    for (int m0 = lo[0]; m0 <= hi[0]; ++m0) {
      if (dim_ == 1) {
        Point z{xi[0] - m0, 0.0};
        double bz = b(z);
        if (bz > 0.0) s += bz * chi(z);
      } else {
        for (int m1 = lo[1]; m1 <= hi[1]; ++m1) {
          Point z{xi[0] - m0, xi[1] - m1};
          double bz = b(z);
          if (bz > 0.0) s += bz * chi(z);
        }
      }
    }
    return s;
  }

  double kappa(const Point& xi) const {
    double bz = b(xi);
    if (bz == 0.0) return 0.0;
    return bz / denom(xi);
  }

  /// sum over nu in Z^n of kappa(xi-nu) chi(xi-nu); equals 1 by construction.
  double partition_sum(const Point& xi) const {
    double s = 0.0;
    int lo[2] = {0, 0}, hi[2] = {0, 0};
    for (int a = 0; a < dim_; ++a) {
      lo[a] = static_cast<int>(std::floor(xi[a])) - 1;
      hi[a] = lo[a] + 3;
    }
    for (int n0 = lo[0]; n0 <= hi[0]; ++n0) {
      if (dim_ == 1) {
        Point z{xi[0] - n0, 0.0};
        s += kappa(z) * chi(z);
      } else {
        for (int n1 = lo[1]; n1 <= hi[1]; ++n1) {
          Point z{xi[0] - n0, xi[1] - n1};
          s += kappa(z) * chi(z);
        }
      }
    }
    return s;
  }

 private:
  int dim_;
  double eta_half_width_;
  std::vector<double> nodes_, wts_;
};

inline UniformPair make_uniform_pair(int dim) { return UniformPair(dim); }

}  // namespace bilinpdo

#endif
