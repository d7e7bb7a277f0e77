#ifndef BILINPDO_SMOOTHING_HPP
#define BILINPDO_SMOOTHING_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilinpdo/field.hpp"
#include "bilinpdo/norms.hpp"

namespace bilinpdo {

/// S(f)(x) = \int f(y) (1+|x-y|)^{-(n+1)} dy with the kernel truncated at
/// the box and periodized by the convolution. Nonnegativity is enforced by
/// taking |f|.
inline Field smoothing_S(const Field& f) {
  require_space(f, Space::physical);
  const GridSpec& g = f.grid;
  Field kern = make_field(g, Space::physical, [&](const Point& x) {
    return cplx(std::pow(1.0 + norm2(x, g.dim), -(g.dim + 1)), 0.0);
  });
  Field fa = f;
  for (auto& z : fa.v) z = std::abs(z);
  return convolve(kern, fa);
}

/// Mass of the kernel tail left outside the box, recorded with reports that
/// use the periodized S.
inline double smoothing_tail_mass(int dim, double extent) {
  double u0 = 1.0 + extent / 2.0;
  if (dim == 1) return 2.0 / u0;
  if (dim == 2) return kTwoPi * (1.0 / u0 - 0.5 / (u0 * u0));
  throw std::invalid_argument("smoothing_tail_mass: dim must be 1 or 2");
}

/// L^p norm of ( sum_nu |window((D-nu)/R) f|^2 )^{1/2}, nu ranging over the
/// integer lattice with |nu| <= Nyquist + 2R. With `restricted`, only nu
/// with window(-nu/R) = 0 are kept (the mean-killing subfamily).
template <class W>
NormReport square_function(const Field& f, double R, const W& window,
                           bool restricted, double p) {
  require_space(f, Space::physical);
  if (R < 1.0) throw std::invalid_argument("square_function: R must be >= 1");
  const GridSpec& g = f.grid;
  int nu_cap = static_cast<int>(std::ceil(g.nyquist() + 2.0 * R));
  std::vector<double> sq(f.size(), 0.0);
  int lo1 = (g.dim == 2) ? -nu_cap : 0;
  int hi1 = (g.dim == 2) ? nu_cap : 0;
  std::size_t kept = 0;
  Field F = dft(f);
  for (int n0 = -nu_cap; n0 <= nu_cap; ++n0) {
    for (int n1 = lo1; n1 <= hi1; ++n1) {
      Point nu{static_cast<double>(n0), static_cast<double>(n1)};
      if (restricted &&
          window(norm2(nu, g.dim) / R) != 0.0)
        continue;
      Field piece = F;
      bool any = false;
      for (std::size_t i = 0; i < piece.size(); ++i) {
        Point xi = g.xi_of(i);
        Point d{xi[0] - nu[0], xi[1] - nu[1]};
        double w = window(norm2(d, g.dim) / R);
        piece.v[i] *= w;
        any = any || w != 0.0;
      }
      if (!any) continue;
      Field px = idft(piece);
      for (std::size_t i = 0; i < sq.size(); ++i) sq[i] += std::norm(px.v[i]);
      ++kept;
    }
  }
  Field s(g, Space::physical);
  for (std::size_t i = 0; i < s.size(); ++i) s.v[i] = std::sqrt(sq[i]);
  NormReport r = lp_norm(s, p);
  r.tag = SpaceTag::SquareFn;
  r.note("R", R);
  r.note("restricted", restricted ? 1.0 : 0.0);
  r.note("nu_cap", nu_cap);
  r.note("pieces_kept", static_cast<double>(kept));
  return r;
}

struct BmoMultiplierRow {
  double a;
  double low_pass_ratio;   // ||phi(D/2^a) h||_inf / ((1+a) ||h||_bmo)
  double high_pass_ratio;  // ||psi(D/2^a) h||_inf / ||h||_BMO
};

/// Sweeps the two multiplier bounds over the scales 2^a. psi must vanish at
/// the origin.
template <class Phi, class Psi>
std::vector<BmoMultiplierRow> bmo_multiplier_bound(
    const Field& h, const std::vector<double>& a_levels, const Phi& phi,
    const Psi& psi) {
  if (std::abs(psi(0.0)) > 1e-12)
    throw std::invalid_argument("bmo_multiplier_bound: psi(0) must vanish");
  auto [bmo_r, bmo_R] = bmo_norms(h);
  std::vector<BmoMultiplierRow> rows;
  for (double a : a_levels) {
    if (a < 0.0) throw std::invalid_argument("bmo_multiplier_bound: a >= 0");
    double sc = std::pow(2.0, a);
    const GridSpec& g = h.grid;
    Field low = multiplier_apply(
        [&](const Point& xi) { return phi(norm2(xi, g.dim) / sc); }, h);
    Field high = multiplier_apply(
        [&](const Point& xi) { return psi(norm2(xi, g.dim) / sc); }, h);
    BmoMultiplierRow row;
    row.a = a;
    row.low_pass_ratio =
        bmo_r.value == 0.0 ? 0.0 : max_abs(low) / ((1.0 + a) * bmo_r.value);
    double hi = max_abs(high);
    row.high_pass_ratio =
        (hi == 0.0 && bmo_R.value == 0.0) ? 0.0
        : bmo_R.value == 0.0             ? kInf
                                         : hi / bmo_R.value;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bilinpdo

#endif
