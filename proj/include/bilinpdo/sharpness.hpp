#ifndef BILINPDO_SHARPNESS_HPP
#define BILINPDO_SHARPNESS_HPP

#include <cmath>
#include <stdexcept>
#include <vector>

#include "bilinpdo/bilinear.hpp"
#include "bilinpdo/field.hpp"
#include "bilinpdo/norms.hpp"
#include "bilinpdo/slope.hpp"
#include "bilinpdo/symbol_norms.hpp"

namespace bilinpdo {

/// Profiles pinned for the eps-scaled family: uhat plateau 1/2, support 1;
/// vhat an annular bump around |eta| = 1.
struct EpsFamilyProfiles {
  RadialBump uhat{0.5, 1.0};
  AnnularBump vhat{0.9, 0.95, 1.05, 1.1};
};

struct S12Row {
  double eps, p, q, r, s1, s2;
  double t_norm;      // ||T_sigma(f,g)||_{L^r}
  double f_norm, g_norm;
  double sigma_norm;  // plain symbol-class norm, factorized over the slots
  double ratio;       // t_norm / (sigma_norm * f_norm * g_norm)
};

namespace detail {

/// One-slot factor of the plain symbol norm: sum_k 2^{ks} ||Delta_k A||_ul2
/// for a one-variable profile sampled as a field.
inline double slot_besov_ul2(const Field& profile, double s,
                             const LittlewoodPaley& lp1) {
  int cap =
      static_cast<int>(std::ceil(std::log2(profile.grid.nyquist()))) + 1;
  Accum total;
  for (int k = 0; k <= cap; ++k)
    total.add(std::pow(2.0, k * s) *
              ul2_norm(lp_block(lp1, k, profile)).value);
  return total.value();
}

}  // namespace detail

/// One sweep point of the eps-scaled family forcing the xi-slot smoothness.
/// The plateau condition needs supp ghat inside the vhat plateau, so
/// eps <= 1/20 is required (1/40 is comfortable).
inline S12Row family_s12(double eps, double p, double q, double r, double s1,
                         double s2 = 0.5, cplx f_phase = cplx(1.0, 0.0)) {
  if (!(eps > 0.0 && eps <= 0.05))
    throw std::invalid_argument(
        "family_s12: eps too large for the plateau condition");
  if (std::abs(1.0 / p + 1.0 / q - 1.0 / r) > 1e-12)
    throw std::invalid_argument("family_s12: need 1/p + 1/q = 1/r");
  EpsFamilyProfiles prof;

  // operator grid: box scales like 1/eps so the physical tails are used
  // consistently across the sweep
  double T = 64.0 / eps;
  int N = 1 << static_cast<int>(std::ceil(std::log2(T)));
  GridSpec g(1, T, N);
  Symbol sigma = multiplier_symbol(
      [prof, eps](const Point& xi, const Point& eta) {
        return prof.uhat(std::abs(xi[0]) / eps) * prof.vhat(std::abs(eta[0]));
      },
      1, std::sqrt(eps * eps + 1.21), "eps-family");
  Field fh(g, Space::frequency), gh(g, Space::frequency);
  for (std::size_t i = 0; i < fh.size(); ++i) {
    double xi = g.xi_of(i)[0];
    fh.v[i] = f_phase * std::pow(eps, 1.0 / p - 1.0) *
              prof.uhat(std::abs(xi) / eps);
    gh.v[i] = std::pow(eps, 1.0 / q - 1.0) *
              prof.uhat(std::abs(xi - 1.0) / eps);
  }
  Field f = idft(fh), gg = idft(gh);

  S12Row row;
  row.eps = eps;
  row.p = p;
  row.q = q;
  row.r = r;
  row.s1 = s1;
  row.s2 = s2;
  row.f_norm = lp_norm(f, p).value;
  row.g_norm = lp_norm(gg, q).value;
  row.t_norm = lp_norm(apply(sigma, f, gg), r).value;

  // plain symbol norm: the family is separable and only the j = 0 level
  // survives under the narrow double-frequency partition, so the norm
  // factorizes into one-variable slot sums
  auto lp1 = make_lp(1, 64);
  GridSpec gs(1, 16.0, 1 << 17);
  Field uslot = make_field(gs, Space::physical, [&](const Point& t) {
    return cplx(prof.uhat(std::abs(t[0]) / eps), 0.0);
  });
  Field vslot = make_field(gs, Space::physical, [&](const Point& t) {
    return cplx(prof.vhat(std::abs(t[0])), 0.0);
  });
  row.sigma_norm = detail::slot_besov_ul2(uslot, s1, lp1) *
                   detail::slot_besov_ul2(vslot, s2, lp1);
  row.ratio = row.t_norm / (row.sigma_norm * row.f_norm * row.g_norm);
  return row;
}

struct WaingerResult {
  Field field;
  NormReport norm;
  int k_cut;
};

/// Truncation satisfying e^{-t K} <= 1e-12.
inline int wainger_k_cut(double t) {
  return static_cast<int>(std::ceil(std::log(1e12) / t));
}

/// Lattice trigonometric sum f_{a,b,t}(x) = sum_{k != 0} e^{-t|k|} |k|^{-b}
/// e^{i|k|^a} e^{ikx} phi(x), windowed by a fixed smooth bump.
inline WaingerResult wainger(double a, double b, double t, double p,
                             int k_cut = -1, const GridSpec& grid = GridSpec(
                                                 1, 8.0, 4096)) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("wainger: a in (0,1)");
  if (!(t > 0.0)) throw std::invalid_argument("wainger: t > 0");
  if (k_cut < 0) k_cut = wainger_k_cut(t);
  if (std::exp(-t * k_cut) > 1e-12 * (1.0 + 1e-9))
    throw std::invalid_argument("wainger: truncation condition violated");
  MollifierBump window{2.0, 1.0};
  Field f(grid, Space::physical);
  double h = grid.step();
  double x0 = -grid.extent / 2;
  for (int k = 1; k <= k_cut; ++k) {
    double amp = std::exp(-t * k) * std::pow(static_cast<double>(k), -b);
    cplx osc = std::polar(1.0, std::pow(static_cast<double>(k), a));
    cplx cpos = amp * osc;  // +k and -k share |k|-derived factors
    cplx step_pos = std::polar(1.0, k * h);
    cplx ph_pos = std::polar(1.0, k * x0);
    cplx ph_neg = std::conj(ph_pos);
    cplx step_neg = std::conj(step_pos);
    for (std::size_t i = 0; i < f.size(); ++i) {
      f.v[i] += cpos * (ph_pos + ph_neg);
      ph_pos *= step_pos;
      ph_neg *= step_neg;
    }
  }
  for (std::size_t i = 0; i < f.size(); ++i)
    f.v[i] *= window(grid.x_of(i)[0]);
  NormReport nr = lp_norm(f, p);
  nr.note("a", a);
  nr.note("b", b);
  nr.note("t", t);
  nr.note("k_cut", k_cut);
  return WaingerResult{std::move(f), std::move(nr), k_cut};
}

struct S0Row {
  double a1, a2, b1, b2, m, s0, t, r;
  double closed_sum;      // the double lattice sum
  double t_norm_closed;   // ||T||_r from the closed form
  double t_norm_numeric;  // operator quadrature (< 0 if skipped)
  int k_cut;
};

namespace detail {

struct S0Profiles {
  MollifierBump phi{0.25, 1.0};      // supp (-1/4, 1/4)
  RadialBump phi_tilde{0.25, 0.5};   // = 1 on the phi support
};

inline double s0_closed_sum(double m, double s0, double b1, double b2,
                            double t, int K) {
  std::vector<double> w1(K + 1, 0.0), w2(K + 1, 0.0);
  for (int k = 1; k <= K; ++k) {
    w1[k] = std::exp(-t * k) * std::pow(static_cast<double>(k), -b1);
    w2[k] = std::exp(-t * k) * std::pow(static_cast<double>(k), -b2);
  }
  std::vector<double> pw(2 * K + 1, 0.0);
  for (int u = 2; u <= 2 * K; ++u)
    pw[u] = std::pow(1.0 + u, m - s0);
  Accum acc;
  for (int k = 1; k <= K; ++k) {
    double row = 0.0;
    for (int l = 1; l <= K; ++l) row += w2[l] * pw[k + l];
    acc.add(4.0 * w1[k] * row);  // (+-k, +-l)
  }
  return acc.value();
}

}  // namespace detail

/// One sweep point of the x-slot family: the pairing collapses to a closed
/// double lattice sum because the unit-window supports are disjoint. The
/// numeric operator path runs when `run_numeric` (costly; moderate t only).
inline S0Row family_s0(double a1, double a2, double b1, double b2, double m,
                       double s0, double t, double r = 1.0,
                       bool run_numeric = false) {
  if (!(a1 > 0 && a1 < 1 && a2 > 0 && a2 < 1))
    throw std::invalid_argument("family_s0: a in (0,1)");
  int K = wainger_k_cut(t);
  detail::S0Profiles prof;
  S0Row row;
  row.a1 = a1;
  row.a2 = a2;
  row.b1 = b1;
  row.b2 = b2;
  row.m = m;
  row.s0 = s0;
  row.t = t;
  row.r = r;
  row.k_cut = K;
  row.closed_sum = detail::s0_closed_sum(m, s0, b1, b2, t, K);

  // ||phi||_1 and ||phi||_r by fine quadrature
  const int M = 1 << 14;
  double lo = -0.25, hi = 0.25, dxi = (hi - lo) / M;
  Accum l1acc, lracc;
  for (int i = 0; i < M; ++i) {
    double v = prof.phi(lo + (i + 0.5) * dxi);
    l1acc.add(v);
    lracc.add(std::pow(v, r));
  }
  double phi_l1 = l1acc.value() * dxi;
  double phi_lr = std::pow(lracc.value() * dxi, 1.0 / r);
  row.t_norm_closed = phi_l1 * phi_l1 / std::pow(kTwoPi, 2.0) *
                      row.closed_sum * phi_lr;
  row.t_norm_numeric = -1.0;

  if (run_numeric) {
    if (t < 0.49)
      throw std::invalid_argument(
          "family_s0: the numeric operator path needs t >= 1/2");
    GridSpec g(1, 1024.0, 1 << 15);
    // f and g on the lattice: sums of unit-window bumps
    auto series_spectrum = [&](double a, double b) {
      Field F(g, Space::frequency);
      for (std::size_t i = 0; i < F.size(); ++i) {
        double xi = g.xi_of(i)[0];
        int nu = static_cast<int>(std::lround(xi));
        if (nu != 0 && std::abs(nu) <= K && std::abs(xi - nu) < 0.5) {
          double amp = std::exp(-t * std::abs(nu)) *
                       std::pow(std::abs(static_cast<double>(nu)), -b);
          F.v[i] = amp * std::polar(1.0, std::pow(std::abs(nu), a)) *
                   prof.phi_tilde(xi - nu);
        }
      }
      return F;
    };
    Field Fh = series_spectrum(a1, b1);
    Field Gh = series_spectrum(a2, b2);
    auto sig_sum = [&](double xi, double eta) -> cplx {
      int k = static_cast<int>(std::lround(xi));
      int l = static_cast<int>(std::lround(eta));
      if (k == 0 || l == 0 || std::abs(k) > K || std::abs(l) > K)
        return cplx{};
      double pk = prof.phi(xi - k), pl = prof.phi(eta - l);
      if (pk == 0.0 || pl == 0.0) return cplx{};
      return std::pow(1.0 + std::abs(k) + std::abs(l), m - s0) *
             std::polar(1.0, -std::pow(std::abs(k), a1) -
                                 std::pow(std::abs(l), a2)) *
             pk * pl;
    };
    // T(x) restricted to the phi window, where it can be nonzero
    std::vector<detail::ActiveBin> af = detail::active_bins(Fh);
    std::vector<detail::ActiveBin> ag = detail::active_bins(Gh);
    double coef = std::pow(1.0 / g.extent, 2);
    Field out(g, Space::physical);
    for (std::size_t i = 0; i < out.size(); ++i) {
      double x = g.x_of(i)[0];
      double win = prof.phi(x);
      if (win == 0.0) continue;
      CplxAccum acc;
      for (const auto& [a_, Fa] : af) {
        double xi = g.xi_of(a_)[0];
        for (const auto& [b_, Gb] : ag) {
          double eta = g.xi_of(b_)[0];
          cplx s = sig_sum(xi, eta);
          if (s == cplx{}) continue;
          // the symbol's e^{-ix(xi+eta)} cancels the kernel phase
          acc.add(s * Fa * Gb);
        }
      }
      out.v[i] = win * acc.value() * coef;
    }
    row.t_norm_numeric = lp_norm(out, r).value;
    // the closed-form comparison shares the x lattice, so the phi-envelope
    // norm cancels exactly; recompute the closed target on this grid
    Field phi_grid = make_field(g, Space::physical, [&](const Point& x) {
      return cplx(prof.phi(x[0]), 0.0);
    });
    row.t_norm_closed = phi_l1 * phi_l1 / std::pow(kTwoPi, 2.0) *
                        row.closed_sum * lp_norm(phi_grid, r).value;
  }
  return row;
}

struct DilationTransferRow {
  int ell;
  double lhs;    // dagger norm of the dilated level piece
  double base;   // dagger norm of sigma in the rho = 0 class
  double ratio;  // lhs / base
};

/// Per-level dilation transfer: the level-ell piece of a rho = 0 symbol,
/// redistributed by the 2^{ell rho/(1-rho)} change of variables, lands in
/// the rho-class with norm growth 2^{ell (m' - m/(1-rho))}.
inline std::vector<DilationTransferRow> dilation_transfer(
    const Symbol& sigma, double m, double m_prime, double rho,
    const std::array<double, 3>& s, const std::vector<int>& ells,
    int v_pts = 128) {
  if (!(rho > 0.0 && rho < 1.0))
    throw std::invalid_argument("dilation_transfer: need 0 < rho < 1");
  (void)m;
  double varrho = rho / (1.0 - rho);
  LittlewoodPaley lp2n = make_lp(2 * sigma.dim, 64);
  LittlewoodPaley lp1 = make_lp(sigma.dim, 64);

  int ell_max = 0;
  for (int l : ells) ell_max = std::max(ell_max, l);
  BsTruncation tr_base;
  tr_base.j_max = ell_max + 3;
  tr_base.v_pts = v_pts;
  tr_base.cap_spacing = false;  // sup-norm aggregation only
  double base =
      bs_norm(sigma, m_prime, 0.0, s, BsVariant::dagger, tr_base, lp2n, lp1)
          .report.value;

  std::vector<DilationTransferRow> rows;
  for (int ell : ells) {
    double lam = std::pow(2.0, ell * varrho);
    Symbol varsig;
    varsig.dim = sigma.dim;
    varsig.x_independent = sigma.x_independent;
    varsig.label = "dilated-level-piece";
    varsig.freq_support_radius =
        lp2n.base.support * std::pow(2.0, ell) * lam;
    varsig.eval_fn = [&sigma, &lp2n, ell, lam](const Point& x, const Point& xi,
                                               const Point& eta) {
      Point xs{x[0] * lam, x[1] * lam};
      Point xis{xi[0] / lam, xi[1] / lam};
      Point etas{eta[0] / lam, eta[1] / lam};
      double w = lp2n.piece(ell, norm2_pair(xis, etas, sigma.dim));
      return w == 0.0 ? cplx{} : sigma(xs, xis, etas) * w;
    };
    BsTruncation tr;
    tr.j_max = static_cast<int>(std::ceil(ell / (1.0 - rho))) + 3;
    tr.v_pts = v_pts;
    tr.cap_spacing = false;
    double lhs =
        bs_norm(varsig, m, rho, s, BsVariant::dagger, tr, lp2n, lp1)
            .report.value;
    rows.push_back({ell, lhs, base, lhs / base});
  }
  return rows;
}

}  // namespace bilinpdo

#endif
