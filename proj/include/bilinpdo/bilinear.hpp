#ifndef BILINPDO_BILINEAR_HPP
#define BILINPDO_BILINEAR_HPP

#include <cmath>
#include <vector>

#include "bilinpdo/field.hpp"
#include "bilinpdo/parallel.hpp"
#include "bilinpdo/symbol.hpp"

namespace bilinpdo {

struct ApplyOptions {
  bool allow_truncation = false;  // accept symbol support beyond Nyquist
  int workers = -1;
};

namespace detail {

struct ActiveBin {
  std::size_t idx;
  cplx value;
};

inline std::vector<ActiveBin> active_bins(const Field& spec) {
  std::vector<ActiveBin> out;
  for (std::size_t i = 0; i < spec.size(); ++i)
    if (spec.v[i] != cplx{}) out.push_back({i, spec.v[i]});
  return out;
}

/// Lattice index of the wrapped sum xi_a + eta_b (exact at grid points).
inline std::size_t fold_sum(const GridSpec& g, std::size_t a, std::size_t b) {
  auto ca = g.coords(a);
  auto cb = g.coords(b);
  std::array<int, 2> c{0, 0};
  int N = g.pts;
  for (int ax = 0; ax < g.dim; ++ax) {
    int k = (ca[ax] - N / 2) + (cb[ax] - N / 2);  // k-number of the sum
    c[ax] = ((k + N / 2) % N + N) % N;
  }
  return g.flat(c);
}

}  // namespace detail

/// T_sigma(f, g): quadrature of the double frequency integral. For
/// x-independent symbols the frequency-convolution route is used; the
/// x-dependent route evaluates the double sum per output point.
inline Field apply(const Symbol& sigma, const Field& f, const Field& g,
                   const ApplyOptions& opt = {}) {
  require_same_grid(f, g);
  require_space(f, Space::physical);
  require_space(g, Space::physical);
  const GridSpec& gr = f.grid;
  if (sigma.dim != gr.dim)
    throw std::invalid_argument("apply: symbol/grid dimension mismatch");
  double nyq_rad = gr.nyquist() * std::sqrt(static_cast<double>(gr.dim));
  if (sigma.freq_support_radius > nyq_rad && !opt.allow_truncation)
    throw std::invalid_argument(
        "apply: symbol support exceeds the Nyquist box; pass "
        "allow_truncation to accept");
  Field F = dft(f);
  Field G = dft(g);
  auto af = detail::active_bins(F);
  auto ag = detail::active_bins(G);
  double box_scale = std::pow(1.0 / gr.extent, 2 * gr.dim);

  if (sigma.x_independent) {
    Field C(gr, Space::frequency);
    for (const auto& [a, Fa] : af) {
      Point xi = gr.xi_of(a);
      for (const auto& [b, Gb] : ag) {
        Point eta = gr.xi_of(b);
        cplx s = sigma(Point{0, 0}, xi, eta);
        if (s == cplx{}) continue;
        C.v[detail::fold_sum(gr, a, b)] += s * Fa * Gb;
      }
    }
    Field out = idft(C);
    double extra = box_scale * std::pow(gr.extent, gr.dim);  // idft carries T^-n
    for (auto& z : out.v) z *= extra;
    return out;
  }

  Field out(gr, Space::physical);
  parallel_for(
      out.size(),
      [&](std::size_t i) {
        Point x = gr.x_of(i);
        CplxAccum acc;
        for (const auto& [a, Fa] : af) {
          Point xi = gr.xi_of(a);
          double px = 0.0;
          for (int ax = 0; ax < gr.dim; ++ax) px += x[ax] * xi[ax];
          for (const auto& [b, Gb] : ag) {
            Point eta = gr.xi_of(b);
            double ph = px;
            for (int ax = 0; ax < gr.dim; ++ax) ph += x[ax] * eta[ax];
            cplx s = sigma(x, xi, eta);
            if (s == cplx{}) continue;
            acc.add(std::polar(1.0, ph) * s * Fa * Gb);
          }
        }
        out.v[i] = acc.value() * box_scale;
      },
      opt.workers);
  return out;
}

/// The trilinear dual form \int T_sigma(f, g)(x) h(x) dx.
inline cplx dual_pairing(const Symbol& sigma, const Field& f, const Field& g,
                         const Field& h, const ApplyOptions& opt = {}) {
  require_same_grid(f, h);
  Field t = apply(sigma, f, g, opt);
  CplxAccum acc;
  for (std::size_t i = 0; i < t.size(); ++i) acc.add(t.v[i] * h.v[i]);
  return acc.value() * std::pow(f.grid.step(), f.grid.dim);
}

}  // namespace bilinpdo

#endif
