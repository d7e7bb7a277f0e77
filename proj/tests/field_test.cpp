#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "bilinpdo/field.hpp"
#include "bilinpdo/norms.hpp"
#include "bilinpdo/rng.hpp"

using namespace bilinpdo;

namespace {

// Quadratic-cost reference transform, independent of the FFT path.
Field dft_oracle(const Field& f) {
  const GridSpec& g = f.grid;
  Field out(g, Space::frequency);
  double w = std::pow(g.step(), g.dim);
  for (std::size_t k = 0; k < out.size(); ++k) {
    Point xi = g.xi_of(k);
    CplxAccum acc;
    for (std::size_t j = 0; j < f.size(); ++j) {
      Point x = g.x_of(j);
      double phase = 0.0;
      for (int a = 0; a < g.dim; ++a) phase -= x[a] * xi[a];
      acc.add(f.v[j] * std::polar(1.0, phase));
    }
    out.v[k] = acc.value() * w;
  }
  return out;
}

Field convolve_oracle(const Field& f, const Field& g) {
  const GridSpec& gr = f.grid;
  Field out(gr, Space::physical);
  int N = gr.pts;
  double w = std::pow(gr.step(), gr.dim);
  for (std::size_t m = 0; m < out.size(); ++m) {
    auto cm = gr.coords(m);
    CplxAccum acc;
    for (std::size_t j = 0; j < f.size(); ++j) {
      auto cj = gr.coords(j);
      // sample of g at the wrapped physical point x_m - x_j
      std::array<int, 2> cd{0, 0};
      for (int a = 0; a < gr.dim; ++a)
        cd[a] = ((cm[a] - cj[a] + N / 2) % N + N) % N;
      acc.add(f.v[j] * g.v[gr.flat(cd)]);
    }
    out.v[m] = acc.value() * w;
  }
  return out;
}

double rel_err_peak(const Field& got, const Field& want) {
  return max_abs_diff(got, want) / max_abs(want);
}

}  // namespace

TEST(Dft, DeltaTransformsToOne) {
  GridSpec g(1, 8.0, 64);
  Field f(g, Space::physical);
  // unit point mass: value N/T at one sample
  f.v[g.total() / 2] = cplx(g.pts / g.extent, 0.0);
  Field F = dft(f);
  for (std::size_t i = 0; i < F.size(); ++i) {
    EXPECT_NEAR(F.v[i].real(), 1.0, 1e-12);
    EXPECT_NEAR(F.v[i].imag(), 0.0, 1e-12);
  }
}

TEST(Dft, GaussianSelfTransform) {
  GridSpec g(1, 32.0, 256);
  Field f = make_field(g, Space::physical, [](const Point& x) {
    return cplx(std::exp(-x[0] * x[0] / 2), 0.0);
  });
  Field F = dft(f);
  Field want = make_field(g, Space::frequency, [](const Point& xi) {
    return cplx(std::sqrt(kTwoPi) * std::exp(-xi[0] * xi[0] / 2), 0.0);
  });
  EXPECT_LE(rel_err_peak(F, want), 1e-10);
}

TEST(Dft, MatchesDirectSumOracle1d) {
  Rng rng(11);
  GridSpec g(1, 8.0, 32);
  Field f(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  EXPECT_LE(rel_err_peak(dft(f), dft_oracle(f)), 1e-10);
}

TEST(Dft, MatchesDirectSumOracle2d) {
  Rng rng(12);
  GridSpec g(2, 4.0, 16);
  Field f(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  EXPECT_LE(rel_err_peak(dft(f), dft_oracle(f)), 1e-10);
}

TEST(Dft, RoundTrip) {
  Rng rng(13);
  for (int dim : {1, 2}) {
    GridSpec g(dim, 16.0, dim == 1 ? 256 : 32);
    Field f(g, Space::physical);
    for (auto& z : f.v) z = rng.cgauss();
    Field back = idft(dft(f));
    EXPECT_LE(rel_err_peak(back, f), 1e-12);
  }
}

TEST(Dft, Linearity) {
  Rng rng(14);
  GridSpec g(1, 8.0, 64);
  Field f(g, Space::physical), h(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  for (auto& z : h.v) z = rng.cgauss();
  cplx al(0.7, -0.3), be(-1.1, 0.2);
  Field lhs = dft(al * f + be * h);
  Field rhs = al * dft(f) + be * dft(h);
  EXPECT_LE(rel_err_peak(lhs, rhs), 1e-13);
}

TEST(Dft, Parseval) {
  Rng rng(15);
  for (int dim : {1, 2}) {
    GridSpec g(dim, 8.0, dim == 1 ? 128 : 32);
    Field f(g, Space::physical);
    for (auto& z : f.v) z = rng.cgauss();
    double lhs = l2_norm(f);
    double rhs = std::pow(kTwoPi, -0.5 * g.dim) * l2_norm(dft(f));
    EXPECT_NEAR(lhs / rhs, 1.0, 1e-10);
  }
}

TEST(Multiplier, IdentityLeavesFieldAlone) {
  Rng rng(16);
  GridSpec g(1, 8.0, 64);
  Field f(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  Field out = multiplier_apply([](const Point&) { return 1.0; }, f);
  EXPECT_LE(rel_err_peak(out, f), 1e-12);
}

TEST(Multiplier, ModulationTranslates) {
  GridSpec g(1, 16.0, 128);
  Field f = make_field(g, Space::physical, [](const Point& x) {
    return cplx(std::exp(-x[0] * x[0]), 0.0);
  });
  double v = 3 * g.step();  // shift by an exact number of samples
  Field out = multiplier_apply(
      [&](const Point& xi) { return std::polar(1.0, xi[0] * v); }, f);
  Field want = make_field(g, Space::physical, [&](const Point& x) {
    double xx = x[0] + v;  // periodic wrap is safe: Gaussian tails are tiny
    return cplx(std::exp(-xx * xx), 0.0);
  });
  EXPECT_LE(rel_err_peak(out, want), 1e-10);
}

TEST(Multiplier, AnnulusMaskKillsSpectrumOutside) {
  Rng rng(17);
  GridSpec g(1, 8.0, 128);
  Field f(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  AnnularBump ann(1.0, 2.0, 4.0, 8.0);
  Field out = multiplier_apply(
      [&](const Point& xi) { return ann(std::abs(xi[0])); }, f);
  Field spec = dft(out);
  double peak = max_abs(spec);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    double r = std::abs(g.xi_of(i)[0]);
    if (r <= 1.0 || r >= 8.0) EXPECT_LE(std::abs(spec.v[i]), 1e-12 * peak);
  }
}

TEST(Multiplier, CompositionEqualsProduct) {
  Rng rng(18);
  GridSpec g(1, 8.0, 64);
  Field f(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  auto m1 = [](const Point& xi) { return 1.0 / (1.0 + xi[0] * xi[0]); };
  auto m2 = [](const Point& xi) { return std::cos(xi[0]); };
  Field lhs = multiplier_apply(m1, multiplier_apply(m2, f));
  Field rhs = multiplier_apply(
      [&](const Point& xi) { return m1(xi) * m2(xi); }, f);
  EXPECT_LE(rel_err_peak(lhs, rhs), 1e-12);
}

TEST(Convolve, DeltaIsIdentity) {
  Rng rng(19);
  GridSpec g(1, 8.0, 64);
  Field f(g, Space::physical);
  for (auto& z : f.v) z = rng.cgauss();
  Field delta(g, Space::physical);
  delta.v[g.pts / 2] = cplx(g.pts / g.extent, 0.0);  // unit mass at x = 0
  Field out = convolve(f, delta);
  EXPECT_LE(rel_err_peak(out, f), 1e-12);
}

TEST(Convolve, GaussianPair) {
  GridSpec g(1, 32.0, 512);
  auto gauss = [](double s2) {
    return [s2](const Point& x) {
      return cplx(std::exp(-x[0] * x[0] / (2 * s2)) / std::sqrt(kTwoPi * s2),
                  0.0);
    };
  };
  Field a = make_field(g, Space::physical, gauss(1.0));
  Field want = make_field(g, Space::physical, gauss(2.0));
  Field got = convolve(a, a);
  EXPECT_LE(rel_err_peak(got, want), 1e-8);
}

TEST(Convolve, MatchesDoubleSumOracle) {
  Rng rng(20);
  GridSpec g(1, 8.0, 32);
  Field f(g, Space::physical), h(g, Space::physical);
  for (auto& z : f.v) z = std::abs(rng.gauss());
  for (auto& z : h.v) z = std::abs(rng.gauss());
  EXPECT_LE(rel_err_peak(convolve(f, h), convolve_oracle(f, h)), 1e-10);
}

TEST(Grid, RejectsBadSpecs) {
  EXPECT_THROW(GridSpec(3, 8.0, 64), std::invalid_argument);
  EXPECT_THROW(GridSpec(1, 8.0, 48), std::invalid_argument);
  EXPECT_THROW(GridSpec(1, 8.0, 4), std::invalid_argument);
  EXPECT_THROW(GridSpec(1, -2.0, 64), std::invalid_argument);
}

TEST(Field, MismatchedGridsAreStructuralErrors) {
  GridSpec a(1, 8.0, 64), b(1, 8.0, 128);
  Field fa(a, Space::physical), fb(b, Space::physical);
  EXPECT_THROW(convolve(fa, fb), std::invalid_argument);
  EXPECT_THROW((void)(fa + fb), std::invalid_argument);
  Field Fa = dft(fa);
  EXPECT_THROW((void)dft(Fa), std::invalid_argument);
}
