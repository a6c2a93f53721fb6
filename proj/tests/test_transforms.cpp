#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tfz/fields.hpp"
#include "tfz/geometry.hpp"
#include "tfz/transforms.hpp"

using tfz::cplx;
using tfz::OrderedBasis;
using tfz::SampledField;

namespace {

constexpr double kPi = std::numbers::pi;

SampledField unit_gaussian(double step, double half = 16.0) {
  const std::vector<double> lo{-half}, hi{half};
  return tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0] / 2.0)); },
      lo, hi, step);
}

}  // namespace

TEST_CASE("dual axis spans the symmetric Nyquist window") {
  const tfz::Axis ax{-16.0, 1.0 / 64, 2048, tfz::AxisKind::line};
  const tfz::Axis xi = tfz::dual_axis(ax);
  CHECK(xi.count == 2048);
  CHECK(xi.step == doctest::Approx(2.0 * kPi / 32.0).epsilon(1e-14));
  CHECK(xi.coord(1024) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("fourier transform of the unit Gaussian is itself") {
  const SampledField f = unit_gaussian(1.0 / 64);
  const SampledField g = tfz::fourier(f);
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.axis(0).coord(k);
    worst = std::max(worst,
                     std::abs(g.values()[k] - cplx(std::exp(-xi * xi / 2.0))));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("fourier transform preserves the l2 norm") {
  const std::vector<double> lo{-16.0}, hi{16.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) {
        return cplx(std::exp(-x[0] * x[0] / 2.0) * std::cos(3.0 * x[0]),
                    0.2 * std::exp(-x[0] * x[0]));
      },
      lo, hi, 1.0 / 64);
  const SampledField g = tfz::fourier(f);
  CHECK(g.l2_norm() == doctest::Approx(f.l2_norm()).epsilon(1e-10));
  // Round trip through the inverse direction.
  const SampledField back = tfz::fourier_along(g, 0, true);
  double worst = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k)
    worst = std::max(worst, std::abs(back.values()[k] - f.values()[k]));
  CHECK(worst < 1e-9);
}

TEST_CASE("Gaussian-window STFT of the Gaussian has the closed-form modulus") {
  const SampledField f = unit_gaussian(1.0 / 32, 8.0);
  const tfz::Window phi = tfz::gaussian_window(1.0, {0.0}, {0.0});
  const SampledField v = tfz::stft(f, phi);
  // |V(x,xi)| = 2^{-1/2} e^{-(x^2+xi^2)/4}.
  double worst = 0.0;
  for (std::size_t i = 0; i < v.axis(0).count; i += 16)
    for (std::size_t j = 0; j < v.axis(1).count; j += 16) {
      const double x = v.axis(0).coord(i);
      const double xi = v.axis(1).coord(j);
      if (std::abs(x) > 6.0 || std::abs(xi) > 6.0) continue;
      const double want = std::exp(-(x * x + xi * xi) / 4.0) / std::sqrt(2.0);
      const std::vector<std::size_t> idx{i, j};
      worst = std::max(worst, std::abs(std::abs(v.at(idx)) - want));
    }
  CHECK(worst < 1e-6);
  // Orthogonality relation: ||V_phi f||_2 = ||f||_2 ||phi||_2 = sqrt(pi).
  CHECK(v.l2_norm() == doctest::Approx(std::sqrt(kPi)).epsilon(1e-4));
}

TEST_CASE("finite Zak transform of basis vectors") {
  SUBCASE("delta") {
    const std::vector<cplx> f{1.0, 0.0, 0.0, 0.0};
    const auto z = tfz::finite_zak(f, 2, 2);
    const std::vector<cplx> want{1.0, 1.0, 0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(z[i] - want[i]) < 1e-12);
  }
  SUBCASE("constant vector") {
    const std::vector<cplx> f{1.0, 1.0, 1.0, 1.0};
    const auto z = tfz::finite_zak(f, 2, 2);
    CHECK(std::abs(z[0] - cplx(2.0)) < 1e-12);
    CHECK(std::abs(z[1]) < 1e-12);
    CHECK(std::abs(z[2] - cplx(2.0)) < 1e-12);
    CHECK(std::abs(z[3]) < 1e-12);
  }
}

TEST_CASE("finite Zak Parseval: energy scales by N") {
  const std::size_t m = 8, n = 16;
  std::vector<cplx> f(m * n);
  for (std::size_t i = 0; i < f.size(); ++i)
    f[i] = cplx(std::sin(0.37 * static_cast<double>(i)),
                std::cos(0.11 * static_cast<double>(i) + 0.5));
  const auto z = tfz::finite_zak(f, m, n);
  double ein = 0.0, eout = 0.0;
  for (const auto& v : f) ein += std::norm(v);
  for (const auto& v : z) eout += std::norm(v);
  CHECK(eout == doctest::Approx(static_cast<double>(n) * ein).epsilon(1e-12));
}

TEST_CASE("Zak transform satisfies both quasi-periodicity identities") {
  const SampledField f = unit_gaussian(1.0 / 64);
  const tfz::ZakField z = tfz::zak(f, OrderedBasis::standard(1));
  CHECK(z.data.dim() == 2);
  CHECK(z.boundary_mass <= 1e-12);
  CHECK(tfz::quasiperiodicity_defect(z) < 1e-9);
}

TEST_CASE("Zak transform then inversion recovers the signal") {
  const std::vector<double> lo{-16.0}, hi{16.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) {
        return cplx(std::exp(-x[0] * x[0] / 2.0) * std::cos(2.0 * x[0]),
                    0.3 * std::exp(-(x[0] - 0.5) * (x[0] - 0.5)));
      },
      lo, hi, 1.0 / 64);
  const tfz::ZakField z = tfz::zak(f, OrderedBasis::standard(1));
  const SampledField g = tfz::inverse_zak(z);
  double worst = 0.0;
  for (std::size_t i = 0; i < g.axis(0).count; ++i) {
    const double x = g.axis(0).coord(i);
    if (std::abs(x) > 12.0) continue;  // compare away from the truncation edge
    const std::vector<double> p{x};
    worst = std::max(worst, std::abs(g.values()[i] - f.interp(p)));
  }
  CHECK(worst < 1e-9);
}

TEST_CASE("Zak transform of a dilated-lattice Gaussian stays quasi-periodic") {
  const SampledField f = unit_gaussian(1.0 / 64);
  const tfz::ZakField z = tfz::zak(f, OrderedBasis::diagonal({2.0}));
  CHECK(tfz::quasiperiodicity_defect(z) < 1e-9);
}

TEST_CASE("Fourier coefficients of a trig polynomial are recovered exactly") {
  const std::vector<cplx> coeff{cplx(0.5, -0.25), cplx(2.0, 0.0), cplx(0.0, 1.0)};
  const std::vector<int> modes{-2, 0, 3};
  const std::vector<double> lo{0.0}, hi{2.0 * kPi};
  const SampledField f = tfz::sample(
      [&](std::span<const double> x) {
        cplx s = 0.0;
        for (std::size_t t = 0; t < modes.size(); ++t)
          s += coeff[t] * std::polar(1.0, static_cast<double>(modes[t]) * x[0]);
        return s;
      },
      lo, hi, 2.0 * kPi / 128);
  const OrderedBasis e0 = OrderedBasis::diagonal({2.0 * kPi});
  const auto c = tfz::fourier_coefficients(f, e0, {-4}, {4});
  for (int nu = -4; nu <= 4; ++nu) {
    cplx want = 0.0;
    for (std::size_t t = 0; t < modes.size(); ++t)
      if (modes[t] == nu) want = coeff[t];
    const std::vector<int> idx{nu};
    CHECK(std::abs(c.at(idx) - want) < 1e-10);
  }
  // Frequency map: alpha = T_{E'} nu with E' = {1} here.
  const std::vector<int> three{3};
  CHECK(c.frequency(three)[0] == doctest::Approx(3.0).epsilon(1e-12));
  // Synthesis reproduces the samples.
  const SampledField s = tfz::synthesize_periodic(c, lo, hi, 2.0 * kPi / 128);
  double worst = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i)
    worst = std::max(worst, std::abs(s.values()[i] - f.values()[i]));
  CHECK(worst < 1e-10);
}

TEST_CASE("closed-form periodic STFT matches direct quadrature") {
  const OrderedBasis e0 = OrderedBasis::diagonal({2.0 * kPi});
  tfz::FourierCoefficients c(e0, {-2}, {2});
  const std::vector<int> i0{0}, i1{1}, im2{-2};
  c.at(i0) = cplx(1.0, 0.0);
  c.at(i1) = cplx(0.5, 0.5);
  c.at(im2) = cplx(-0.25, 0.1);
  const tfz::Window phi = tfz::gaussian_window(1.0, {0.0}, {0.0});
  const std::vector<tfz::Axis> xax{{-1.0, 0.5, 5, tfz::AxisKind::line}};
  const std::vector<tfz::Axis> xiax{{-2.0, 1.0, 5, tfz::AxisKind::line}};
  const SampledField v = tfz::stft_periodic(c, phi, xax, xiax);

  const auto direct = [&](double x, double xi) {
    cplx s = 0.0;
    const double h = 1.0 / 512;
    for (double y = x - 10.0; y < x + 10.0; y += h) {
      cplx fy = 0.0;
      for (int nu = -2; nu <= 2; ++nu) {
        const std::vector<int> idx{nu};
        fy += c.at(idx) * std::polar(1.0, static_cast<double>(nu) * y);
      }
      const std::vector<double> yv{y - x};
      s += fy * std::conj(phi.eval(yv)) * std::polar(1.0, -y * xi) * h;
    }
    return s / std::sqrt(2.0 * kPi);
  };
  double worst = 0.0;
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) {
      const std::vector<std::size_t> idx{i, j};
      worst = std::max(worst, std::abs(v.at(idx) - direct(xax[0].coord(i),
                                                          xiax[0].coord(j))));
    }
  CHECK(worst < 1e-6);
}

TEST_CASE("semidiscrete convolution with a delta sequence shifts the field") {
  const std::vector<double> lo{-4.0}, hi{4.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0])); }, lo, hi,
      0.25);
  tfz::LatticeSequence a{OrderedBasis::standard(1), {}};
  SUBCASE("identity") {
    a.terms[{0}] = 1.0;
    const SampledField g = tfz::semidiscrete_convolve(a, f);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::vector<double> p{g.axis(0).coord(i)};
      CHECK(std::abs(g.values()[i] - f.interp(p)) < 1e-12);
    }
  }
  SUBCASE("single shift") {
    a.terms[{1}] = cplx(0.0, 2.0);
    const SampledField g = tfz::semidiscrete_convolve(a, f);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const std::vector<double> p{g.axis(0).coord(i) - 1.0};
      CHECK(std::abs(g.values()[i] - cplx(0.0, 2.0) * f.interp(p)) < 1e-12);
    }
  }
}

TEST_CASE("partial STFT of the Zak field has the expected axis layout") {
  const SampledField f = unit_gaussian(1.0 / 64);
  const tfz::Window phi = tfz::gaussian_window(1.0, {0.0}, {0.0});
  const OrderedBasis e = OrderedBasis::standard(1);
  const SampledField v1 = tfz::partial_stft_zak(f, e, phi, 1, 32);
  CHECK(v1.dim() == 3);
  CHECK(v1.max_abs() > 0.0);
  const SampledField v2 = tfz::partial_stft_zak(f, e, phi, 2, 32);
  CHECK(v2.dim() == 3);
  CHECK(v2.max_abs() > 0.0);
}
