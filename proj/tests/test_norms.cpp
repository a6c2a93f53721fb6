#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tfz/fields.hpp"
#include "tfz/geometry.hpp"
#include "tfz/norms.hpp"
#include "tfz/transforms.hpp"

using tfz::cplx;
using tfz::MixedExponent;
using tfz::OrderedBasis;
using tfz::SampledField;
using tfz::Weight;

namespace {

constexpr double kPi = std::numbers::pi;

SampledField random_field_2d(unsigned seed, double half, double step) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const std::vector<double> lo{-half, -half}, hi{half, half};
  SampledField f = tfz::sample(
      [&](std::span<const double> x) {
        const double env = std::exp(-(x[0] * x[0] + x[1] * x[1]) / 4.0);
        return cplx(env, 0.0);
      },
      lo, hi, step);
  for (auto& v : f.values()) v *= cplx(u(rng), u(rng));
  return f;
}

}  // namespace

TEST_CASE("every exponent gives norm 1 on the unit-cell indicator") {
  const std::vector<double> lo{0.0}, hi{1.0};
  const SampledField ind =
      tfz::sample([](std::span<const double>) { return cplx(1.0); }, lo, hi, 1.0 / 8);
  const OrderedBasis e = OrderedBasis::standard(1);
  for (double q : {0.5, 1.0, 2.0, 7.0}) {
    CHECK(tfz::mixed_lebesgue_norm(ind, e, MixedExponent::scalar(q, 1), Weight())
              .value == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(tfz::mixed_lebesgue_norm(ind, e, MixedExponent::scalar(MixedExponent::inf, 1),
                                 Weight())
            .value == doctest::Approx(1.0));
}

TEST_CASE("equal exponents collapse to the classic Lebesgue norm") {
  const SampledField f = random_field_2d(19, 4.0, 0.25);
  for (double p : {0.5, 1.0, 2.0}) {
    double acc = 0.0;
    for (const auto& v : f.values()) acc += std::pow(std::abs(v), p) * 0.25 * 0.25;
    const double want = std::pow(acc, 1.0 / p);
    const double got = tfz::mixed_lebesgue_norm(f, OrderedBasis::standard(2),
                                                MixedExponent::scalar(p, 2), Weight())
                           .value;
    CHECK(got == doctest::Approx(want).epsilon(1e-12));
  }
}

TEST_CASE("separable data factorizes the mixed norm") {
  const std::vector<double> lo{-8.0, -8.0}, hi{8.0, 8.0};
  const auto g1 = [](double x) { return std::exp(-x * x); };
  const auto h1 = [](double y) { return 1.0 / (1.0 + y * y); };
  const SampledField f = tfz::sample(
      [&](std::span<const double> x) { return cplx(g1(x[0]) * h1(x[1])); }, lo, hi,
      1.0 / 16);
  const double got = tfz::mixed_lebesgue_norm(f, OrderedBasis::standard(2),
                                              MixedExponent({1.0, 2.0}), Weight())
                         .value;
  double n1 = 0.0, n2 = 0.0;
  for (double x = -8.0; x < 8.0; x += 1.0 / 16) n1 += g1(x) / 16.0;
  for (double y = -8.0; y < 8.0; y += 1.0 / 16) n2 += h1(y) * h1(y) / 16.0;
  CHECK(got == doctest::Approx(n1 * std::sqrt(n2)).epsilon(1e-12));
}

TEST_CASE("sub-one exponents obey the power triangle inequality") {
  const SampledField f = random_field_2d(5, 4.0, 0.25);
  const SampledField g = random_field_2d(6, 4.0, 0.25);
  SampledField sum = f;
  for (std::size_t i = 0; i < sum.size(); ++i) sum.values()[i] += g.values()[i];
  const OrderedBasis e = OrderedBasis::standard(2);
  const double q = 0.5;
  const auto norm = [&](const SampledField& h) {
    return tfz::mixed_lebesgue_norm(h, e, MixedExponent::scalar(q, 2), Weight()).value;
  };
  CHECK(std::pow(norm(sum), q) <= std::pow(norm(f), q) + std::pow(norm(g), q) + 1e-9);
}

TEST_CASE("Hoelder inequality holds with constant one") {
  const SampledField f = random_field_2d(31, 4.0, 0.25);
  const SampledField g = random_field_2d(32, 4.0, 0.25);
  SampledField prod = f;
  for (std::size_t i = 0; i < prod.size(); ++i) prod.values()[i] *= g.values()[i];
  const OrderedBasis e = OrderedBasis::standard(2);
  const auto norm = [&](const SampledField& h, double p) {
    return tfz::mixed_lebesgue_norm(h, e, MixedExponent::scalar(p, 2), Weight()).value;
  };
  CHECK(norm(prod, 1.0) <= norm(f, 2.0) * norm(g, 2.0) + 1e-12);
}

TEST_CASE("domain restriction keeps only the requested cell") {
  const std::vector<double> lo{-2.0}, hi{2.0};
  const SampledField f =
      tfz::sample([](std::span<const double>) { return cplx(1.0); }, lo, hi, 1.0 / 8);
  tfz::Box cell{{0.0}, {1.0}};
  const double got =
      tfz::mixed_lebesgue_norm(f, OrderedBasis::standard(1),
                               MixedExponent::scalar(1.0, 1), Weight(), cell)
          .value;
  CHECK(got == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("dilated basis divides out the cell measure") {
  // In basis coordinates u = x/2 the indicator of [0,2) is the unit cell.
  const std::vector<double> lo{0.0}, hi{2.0};
  const SampledField f =
      tfz::sample([](std::span<const double>) { return cplx(1.0); }, lo, hi, 1.0 / 8);
  const double got = tfz::mixed_lebesgue_norm(f, OrderedBasis::diagonal({2.0}),
                                              MixedExponent::scalar(1.0, 1), Weight())
                         .value;
  CHECK(got == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lattice sequence norms") {
  tfz::LatticeSequence a{OrderedBasis::standard(1), {}};
  a.terms[{-1}] = cplx(3.0, 4.0);
  a.terms[{2}] = cplx(0.0, -2.0);
  CHECK(tfz::sequence_norm(a, MixedExponent::scalar(1.0, 1), Weight()).value ==
        doctest::Approx(7.0).epsilon(1e-12));
  CHECK(tfz::sequence_norm(a, MixedExponent::scalar(MixedExponent::inf, 1), Weight())
            .value == doctest::Approx(5.0).epsilon(1e-12));
  // Polynomial weight evaluates at the lattice point.
  const double w1 = std::sqrt(2.0), w2 = std::sqrt(5.0);
  CHECK(tfz::sequence_norm(a, MixedExponent::scalar(1.0, 1), Weight::polynomial(1.0))
            .value == doctest::Approx(5.0 * w1 + 2.0 * w2).epsilon(1e-12));
}

TEST_CASE("Wiener norm with matching exponents equals the Lebesgue norm") {
  const std::vector<double> lo{-8.0}, hi{8.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0] / 2.0)); },
      lo, hi, 1.0 / 16);
  const OrderedBasis e = OrderedBasis::standard(1);
  for (double p : {1.0, 2.0}) {
    const double wie = tfz::wiener_norm(f, e, MixedExponent::scalar(p, 1),
                                        MixedExponent::scalar(p, 1), Weight())
                           .value;
    const double leb =
        tfz::mixed_lebesgue_norm(f, e, MixedExponent::scalar(p, 1), Weight()).value;
    CHECK(wie == doctest::Approx(leb).epsilon(1e-12));
  }
}

TEST_CASE("amalgam of local sup and summed cells dominates the L1 norm") {
  const SampledField f = random_field_2d(44, 4.0, 0.25);
  const OrderedBasis e = OrderedBasis::standard(2);
  const double amal =
      tfz::wiener_norm(f, e, MixedExponent::scalar(MixedExponent::inf, 2),
                       MixedExponent::scalar(1.0, 2), Weight())
          .value;
  const double l1 =
      tfz::mixed_lebesgue_norm(f, e, MixedExponent::scalar(1.0, 2), Weight()).value;
  CHECK(l1 <= amal + 1e-12);
}

TEST_CASE("wiener norm rejects grids coarser than four samples per cell") {
  const std::vector<double> lo{0.0}, hi{4.0};
  const SampledField f =
      tfz::sample([](std::span<const double>) { return cplx(1.0); }, lo, hi, 0.5);
  CHECK_THROWS(tfz::wiener_norm(f, OrderedBasis::standard(1),
                                MixedExponent::scalar(1.0, 1),
                                MixedExponent::scalar(1.0, 1), Weight()));
}

TEST_CASE("modulation norm with exponents two recovers the orthogonality constant") {
  const std::vector<double> lo{-8.0}, hi{8.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0] / 2.0)); },
      lo, hi, 1.0 / 32);
  const tfz::Window phi = tfz::gaussian_window(1.0, {0.0}, {0.0});
  const OrderedBasis e = OrderedBasis::standard(1);
  const double m22 = tfz::modulation_norm(f, phi, tfz::ModKind::m, e, e,
                                          MixedExponent::scalar(2.0, 1),
                                          MixedExponent::scalar(2.0, 1), Weight())
                         .value;
  // ||f||_2 ||phi||_2 = pi^{1/4} * pi^{1/4}.
  CHECK(m22 == doctest::Approx(std::sqrt(kPi)).epsilon(1e-4));
  const double w22 = tfz::modulation_norm(f, phi, tfz::ModKind::w, e, e,
                                          MixedExponent::scalar(2.0, 1),
                                          MixedExponent::scalar(2.0, 1), Weight())
                         .value;
  CHECK(w22 == doctest::Approx(m22).epsilon(1e-12));
}

TEST_CASE("nested phase-space Wiener norms are finite and comparable") {
  const std::vector<double> lo{-8.0}, hi{8.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0] / 2.0)); },
      lo, hi, 1.0 / 32);
  const tfz::Window phi = tfz::gaussian_window(1.0, {0.0}, {0.0});
  const SampledField v = tfz::stft(f, phi);
  const OrderedBasis e = OrderedBasis::standard(1);
  const tfz::LebesgueSpec b0{e.dual(), MixedExponent::scalar(1.0, 1)};
  const double n1 = tfz::wiener_phase_norm(v, 1, e, MixedExponent::scalar(2.0, 1),
                                           MixedExponent::scalar(1.0, 1), Weight(), b0)
                        .value;
  const double n2 = tfz::wiener_phase_norm(v, 2, e, MixedExponent::scalar(2.0, 1),
                                           MixedExponent::scalar(1.0, 1), Weight(), b0)
                        .value;
  CHECK(n1 > 0.0);
  CHECK(n2 > 0.0);
  CHECK(std::max(n1, n2) / std::min(n1, n2) < 4.0);
}

TEST_CASE("coefficient-table sequence norm") {
  const OrderedBasis e0 = OrderedBasis::diagonal({2.0 * kPi});
  tfz::FourierCoefficients c(e0, {-1}, {1});
  const std::vector<int> im1{-1}, i0{0}, i1{1};
  c.at(im1) = cplx(0.0, 3.0);
  c.at(i0) = cplx(4.0, 0.0);
  c.at(i1) = cplx(0.0, 0.0);
  CHECK(tfz::periodic_coefficient_norm(c, MixedExponent::scalar(2.0, 1), Weight())
            .value == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(tfz::periodic_coefficient_norm(c, MixedExponent::scalar(1.0, 1), Weight())
            .value == doctest::Approx(7.0).epsilon(1e-12));
}
