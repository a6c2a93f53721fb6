#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tfz/experiments.hpp"

using tfz::cplx;
using tfz::MixedExponent;
using tfz::OrderedBasis;
using tfz::SampledField;
using tfz::SignalFamily;

TEST_CASE("signal families are deterministic and nonzero") {
  const SignalFamily fam = SignalFamily::random_bandlimited(3, 8, 123);
  CHECK(fam.size() == 3);
  const auto a = fam.generate(1.0 / 32);
  const auto b = fam.generate(1.0 / 32);
  REQUIRE(a.size() == 3);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].max_abs() > 0.0);
    for (std::size_t j = 0; j < a[i].size(); ++j)
      CHECK(a[i].values()[j] == b[i].values()[j]);
  }
  CHECK(SignalFamily::gaussian_dilates({0.5, 1.0}).size() == 2);
  CHECK(SignalFamily::hermite_like({0, 1, 2}).size() == 3);
}

TEST_CASE("equal norms produce a unit-spread equivalence report") {
  const SignalFamily fam = SignalFamily::gaussian_dilates({0.5, 1.0, 2.0});
  const tfz::NormFn l2 = [](const SampledField& f) { return f.l2_norm(); };
  const tfz::NormFn twice = [](const SampledField& f) { return 2.0 * f.l2_norm(); };
  const tfz::EquivalenceReport rep = tfz::run_equivalence(fam, "l2-vs-2l2", l2, twice);
  CHECK(rep.pass);
  CHECK(rep.spread == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.min_ratio == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.drift < 1e-12);
}

TEST_CASE("embedding check records a stable one-sided constant") {
  const SignalFamily fam = SignalFamily::gaussian_dilates({0.5, 1.0});
  const tfz::NormFn l2 = [](const SampledField& f) { return f.l2_norm(); };
  const tfz::NormFn half = [](const SampledField& f) { return 0.5 * f.l2_norm(); };
  const tfz::EquivalenceReport rep = tfz::check_embedding(fam, "half", l2, half);
  CHECK(rep.pass);
  CHECK(rep.max_ratio == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("semidiscrete Young inequality holds with constant one") {
  const tfz::YoungReport rep = tfz::check_young_semidiscrete(
      OrderedBasis::standard(1), MixedExponent::scalar(1.0, 1),
      MixedExponent::scalar(1.0, 1), 8, 2026);
  CHECK(rep.pass);
  CHECK(rep.max_constant <= 1.0 + 1e-9);
}

TEST_CASE("Zak transform preserves energy with the expected constant") {
  const std::vector<double> lo{-16.0}, hi{16.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0] / 2.0)); },
      lo, hi, 1.0 / 64);
  const double c = tfz::check_zak_parseval(f, OrderedBasis::standard(1));
  CHECK(c == doctest::Approx(std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-4));
}

TEST_CASE("decay-rate fit recovers the Gaussian STFT envelope") {
  // |F(x,xi)| = 2^{-1/2} e^{-(x^2+xi^2)/4}: with s = sigma = 1/2 the model
  // exponent is |x|^2 + |xi|^2 and the true rate is 1/4.
  const std::vector<double> lo{-6.0, -6.0}, hi{6.0, 6.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) {
        return cplx(std::exp(-(x[0] * x[0] + x[1] * x[1]) / 4.0) / std::sqrt(2.0));
      },
      lo, hi, 1.0 / 8);
  const tfz::DecayModel m = tfz::fit_gs_decay(f, 0.5, 0.5);
  CHECK(m.member);
  CHECK(m.rate == doctest::Approx(0.25).epsilon(0.05));
}

TEST_CASE("growth-mode fit flips the sign convention") {
  const std::vector<double> lo{-4.0, -4.0}, hi{4.0, 4.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) {
        return cplx(std::exp(0.1 * (x[0] * x[0] + x[1] * x[1])));
      },
      lo, hi, 1.0 / 8);
  const tfz::DecayModel m = tfz::fit_gs_decay(f, 0.5, 0.5, true);
  CHECK(m.rate == doctest::Approx(0.1).epsilon(0.05));
}

TEST_CASE("factorial growth bound matches the stationary-point value") {
  for (const auto& [r, s] : std::vector<std::pair<double, double>>{
           {1.0, 1.0}, {2.0, 1.0}, {1.0, 0.5}}) {
    const tfz::FactorialBoundReport rep = tfz::check_factorial_bound(r, s, 60);
    CHECK(rep.pass);
    const double want = std::pow(s * std::numbers::e / r, s);
    CHECK(rep.h <= rep.threshold);
    CHECK(rep.h == doctest::Approx(want).epsilon(0.1));
  }
}
