#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tfz/fields.hpp"

using tfz::cplx;
using tfz::MixedExponent;
using tfz::SampledField;
using tfz::Weight;

TEST_CASE("mixed exponent keeps infinity as a distinct state") {
  const MixedExponent q({1.0, MixedExponent::inf, 2.0});
  CHECK(q.dim() == 3);
  CHECK(!q.is_inf(0));
  CHECK(q.is_inf(1));
  CHECK(q.value(2) == 2.0);
  CHECK(q.min() == 1.0);
  CHECK(q.head(2).is_inf(1));
  CHECK(q.tail(1).value(0) == 2.0);
}

TEST_CASE("sampling covers the half-open box") {
  const std::vector<double> lo{-1.0}, hi{1.0};
  const SampledField f =
      tfz::sample([](std::span<const double> x) { return cplx(x[0]); }, lo, hi, 0.5);
  CHECK(f.axis(0).count == 4);
  CHECK(f.axis(0).coord(0) == doctest::Approx(-1.0));
  CHECK(f.axis(0).coord(3) == doctest::Approx(0.5));
}

TEST_CASE("interpolation is exact on grid nodes and multilinear between them") {
  const std::vector<double> lo{0.0, 0.0}, hi{2.0, 2.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(x[0] + 2.0 * x[1]); }, lo, hi, 0.5);
  const std::vector<double> node{1.0, 1.5};
  CHECK(std::abs(f.interp(node) - cplx(4.0)) < 1e-12);
  const std::vector<double> mid{0.75, 0.25};  // bilinear reproduces affine data
  CHECK(std::abs(f.interp(mid) - cplx(1.25)) < 1e-12);
  const std::vector<double> outside{5.0, 0.0};
  CHECK(std::abs(f.interp(outside)) == 0.0);
}

TEST_CASE("quadrature l2 norm of a unit Gaussian") {
  const std::vector<double> lo{-16.0}, hi{16.0};
  const SampledField f = tfz::sample(
      [](std::span<const double> x) { return cplx(std::exp(-x[0] * x[0] / 2.0)); },
      lo, hi, 1.0 / 64);
  // ||e^{-x^2/2}||_2 = pi^{1/4}.
  CHECK(f.l2_norm() ==
        doctest::Approx(std::pow(std::numbers::pi, 0.25)).epsilon(1e-8));
}

TEST_CASE("gaussian window modulation and centering") {
  const tfz::Window w = tfz::gaussian_window(2.0, {1.0}, {3.0});
  const std::vector<double> x{1.0};
  const cplx v = w.eval(x);
  CHECK(std::abs(v) == doctest::Approx(1.0));
  CHECK(std::arg(v) == doctest::Approx(3.0));
  const std::vector<double> y{3.0};
  CHECK(std::abs(w.eval(y)) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("polynomial and exponential weights evaluate in log space") {
  const Weight p = Weight::polynomial(2.0);
  const std::vector<double> x{3.0, 4.0};
  CHECK(p(x) == doctest::Approx(26.0).epsilon(1e-12));  // (1+25)^{2/2}
  const Weight e = Weight::exponential(1.5, 0.5);
  const std::vector<double> z{2.0};
  CHECK(e.log_eval(z) == doctest::Approx(1.5 * 4.0).epsilon(1e-12));
  CHECK(Weight()(x) == 1.0);
  CHECK(Weight().is_constant_one());
}

TEST_CASE("phase-separable weight only sees the frequency block") {
  const Weight w = Weight::phase_separable(Weight::polynomial(1.0));
  const std::vector<double> a{100.0, 0.0};
  CHECK(w(a) == doctest::Approx(1.0));
  const std::vector<double> b{0.0, 1.0};
  CHECK(w(b) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("polynomial weights are self-moderate with the Peetre constant") {
  const double t = 1.5;
  const Weight w = Weight::polynomial(t);
  const Weight v = Weight::polynomial(std::abs(t));
  std::vector<std::pair<std::vector<double>, std::vector<double>>> pairs;
  for (double x = -6.0; x <= 6.0; x += 0.75)
    for (double y = -6.0; y <= 6.0; y += 0.75)
      pairs.push_back({{x}, {y}});
  const tfz::ModerationReport rep = tfz::check_moderate(w, v, pairs);
  CHECK(rep.constant <= std::pow(2.0, std::abs(t) / 2.0) + 1e-9);
  CHECK(!rep.flagged_nonmoderate);
}

TEST_CASE("theta weight admissibility threshold at r = 1/2 in one dimension") {
  const Weight v;
  // Bound is 2d(1/r - 1) = 2; strict inequality applies for r < 1.
  CHECK_THROWS(tfz::theta_weight(v, 1.9, 0.5, 1, true));
  CHECK_THROWS(tfz::theta_weight(v, 2.0, 0.5, 1, true));
  CHECK_NOTHROW(tfz::theta_weight(v, 2.1, 0.5, 1, true));
  CHECK_NOTHROW(tfz::theta_weight(v, 0.0, 1.0, 1, true));
  const Weight th = tfz::theta_weight(v, 2.1, 0.5, 1, true);
  const std::vector<double> x{1.0};
  CHECK(th(x) == doctest::Approx(std::pow(2.0, 1.05)).epsilon(1e-12));
}
