#include <cmath>
#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "tfz/fft.hpp"

namespace {

std::vector<tfz::cplx> naive_dft(const std::vector<tfz::cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  std::vector<tfz::cplx> out(n);
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    tfz::cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double ang = sign * 2.0 * std::numbers::pi *
                         static_cast<double>(j % n) * static_cast<double>(k) /
                         static_cast<double>(n);
      s += a[j] * tfz::cplx(std::cos(ang), std::sin(ang));
    }
    out[k] = inverse ? s / static_cast<double>(n) : s;
  }
  return out;
}

}  // namespace

TEST_CASE("delta transforms to the constant vector") {
  std::vector<tfz::cplx> a(8, 0.0);
  a[0] = 1.0;
  tfz::fft(a);
  for (const auto& v : a) CHECK(std::abs(v - tfz::cplx(1.0)) < 1e-12);
}

TEST_CASE("forward then inverse is the identity") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {1u, 2u, 16u, 128u, 1024u}) {
    std::vector<tfz::cplx> a(n);
    for (auto& v : a) v = tfz::cplx(u(rng), u(rng));
    auto b = tfz::fft_copy(a);
    tfz::fft(b, true);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-10);
  }
}

TEST_CASE("discrete Parseval identity") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<tfz::cplx> a(256);
  for (auto& v : a) v = tfz::cplx(u(rng), u(rng));
  double time_energy = 0.0;
  for (const auto& v : a) time_energy += std::norm(v);
  tfz::fft(a);
  double freq_energy = 0.0;
  for (const auto& v : a) freq_energy += std::norm(v);
  CHECK(freq_energy == doctest::Approx(256.0 * time_energy).epsilon(1e-12));
}

TEST_CASE("non-power-of-two lengths match a direct DFT") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t n : {3u, 5u, 12u, 60u, 97u}) {
    std::vector<tfz::cplx> a(n);
    for (auto& v : a) v = tfz::cplx(u(rng), u(rng));
    const auto want = naive_dft(a, false);
    auto got = tfz::fft_copy(a);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - want[i]) < 1e-9);
    tfz::fft(got, true);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(got[i] - a[i]) < 1e-9);
  }
}
