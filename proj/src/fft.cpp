#include "tfz/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tfz {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang =
        2.0 * std::numbers::pi / static_cast<double>(len) * (inverse ? 1.0 : -1.0);
    const cplx wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      cplx w(1.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
}

// Bluestein: DFT of arbitrary length as a convolution of chirped sequences,
// carried out with a power-of-two FFT.
void fft_bluestein(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;

  const double sign = inverse ? 1.0 : -1.0;
  std::vector<cplx> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the phase argument small for large n.
    const std::size_t k2 = (static_cast<unsigned long long>(k) * k) % (2 * n);
    const double ang = std::numbers::pi * static_cast<double>(k2) / static_cast<double>(n);
    chirp[k] = cplx(std::cos(ang), sign * std::sin(ang));
  }

  std::vector<cplx> x(m, cplx(0.0)), y(m, cplx(0.0));
  for (std::size_t k = 0; k < n; ++k) x[k] = a[k] * chirp[k];
  y[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    y[k] = std::conj(chirp[k]);
    y[m - k] = std::conj(chirp[k]);
  }
  fft_pow2(x, false);
  fft_pow2(y, false);
  for (std::size_t k = 0; k < m; ++k) x[k] *= y[k];
  fft_pow2(x, true);
  for (std::size_t k = 0; k < m; ++k) x[k] /= static_cast<double>(m);

  for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
}

}  // namespace

void fft(std::vector<cplx>& a, bool inverse) {
  if (a.empty()) throw std::invalid_argument("fft: empty input");
  if (a.size() == 1) return;
  if (is_pow2(a.size())) {
    fft_pow2(a, inverse);
  } else {
    fft_bluestein(a, inverse);
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(a.size());
    for (auto& v : a) v *= s;
  }
}

std::vector<cplx> fft_copy(const std::vector<cplx>& a, bool inverse) {
  std::vector<cplx> out = a;
  fft(out, inverse);
  return out;
}

}  // namespace tfz
