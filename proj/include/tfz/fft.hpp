#pragma once

#include <complex>
#include <vector>

namespace tfz {

using cplx = std::complex<double>;

// In-place complex DFT, sign convention e^{-2pi i jk/N} for the forward
// direction.  Power-of-two lengths use an iterative radix-2 kernel;
// everything else goes through Bluestein's chirp algorithm.  The inverse
// includes the 1/N factor.
void fft(std::vector<cplx>& a, bool inverse = false);

std::vector<cplx> fft_copy(const std::vector<cplx>& a, bool inverse = false);

}  // namespace tfz
