#pragma once

#include <map>
#include <vector>

#include "tfz/fields.hpp"
#include "tfz/geometry.hpp"

namespace tfz {

// Dual grid of a line axis: xi_k = 2*pi*(k - N/2) / (N*step).
Axis dual_axis(const Axis& ax);

// Transform one axis to its dual with the (2*pi)^{-1/2} normalization and
// the origin phase correction, sign e^{-i<x,xi>} forward.
SampledField fourier_along(const SampledField& f, int axis, bool inverse = false);

// Full Fourier transform, (2*pi)^{-d/2} \int f(x) e^{-i<x,xi>} dx.
SampledField fourier(const SampledField& f);

// V_phi f(x,xi) = (2*pi)^{-d/2} \int f(y) conj(phi(y-x)) e^{-i<y,xi>} dy,
// on f's grid in x and the dual grid in xi (axes: x block then xi block).
SampledField stft(const SampledField& f, const Window& phi);

// Finite Zak transform, Zf(n,k) = sum_m f((n - mM) mod L) e^{2*pi i mk/N},
// MN = L; returned row-major M x N.
std::vector<cplx> finite_zak(const std::vector<cplx>& f, std::size_t m, std::size_t n);

// Zak transform on the doubled cell grid.  Axes are basis coordinates:
// u in [0, cells) for x (u-axis of E) and w in [0, cells) for xi (dual
// coordinates), cell_samples points per unit cell.
struct ZakField {
  SampledField data;            // 2d axes: u block then w block
  OrderedBasis basis;
  int cells = 2;                // cells per axis kept for defect checks
  int cell_samples = 64;
  double boundary_mass = 0.0;   // relative |f| at the truncation boundary
  double truncation_radius = 0.0;
  std::vector<int> lattice_lo, lattice_hi;  // j-sum range
};

ZakField zak(const SampledField& f, const OrderedBasis& e, int cell_samples = 64,
             int cells = 2);

// Max relative defect of both quasi-periodicity identities on the stored
// doubled grid: F(u+1_j, w) = e^{2 pi i w_j} F(u,w) and F(u, w+1_j) = F(u,w).
double quasiperiodicity_defect(const ZakField& z);

// Fourier-coefficient inversion of xi -> F(x,xi); diagonal bases only.
SampledField inverse_zak(const ZakField& z);

// Partial STFT of the Zak transform.
//   which = 1: (x,xi,eta) -> V_phi(Z_E f(.,xi))(x,eta)
//   which = 2: (x,xi,y)   -> V_phi(Z_E f(x,.))(xi,y)
// Output axes: cell coordinate grids for the untransformed pair (x in u-units,
// xi in w-units, xi_cells cells for the periodicity direction) and the dual
// grid of the long transform axis for the frequency variable.
SampledField partial_stft_zak(const SampledField& f, const OrderedBasis& e,
                              const Window& phi, int which, int cell_samples = 64,
                              int xi_cells = 1);

struct StftZakParams {
  int cell_samples = 32;   // output samples per cell in x and xi
  int cells = 1;           // output cells per axis (2 for periodicity checks)
  int grid_n = 256;        // integration grid points per axis
  double grid_half = 8.0;  // integration half-extent in x (xi scales by kappa(E'))
  int out_eta = 64;        // central frequency samples kept
  int out_y = 64;
};

// Full STFT of the quasi-periodically extended Zak field, d = 1 only.
// Output axes: x (standard units), xi (standard units), eta, y.
SampledField stft_of_zak(const SampledField& f, const OrderedBasis& e,
                         const Window& phi1, const Window& phi2,
                         const StftZakParams& params = {});

// Max relative defect of both echo-periodicity identities (d=1).
double echo_periodicity_defect(const SampledField& g, const OrderedBasis& e);

class FourierCoefficients {
 public:
  FourierCoefficients(OrderedBasis basis, std::vector<int> lo, std::vector<int> hi);

  const OrderedBasis& basis() const { return basis_; }
  const std::vector<int>& lo() const { return lo_; }
  const std::vector<int>& hi() const { return hi_; }
  bool contains(std::span<const int> nu) const;
  cplx& at(std::span<const int> nu);
  cplx at(std::span<const int> nu) const;
  std::size_t size() const { return table_.size(); }
  const std::vector<cplx>& table() const { return table_; }
  std::vector<cplx>& table() { return table_; }
  // Frequency alpha = T_{E'} nu in standard coordinates.
  std::vector<double> frequency(std::span<const int> nu) const;

 private:
  OrderedBasis basis_;
  std::vector<int> lo_, hi_;  // inclusive index box over Lambda'_E
  std::vector<cplx> table_;
};

// c(f,alpha) = |kappa(E)|^{-1} (f, e^{i<.,alpha>})_{L^2(kappa(E))} by FFT
// over one period cell; requires the grid to tile the cell evenly.
FourierCoefficients fourier_coefficients(const SampledField& f, const OrderedBasis& e,
                                         const std::vector<int>& cutoff_lo,
                                         const std::vector<int>& cutoff_hi);

SampledField synthesize_periodic(const FourierCoefficients& c,
                                 std::span<const double> lo,
                                 std::span<const double> hi, double step);

// Exact STFT of a trigonometric polynomial with a Gaussian window,
// evaluated on the given axes (x block then xi block, standard units).
SampledField stft_periodic(const FourierCoefficients& c, const Window& phi,
                           const std::vector<Axis>& x_axes,
                           const std::vector<Axis>& xi_axes);

struct LatticeSequence {
  OrderedBasis basis;
  std::map<std::vector<int>, cplx> terms;
};

// (a *_[E] f)(x) = sum_j a(j) f(x - j); output box shrinks to where every
// shift stays inside f's box.
SampledField semidiscrete_convolve(const LatticeSequence& a, const SampledField& f);

}  // namespace tfz
