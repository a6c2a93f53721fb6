#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tfz/fields.hpp"
#include "tfz/geometry.hpp"
#include "tfz/transforms.hpp"

namespace tfz {

// Half-open box in basis coordinates, used for cell-restricted norms.
struct Box {
  std::vector<double> lo, hi;
};

struct NormValue {
  double value = 0.0;
  std::string family;
  std::vector<double> steps;  // grid resolution the value was computed at
};

// Inner mixed-Lebesgue spec for the nested (phase-space) norm families.
struct LebesgueSpec {
  OrderedBasis basis;
  MixedExponent q;
};

enum class ModKind { m, w };

// Reduce a dense magnitude array along its axes in the stated order (original
// axis ids).  Finite exponents accumulate |.|^q * step in the power domain;
// infinite exponents take maxima.  Building block for all norm families.
double reduce_mixed(std::vector<double> mag, std::vector<std::size_t> dims,
                    const std::vector<double>& steps, const MixedExponent& exps,
                    const std::vector<int>& order);

// Reinterpret or resample f onto basis coordinates of e (axes become the u
// grid with x = T_E u); exact reinterpretation for diagonal e on
// commensurate grids, multilinear resampling otherwise.
SampledField as_basis_coords(const SampledField& f, const OrderedBasis& e);

// Iterated one-axis L^{q_k} reduction, innermost (first) axis first, in
// E-coordinates with no Jacobian factor; infinite exponents take maxima.
NormValue mixed_lebesgue_norm(const SampledField& f, const OrderedBasis& e,
                              const MixedExponent& q, const Weight& omega,
                              const std::optional<Box>& domain = std::nullopt);

// Weighted mixed little-l^p of a finitely supported lattice sequence.
NormValue sequence_norm(const LatticeSequence& a, const MixedExponent& p,
                        const Weight& omega);

// Per-cell local L^r over the half-open cell partition j + [0,1)^d in
// E-coordinates, then weighted l^p over cells.
NormValue wiener_norm(const SampledField& f, const OrderedBasis& e,
                      const MixedExponent& r, const MixedExponent& p,
                      const Weight& omega0);

// Nested Wiener norm on a phase-space field with axes split x | xi.
// which = 1: Wiener-in-x per xi slice, then the b0 norm in xi.
// which = 2: b0 norm in xi per x slice, then Wiener-in-x.
NormValue wiener_phase_norm(const SampledField& f, int which, const OrderedBasis& e,
                            const MixedExponent& r, const MixedExponent& p,
                            const Weight& omega, const LebesgueSpec& b0);

// Mixed norm of the STFT: kind m reduces x (exponents p, basis e1) before xi
// (exponents q, basis e2); kind w reduces xi first.
NormValue modulation_norm(const SampledField& f, const Window& phi, ModKind kind,
                          const OrderedBasis& e1, const OrderedBasis& e2,
                          const MixedExponent& p, const MixedExponent& q,
                          const Weight& omega);

// Wiener-type modulation norm with the outer cell sequence in l^infinity.
NormValue script_norm(const SampledField& f, const Window& phi, ModKind kind,
                      const OrderedBasis& e, const MixedExponent& r,
                      const Weight& omega, const LebesgueSpec& b0);

// Weighted sequence norm of a Fourier-coefficient table over the dual lattice.
NormValue periodic_coefficient_norm(const FourierCoefficients& c,
                                    const MixedExponent& q, const Weight& omega0);

}  // namespace tfz
