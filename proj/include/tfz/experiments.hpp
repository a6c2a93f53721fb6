#pragma once

#include <functional>
#include <string>
#include <vector>

#include "tfz/fields.hpp"
#include "tfz/geometry.hpp"
#include "tfz/norms.hpp"
#include "tfz/transforms.hpp"

namespace tfz {

// Deterministic one-dimensional test-signal generator.
class SignalFamily {
 public:
  static SignalFamily gaussian_dilates(std::vector<double> widths);
  static SignalFamily modulated_gaussians(std::vector<double> widths,
                                          std::vector<double> modulations);
  static SignalFamily hermite_like(std::vector<int> orders);
  static SignalFamily random_bandlimited(int count, int max_mode, unsigned seed);

  const std::string& id() const { return id_; }
  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::vector<SampledField> generate(double step, double half = 16.0) const;

 private:
  std::string id_;
  std::vector<std::string> labels_;
  std::vector<std::function<cplx(double)>> exprs_;
};

struct EquivalenceReport {
  std::string name;
  std::vector<double> ratios_coarse, ratios_fine;
  double min_ratio = 0.0, max_ratio = 0.0;
  double spread = 1.0;           // max/min of the fine-grid ratios
  double drift = 0.0;            // worst per-signal relative change across grids
  double spread_bound = 4.0, drift_bound = 0.05;
  bool degenerate = false;       // some norm vanished on a nonzero signal
  bool pass = false;
};

using NormFn = std::function<double(const SampledField&)>;

// Evaluate the ratio a/b over the family at two resolutions and summarize.
EquivalenceReport run_equivalence(const SignalFamily& family, const std::string& name,
                                  const NormFn& a, const NormFn& b,
                                  double spread_bound = 4.0,
                                  double coarse_step = 1.0 / 64,
                                  double fine_step = 1.0 / 128,
                                  double drift_bound = 0.05);

// One-sided version: records max ratio target/source (the empirical embedding
// constant); passes when finite and resolution-stable.
EquivalenceReport check_embedding(const SignalFamily& family, const std::string& name,
                                  const NormFn& source, const NormFn& target,
                                  double coarse_step = 1.0 / 64,
                                  double fine_step = 1.0 / 128);

double check_quasiperiodicity(const ZakField& z);
double check_echo_periodicity(const SampledField& g, const OrderedBasis& e);

struct YoungReport {
  double max_constant = 0.0;
  double drift = 0.0;
  bool pass = false;
};

// Semi-discrete Young inequality over random nonnegative pairs; the scalar
// p = r = 1 standard-basis case with periodic |f| must come out with
// constant <= 1 + 1e-9.
YoungReport check_young_semidiscrete(const OrderedBasis& e, const MixedExponent& p,
                                     const MixedExponent& r, int pairs, unsigned seed);

// ||Z_E f||_{L^2 over one cell pair} / ||f||_2 in standard-coordinate measure.
double check_zak_parseval(const SampledField& f, const OrderedBasis& e,
                          int cell_samples = 64);

EquivalenceReport check_zak_lebesgue(const SignalFamily& family, const OrderedBasis& e,
                                     double p, double r, const Window& phi,
                                     int cell_samples = 48);

struct ZakModulationReport {
  EquivalenceReport corollary;        // ||V_Phi(Z f)||_{L^p} vs ||f||_{M^p}
  double h_periodicity_defect = 0.0;  // E x E' periodicity of H
  std::vector<double> r_values;
  std::vector<double> r_spreads;      // per-r spread of N_r / N_inf over family
  bool pass = false;
};

ZakModulationReport check_zak_modulation(const SignalFamily& family,
                                         const OrderedBasis& e, double p,
                                         const Window& phi1, const Window& phi2,
                                         const StftZakParams& params = {});

struct PeriodicModReport {
  EquivalenceReport stft_side;   // coefficient norm vs iterated STFT norm
  double homogeneity_defect = 0.0;
  bool pass = false;
};

PeriodicModReport check_periodic_modulation(const OrderedBasis& e0, double q, double r,
                                            int polynomials, int max_terms,
                                            unsigned seed, const Window& phi);

struct DecayModel {
  double s = 0.0, sigma = 0.0;
  double rate = 0.0;       // fitted r
  double intercept = 0.0;  // fitted C
  double residual = 0.0;
  bool member = false;     // rate > 0 in decay mode
};

// Upper-envelope least-squares fit of log|F| against
// C -/+ r (|x|^{1/s} + |xi|^{1/sigma}) over radial shells.
DecayModel fit_gs_decay(const SampledField& f, double s, double sigma,
                        bool growth = false);

struct FactorialBoundReport {
  double h = 0.0;
  double threshold = 0.0;  // (se/r)^s * 1.1
  bool pass = false;
};

FactorialBoundReport check_factorial_bound(double r, double s, int beta_max);

EquivalenceReport check_window_independence(const SignalFamily& family,
                                            const Window& phi1, const Window& phi2,
                                            const std::function<double(
                                                const SampledField&, const Window&)>& norm,
                                            double spread_bound = 4.0);

}  // namespace tfz
