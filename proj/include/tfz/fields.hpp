#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "tfz/geometry.hpp"

namespace tfz {

using cplx = std::complex<double>;

enum class AxisKind { line, torus };

struct Axis {
  double origin = 0.0;
  double step = 1.0;
  std::size_t count = 0;
  AxisKind kind = AxisKind::line;

  double coord(std::size_t i) const { return origin + step * static_cast<double>(i); }
  double length() const { return step * static_cast<double>(count); }
};

// Complex values on a uniform grid, row-major with axis 0 slowest.
class SampledField {
 public:
  SampledField() = default;
  SampledField(std::vector<Axis> axes, std::vector<cplx> values);
  static SampledField zeros(std::vector<Axis> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const Axis& axis(int k) const { return axes_[static_cast<std::size_t>(k)]; }
  const std::vector<Axis>& axes() const { return axes_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<cplx>& values() const { return values_; }
  std::vector<cplx>& values() { return values_; }

  std::size_t stride(int k) const;
  std::size_t flat_index(std::span<const std::size_t> idx) const;
  cplx at(std::span<const std::size_t> idx) const { return values_[flat_index(idx)]; }
  cplx& at(std::span<const std::size_t> idx) { return values_[flat_index(idx)]; }
  std::vector<double> point(std::span<const std::size_t> idx) const;

  // Multilinear interpolation with an exact fast path when x falls on a grid
  // node.  Points outside the box evaluate to 0 (torus axes wrap).
  cplx interp(std::span<const double> x) const;

  double max_abs() const;
  double l2_norm() const;  // quadrature-weighted

  std::optional<OrderedBasis> basis;  // set when axes are basis coordinates

 private:
  std::vector<Axis> axes_;
  std::vector<cplx> values_;
};

// Lebesgue exponent vector in (0,inf]^d; infinity is its own state, never a
// large float.
class MixedExponent {
 public:
  static constexpr double inf = std::numeric_limits<double>::infinity();

  MixedExponent() = default;
  explicit MixedExponent(std::vector<double> entries);
  static MixedExponent scalar(double p, int dim);

  int dim() const { return static_cast<int>(finite_.size()); }
  bool is_inf(int k) const { return infinite_[static_cast<std::size_t>(k)]; }
  double value(int k) const;  // finite entries only
  double min() const;         // inf treated as larger than any finite entry
  MixedExponent head(int n) const;
  MixedExponent tail(int n) const;  // last n entries

 private:
  std::vector<double> finite_;
  std::vector<char> infinite_;
};

struct Window {
  double width = 1.0;
  std::vector<double> center;
  std::vector<double> modulation;

  cplx eval(std::span<const double> x) const;
  int dim() const { return static_cast<int>(center.size()); }
};

Window gaussian_window(double width, std::vector<double> center,
                       std::vector<double> modulation);

// Evaluable positive weight.  Exponential weights evaluate in log space.
class Weight {
 public:
  Weight();  // constant 1

  static Weight constant(double c);
  static Weight polynomial(double t);            // <x>^t
  static Weight exponential(double r, double s); // e^{r |x|^{1/s}}
  static Weight product(std::vector<Weight> factors);
  static Weight tensor(std::vector<Weight> parts, std::vector<int> dims);
  static Weight phase_separable(Weight omega0);  // w(x,xi) = w0(xi)

  double operator()(std::span<const double> x) const;
  double log_eval(std::span<const double> x) const;
  bool is_constant_one() const;

  void attach_majorant(Weight v);
  const std::shared_ptr<Weight>& majorant() const { return majorant_; }

 private:
  enum class Kind { constant, polynomial, exponential, product, tensor, phase };
  Kind kind_;
  double a_ = 1.0, b_ = 1.0;
  std::vector<Weight> children_;
  std::vector<int> dims_;
  std::shared_ptr<Weight> majorant_;
};

// Theta_rho v = v * <.>^rho, admissible when rho >= 2d(1/r - 1), strict
// inequality required in the r < 1 regime when `strict` is set.
Weight theta_weight(const Weight& v, double rho, double r, int d, bool strict);

struct ModerationReport {
  double constant = 0.0;  // max over pairs of w(x+y)/(w(x) v(y))
  std::vector<double> worst_x, worst_y;
  double consequence_constant = 0.0;  // max of w(x)/v(x) and 1/(w(x) v(-x))
  bool flagged_nonmoderate = false;
};

ModerationReport check_moderate(
    const Weight& omega, const Weight& v,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
    double flag_threshold = 1e6);

// Restriction to the grid points inside the half-open box [lo, hi).
SampledField crop(const SampledField& f, std::span<const double> lo,
                  std::span<const double> hi);

// Uniform sampling of a pointwise expression over a half-open box.
SampledField sample(const std::function<cplx(std::span<const double>)>& expr,
                    std::span<const double> lo, std::span<const double> hi,
                    double step);

SampledField sample_window(const Window& w, std::span<const double> lo,
                           std::span<const double> hi, double step);

}  // namespace tfz
