#include "tfz/fields.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace tfz {

SampledField::SampledField(std::vector<Axis> axes, std::vector<cplx> values)
    : axes_(std::move(axes)), values_(std::move(values)) {
  std::size_t n = 1;
  for (const auto& ax : axes_) {
    if (ax.count == 0 || ax.step <= 0.0)
      throw std::invalid_argument("SampledField: bad axis");
    n *= ax.count;
  }
  if (values_.size() != n)
    throw std::invalid_argument("SampledField: value count does not match axes");
}

SampledField SampledField::zeros(std::vector<Axis> axes) {
  std::size_t n = 1;
  for (const auto& ax : axes) n *= ax.count;
  return SampledField(std::move(axes), std::vector<cplx>(n, cplx(0.0)));
}

std::size_t SampledField::stride(int k) const {
  std::size_t s = 1;
  for (int j = k + 1; j < dim(); ++j) s *= axes_[static_cast<std::size_t>(j)].count;
  return s;
}

std::size_t SampledField::flat_index(std::span<const std::size_t> idx) const {
  std::size_t f = 0;
  for (int k = 0; k < dim(); ++k) f = f * axes_[static_cast<std::size_t>(k)].count + idx[k];
  return f;
}

std::vector<double> SampledField::point(std::span<const std::size_t> idx) const {
  std::vector<double> x(dim());
  for (int k = 0; k < dim(); ++k) x[k] = axes_[static_cast<std::size_t>(k)].coord(idx[k]);
  return x;
}

cplx SampledField::interp(std::span<const double> x) const {
  const int d = dim();
  std::vector<std::size_t> base(d);
  std::vector<double> frac(d);
  for (int k = 0; k < d; ++k) {
    const Axis& ax = axes_[static_cast<std::size_t>(k)];
    double t = (x[k] - ax.origin) / ax.step;
    if (ax.kind == AxisKind::torus) {
      const double n = static_cast<double>(ax.count);
      t = std::fmod(t, n);
      if (t < 0.0) t += n;
    }
    // Snap to grid nodes so commensurate evaluations stay exact.
    const double r = std::round(t);
    if (std::abs(t - r) < 1e-9) t = r;
    if (t < 0.0 || t > static_cast<double>(ax.count - 1)) {
      if (ax.kind == AxisKind::line) return cplx(0.0);
      t = std::fmod(t, static_cast<double>(ax.count));
    }
    const double fl = std::floor(t);
    base[k] = static_cast<std::size_t>(fl);
    frac[k] = t - fl;
  }
  cplx acc(0.0);
  const int corners = 1 << d;
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    std::size_t flat = 0;
    bool skip = false;
    for (int k = 0; k < d; ++k) {
      const Axis& ax = axes_[static_cast<std::size_t>(k)];
      const bool hi = (c >> k) & 1;
      double wk = hi ? frac[k] : 1.0 - frac[k];
      if (wk == 0.0) {
        skip = true;
        break;
      }
      std::size_t ik = base[k] + (hi ? 1 : 0);
      if (ik >= ax.count) {
        if (ax.kind == AxisKind::torus)
          ik -= ax.count;
        else {
          skip = true;
          break;
        }
      }
      w *= wk;
      flat = flat * ax.count + ik;
    }
    if (!skip) acc += w * values_[flat];
  }
  return acc;
}

double SampledField::max_abs() const {
  double m = 0.0;
  for (const auto& v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SampledField::l2_norm() const {
  double q = 1.0;
  for (const auto& ax : axes_) q *= ax.step;
  if (basis) q *= basis->cell_volume();
  double s = 0.0;
  for (const auto& v : values_) s += std::norm(v);
  return std::sqrt(s * q);
}

MixedExponent::MixedExponent(std::vector<double> entries) {
  for (double e : entries) {
    if (std::isinf(e)) {
      finite_.push_back(0.0);
      infinite_.push_back(1);
    } else {
      if (!(e > 0.0)) throw std::invalid_argument("MixedExponent: entries must be > 0");
      finite_.push_back(e);
      infinite_.push_back(0);
    }
  }
}

MixedExponent MixedExponent::scalar(double p, int dim) {
  return MixedExponent(std::vector<double>(static_cast<std::size_t>(dim), p));
}

double MixedExponent::value(int k) const {
  if (infinite_[static_cast<std::size_t>(k)])
    throw std::logic_error("MixedExponent: value() on infinite entry");
  return finite_[static_cast<std::size_t>(k)];
}

double MixedExponent::min() const {
  double m = inf;
  for (int k = 0; k < dim(); ++k)
    if (!is_inf(k)) m = std::min(m, value(k));
  return m;
}

MixedExponent MixedExponent::head(int n) const {
  std::vector<double> e;
  for (int k = 0; k < n; ++k) e.push_back(is_inf(k) ? inf : value(k));
  return MixedExponent(std::move(e));
}

MixedExponent MixedExponent::tail(int n) const {
  std::vector<double> e;
  for (int k = dim() - n; k < dim(); ++k) e.push_back(is_inf(k) ? inf : value(k));
  return MixedExponent(std::move(e));
}

cplx Window::eval(std::span<const double> x) const {
  double q = 0.0, phase = 0.0;
  for (int k = 0; k < dim(); ++k) {
    const double u = x[k] - center[static_cast<std::size_t>(k)];
    q += u * u;
    phase += x[k] * modulation[static_cast<std::size_t>(k)];
  }
  const double amp = std::exp(-q / (2.0 * width * width));
  return cplx(amp * std::cos(phase), amp * std::sin(phase));
}

Window gaussian_window(double width, std::vector<double> center,
                       std::vector<double> modulation) {
  if (!(width > 0.0)) throw std::invalid_argument("gaussian_window: width must be > 0");
  if (center.size() != modulation.size())
    throw std::invalid_argument("gaussian_window: center/modulation dim mismatch");
  return Window{width, std::move(center), std::move(modulation)};
}

Weight::Weight() : kind_(Kind::constant), a_(1.0) {}

Weight Weight::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("Weight: constant must be positive");
  Weight w;
  w.kind_ = Kind::constant;
  w.a_ = c;
  return w;
}

Weight Weight::polynomial(double t) {
  Weight w;
  w.kind_ = Kind::polynomial;
  w.a_ = t;
  return w;
}

Weight Weight::exponential(double r, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("Weight: exponential needs s > 0");
  Weight w;
  w.kind_ = Kind::exponential;
  w.a_ = r;
  w.b_ = s;
  return w;
}

Weight Weight::product(std::vector<Weight> factors) {
  Weight w;
  w.kind_ = Kind::product;
  w.children_ = std::move(factors);
  return w;
}

Weight Weight::tensor(std::vector<Weight> parts, std::vector<int> dims) {
  if (parts.size() != dims.size())
    throw std::invalid_argument("Weight::tensor: parts/dims mismatch");
  Weight w;
  w.kind_ = Kind::tensor;
  w.children_ = std::move(parts);
  w.dims_ = std::move(dims);
  return w;
}

Weight Weight::phase_separable(Weight omega0) {
  Weight w;
  w.kind_ = Kind::phase;
  w.children_.push_back(std::move(omega0));
  return w;
}

double Weight::log_eval(std::span<const double> x) const {
  switch (kind_) {
    case Kind::constant:
      return std::log(a_);
    case Kind::polynomial: {
      double q = 1.0;
      for (double v : x) q += v * v;
      return 0.5 * a_ * std::log(q);
    }
    case Kind::exponential: {
      double q = 0.0;
      for (double v : x) q += v * v;
      return a_ * std::pow(std::sqrt(q), 1.0 / b_);
    }
    case Kind::product: {
      double s = 0.0;
      for (const auto& c : children_) s += c.log_eval(x);
      return s;
    }
    case Kind::tensor: {
      double s = 0.0;
      std::size_t off = 0;
      for (std::size_t i = 0; i < children_.size(); ++i) {
        const std::size_t n = static_cast<std::size_t>(dims_[i]);
        s += children_[i].log_eval(x.subspan(off, n));
        off += n;
      }
      return s;
    }
    case Kind::phase: {
      const std::size_t half = x.size() / 2;
      return children_[0].log_eval(x.subspan(half));
    }
  }
  return 0.0;
}

double Weight::operator()(std::span<const double> x) const {
  return std::exp(log_eval(x));
}

bool Weight::is_constant_one() const {
  return kind_ == Kind::constant && a_ == 1.0;
}

void Weight::attach_majorant(Weight v) {
  majorant_ = std::make_shared<Weight>(std::move(v));
}

Weight theta_weight(const Weight& v, double rho, double r, int d, bool strict) {
  if (!(r > 0.0 && r <= 1.0))
    throw std::invalid_argument("theta_weight: r must lie in (0,1]");
  const double bound = 2.0 * d * (1.0 / r - 1.0);
  const bool ok = strict && r < 1.0 ? rho > bound : rho >= bound;
  if (!ok) {
    std::ostringstream msg;
    msg << "theta_weight: rho = " << rho << " violates rho >= 2d(1/r - 1) = " << bound
        << (strict && r < 1.0 ? " (strict)" : "");
    throw std::invalid_argument(msg.str());
  }
  return Weight::product({v, Weight::polynomial(rho)});
}

ModerationReport check_moderate(
    const Weight& omega, const Weight& v,
    const std::vector<std::pair<std::vector<double>, std::vector<double>>>& pairs,
    double flag_threshold) {
  if (pairs.empty()) throw std::invalid_argument("check_moderate: empty sample set");
  ModerationReport rep;
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [x, y] : pairs) {
    std::vector<double> xy(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xy[i] = x[i] + y[i];
    const double logc = omega.log_eval(xy) - omega.log_eval(x) - v.log_eval(y);
    if (logc > best) {
      best = logc;
      rep.worst_x = x;
      rep.worst_y = y;
    }
    std::vector<double> negx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) negx[i] = -x[i];
    // (moderateconseq): v(-x)^{-1} <= C w(x) and w(x) <= C v(x).
    const double c1 = -v.log_eval(negx) - omega.log_eval(x);
    const double c2 = omega.log_eval(x) - v.log_eval(x);
    rep.consequence_constant =
        std::max(rep.consequence_constant, std::exp(std::max(c1, c2)));
  }
  rep.constant = std::exp(best);
  rep.flagged_nonmoderate = rep.constant > flag_threshold;
  return rep;
}

SampledField crop(const SampledField& f, std::span<const double> lo,
                  std::span<const double> hi) {
  const int d = f.dim();
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
    throw std::invalid_argument("crop: box dimension mismatch");
  std::vector<std::size_t> first(static_cast<std::size_t>(d));
  std::vector<Axis> axes(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const Axis& ax = f.axis(k);
    const double i0 = std::ceil((lo[k] - ax.origin) / ax.step - 1e-9);
    const double i1 = std::ceil((hi[k] - ax.origin) / ax.step - 1e-9);  // exclusive
    const std::size_t a = static_cast<std::size_t>(std::max(0.0, i0));
    const std::size_t b =
        std::min(ax.count, static_cast<std::size_t>(std::max(0.0, i1)));
    if (b <= a) throw std::invalid_argument("crop: empty intersection with the grid");
    first[static_cast<std::size_t>(k)] = a;
    axes[static_cast<std::size_t>(k)] =
        Axis{ax.coord(a), ax.step, b - a, ax.kind};
  }
  SampledField out = SampledField::zeros(axes);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<std::size_t> src(static_cast<std::size_t>(d));
  for (std::size_t flat = 0; flat < out.size(); ++flat) {
    for (int k = 0; k < d; ++k)
      src[static_cast<std::size_t>(k)] =
          first[static_cast<std::size_t>(k)] + idx[static_cast<std::size_t>(k)];
    out.values()[flat] = f.at(src);
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < axes[static_cast<std::size_t>(k)].count) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return out;
}

SampledField sample(const std::function<cplx(std::span<const double>)>& expr,
                    std::span<const double> lo, std::span<const double> hi,
                    double step) {
  if (!(step > 0.0)) throw std::invalid_argument("sample: step must be > 0");
  const int d = static_cast<int>(lo.size());
  std::vector<Axis> axes(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    if (!(hi[k] > lo[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw std::invalid_argument("sample: box must be bounded with hi > lo");
    const std::size_t n =
        static_cast<std::size_t>(std::llround((hi[k] - lo[k]) / step));
    axes[static_cast<std::size_t>(k)] = Axis{lo[k], step, n, AxisKind::line};
  }
  SampledField f = SampledField::zeros(axes);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  for (std::size_t flat = 0; flat < f.size(); ++flat) {
    for (int k = 0; k < d; ++k) x[static_cast<std::size_t>(k)] = axes[static_cast<std::size_t>(k)].coord(idx[static_cast<std::size_t>(k)]);
    const cplx val = expr(x);
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) {
      std::ostringstream msg;
      msg << "sample: non-finite value at (";
      for (int k = 0; k < d; ++k) msg << (k ? ", " : "") << x[static_cast<std::size_t>(k)];
      msg << ")";
      throw std::runtime_error(msg.str());
    }
    f.values()[flat] = val;
    for (int k = d - 1; k >= 0; --k) {
      if (++idx[static_cast<std::size_t>(k)] < axes[static_cast<std::size_t>(k)].count) break;
      idx[static_cast<std::size_t>(k)] = 0;
    }
  }
  return f;
}

SampledField sample_window(const Window& w, std::span<const double> lo,
                           std::span<const double> hi, double step) {
  return sample([&w](std::span<const double> x) { return w.eval(x); }, lo, hi, step);
}

}  // namespace tfz
