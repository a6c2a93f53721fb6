#include "tfz/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tfz/fft.hpp"
#include "tfz/parallel.hpp"

namespace tfz {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double inv_sqrt_2pi = 0.3989422804014327;  // (2*pi)^{-1/2}

// One axis factor of the (tensor) Gaussian window at offset z.
cplx window_factor(const Window& w, int k, double z) {
  const double c = w.center[static_cast<std::size_t>(k)];
  const double m = w.modulation[static_cast<std::size_t>(k)];
  const double g = (z - c) / w.width;
  return std::polar(std::exp(-0.5 * g * g), m * z);
}

std::vector<std::size_t> decode(std::size_t flat, const std::vector<Axis>& axes) {
  std::vector<std::size_t> idx(axes.size());
  for (std::size_t k = axes.size(); k-- > 0;) {
    idx[k] = flat % axes[k].count;
    flat /= axes[k].count;
  }
  return idx;
}

void conj_in_place(std::vector<cplx>& v) {
  for (auto& z : v) z = std::conj(z);
}

}  // namespace

Axis dual_axis(const Axis& ax) {
  if (ax.count == 0) throw std::invalid_argument("dual_axis: empty axis");
  Axis out;
  out.step = two_pi / (ax.step * static_cast<double>(ax.count));
  out.count = ax.count;
  out.origin = -out.step * static_cast<double>(ax.count / 2);
  out.kind = AxisKind::line;
  return out;
}

SampledField fourier_along(const SampledField& f, int axis, bool inverse) {
  if (axis < 0 || axis >= f.dim()) throw std::invalid_argument("fourier_along: bad axis");
  if (inverse) {
    SampledField g = f;
    conj_in_place(g.values());
    SampledField out = fourier_along(g, axis, false);
    conj_in_place(out.values());
    return out;
  }
  const Axis ax = f.axis(axis);
  const std::size_t n = ax.count;
  const Axis dax = dual_axis(ax);
  const std::size_t half = n / 2;

  std::vector<cplx> twiddle(n), scale(n);
  for (std::size_t m = 0; m < n; ++m)
    twiddle[m] = std::polar(1.0, two_pi * static_cast<double>(m) *
                                     static_cast<double>(half) / static_cast<double>(n));
  const double amp = ax.step * inv_sqrt_2pi;
  for (std::size_t k = 0; k < n; ++k)
    scale[k] = std::polar(amp, -ax.origin * dax.coord(k));

  std::vector<Axis> axes = f.axes();
  axes[static_cast<std::size_t>(axis)] = dax;
  SampledField out = SampledField::zeros(axes);

  const std::size_t stride = f.stride(axis);
  const std::size_t block = stride * n;
  const std::size_t blocks = f.size() / block;
  std::vector<cplx> line(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t lo = 0; lo < stride; ++lo) {
      const std::size_t base = b * block + lo;
      for (std::size_t m = 0; m < n; ++m)
        line[m] = f.values()[base + m * stride] * twiddle[m];
      fft(line);
      for (std::size_t k = 0; k < n; ++k)
        out.values()[base + k * stride] = line[k] * scale[k];
    }
  }
  return out;
}

SampledField fourier(const SampledField& f) {
  SampledField out = f;
  for (int k = 0; k < f.dim(); ++k) out = fourier_along(out, k);
  return out;
}

SampledField stft(const SampledField& f, const Window& phi) {
  const int d = f.dim();
  if (phi.dim() != d) throw std::invalid_argument("stft: window dimension mismatch");
  for (int k = 0; k < d; ++k)
    if (f.axis(k).kind != AxisKind::line)
      throw std::invalid_argument("stft: line-segment axes required");
  // The window must die out well inside the box, otherwise the per-position
  // FFT silently truncates the integral.
  double shortest = std::numeric_limits<double>::infinity();
  for (int k = 0; k < d; ++k) shortest = std::min(shortest, f.axis(k).length());
  const double edge = 0.5 * shortest / phi.width;
  if (std::exp(-0.5 * edge * edge) > 1e-10)
    throw std::invalid_argument("stft: window too wide for the sampling box");

  // Per-axis offset tables: the window argument y - x only takes values
  // (m - j) * step along each axis.
  std::vector<std::vector<cplx>> table(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const Axis& ax = f.axis(k);
    const std::size_t n = ax.count;
    table[static_cast<std::size_t>(k)].resize(2 * n - 1);
    for (std::size_t t = 0; t < 2 * n - 1; ++t) {
      const double z = (static_cast<double>(t) - static_cast<double>(n - 1)) * ax.step;
      table[static_cast<std::size_t>(k)][t] = std::conj(window_factor(phi, k, z));
    }
  }

  std::vector<Axis> axes = f.axes();
  for (int k = 0; k < d; ++k) axes.push_back(dual_axis(f.axis(k)));
  SampledField out = SampledField::zeros(axes);

  const std::size_t nx = f.size();
  parallel_for(nx, [&](std::size_t jx) {
    const std::vector<std::size_t> xj = decode(jx, f.axes());
    std::vector<cplx> h(nx);
    for (std::size_t m = 0; m < nx; ++m) {
      const std::vector<std::size_t> ym = decode(m, f.axes());
      cplx w(1.0);
      for (int k = 0; k < d; ++k) {
        const std::size_t n = f.axis(k).count;
        w *= table[static_cast<std::size_t>(k)][ym[static_cast<std::size_t>(k)] -
                                                xj[static_cast<std::size_t>(k)] + n - 1];
      }
      h[m] = f.values()[m] * w;
    }
    SampledField hf = fourier(SampledField(f.axes(), std::move(h)));
    std::copy(hf.values().begin(), hf.values().end(), out.values().begin() + jx * nx);
  });
  return out;
}

std::vector<cplx> finite_zak(const std::vector<cplx>& f, std::size_t m, std::size_t n) {
  const std::size_t l = f.size();
  if (m == 0 || n == 0 || m * n != l)
    throw std::invalid_argument("finite_zak: need M*N == signal length");
  std::vector<cplx> out(l);
  std::vector<cplx> line(n);
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t t = 0; t < n; ++t)
      line[t] = f[(j + l - (t * m) % l) % l];
    fft(line, /*inverse=*/true);  // supplies the e^{+2 pi i mk/N} kernel and 1/N
    for (std::size_t k = 0; k < n; ++k)
      out[j * n + k] = line[k] * static_cast<double>(n);
  }
  return out;
}

namespace {

struct LatticeRange {
  std::vector<int> lo, hi;  // inclusive n-range covering f's support in u-space
};

// Bounding box, in E-coordinates, of f's sampling box, padded so the shifts
// u - n sweep every point of [0, cells)^d.
LatticeRange zak_lattice_range(const SampledField& f, const OrderedBasis& e, int cells) {
  const int d = f.dim();
  std::vector<double> blo(static_cast<std::size_t>(d),
                          std::numeric_limits<double>::infinity());
  std::vector<double> bhi(static_cast<std::size_t>(d),
                          -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < (std::size_t{1} << d); ++c) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const Axis& ax = f.axis(k);
      x[static_cast<std::size_t>(k)] =
          ((c >> k) & 1) ? ax.origin + ax.step * static_cast<double>(ax.count - 1)
                         : ax.origin;
    }
    const std::vector<double> u = e.coords(x);
    for (int k = 0; k < d; ++k) {
      blo[static_cast<std::size_t>(k)] = std::min(blo[static_cast<std::size_t>(k)],
                                                  u[static_cast<std::size_t>(k)]);
      bhi[static_cast<std::size_t>(k)] = std::max(bhi[static_cast<std::size_t>(k)],
                                                  u[static_cast<std::size_t>(k)]);
    }
  }
  LatticeRange r;
  for (int k = 0; k < d; ++k) {
    const double lo = blo[static_cast<std::size_t>(k)];
    const double hi = bhi[static_cast<std::size_t>(k)];
    if (hi - lo < 8.0)
      throw std::invalid_argument("zak: sampling box covers fewer than 8 lattice cells");
    r.lo.push_back(static_cast<int>(std::floor(-hi)) - 1);
    r.hi.push_back(static_cast<int>(std::ceil(static_cast<double>(cells) - lo)) + 1);
  }
  return r;
}

double relative_boundary_mass(const SampledField& f) {
  const double peak = f.max_abs();
  if (peak == 0.0) return 0.0;
  double edge = 0.0;
  const std::size_t n = f.size();
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t rem = i;
    bool boundary = false;
    for (int k = f.dim(); k-- > 0;) {
      const std::size_t c = f.axis(k).count;
      const std::size_t j = rem % c;
      rem /= c;
      if (j == 0 || j + 1 == c) boundary = true;
    }
    if (boundary) edge = std::max(edge, std::abs(f.values()[i]));
  }
  return edge / peak;
}

}  // namespace

ZakField zak(const SampledField& f, const OrderedBasis& e, int cell_samples, int cells) {
  const int d = f.dim();
  if (e.dim() != d) throw std::invalid_argument("zak: basis dimension mismatch");
  if (cell_samples < 2 || cells < 1) throw std::invalid_argument("zak: bad grid request");
  for (int k = 0; k < d; ++k)
    if (f.axis(k).kind != AxisKind::line)
      throw std::invalid_argument("zak: line-segment axes required");

  const double bmass = relative_boundary_mass(f);
  if (bmass > 1e-12)
    throw std::invalid_argument("zak: insufficient decay at the box boundary (mass " +
                                std::to_string(bmass) + ")");
  const LatticeRange range = zak_lattice_range(f, e, cells);

  const std::size_t cs = static_cast<std::size_t>(cell_samples);
  const std::size_t per_axis = cs * static_cast<std::size_t>(cells);
  std::vector<Axis> axes;
  for (int k = 0; k < 2 * d; ++k)
    axes.push_back(Axis{0.0, 1.0 / static_cast<double>(cell_samples), per_axis,
                        AxisKind::line});
  ZakField z{SampledField::zeros(axes), e, cells, cell_samples, bmass, 0.0, range.lo,
             range.hi};
  for (int k = 0; k < d; ++k) {
    const Axis& ax = f.axis(k);
    z.truncation_radius = std::max(
        z.truncation_radius,
        std::max(std::abs(ax.origin),
                 std::abs(ax.origin + ax.step * static_cast<double>(ax.count - 1))));
  }

  std::vector<std::size_t> nspan(static_cast<std::size_t>(d));
  std::size_t nterms = 1;
  for (int k = 0; k < d; ++k) {
    nspan[static_cast<std::size_t>(k)] =
        static_cast<std::size_t>(range.hi[static_cast<std::size_t>(k)] -
                                 range.lo[static_cast<std::size_t>(k)] + 1);
    nterms *= nspan[static_cast<std::size_t>(k)];
  }

  const std::size_t ux_total = [&] {
    std::size_t t = 1;
    for (int k = 0; k < d; ++k) t *= per_axis;
    return t;
  }();
  const std::size_t wcell = [&] {
    std::size_t t = 1;
    for (int k = 0; k < d; ++k) t *= cs;
    return t;
  }();
  std::vector<Axis> uaxes(axes.begin(), axes.begin() + d);

  parallel_for(ux_total, [&](std::size_t iu) {
    const std::vector<std::size_t> uidx = decode(iu, uaxes);
    std::vector<double> u(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k)
      u[static_cast<std::size_t>(k)] = static_cast<double>(uidx[static_cast<std::size_t>(k)]) /
                                       static_cast<double>(cell_samples);

    // Fold the lattice sum modulo cell_samples, then evaluate the trig
    // polynomial in w on the cell grid by one inverse FFT per axis.
    std::vector<cplx> folded(wcell, cplx(0.0));
    std::vector<std::size_t> nidx(static_cast<std::size_t>(d), 0);
    std::vector<double> shifted(static_cast<std::size_t>(d));
    for (std::size_t t = 0; t < nterms; ++t) {
      std::size_t rem = t, flat = 0;
      for (int k = d - 1; k >= 0; --k) {
        nidx[static_cast<std::size_t>(k)] = rem % nspan[static_cast<std::size_t>(k)];
        rem /= nspan[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < d; ++k) {
        const int n = range.lo[static_cast<std::size_t>(k)] +
                      static_cast<int>(nidx[static_cast<std::size_t>(k)]);
        shifted[static_cast<std::size_t>(k)] = u[static_cast<std::size_t>(k)] -
                                               static_cast<double>(n);
        const int fold = ((n % static_cast<int>(cs)) + static_cast<int>(cs)) %
                         static_cast<int>(cs);
        flat = flat * cs + static_cast<std::size_t>(fold);
      }
      const std::vector<double> y = e.map(shifted);
      const cplx v = f.interp(y);
      if (v != cplx(0.0)) folded[flat] += v;
    }
    // d-dimensional inverse DFT times cs^d gives sum_n a_n e^{2 pi i <n,k>/cs}.
    std::vector<cplx> line(cs);
    for (int k = 0; k < d; ++k) {
      std::size_t stride = 1;
      for (int j = k + 1; j < d; ++j) stride *= cs;
      const std::size_t block = stride * cs;
      for (std::size_t b = 0; b < wcell / block; ++b)
        for (std::size_t lo = 0; lo < stride; ++lo) {
          const std::size_t base = b * block + lo;
          for (std::size_t s = 0; s < cs; ++s) line[s] = folded[base + s * stride];
          fft(line, /*inverse=*/true);
          for (std::size_t s = 0; s < cs; ++s)
            folded[base + s * stride] = line[s] * static_cast<double>(cs);
        }
    }
    // Tile the one-cell w table over the stored cells.
    const std::size_t wtotal = z.data.size() / ux_total;
    for (std::size_t iw = 0; iw < wtotal; ++iw) {
      std::size_t rem = iw, flat = 0;
      std::vector<std::size_t> widx(static_cast<std::size_t>(d));
      for (int k = d - 1; k >= 0; --k) {
        widx[static_cast<std::size_t>(k)] = rem % per_axis;
        rem /= per_axis;
      }
      for (int k = 0; k < d; ++k) flat = flat * cs + widx[static_cast<std::size_t>(k)] % cs;
      z.data.values()[iu * wtotal + iw] = folded[flat];
    }
  });
  return z;
}

double quasiperiodicity_defect(const ZakField& z) {
  const int d = z.basis.dim();
  const double peak = z.data.max_abs();
  if (peak == 0.0) return 0.0;
  if (z.cells < 2)
    throw std::invalid_argument("quasiperiodicity_defect: need at least 2 stored cells");
  const std::size_t cs = static_cast<std::size_t>(z.cell_samples);
  double worst = 0.0;
  const std::size_t total = z.data.size();
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < total; ++i) {
    idx = decode(i, z.data.axes());
    const cplx v = z.data.values()[i];
    for (int k = 0; k < d; ++k) {
      // F(u + 1_k, w) = e^{2 pi i w_k} F(u, w)
      if (idx[static_cast<std::size_t>(k)] + cs <
          z.data.axis(k).count) {
        std::vector<std::size_t> j = idx;
        j[static_cast<std::size_t>(k)] += cs;
        const double wk =
            static_cast<double>(idx[static_cast<std::size_t>(d + k)]) /
            static_cast<double>(cs);
        const cplx expect = std::polar(1.0, two_pi * wk) * v;
        worst = std::max(worst, std::abs(z.data.at(j) - expect) / peak);
      }
      // F(u, w + 1_k) = F(u, w)
      if (idx[static_cast<std::size_t>(d + k)] + cs < z.data.axis(d + k).count) {
        std::vector<std::size_t> j = idx;
        j[static_cast<std::size_t>(d + k)] += cs;
        worst = std::max(worst, std::abs(z.data.at(j) - v) / peak);
      }
    }
  }
  return worst;
}

SampledField inverse_zak(const ZakField& z) {
  const int d = z.basis.dim();
  if (!z.basis.is_diagonal(1e-12))
    throw std::invalid_argument("inverse_zak: diagonal bases only");
  const double defect = quasiperiodicity_defect(z);
  if (defect > 1e-6)
    throw std::invalid_argument("inverse_zak: quasi-periodicity defect " +
                                std::to_string(defect) + " exceeds 1e-6");
  const std::size_t cs = static_cast<std::size_t>(z.cell_samples);
  for (int k = 0; k < d; ++k) {
    if (z.lattice_hi[static_cast<std::size_t>(k)] >= static_cast<int>(cs / 2) ||
        -z.lattice_lo[static_cast<std::size_t>(k)] >= static_cast<int>(cs / 2))
      throw std::invalid_argument("inverse_zak: lattice span exceeds the w resolution");
  }

  std::vector<Axis> out_axes;
  std::vector<std::size_t> qspan(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const double a = z.basis.entry(k, k);
    const int lo = z.lattice_lo[static_cast<std::size_t>(k)];
    const int hi = z.lattice_hi[static_cast<std::size_t>(k)];
    qspan[static_cast<std::size_t>(k)] = static_cast<std::size_t>(hi - lo + 1);
    out_axes.push_back(Axis{-a * static_cast<double>(hi), a / static_cast<double>(cs),
                            qspan[static_cast<std::size_t>(k)] * cs, AxisKind::line});
  }
  SampledField out = SampledField::zeros(out_axes);

  std::size_t ucell = 1, wcell = 1;
  for (int k = 0; k < d; ++k) {
    ucell *= cs;
    wcell *= cs;
  }
  std::vector<Axis> cell_axes(static_cast<std::size_t>(d),
                              Axis{0.0, 1.0 / static_cast<double>(cs), cs, AxisKind::line});

  parallel_for(ucell, [&](std::size_t iu) {
    const std::vector<std::size_t> uidx = decode(iu, cell_axes);
    // Gather the first-cell w block for this u and take its Fourier
    // coefficients: c_n = f(T_E(u - n)).
    std::vector<cplx> block(wcell);
    for (std::size_t iw = 0; iw < wcell; ++iw) {
      std::vector<std::size_t> full(static_cast<std::size_t>(2 * d));
      std::size_t rem = iw;
      std::vector<std::size_t> widx(static_cast<std::size_t>(d));
      for (int k = d - 1; k >= 0; --k) {
        widx[static_cast<std::size_t>(k)] = rem % cs;
        rem /= cs;
      }
      for (int k = 0; k < d; ++k) {
        full[static_cast<std::size_t>(k)] = uidx[static_cast<std::size_t>(k)];
        full[static_cast<std::size_t>(d + k)] = widx[static_cast<std::size_t>(k)];
      }
      block[iw] = z.data.at(full);
    }
    std::vector<cplx> line(cs);
    for (int k = 0; k < d; ++k) {
      std::size_t stride = 1;
      for (int j = k + 1; j < d; ++j) stride *= cs;
      const std::size_t blockn = stride * cs;
      for (std::size_t b = 0; b < wcell / blockn; ++b)
        for (std::size_t lo = 0; lo < stride; ++lo) {
          const std::size_t base = b * blockn + lo;
          for (std::size_t s = 0; s < cs; ++s) line[s] = block[base + s * stride];
          fft(line);
          for (std::size_t s = 0; s < cs; ++s)
            block[base + s * stride] = line[s] / static_cast<double>(cs);
        }
    }
    // Scatter: out at x = T_E(u + m) holds the coefficient with n = -m.
    std::size_t cells_total = 1;
    for (int k = 0; k < d; ++k) cells_total *= qspan[static_cast<std::size_t>(k)];
    for (std::size_t q = 0; q < cells_total; ++q) {
      std::size_t rem = q, cflat = 0;
      std::vector<std::size_t> oidx(static_cast<std::size_t>(d));
      for (int k = d - 1; k >= 0; --k) {
        oidx[static_cast<std::size_t>(k)] = rem % qspan[static_cast<std::size_t>(k)];
        rem /= qspan[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < d; ++k) {
        const int n = z.lattice_hi[static_cast<std::size_t>(k)] -
                      static_cast<int>(oidx[static_cast<std::size_t>(k)]);
        const int fold = ((n % static_cast<int>(cs)) + static_cast<int>(cs)) %
                         static_cast<int>(cs);
        cflat = cflat * cs + static_cast<std::size_t>(fold);
      }
      std::vector<std::size_t> full(static_cast<std::size_t>(d));
      for (int k = 0; k < d; ++k)
        full[static_cast<std::size_t>(k)] =
            oidx[static_cast<std::size_t>(k)] * cs + uidx[static_cast<std::size_t>(k)];
      out.at(full) = block[cflat];
    }
  });
  return out;
}

namespace {

// Zak values of f along one dual-coordinate period, for a fixed x given in
// E-coordinates: one cell table over w in [0,1) with `samples` points.
std::vector<cplx> zak_cell_line(const SampledField& f, const OrderedBasis& e,
                                std::span<const double> u, const LatticeRange& range,
                                std::size_t samples) {
  const int d = f.dim();
  if (d != 1) throw std::logic_error("zak_cell_line: 1-d only");
  std::vector<cplx> folded(samples, cplx(0.0));
  std::vector<double> shifted(1);
  for (int n = range.lo[0]; n <= range.hi[0]; ++n) {
    shifted[0] = u[0] - static_cast<double>(n);
    const std::vector<double> y = e.map(shifted);
    const cplx v = f.interp(y);
    if (v == cplx(0.0)) continue;
    const int fold = ((n % static_cast<int>(samples)) + static_cast<int>(samples)) %
                     static_cast<int>(samples);
    folded[static_cast<std::size_t>(fold)] += v;
  }
  fft(folded, /*inverse=*/true);
  for (auto& v : folded) v *= static_cast<double>(samples);
  return folded;
}

Axis central_bins(const Axis& dual, std::size_t keep, std::size_t& offset) {
  if (keep == 0 || keep >= dual.count) {
    offset = 0;
    return dual;
  }
  offset = dual.count / 2 - keep / 2;
  Axis out = dual;
  out.origin = dual.coord(offset);
  out.count = keep;
  return out;
}

}  // namespace

SampledField partial_stft_zak(const SampledField& f, const OrderedBasis& e,
                              const Window& phi, int which, int cell_samples,
                              int xi_cells) {
  const int d = f.dim();
  if (d != 1) throw std::invalid_argument("partial_stft_zak: implemented for d=1");
  if (e.dim() != 1 || phi.dim() != 1)
    throw std::invalid_argument("partial_stft_zak: dimension mismatch");
  if (which != 1 && which != 2)
    throw std::invalid_argument("partial_stft_zak: which must be 1 or 2");
  const double bmass = relative_boundary_mass(f);
  if (bmass > 1e-12)
    throw std::invalid_argument("partial_stft_zak: insufficient decay at the box boundary");

  const std::size_t cs = static_cast<std::size_t>(cell_samples);
  const LatticeRange range = zak_lattice_range(f, e, 1);
  const double a = e.entry(0, 0);
  const double b = e.dual().entry(0, 0);
  const std::size_t keep = std::min<std::size_t>(4 * cs, std::size_t(1) << 20);

  if (which == 1) {
    // (x, xi, eta) -> V_phi(Z_E f(., xi))(x, eta); long variable is y on f's
    // own grid, x runs over one cell, xi over xi_cells cells.
    const Axis yax = f.axis(0);
    const Axis deta = dual_axis(yax);
    std::size_t eta_off = 0;
    const Axis eta_ax = central_bins(deta, keep, eta_off);

    const std::size_t nx = cs;
    const std::size_t nxi = cs * static_cast<std::size_t>(xi_cells);
    std::vector<Axis> axes{
        Axis{0.0, 1.0 / static_cast<double>(cs), nx, AxisKind::line},
        Axis{0.0, 1.0 / static_cast<double>(cs), nxi, AxisKind::line}, eta_ax};
    SampledField out = SampledField::zeros(axes);

    // Window offset table over the long grid differences.
    const std::size_t ny = yax.count;
    parallel_for(nxi, [&](std::size_t jxi) {
      const double w = static_cast<double>(jxi) / static_cast<double>(cs);
      // g(y) = sum_n f(y - a n) e^{2 pi i n w} on f's grid.
      std::vector<cplx> g(ny, cplx(0.0));
      for (int n = range.lo[0]; n <= range.hi[0]; ++n) {
        const cplx ph = std::polar(1.0, two_pi * static_cast<double>(n) * w);
        const double shift = a * static_cast<double>(n);
        // Grid-aligned shifts only when a is commensurate with the step;
        // interp handles the general case point by point.
        for (std::size_t my = 0; my < ny; ++my) {
          const double y = yax.coord(my) - shift;
          const double pos[1] = {y};
          const cplx v = f.interp(pos);
          if (v != cplx(0.0)) g[my] += ph * v;
        }
      }
      SampledField gf(std::vector<Axis>{yax}, g);
      for (std::size_t jx = 0; jx < nx; ++jx) {
        const double x = a * static_cast<double>(jx) / static_cast<double>(cs);
        std::vector<cplx> h(ny);
        for (std::size_t my = 0; my < ny; ++my)
          h[my] = gf.values()[my] * std::conj(window_factor(phi, 0, yax.coord(my) - x));
        SampledField hf = fourier_along(SampledField(std::vector<Axis>{yax}, std::move(h)), 0);
        cplx* dst = out.values().data() + (jx * nxi + jxi) * eta_ax.count;
        for (std::size_t k = 0; k < eta_ax.count; ++k) dst[k] = hf.values()[eta_off + k];
      }
    });
    return out;
  }

  // which == 2: (x, xi, y) -> V_phi(Z_E f(x, .))(xi, y); long variable is the
  // dual coordinate, where Z_E f(x, .) is exactly periodic with period b.
  const std::size_t pad = static_cast<std::size_t>(std::ceil(10.0 * phi.width / b)) + 1;
  const std::size_t ncells_long = static_cast<std::size_t>(xi_cells) + 2 * pad;
  const std::size_t nz = ncells_long * cs;
  const Axis zax{-static_cast<double>(pad) * b, b / static_cast<double>(cs), nz,
                 AxisKind::line};
  const Axis dz = dual_axis(zax);
  std::size_t y_off = 0;
  const Axis y_ax = central_bins(dz, keep, y_off);

  const std::size_t nx = cs;
  const std::size_t nxi = cs * static_cast<std::size_t>(xi_cells);
  std::vector<Axis> axes{Axis{0.0, 1.0 / static_cast<double>(cs), nx, AxisKind::line},
                         Axis{0.0, 1.0 / static_cast<double>(cs), nxi, AxisKind::line},
                         y_ax};
  SampledField out = SampledField::zeros(axes);

  parallel_for(nx, [&](std::size_t jx) {
    const double u[1] = {static_cast<double>(jx) / static_cast<double>(cs)};
    const std::vector<cplx> cell = zak_cell_line(f, e, u, range, cs);
    // Periodic extension over the long grid.
    std::vector<cplx> longv(nz);
    for (std::size_t i = 0; i < nz; ++i) longv[i] = cell[i % cs];
    for (std::size_t jxi = 0; jxi < nxi; ++jxi) {
      const double xi = b * static_cast<double>(jxi) / static_cast<double>(cs);
      std::vector<cplx> h(nz);
      for (std::size_t i = 0; i < nz; ++i)
        h[i] = longv[i] * std::conj(window_factor(phi, 0, zax.coord(i) - xi));
      SampledField hf = fourier_along(SampledField(std::vector<Axis>{zax}, std::move(h)), 0);
      cplx* dst = out.values().data() + (jx * nxi + jxi) * y_ax.count;
      for (std::size_t k = 0; k < y_ax.count; ++k) dst[k] = hf.values()[y_off + k];
    }
  });
  return out;
}

SampledField stft_of_zak(const SampledField& f, const OrderedBasis& e,
                         const Window& phi1, const Window& phi2,
                         const StftZakParams& params) {
  if (f.dim() != 1 || e.dim() != 1)
    throw std::invalid_argument("stft_of_zak: implemented for d=1");
  if (phi1.dim() != 1 || phi2.dim() != 1)
    throw std::invalid_argument("stft_of_zak: window dimension mismatch");
  const double bmass = relative_boundary_mass(f);
  if (bmass > 1e-12)
    throw std::invalid_argument("stft_of_zak: insufficient decay at the box boundary");

  const double a = e.entry(0, 0);
  const double b = e.dual().entry(0, 0);
  const std::size_t gn = static_cast<std::size_t>(params.grid_n);
  const Axis uax{-params.grid_half, 2.0 * params.grid_half / static_cast<double>(gn), gn,
                 AxisKind::line};
  const double vhalf = params.grid_half * b;  // xi extent scales with the dual period
  const Axis vax{-vhalf, 2.0 * vhalf / static_cast<double>(gn), gn, AxisKind::line};

  // Zak values on the integration grid by the defining sum.
  const LatticeRange range = zak_lattice_range(f, e, 1);
  const std::size_t nspan = static_cast<std::size_t>(range.hi[0] - range.lo[0] + 1);
  std::vector<cplx> shifts(gn * nspan);  // f(u_i - a n)
  for (std::size_t i = 0; i < gn; ++i)
    for (std::size_t t = 0; t < nspan; ++t) {
      const double pos[1] = {uax.coord(i) -
                             a * static_cast<double>(range.lo[0] + static_cast<int>(t))};
      shifts[i * nspan + t] = f.interp(pos);
    }
  std::vector<cplx> phase(nspan * gn);  // e^{i a n v_j}
  for (std::size_t t = 0; t < nspan; ++t)
    for (std::size_t j = 0; j < gn; ++j)
      phase[t * gn + j] = std::polar(
          1.0, a * static_cast<double>(range.lo[0] + static_cast<int>(t)) * vax.coord(j));
  std::vector<cplx> zvals(gn * gn, cplx(0.0));
  for (std::size_t i = 0; i < gn; ++i)
    for (std::size_t t = 0; t < nspan; ++t) {
      const cplx fv = shifts[i * nspan + t];
      if (fv == cplx(0.0)) continue;
      const cplx* pr = phase.data() + t * gn;
      cplx* zr = zvals.data() + i * gn;
      for (std::size_t j = 0; j < gn; ++j) zr[j] += fv * pr[j];
    }

  const Axis deta_full = dual_axis(uax);
  const Axis dy_full = dual_axis(vax);
  std::size_t eta_off = 0, y_off = 0;
  const Axis eta_ax = central_bins(deta_full, static_cast<std::size_t>(params.out_eta),
                                   eta_off);
  const Axis y_ax = central_bins(dy_full, static_cast<std::size_t>(params.out_y), y_off);

  const std::size_t cso = static_cast<std::size_t>(params.cell_samples);
  const std::size_t nx = cso * static_cast<std::size_t>(params.cells);
  const std::size_t nxi = nx;
  std::vector<Axis> axes{
      Axis{0.0, a / static_cast<double>(cso), nx, AxisKind::line},
      Axis{0.0, b / static_cast<double>(cso), nxi, AxisKind::line}, eta_ax, y_ax};
  SampledField out = SampledField::zeros(axes);

  // Per-frequency scale factors carrying the step, normalization, and origin
  // phase of each 1-d transform.
  std::vector<cplx> scale_eta(gn), scale_y(gn), tw(gn);
  const std::size_t half = gn / 2;
  for (std::size_t m = 0; m < gn; ++m)
    tw[m] = std::polar(1.0, two_pi * static_cast<double>(m) * static_cast<double>(half) /
                                static_cast<double>(gn));
  for (std::size_t k = 0; k < gn; ++k) {
    scale_eta[k] = std::polar(uax.step * inv_sqrt_2pi, -uax.origin * deta_full.coord(k));
    scale_y[k] = std::polar(vax.step * inv_sqrt_2pi, -vax.origin * dy_full.coord(k));
  }

  parallel_for(nx * nxi, [&](std::size_t pos) {
    const std::size_t jx = pos / nxi, jxi = pos % nxi;
    const double x = a * static_cast<double>(jx) / static_cast<double>(cso);
    const double xi = b * static_cast<double>(jxi) / static_cast<double>(cso);
    std::vector<cplx> w1(gn), w2(gn);
    for (std::size_t i = 0; i < gn; ++i)
      w1[i] = std::conj(window_factor(phi1, 0, uax.coord(i) - x)) * tw[i];
    for (std::size_t j = 0; j < gn; ++j)
      w2[j] = std::conj(window_factor(phi2, 0, vax.coord(j) - xi));

    // Transform along u for every v column, keeping only the central eta bins,
    // then along v for each kept row.
    std::vector<cplx> col(gn), rows(eta_ax.count * gn);
    for (std::size_t j = 0; j < gn; ++j) {
      for (std::size_t i = 0; i < gn; ++i) col[i] = zvals[i * gn + j] * w1[i];
      fft(col);
      for (std::size_t k = 0; k < eta_ax.count; ++k)
        rows[k * gn + j] = col[eta_off + k] * scale_eta[eta_off + k];
    }
    std::vector<cplx> line(gn);
    cplx* dst = out.values().data() + pos * eta_ax.count * y_ax.count;
    for (std::size_t k = 0; k < eta_ax.count; ++k) {
      for (std::size_t j = 0; j < gn; ++j) line[j] = rows[k * gn + j] * w2[j] * tw[j];
      fft(line);
      for (std::size_t m = 0; m < y_ax.count; ++m)
        dst[k * y_ax.count + m] = line[y_off + m] * scale_y[y_off + m];
    }
  });
  return out;
}

double echo_periodicity_defect(const SampledField& g, const OrderedBasis& e) {
  if (g.dim() != 4 || e.dim() != 1)
    throw std::invalid_argument("echo_periodicity_defect: need a 4-axis d=1 field");
  const double peak = g.max_abs();
  if (peak == 0.0) return 0.0;
  const double a = e.entry(0, 0);
  const double b = e.dual().entry(0, 0);

  const Axis& xax = g.axis(0);
  const Axis& xiax = g.axis(1);
  const Axis& eax = g.axis(2);
  const Axis& yax = g.axis(3);
  const double xs = a / xax.step;
  const double ys = a / yax.step;
  const double xis = b / xiax.step;
  const long xshift = std::lround(xs);
  const long yshift = std::lround(ys);
  const long xishift = std::lround(xis);
  if (std::abs(xs - static_cast<double>(xshift)) > 1e-9 ||
      std::abs(ys - static_cast<double>(yshift)) > 1e-9 ||
      std::abs(xis - static_cast<double>(xishift)) > 1e-9)
    throw std::invalid_argument("echo_periodicity_defect: lattice not grid-aligned");

  double worst = 0.0;
  std::vector<std::size_t> idx(4);
  for (std::size_t i0 = 0; i0 < xax.count; ++i0)
    for (std::size_t i1 = 0; i1 < xiax.count; ++i1)
      for (std::size_t i2 = 0; i2 < eax.count; ++i2)
        for (std::size_t i3 = 0; i3 < yax.count; ++i3) {
          idx = {i0, i1, i2, i3};
          const cplx v = g.at(idx);
          // G(x + a, xi, eta, y) = e^{-i a eta} G(x, xi, eta, y - a)
          if (i0 + static_cast<std::size_t>(xshift) < xax.count &&
              i3 >= static_cast<std::size_t>(yshift)) {
            std::vector<std::size_t> js{i0 + static_cast<std::size_t>(xshift), i1, i2, i3};
            std::vector<std::size_t> jt{i0, i1, i2, i3 - static_cast<std::size_t>(yshift)};
            const cplx expect =
                std::polar(1.0, -a * eax.coord(i2)) * g.at(jt);
            worst = std::max(worst, std::abs(g.at(js) - expect) / peak);
          }
          // G(x, xi + b, eta, y) = e^{-i b y} G(x, xi, eta, y)
          if (i1 + static_cast<std::size_t>(xishift) < xiax.count) {
            std::vector<std::size_t> js{i0, i1 + static_cast<std::size_t>(xishift), i2, i3};
            const cplx expect = std::polar(1.0, -b * yax.coord(i3)) * v;
            worst = std::max(worst, std::abs(g.at(js) - expect) / peak);
          }
        }
  return worst;
}

FourierCoefficients::FourierCoefficients(OrderedBasis basis, std::vector<int> lo,
                                         std::vector<int> hi)
    : basis_(std::move(basis)), lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.size() != static_cast<std::size_t>(basis_.dim()) || lo_.size() != hi_.size())
    throw std::invalid_argument("FourierCoefficients: cutoff dimension mismatch");
  std::size_t n = 1;
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (hi_[k] < lo_[k]) throw std::invalid_argument("FourierCoefficients: empty cutoff");
    n *= static_cast<std::size_t>(hi_[k] - lo_[k] + 1);
  }
  table_.assign(n, cplx(0.0));
}

bool FourierCoefficients::contains(std::span<const int> nu) const {
  for (std::size_t k = 0; k < lo_.size(); ++k)
    if (nu[k] < lo_[k] || nu[k] > hi_[k]) return false;
  return true;
}

cplx& FourierCoefficients::at(std::span<const int> nu) {
  std::size_t flat = 0;
  for (std::size_t k = 0; k < lo_.size(); ++k) {
    if (nu[k] < lo_[k] || nu[k] > hi_[k])
      throw std::out_of_range("FourierCoefficients: index outside cutoff");
    flat = flat * static_cast<std::size_t>(hi_[k] - lo_[k] + 1) +
           static_cast<std::size_t>(nu[k] - lo_[k]);
  }
  return table_[flat];
}

cplx FourierCoefficients::at(std::span<const int> nu) const {
  return const_cast<FourierCoefficients*>(this)->at(nu);
}

std::vector<double> FourierCoefficients::frequency(std::span<const int> nu) const {
  return basis_.dual().lattice_point(nu);
}

FourierCoefficients fourier_coefficients(const SampledField& f, const OrderedBasis& e,
                                         const std::vector<int>& cutoff_lo,
                                         const std::vector<int>& cutoff_hi) {
  const int d = f.dim();
  if (e.dim() != d) throw std::invalid_argument("fourier_coefficients: dimension mismatch");
  if (!e.is_diagonal(1e-12))
    throw std::invalid_argument(
        "fourier_coefficients: rectangular grids require a diagonal basis");
  std::vector<std::size_t> m(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const double period = e.entry(k, k);
    const double ratio = period / f.axis(k).step;
    const double r = std::round(ratio);
    if (std::abs(ratio - r) > 1e-9 || r < 1.0)
      throw std::invalid_argument("fourier_coefficients: grid does not tile the cell");
    m[static_cast<std::size_t>(k)] = static_cast<std::size_t>(r);
    if (f.axis(k).count < m[static_cast<std::size_t>(k)])
      throw std::invalid_argument("fourier_coefficients: grid shorter than one cell");
  }

  // One period cell from the grid origin, transformed axis by axis.
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) total *= m[static_cast<std::size_t>(k)];
  std::vector<cplx> cell(total);
  for (std::size_t i = 0; i < total; ++i) {
    std::size_t rem = i;
    std::vector<std::size_t> idx(static_cast<std::size_t>(d));
    for (int k = d - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = rem % m[static_cast<std::size_t>(k)];
      rem /= m[static_cast<std::size_t>(k)];
    }
    cell[i] = f.at(idx);
  }
  std::vector<cplx> line;
  for (int k = 0; k < d; ++k) {
    std::size_t stride = 1;
    for (int j = k + 1; j < d; ++j) stride *= m[static_cast<std::size_t>(j)];
    const std::size_t n = m[static_cast<std::size_t>(k)];
    const std::size_t block = stride * n;
    line.resize(n);
    for (std::size_t bidx = 0; bidx < total / block; ++bidx)
      for (std::size_t lo = 0; lo < stride; ++lo) {
        const std::size_t base = bidx * block + lo;
        for (std::size_t s = 0; s < n; ++s) line[s] = cell[base + s * stride];
        fft(line);
        for (std::size_t s = 0; s < n; ++s)
          cell[base + s * stride] = line[s] / static_cast<double>(n);
      }
  }

  FourierCoefficients c(e, cutoff_lo, cutoff_hi);
  std::vector<int> nu(static_cast<std::size_t>(d));
  std::vector<double> x0(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) x0[static_cast<std::size_t>(k)] = f.axis(k).origin;
  std::size_t count = c.size();
  for (std::size_t i = 0; i < count; ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      const std::size_t span =
          static_cast<std::size_t>(cutoff_hi[static_cast<std::size_t>(k)] -
                                   cutoff_lo[static_cast<std::size_t>(k)] + 1);
      nu[static_cast<std::size_t>(k)] =
          cutoff_lo[static_cast<std::size_t>(k)] + static_cast<int>(rem % span);
      rem /= span;
    }
    std::size_t flat = 0;
    for (int k = 0; k < d; ++k) {
      const int n = nu[static_cast<std::size_t>(k)];
      const int mk = static_cast<int>(m[static_cast<std::size_t>(k)]);
      flat = flat * m[static_cast<std::size_t>(k)] +
             static_cast<std::size_t>(((n % mk) + mk) % mk);
    }
    const std::vector<double> alpha = c.frequency(nu);
    c.at(nu) = cell[flat] * std::polar(1.0, -inner(x0, alpha));
  }
  return c;
}

SampledField synthesize_periodic(const FourierCoefficients& c, std::span<const double> lo,
                                 std::span<const double> hi, double step) {
  const int d = c.basis().dim();
  if (lo.size() != static_cast<std::size_t>(d) || hi.size() != lo.size())
    throw std::invalid_argument("synthesize_periodic: box dimension mismatch");
  std::vector<Axis> axes;
  for (int k = 0; k < d; ++k) {
    const std::size_t n = static_cast<std::size_t>(
        std::floor((hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)]) /
                       step +
                   0.5));
    axes.push_back(Axis{lo[static_cast<std::size_t>(k)], step, n, AxisKind::line});
  }
  SampledField out = SampledField::zeros(axes);

  // Collect the nonzero terms once.
  std::vector<std::vector<double>> freqs;
  std::vector<cplx> coefs;
  std::vector<int> nu(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      const std::size_t span = static_cast<std::size_t>(
          c.hi()[static_cast<std::size_t>(k)] - c.lo()[static_cast<std::size_t>(k)] + 1);
      nu[static_cast<std::size_t>(k)] =
          c.lo()[static_cast<std::size_t>(k)] + static_cast<int>(rem % span);
      rem /= span;
    }
    const cplx v = c.at(nu);
    if (v != cplx(0.0)) {
      freqs.push_back(c.frequency(nu));
      coefs.push_back(v);
    }
  }

  const std::size_t total = out.size();
  parallel_for(total, [&](std::size_t i) {
    const std::vector<std::size_t> idx = decode(i, out.axes());
    const std::vector<double> x = out.point(idx);
    cplx acc(0.0);
    for (std::size_t t = 0; t < coefs.size(); ++t)
      acc += coefs[t] * std::polar(1.0, inner(x, freqs[t]));
    out.values()[i] = acc;
  });
  return out;
}

SampledField stft_periodic(const FourierCoefficients& c, const Window& phi,
                           const std::vector<Axis>& x_axes,
                           const std::vector<Axis>& xi_axes) {
  const int d = c.basis().dim();
  if (static_cast<int>(x_axes.size()) != d || static_cast<int>(xi_axes.size()) != d ||
      phi.dim() != d)
    throw std::invalid_argument("stft_periodic: axis/window dimension mismatch");

  std::vector<std::vector<double>> freqs;
  std::vector<cplx> coefs;
  std::vector<int> nu(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      const std::size_t span = static_cast<std::size_t>(
          c.hi()[static_cast<std::size_t>(k)] - c.lo()[static_cast<std::size_t>(k)] + 1);
      nu[static_cast<std::size_t>(k)] =
          c.lo()[static_cast<std::size_t>(k)] + static_cast<int>(rem % span);
      rem /= span;
    }
    const cplx v = c.at(nu);
    if (v != cplx(0.0)) {
      freqs.push_back(c.frequency(nu));
      coefs.push_back(v);
    }
  }

  std::vector<Axis> axes = x_axes;
  axes.insert(axes.end(), xi_axes.begin(), xi_axes.end());
  SampledField out = SampledField::zeros(axes);
  const double w = phi.width;

  const std::size_t total = out.size();
  parallel_for(total, [&](std::size_t i) {
    const std::vector<std::size_t> idx = decode(i, out.axes());
    cplx acc(0.0);
    for (std::size_t t = 0; t < coefs.size(); ++t) {
      cplx term = coefs[t];
      for (int k = 0; k < d; ++k) {
        const double x = x_axes[static_cast<std::size_t>(k)].coord(
            idx[static_cast<std::size_t>(k)]);
        const double xi = xi_axes[static_cast<std::size_t>(k)].coord(
            idx[static_cast<std::size_t>(d + k)]);
        const double mu = phi.modulation[static_cast<std::size_t>(k)];
        const double ce = phi.center[static_cast<std::size_t>(k)];
        const double dk = freqs[t][static_cast<std::size_t>(k)] - xi - mu;
        // Closed-form Gaussian chirp factor of the STFT integral per axis.
        term *= w * std::polar(std::exp(-0.5 * w * w * dk * dk),
                               mu * x + (x + ce) * dk);
      }
      acc += term;
    }
    out.values()[i] = acc;
  });
  return out;
}

SampledField semidiscrete_convolve(const LatticeSequence& a, const SampledField& f) {
  const int d = f.dim();
  if (a.basis.dim() != d)
    throw std::invalid_argument("semidiscrete_convolve: dimension mismatch");
  if (a.terms.empty()) throw std::invalid_argument("semidiscrete_convolve: empty sequence");

  std::vector<std::vector<double>> shifts;
  std::vector<cplx> coefs;
  for (const auto& [n, v] : a.terms) {
    if (static_cast<int>(n.size()) != d)
      throw std::invalid_argument("semidiscrete_convolve: bad lattice index");
    shifts.push_back(a.basis.lattice_point(n));
    coefs.push_back(v);
  }

  // Shrink the output so every shift stays on f's grid.
  std::vector<Axis> axes(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    double smin = std::numeric_limits<double>::infinity();
    double smax = -smin;
    for (const auto& s : shifts) {
      smin = std::min(smin, s[static_cast<std::size_t>(k)]);
      smax = std::max(smax, s[static_cast<std::size_t>(k)]);
    }
    const Axis& ax = f.axis(k);
    const long i0 = static_cast<long>(std::ceil(smax / ax.step - 1e-9));
    const long i1 = static_cast<long>(std::floor(smin / ax.step + 1e-9)) +
                    static_cast<long>(ax.count) - 1;
    if (i1 < i0) throw std::invalid_argument("semidiscrete_convolve: empty output box");
    axes[static_cast<std::size_t>(k)] =
        Axis{ax.origin + ax.step * static_cast<double>(i0), ax.step,
             static_cast<std::size_t>(i1 - i0 + 1), AxisKind::line};
  }
  SampledField out = SampledField::zeros(axes);

  const std::size_t total = out.size();
  parallel_for(total, [&](std::size_t i) {
    const std::vector<std::size_t> idx = decode(i, out.axes());
    const std::vector<double> x = out.point(idx);
    std::vector<double> y(static_cast<std::size_t>(d));
    cplx acc(0.0);
    for (std::size_t t = 0; t < coefs.size(); ++t) {
      for (int k = 0; k < d; ++k)
        y[static_cast<std::size_t>(k)] =
            x[static_cast<std::size_t>(k)] - shifts[t][static_cast<std::size_t>(k)];
      acc += coefs[t] * f.interp(y);
    }
    out.values()[i] = acc;
  });
  return out;
}

}  // namespace tfz
