#include "tfz/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tfz {

double reduce_mixed(std::vector<double> mag, std::vector<std::size_t> dims,
                    const std::vector<double>& steps, const MixedExponent& exps,
                    const std::vector<int>& order) {
  std::vector<int> ids(dims.size());
  for (std::size_t k = 0; k < ids.size(); ++k) ids[k] = static_cast<int>(k);
  for (int id : order) {
    const std::size_t pos = static_cast<std::size_t>(
        std::find(ids.begin(), ids.end(), id) - ids.begin());
    if (pos == ids.size()) throw std::logic_error("reduce_mixed: bad axis order");
    std::size_t outer = 1, inner = 1;
    for (std::size_t k = 0; k < pos; ++k) outer *= dims[k];
    for (std::size_t k = pos + 1; k < dims.size(); ++k) inner *= dims[k];
    const std::size_t n = dims[pos];
    const bool is_inf = exps.is_inf(id);
    const double q = is_inf ? 0.0 : exps.value(id);
    const double step = steps[static_cast<std::size_t>(id)];
    std::vector<double> out(outer * inner, 0.0);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        const double* src = mag.data() + (o * n) * inner + i;
        double acc = 0.0;
        if (is_inf) {
          for (std::size_t t = 0; t < n; ++t) acc = std::max(acc, src[t * inner]);
        } else {
          for (std::size_t t = 0; t < n; ++t) acc += std::pow(src[t * inner], q) * step;
          acc = std::pow(acc, 1.0 / q);
        }
        out[o * inner + i] = acc;
      }
    mag = std::move(out);
    dims.erase(dims.begin() + static_cast<std::ptrdiff_t>(pos));
    ids.erase(ids.begin() + static_cast<std::ptrdiff_t>(pos));
  }
  if (mag.size() != 1) throw std::logic_error("reduce_mixed: incomplete reduction");
  return mag[0];
}

namespace {

double reduce_all(std::vector<double> mag, const std::vector<std::size_t>& dims,
                  const std::vector<double>& steps, const MixedExponent& exps) {
  std::vector<int> order(dims.size());
  for (std::size_t k = 0; k < dims.size(); ++k) order[k] = static_cast<int>(k);
  return reduce_mixed(std::move(mag), dims, steps, exps, order);
}

std::vector<double> diag_entries(const OrderedBasis& e, const char* who) {
  if (!e.is_diagonal(1e-12))
    throw std::invalid_argument(std::string(who) +
                                ": diagonal bases required for this norm family");
  std::vector<double> d(static_cast<std::size_t>(e.dim()));
  for (int k = 0; k < e.dim(); ++k) d[static_cast<std::size_t>(k)] = e.entry(k, k);
  return d;
}

// Per-axis partition of grid indices into the half-open unit cells j + [0,1)
// of the basis-coordinate axis.
struct CellAxis {
  long jlo = 0, jhi = -1;              // inclusive cell range
  std::vector<std::size_t> start;      // first grid index of each cell
  std::vector<std::size_t> len;        // samples in each cell
};

CellAxis cell_partition(const Axis& ax) {
  if (ax.step > 0.25 + 1e-12)
    throw std::invalid_argument("wiener norm: fewer than 4 samples per cell axis");
  CellAxis c;
  const double last = ax.coord(ax.count - 1);
  c.jlo = static_cast<long>(std::floor(ax.origin + 1e-9));
  c.jhi = static_cast<long>(std::floor(last + 1e-9));
  c.start.assign(static_cast<std::size_t>(c.jhi - c.jlo + 1), 0);
  c.len.assign(c.start.size(), 0);
  long prev = c.jlo - 1;
  for (std::size_t i = 0; i < ax.count; ++i) {
    const long j = static_cast<long>(std::floor(ax.coord(i) + 1e-9));
    const std::size_t slot = static_cast<std::size_t>(j - c.jlo);
    if (j != prev) {
      c.start[slot] = i;
      prev = j;
    }
    ++c.len[slot];
  }
  return c;
}

// Wiener reduction of a dense magnitude array whose axes are already basis
// coordinates: local mixed L^r on every unit cell, then the weighted mixed
// l^p over the cell lattice.
double wiener_reduce(const std::vector<double>& mag, const std::vector<Axis>& uaxes,
                     const MixedExponent& r, const MixedExponent& p,
                     const std::function<double(const std::vector<long>&)>& cell_weight) {
  const std::size_t d = uaxes.size();
  std::vector<CellAxis> cells(d);
  std::vector<std::size_t> cdims(d);
  std::vector<double> usteps(d);
  for (std::size_t k = 0; k < d; ++k) {
    cells[k] = cell_partition(uaxes[k]);
    cdims[k] = cells[k].start.size();
    usteps[k] = uaxes[k].step;
  }
  std::size_t ncells = 1;
  for (std::size_t k = 0; k < d; ++k) ncells *= cdims[k];

  std::vector<std::size_t> strides(d, 1);
  for (std::size_t k = d; k-- > 1;) strides[k - 1] = strides[k] * uaxes[k].count;

  std::vector<double> local(ncells, 0.0);
  std::vector<std::size_t> cidx(d), bdims(d);
  for (std::size_t c = 0; c < ncells; ++c) {
    std::size_t rem = c;
    for (std::size_t k = d; k-- > 0;) {
      cidx[k] = rem % cdims[k];
      rem /= cdims[k];
    }
    std::size_t block = 1;
    for (std::size_t k = 0; k < d; ++k) {
      bdims[k] = cells[k].len[cidx[k]];
      block *= bdims[k];
    }
    std::vector<double> buf(block);
    for (std::size_t t = 0; t < block; ++t) {
      std::size_t trem = t, flat = 0;
      for (std::size_t k = d; k-- > 0;) {
        const std::size_t off = trem % bdims[k];
        trem /= bdims[k];
        flat += (cells[k].start[cidx[k]] + off) * strides[k];
      }
      buf[t] = mag[flat];
    }
    std::vector<long> j(d);
    for (std::size_t k = 0; k < d; ++k)
      j[k] = cells[k].jlo + static_cast<long>(cidx[k]);
    local[c] = reduce_all(std::move(buf), bdims, usteps, r) * cell_weight(j);
  }
  std::vector<double> ones(d, 1.0);
  return reduce_all(std::move(local), cdims, ones, p);
}

}  // namespace

SampledField as_basis_coords(const SampledField& f, const OrderedBasis& e) {
  if (f.basis) {
    if (f.basis->approx_equal(e, 1e-12)) return f;
    throw std::invalid_argument("as_basis_coords: field already bound to another basis");
  }
  const int d = f.dim();
  if (e.dim() != d) throw std::invalid_argument("as_basis_coords: dimension mismatch");
  if (e.is_diagonal(1e-12)) {
    std::vector<Axis> axes = f.axes();
    for (int k = 0; k < d; ++k) {
      const double a = e.entry(k, k);
      axes[static_cast<std::size_t>(k)].origin /= a;
      axes[static_cast<std::size_t>(k)].step /= a;
    }
    SampledField out(axes, f.values());
    out.basis = e;
    return out;
  }
  // General basis: resample onto the coordinate bounding box.
  std::vector<double> ulo(static_cast<std::size_t>(d),
                          std::numeric_limits<double>::infinity());
  std::vector<double> uhi(static_cast<std::size_t>(d),
                          -std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < (std::size_t{1} << d); ++c) {
    std::vector<double> x(static_cast<std::size_t>(d));
    for (int k = 0; k < d; ++k) {
      const Axis& ax = f.axis(k);
      x[static_cast<std::size_t>(k)] =
          ((c >> k) & 1) ? ax.coord(ax.count - 1) : ax.origin;
    }
    const std::vector<double> u = e.coords(x);
    for (int k = 0; k < d; ++k) {
      ulo[static_cast<std::size_t>(k)] =
          std::min(ulo[static_cast<std::size_t>(k)], u[static_cast<std::size_t>(k)]);
      uhi[static_cast<std::size_t>(k)] =
          std::max(uhi[static_cast<std::size_t>(k)], u[static_cast<std::size_t>(k)]);
    }
  }
  std::vector<Axis> axes(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    const std::size_t n = f.axis(k).count;
    axes[static_cast<std::size_t>(k)] =
        Axis{ulo[static_cast<std::size_t>(k)],
             (uhi[static_cast<std::size_t>(k)] - ulo[static_cast<std::size_t>(k)]) /
                 static_cast<double>(n),
             n, AxisKind::line};
  }
  SampledField out = SampledField::zeros(axes);
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < out.size(); ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = rem % axes[static_cast<std::size_t>(k)].count;
      rem /= axes[static_cast<std::size_t>(k)].count;
    }
    const std::vector<double> u = out.point(idx);
    out.values()[i] = f.interp(e.map(u));
  }
  out.basis = e;
  return out;
}

NormValue mixed_lebesgue_norm(const SampledField& f, const OrderedBasis& e,
                              const MixedExponent& q, const Weight& omega,
                              const std::optional<Box>& domain) {
  const int d = f.dim();
  if (q.dim() != d)
    throw std::invalid_argument("mixed_lebesgue_norm: exponent/axis count mismatch");
  const SampledField g = as_basis_coords(f, e);
  const bool unit_weight = omega.is_constant_one();

  std::vector<std::size_t> dims(static_cast<std::size_t>(d));
  std::vector<double> steps(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k) {
    dims[static_cast<std::size_t>(k)] = g.axis(k).count;
    steps[static_cast<std::size_t>(k)] = g.axis(k).step;
  }
  std::vector<double> mag(g.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = rem % dims[static_cast<std::size_t>(k)];
      rem /= dims[static_cast<std::size_t>(k)];
    }
    const std::vector<double> u = g.point(idx);
    if (domain) {
      bool inside = true;
      for (int k = 0; k < d; ++k) {
        const double uk = u[static_cast<std::size_t>(k)];
        if (uk < domain->lo[static_cast<std::size_t>(k)] - 1e-12 ||
            uk >= domain->hi[static_cast<std::size_t>(k)] - 1e-12)
          inside = false;
      }
      if (!inside) {
        mag[i] = 0.0;
        continue;
      }
    }
    double w = 1.0;
    if (!unit_weight) w = omega(e.map(u));
    mag[i] = std::abs(g.values()[i]) * w;
  }
  return NormValue{reduce_all(std::move(mag), dims, steps, q), "mixed-lebesgue", steps};
}

NormValue sequence_norm(const LatticeSequence& a, const MixedExponent& p,
                        const Weight& omega) {
  const int d = a.basis.dim();
  if (p.dim() != d) throw std::invalid_argument("sequence_norm: exponent count mismatch");
  if (a.terms.empty()) return NormValue{0.0, "sequence", {}};
  std::vector<int> lo(static_cast<std::size_t>(d), 0), hi(static_cast<std::size_t>(d), 0);
  bool first = true;
  for (const auto& [n, v] : a.terms) {
    for (int k = 0; k < d; ++k) {
      if (first || n[static_cast<std::size_t>(k)] < lo[static_cast<std::size_t>(k)])
        lo[static_cast<std::size_t>(k)] = n[static_cast<std::size_t>(k)];
      if (first || n[static_cast<std::size_t>(k)] > hi[static_cast<std::size_t>(k)])
        hi[static_cast<std::size_t>(k)] = n[static_cast<std::size_t>(k)];
    }
    first = false;
  }
  std::vector<std::size_t> dims(static_cast<std::size_t>(d));
  std::size_t total = 1;
  for (int k = 0; k < d; ++k) {
    dims[static_cast<std::size_t>(k)] = static_cast<std::size_t>(
        hi[static_cast<std::size_t>(k)] - lo[static_cast<std::size_t>(k)] + 1);
    total *= dims[static_cast<std::size_t>(k)];
  }
  std::vector<double> mag(total, 0.0);
  for (const auto& [n, v] : a.terms) {
    std::size_t flat = 0;
    for (int k = 0; k < d; ++k)
      flat = flat * dims[static_cast<std::size_t>(k)] +
             static_cast<std::size_t>(n[static_cast<std::size_t>(k)] -
                                      lo[static_cast<std::size_t>(k)]);
    mag[flat] = std::abs(v) * omega(a.basis.lattice_point(n));
  }
  std::vector<double> ones(static_cast<std::size_t>(d), 1.0);
  return NormValue{reduce_all(std::move(mag), dims, ones, p), "sequence", ones};
}

NormValue wiener_norm(const SampledField& f, const OrderedBasis& e,
                      const MixedExponent& r, const MixedExponent& p,
                      const Weight& omega0) {
  const int d = f.dim();
  if (r.dim() != d || p.dim() != d)
    throw std::invalid_argument("wiener_norm: exponent count mismatch");
  const SampledField g = as_basis_coords(f, e);
  std::vector<double> mag(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) mag[i] = std::abs(g.values()[i]);
  const double v = wiener_reduce(mag, g.axes(), r, p, [&](const std::vector<long>& j) {
    std::vector<int> ji(j.begin(), j.end());
    return omega0(e.lattice_point(ji));
  });
  std::vector<double> steps;
  for (int k = 0; k < d; ++k) steps.push_back(g.axis(k).step);
  return NormValue{v, "wiener", steps};
}

NormValue wiener_phase_norm(const SampledField& f, int which, const OrderedBasis& e,
                            const MixedExponent& r, const MixedExponent& p,
                            const Weight& omega, const LebesgueSpec& b0) {
  if (which != 1 && which != 2)
    throw std::invalid_argument("wiener_phase_norm: which must be 1 or 2");
  const int d = e.dim();
  if (f.dim() != 2 * d)
    throw std::invalid_argument("wiener_phase_norm: need a 2d-axis phase-space field");
  if (r.dim() != d || p.dim() != d || b0.q.dim() != d)
    throw std::invalid_argument("wiener_phase_norm: exponent count mismatch");
  const std::vector<double> ediag = diag_entries(e, "wiener_phase_norm");
  const std::vector<double> bdiag = diag_entries(b0.basis, "wiener_phase_norm");

  // Weighted magnitudes at the standard grid points.
  const bool unit_weight = omega.is_constant_one();
  std::vector<double> mag(f.size());
  std::vector<std::size_t> idx(static_cast<std::size_t>(2 * d));
  for (std::size_t i = 0; i < f.size(); ++i) {
    std::size_t rem = i;
    for (int k = 2 * d - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = rem % f.axis(k).count;
      rem /= f.axis(k).count;
    }
    double w = 1.0;
    if (!unit_weight) w = omega(f.point(idx));
    mag[i] = std::abs(f.values()[i]) * w;
  }

  // Basis-coordinate metadata per block.
  std::vector<Axis> uaxes(static_cast<std::size_t>(d));
  std::vector<std::size_t> xdims(static_cast<std::size_t>(d)),
      xidims(static_cast<std::size_t>(d));
  std::vector<double> xisteps(static_cast<std::size_t>(d));
  std::size_t nx = 1, nxi = 1;
  for (int k = 0; k < d; ++k) {
    const Axis& ax = f.axis(k);
    const double a = ediag[static_cast<std::size_t>(k)];
    uaxes[static_cast<std::size_t>(k)] =
        Axis{ax.origin / a, ax.step / a, ax.count, AxisKind::line};
    xdims[static_cast<std::size_t>(k)] = ax.count;
    nx *= ax.count;
    const Axis& xax = f.axis(d + k);
    xidims[static_cast<std::size_t>(k)] = xax.count;
    xisteps[static_cast<std::size_t>(k)] = xax.step / bdiag[static_cast<std::size_t>(k)];
    nxi *= xax.count;
  }
  const auto unit_cell_weight = [](const std::vector<long>&) { return 1.0; };

  double value = 0.0;
  if (which == 1) {
    std::vector<double> g(nxi);
    std::vector<double> slice(nx);
    for (std::size_t jxi = 0; jxi < nxi; ++jxi) {
      for (std::size_t jx = 0; jx < nx; ++jx) slice[jx] = mag[jx * nxi + jxi];
      g[jxi] = wiener_reduce(slice, uaxes, r, p, unit_cell_weight);
    }
    value = reduce_all(std::move(g), xidims, xisteps, b0.q);
  } else {
    std::vector<double> g(nx);
    for (std::size_t jx = 0; jx < nx; ++jx) {
      std::vector<double> slice(mag.begin() + static_cast<std::ptrdiff_t>(jx * nxi),
                                mag.begin() + static_cast<std::ptrdiff_t>((jx + 1) * nxi));
      g[jx] = reduce_all(std::move(slice), xidims, xisteps, b0.q);
    }
    value = wiener_reduce(g, uaxes, r, p, unit_cell_weight);
  }
  std::vector<double> steps;
  for (int k = 0; k < 2 * d; ++k) steps.push_back(f.axis(k).step);
  return NormValue{value, which == 1 ? "wiener-phase-1" : "wiener-phase-2", steps};
}

NormValue modulation_norm(const SampledField& f, const Window& phi, ModKind kind,
                          const OrderedBasis& e1, const OrderedBasis& e2,
                          const MixedExponent& p, const MixedExponent& q,
                          const Weight& omega) {
  const int d = f.dim();
  if (p.dim() != d || q.dim() != d)
    throw std::invalid_argument("modulation_norm: exponent count mismatch");
  const std::vector<double> d1 = diag_entries(e1, "modulation_norm");
  const std::vector<double> d2 = diag_entries(e2, "modulation_norm");

  const SampledField v = stft(f, phi);
  const bool unit_weight = omega.is_constant_one();
  std::vector<double> mag(v.size());
  std::vector<std::size_t> dims(static_cast<std::size_t>(2 * d));
  std::vector<double> steps(static_cast<std::size_t>(2 * d));
  for (int k = 0; k < 2 * d; ++k) {
    dims[static_cast<std::size_t>(k)] = v.axis(k).count;
    const double scale = k < d ? d1[static_cast<std::size_t>(k)]
                               : d2[static_cast<std::size_t>(k - d)];
    steps[static_cast<std::size_t>(k)] = v.axis(k).step / scale;
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(2 * d));
  for (std::size_t i = 0; i < v.size(); ++i) {
    std::size_t rem = i;
    for (int k = 2 * d - 1; k >= 0; --k) {
      idx[static_cast<std::size_t>(k)] = rem % dims[static_cast<std::size_t>(k)];
      rem /= dims[static_cast<std::size_t>(k)];
    }
    double w = 1.0;
    if (!unit_weight) w = omega(v.point(idx));
    mag[i] = std::abs(v.values()[i]) * w;
  }

  std::vector<double> exps;
  for (int k = 0; k < d; ++k)
    exps.push_back(p.is_inf(k) ? MixedExponent::inf : p.value(k));
  for (int k = 0; k < d; ++k)
    exps.push_back(q.is_inf(k) ? MixedExponent::inf : q.value(k));
  std::vector<int> order;
  if (kind == ModKind::m) {
    for (int k = 0; k < 2 * d; ++k) order.push_back(k);
  } else {
    for (int k = d; k < 2 * d; ++k) order.push_back(k);
    for (int k = 0; k < d; ++k) order.push_back(k);
  }
  const double value =
      reduce_mixed(std::move(mag), dims, steps, MixedExponent(exps), order);
  return NormValue{value, kind == ModKind::m ? "modulation-M" : "modulation-W", steps};
}

NormValue script_norm(const SampledField& f, const Window& phi, ModKind kind,
                      const OrderedBasis& e, const MixedExponent& r,
                      const Weight& omega, const LebesgueSpec& b0) {
  const SampledField v = stft(f, phi);
  const MixedExponent pinf = MixedExponent::scalar(MixedExponent::inf, e.dim());
  NormValue out =
      wiener_phase_norm(v, kind == ModKind::m ? 1 : 2, e, r, pinf, omega, b0);
  out.family = kind == ModKind::m ? "script-M" : "script-W";
  return out;
}

NormValue periodic_coefficient_norm(const FourierCoefficients& c,
                                    const MixedExponent& q, const Weight& omega0) {
  const int d = c.basis().dim();
  if (q.dim() != d)
    throw std::invalid_argument("periodic_coefficient_norm: exponent count mismatch");
  std::vector<std::size_t> dims(static_cast<std::size_t>(d));
  for (int k = 0; k < d; ++k)
    dims[static_cast<std::size_t>(k)] = static_cast<std::size_t>(
        c.hi()[static_cast<std::size_t>(k)] - c.lo()[static_cast<std::size_t>(k)] + 1);
  std::vector<double> mag(c.size());
  std::vector<int> nu(static_cast<std::size_t>(d));
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t rem = i;
    for (int k = d - 1; k >= 0; --k) {
      nu[static_cast<std::size_t>(k)] =
          c.lo()[static_cast<std::size_t>(k)] +
          static_cast<int>(rem % dims[static_cast<std::size_t>(k)]);
      rem /= dims[static_cast<std::size_t>(k)];
    }
    mag[i] = std::abs(c.at(nu)) * omega0(c.frequency(nu));
  }
  std::vector<double> ones(static_cast<std::size_t>(d), 1.0);
  return NormValue{reduce_all(std::move(mag), dims, ones, q), "periodic-coefficient",
                   ones};
}

}  // namespace tfz
