#include "tfz/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace tfz {

namespace {

// Gauss-Jordan with partial pivoting; also returns the determinant.
std::vector<double> invert(int d, const std::vector<double>& colmajor, double& det) {
  std::vector<std::vector<double>> a(d, std::vector<double>(2 * d, 0.0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) a[i][j] = colmajor[static_cast<std::size_t>(j) * d + i];
    a[i][d + i] = 1.0;
  }
  det = 1.0;
  for (int col = 0; col < d; ++col) {
    int piv = col;
    for (int r = col + 1; r < d; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (piv != col) {
      std::swap(a[piv], a[col]);
      det = -det;
    }
    const double p = a[col][col];
    det *= p;
    if (p == 0.0) return {};
    for (int j = 0; j < 2 * d; ++j) a[col][j] /= p;
    for (int r = 0; r < d; ++r) {
      if (r == col) continue;
      const double f = a[r][col];
      if (f == 0.0) continue;
      for (int j = 0; j < 2 * d; ++j) a[r][j] -= f * a[col][j];
    }
  }
  std::vector<double> inv(static_cast<std::size_t>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) inv[static_cast<std::size_t>(j) * d + i] = a[i][d + j];
  return inv;
}

double frob(const std::vector<double>& m) {
  double s = 0.0;
  for (double v : m) s += v * v;
  return std::sqrt(s);
}

}  // namespace

OrderedBasis::OrderedBasis(int dim, std::vector<double> colmajor)
    : dim_(dim), cols_(std::move(colmajor)) {
  if (dim_ <= 0) throw std::invalid_argument("OrderedBasis: dim must be positive");
  if (cols_.size() != static_cast<std::size_t>(dim_) * dim_)
    throw std::invalid_argument("OrderedBasis: matrix size does not match dim");
  inv_ = invert(dim_, cols_, det_);
  const double scale = frob(cols_);
  if (inv_.empty() || std::abs(det_) <= 1e-12 * std::max(1.0, scale))
    throw std::invalid_argument("OrderedBasis: singular basis matrix");
  cond_ = frob(cols_) * frob(inv_);
  if (cond_ >= 1e8)
    throw std::invalid_argument("OrderedBasis: condition number exceeds 1e8");
}

OrderedBasis OrderedBasis::standard(int dim) {
  std::vector<double> m(static_cast<std::size_t>(dim) * dim, 0.0);
  for (int i = 0; i < dim; ++i) m[static_cast<std::size_t>(i) * dim + i] = 1.0;
  return OrderedBasis(dim, std::move(m));
}

OrderedBasis OrderedBasis::diagonal(const std::vector<double>& diag) {
  const int d = static_cast<int>(diag.size());
  std::vector<double> m(static_cast<std::size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i) m[static_cast<std::size_t>(i) * d + i] = diag[i];
  return OrderedBasis(d, std::move(m));
}

double OrderedBasis::cell_volume() const { return std::abs(det_); }

std::vector<double> OrderedBasis::column(int k) const {
  return std::vector<double>(cols_.begin() + static_cast<std::size_t>(k) * dim_,
                             cols_.begin() + static_cast<std::size_t>(k + 1) * dim_);
}

bool OrderedBasis::is_diagonal(double tol) const {
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      if (i != j && std::abs(entry(i, j)) > tol) return false;
  return true;
}

OrderedBasis OrderedBasis::dual() const {
  std::vector<double> m(cols_.size());
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      m[static_cast<std::size_t>(j) * dim_ + i] =
          2.0 * std::numbers::pi * inv_[static_cast<std::size_t>(i) * dim_ + j];
  return OrderedBasis(dim_, std::move(m));
}

std::vector<double> OrderedBasis::map(std::span<const double> u) const {
  std::vector<double> x(dim_, 0.0);
  for (int j = 0; j < dim_; ++j)
    for (int i = 0; i < dim_; ++i) x[i] += entry(i, j) * u[j];
  return x;
}

std::vector<double> OrderedBasis::coords(std::span<const double> x) const {
  std::vector<double> u(dim_, 0.0);
  for (int j = 0; j < dim_; ++j)
    for (int i = 0; i < dim_; ++i)
      u[i] += inv_[static_cast<std::size_t>(j) * dim_ + i] * x[j];
  return u;
}

std::vector<double> OrderedBasis::lattice_point(std::span<const int> n) const {
  std::vector<double> u(n.begin(), n.end());
  return map(u);
}

bool OrderedBasis::approx_equal(const OrderedBasis& other, double tol) const {
  if (other.dim_ != dim_) return false;
  const double scale = std::max(1.0, frob(cols_));
  for (std::size_t i = 0; i < cols_.size(); ++i)
    if (std::abs(cols_[i] - other.cols_[i]) > tol * scale) return false;
  return true;
}

double inner(std::span<const double> a, std::span<const double> b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

OrderedBasis product_basis(const OrderedBasis& e1, const OrderedBasis& e2) {
  if (e1.dim() != e2.dim())
    throw std::invalid_argument("product_basis: dimension mismatch");
  const int d = e1.dim();
  const int dd = 2 * d;
  std::vector<double> m(static_cast<std::size_t>(dd) * dd, 0.0);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) {
      m[static_cast<std::size_t>(j) * dd + i] = e1.entry(i, j);
      m[static_cast<std::size_t>(d + j) * dd + d + i] = e2.entry(i, j);
    }
  return OrderedBasis(dd, std::move(m));
}

OrderedBasis rotate_half(const OrderedBasis& e) {
  if (e.dim() % 2 != 0)
    throw std::invalid_argument("rotate_half: basis dimension must be even");
  const int dd = e.dim();
  const int d = dd / 2;
  std::vector<double> m(static_cast<std::size_t>(dd) * dd);
  for (int j = 0; j < dd; ++j) {
    const int src = (j + d) % dd;
    for (int i = 0; i < dd; ++i)
      m[static_cast<std::size_t>(j) * dd + i] = e.entry((i + d) % dd, src);
  }
  return OrderedBasis(dd, std::move(m));
}

LatticePatch lattice_points(const OrderedBasis& e, std::span<const double> lo,
                            std::span<const double> hi) {
  const int d = e.dim();
  if (static_cast<int>(lo.size()) != d || static_cast<int>(hi.size()) != d)
    throw std::invalid_argument("lattice_points: region dimension mismatch");
  for (int i = 0; i < d; ++i)
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
      throw std::invalid_argument("lattice_points: region must be bounded");

  // Bound integer coordinates: |n_i| <= ||T^{-1}|| * max corner radius.
  double radius = 0.0;
  for (int i = 0; i < d; ++i)
    radius = std::max(radius, std::max(std::abs(lo[i]), std::abs(hi[i])));
  std::vector<double> corner(d, radius);
  std::vector<double> u = e.coords(corner);
  double ubound = 0.0;
  // coords of the all-radius corner underestimates in skew cases; use a
  // conservative factor d on the coordinate bound.
  for (int i = 0; i < d; ++i) ubound = std::max(ubound, std::abs(u[i]));
  const int nmax = static_cast<int>(std::ceil(ubound * d)) + 1;

  LatticePatch patch{e, {}, {lo.begin(), lo.end()}, {hi.begin(), hi.end()}};
  std::vector<int> n(d, -nmax);
  while (true) {
    std::vector<double> x = e.lattice_point(n);
    bool inside = true;
    for (int i = 0; i < d; ++i)
      if (x[i] < lo[i] || x[i] > hi[i]) inside = false;
    if (inside) patch.points.push_back(n);
    int k = d - 1;
    for (; k >= 0; --k) {
      if (++n[k] <= nmax) break;
      n[k] = -nmax;
    }
    if (k < 0) break;
  }
  return patch;
}

std::optional<PhaseSplitDescriptor> is_phase_split(const OrderedBasis& e,
                                                   const std::vector<int>& mask) {
  const int dd = e.dim();
  if (dd % 2 != 0) return std::nullopt;
  const int d = dd / 2;
  if (static_cast<int>(mask.size()) != d) return std::nullopt;

  std::vector<bool> in_mask(dd, false);
  for (int idx : mask) {
    if (idx < 0 || idx >= dd || in_mask[idx]) return std::nullopt;
    in_mask[idx] = true;
  }
  std::vector<int> mask_sorted = mask;
  std::sort(mask_sorted.begin(), mask_sorted.end());

  const double scale = std::max(1.0, std::abs(e.entry(0, 0)));
  const double tol = 1e-10 * scale;

  // Condition (1): masked vectors lie in V1 = R^d x {0}, the rest in V2.
  std::vector<double> m1, m2;
  std::vector<int> rest;
  for (int j = 0; j < dd; ++j) {
    const bool masked = in_mask[j];
    for (int i = 0; i < dd; ++i) {
      const double v = e.entry(i, j);
      const bool upper = i < d;
      if (masked && !upper && std::abs(v) > tol) return std::nullopt;
      if (!masked && upper && std::abs(v) > tol) return std::nullopt;
    }
    if (!masked) rest.push_back(j);
  }
  for (int j : mask_sorted)
    for (int i = 0; i < d; ++i) m1.push_back(e.entry(i, j));
  for (int j : rest)
    for (int i = 0; i < d; ++i) m2.push_back(e.entry(d + i, j));

  OrderedBasis e1(d, m1), e2(d, m2);
  OrderedBasis e1dual = e1.dual();

  // Condition (2): some permutation of E2 equals dual(E1).  Exhaustive for
  // d <= 4, greedy nearest-match beyond.
  std::vector<int> perm;
  auto matches = [&](const std::vector<int>& p) {
    for (int k = 0; k < d; ++k) {
      auto want = e1dual.column(k);
      auto got = e2.column(p[k]);
      for (int i = 0; i < d; ++i)
        if (std::abs(want[i] - got[i]) > 1e-10 * std::max(1.0, std::abs(want[i])))
          return false;
    }
    return true;
  };
  if (d <= 4) {
    std::vector<int> p(d);
    std::iota(p.begin(), p.end(), 0);
    do {
      if (matches(p)) {
        perm = p;
        break;
      }
    } while (std::next_permutation(p.begin(), p.end()));
  } else {
    std::vector<int> p(d, -1);
    std::vector<bool> used(d, false);
    for (int k = 0; k < d; ++k) {
      auto want = e1dual.column(k);
      double best = 1e300;
      int besti = -1;
      for (int i = 0; i < d; ++i) {
        if (used[i]) continue;
        auto got = e2.column(i);
        double dist = 0.0;
        for (int r = 0; r < d; ++r) dist += (want[r] - got[r]) * (want[r] - got[r]);
        if (dist < best) {
          best = dist;
          besti = i;
        }
      }
      p[k] = besti;
      used[besti] = true;
    }
    if (matches(p)) perm = p;
  }
  if (perm.empty()) return std::nullopt;

  bool strongly = true;
  for (int k = 0; k < d; ++k)
    if (mask_sorted[k] != k) strongly = false;

  return PhaseSplitDescriptor{e, mask, std::move(e1), std::move(e2),
                              std::move(perm), strongly};
}

std::string basis_to_json(const OrderedBasis& e) {
  nlohmann::ordered_json j;
  j["dim"] = e.dim();
  std::vector<std::vector<double>> cols;
  for (int k = 0; k < e.dim(); ++k) cols.push_back(e.column(k));
  j["columns"] = cols;
  return j.dump();
}

OrderedBasis basis_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  const int d = j.at("dim").get<int>();
  auto cols = j.at("columns").get<std::vector<std::vector<double>>>();
  if (static_cast<int>(cols.size()) != d)
    throw std::invalid_argument("basis_from_json: column count mismatch");
  std::vector<double> m;
  for (const auto& c : cols) {
    if (static_cast<int>(c.size()) != d)
      throw std::invalid_argument("basis_from_json: column length mismatch");
    m.insert(m.end(), c.begin(), c.end());
  }
  return OrderedBasis(d, std::move(m));
}

}  // namespace tfz
