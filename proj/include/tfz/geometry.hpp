#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tfz {

// An ordered basis of R^d, stored as the column matrix mapping the standard
// basis to it.  The dual basis satisfies <e_j, e'_k> = 2*pi*delta_jk, i.e.
// its matrix is 2*pi*(T^{-1})^t.
class OrderedBasis {
 public:
  // colmajor holds d*d entries, column k at [k*d .. k*d+d).
  OrderedBasis(int dim, std::vector<double> colmajor);

  static OrderedBasis standard(int dim);
  static OrderedBasis diagonal(const std::vector<double>& diag);

  int dim() const { return dim_; }
  double det() const { return det_; }
  double cell_volume() const;
  double entry(int row, int col) const { return cols_[static_cast<std::size_t>(col) * dim_ + row]; }
  std::vector<double> column(int k) const;
  double condition_estimate() const { return cond_; }
  bool is_diagonal(double tol = 1e-14) const;

  OrderedBasis dual() const;

  // x = T_E u
  std::vector<double> map(std::span<const double> u) const;
  // u with T_E u = x
  std::vector<double> coords(std::span<const double> x) const;

  // Lattice point n_1 e_1 + ... + n_d e_d.
  std::vector<double> lattice_point(std::span<const int> n) const;

  bool approx_equal(const OrderedBasis& other, double tol) const;

 private:
  int dim_;
  std::vector<double> cols_;  // T_E, column-major
  std::vector<double> inv_;   // T_E^{-1}, column-major
  double det_;
  double cond_;
};

double inner(std::span<const double> a, std::span<const double> b);

// 2d-dimensional basis with the first d columns (x,0) from E1 and the last d
// columns (0,xi) from E2.
OrderedBasis product_basis(const OrderedBasis& e1, const OrderedBasis& e2);

// Swap the two d-blocks of a 2d basis.
OrderedBasis rotate_half(const OrderedBasis& e);

struct LatticePatch {
  OrderedBasis basis;
  std::vector<std::vector<int>> points;  // integer coordinates n
  std::vector<double> region_lo, region_hi;
};

// All n in Z^d with T_E n inside the (bounded) box in standard coordinates.
LatticePatch lattice_points(const OrderedBasis& e, std::span<const double> lo,
                            std::span<const double> hi);

struct PhaseSplitDescriptor {
  OrderedBasis basis2d;
  std::vector<int> mask;  // indices of E_0 within E, ascending
  OrderedBasis e1, e2;    // induced pair
  std::vector<int> permutation;  // e2[perm[k]] matches dual(e1) column k
  bool strongly;                 // mask == first d vectors
};

// Accepts iff the masked subset spans V1, the complement spans V2, and the
// induced pair (E1,E2) are permuted dual bases (tolerance 1e-10).
std::optional<PhaseSplitDescriptor> is_phase_split(const OrderedBasis& e,
                                                   const std::vector<int>& mask);

std::string basis_to_json(const OrderedBasis& e);
OrderedBasis basis_from_json(const std::string& text);

}  // namespace tfz
