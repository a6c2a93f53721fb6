#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tfz/geometry.hpp"

using tfz::OrderedBasis;

TEST_CASE("dual of the standard basis is 2*pi times the identity") {
  const OrderedBasis e = OrderedBasis::standard(3);
  const OrderedBasis d = e.dual();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      CHECK(d.entry(r, c) ==
            doctest::Approx(r == c ? 2.0 * std::numbers::pi : 0.0).epsilon(1e-14));
}

TEST_CASE("dual of the dilated line basis {2} is {pi}") {
  const OrderedBasis e = OrderedBasis::diagonal({2.0});
  CHECK(e.dual().entry(0, 0) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
  // Biduality: (E')' recovers E.
  CHECK(e.dual().dual().approx_equal(e, 1e-12));
}

TEST_CASE("dual pairing <e_j, e'_k> = 2*pi*delta_jk for a sheared basis") {
  const OrderedBasis e(2, {1.0, 0.0, 0.7, 1.3});
  const OrderedBasis d = e.dual();
  for (int j = 0; j < 2; ++j)
    for (int k = 0; k < 2; ++k) {
      const double p = tfz::inner(e.column(j), d.column(k));
      CHECK(p == doctest::Approx(j == k ? 2.0 * std::numbers::pi : 0.0)
                     .epsilon(1e-12)
                     .scale(1.0));
    }
}

TEST_CASE("map and coords are mutually inverse") {
  const OrderedBasis e(2, {1.0, 0.5, -0.25, 2.0});
  const std::vector<double> u{0.3, -1.7};
  const auto x = e.map(u);
  const auto back = e.coords(x);
  CHECK(back[0] == doctest::Approx(u[0]).epsilon(1e-13));
  CHECK(back[1] == doctest::Approx(u[1]).epsilon(1e-13));
  CHECK(e.det() == doctest::Approx(2.125).epsilon(1e-14));
}

TEST_CASE("lattice points inside a box") {
  const OrderedBasis e = OrderedBasis::diagonal({2.0});
  const std::vector<double> lo{-3.0}, hi{3.0};
  const tfz::LatticePatch patch = tfz::lattice_points(e, lo, hi);
  // 2n in [-3, 3] for n in {-1, 0, 1}.
  CHECK(patch.points.size() == 3);
}

TEST_CASE("phase split accepts a dual pair and rejects a mismatched one") {
  const OrderedBasis e1 = OrderedBasis::diagonal({2.0});
  SUBCASE("matched pair") {
    const OrderedBasis big = tfz::product_basis(e1, e1.dual());
    const auto split = tfz::is_phase_split(big, {0});
    REQUIRE(split.has_value());
    CHECK(split->strongly);
    CHECK(split->e1.approx_equal(e1, 1e-12));
  }
  SUBCASE("non-dual pair") {
    const OrderedBasis big = tfz::product_basis(e1, OrderedBasis::diagonal({1.0}));
    CHECK(!tfz::is_phase_split(big, {0}).has_value());
  }
}

TEST_CASE("rotate_half swaps the two coordinate blocks") {
  const OrderedBasis e1 = OrderedBasis::diagonal({2.0});
  const OrderedBasis e2 = OrderedBasis::diagonal({3.0});
  const OrderedBasis swapped = tfz::rotate_half(tfz::product_basis(e1, e2));
  CHECK(swapped.approx_equal(tfz::product_basis(e2, e1), 1e-12));
}

TEST_CASE("basis JSON round trip") {
  const OrderedBasis e(2, {1.0, 0.25, -0.5, 1.75});
  const OrderedBasis back = tfz::basis_from_json(tfz::basis_to_json(e));
  CHECK(back.approx_equal(e, 1e-15));
}
