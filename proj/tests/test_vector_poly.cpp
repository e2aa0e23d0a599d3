#include "doctest.h"

#include <random>

#include "oracles.hpp"
#include "specband/errors.hpp"
#include "specband/vector_poly.hpp"

using namespace specband;

namespace {

VectorPolynomial vp(int n, std::vector<ScalarPolynomial> c) { return VectorPolynomial(n, std::move(c)); }

VectorPolynomial random_poly(std::mt19937_64& rng, int n, int max_deg) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> deg(-1, max_deg);
  std::vector<ScalarPolynomial> comps(n);
  for (auto& c : comps) {
    const int d = deg(rng);
    for (int i = 0; i <= d; ++i) c.push_back({u(rng), u(rng)});
    if (d >= 0) c.back() = {1.0 + std::abs(u(rng)), 0.0};
  }
  return vp(n, comps);
}

}  // namespace

TEST_CASE("height") {
  CHECK(height(vp(3, {{1.0}, {}, {}})) == Height(0));
  CHECK(height(vp(3, {{0.0, 1.0}, {}, {1.0}})) == Height(3));
  CHECK(height(VectorPolynomial(3)) == Height::minus_infinity());
  CHECK_FALSE(height(VectorPolynomial(3)).finite());
  CHECK(Height::minus_infinity() < Height(0));
  CHECK(Height::minus_infinity() + 5 == Height::minus_infinity());
  CHECK(Height::minus_infinity().str() == "-inf");
  CHECK_THROWS(Height::minus_infinity().value());
}

TEST_CASE("canonical_e") {
  CHECK(canonical_e(2, 3) == vp(3, {{}, {1.0}, {}}));
  CHECK(canonical_e(4, 3) == vp(3, {{0.0, 1.0}, {}, {}}));
  const auto e7 = canonical_e(7, 3);
  CHECK(e7 == vp(3, {{0.0, 0.0, 1.0}, {}, {}}));
  CHECK(height(e7) == Height(6));
  CHECK_THROWS(canonical_e(0, 3));
}

TEST_CASE("evaluate") {
  const auto v = vp(3, {{0.0, 1.0}, {}, {1.0}}).evaluate(2.0);
  CHECK(v(0) == cd{2.0});
  CHECK(v(1) == cd{});
  CHECK(v(2) == cd{1.0});
  CHECK(VectorPolynomial(2).evaluate(cd{3.0, 1.0}).isZero());
  // 1 - z^2 at t = 1 vanishes exactly.
  CHECK(vp(1, {{1.0, 0.0, -1.0}}).evaluate(1.0)(0) == cd{});
}

TEST_CASE("arithmetic") {
  CHECK(vp(3, {{1.0}, {}, {}}).times_z() == vp(3, {{0.0, 1.0}, {}, {}}));
  CHECK((vp(2, {{1.0}, {}}) + vp(2, {{-1.0}, {}})).is_zero());
  const auto r = vp(2, {{}, {1.0}}).times({0.0, 0.0, 1.0});
  CHECK(r == vp(2, {{}, {0.0, 0.0, 1.0}}));
  CHECK(height(r) == Height(5));
  CHECK_THROWS_AS(vp(2, {{1.0}, {}}) + vp(3, {{1.0}, {}, {}}), DimensionMismatch);
  CHECK_THROWS_AS(VectorPolynomial(0), DimensionMismatch);
  CHECK(vp(1, {{cd{1.0, 2.0}}}).conj_coeffs() == vp(1, {{cd{1.0, -2.0}}}));
  CHECK(vp(1, {{1.0, 1e-14}}).trim(1e-12) == vp(1, {{1.0}}));
}

TEST_CASE("height coefficient layout") {
  const auto r = vp(2, {{1.0, 3.0}, {2.0}});
  CHECK(r.height_coefficients(4) == std::vector<cd>{1.0, 2.0, 3.0, 0.0});
  CHECK(VectorPolynomial::from_height_coefficients(2, {1.0, 2.0, 3.0}) == r);
}

TEST_CASE("property: multiplying by z^l adds n*l to the height") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const auto r = random_poly(rng, n, 5);
    const int l = trial % 6;
    if (r.is_zero()) {
      CHECK(height(r.times_z(l)) == Height::minus_infinity());
    } else {
      CHECK(height(r.times_z(l)) == height(r) + n * l);
    }
  }
}

TEST_CASE("property: every height is attained by a canonical polynomial") {
  for (int n = 1; n <= 5; ++n) {
    for (int h = 0; h <= 40; ++h) {
      CHECK(height(canonical_e(h + 1, n)) == Height(h));
      // Same object as z^l e_m with h = n l + m - 1.
      CHECK(canonical_e(h + 1, n) == canonical_e(h % n + 1, n).times_z(h / n));
    }
  }
}

TEST_CASE("property: height of a sum") {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = random_poly(rng, n, 4);
    const auto b = random_poly(rng, n, 4);
    const Height ha = height(a), hb = height(b), hs = height(a + b);
    CHECK(hs <= std::max(ha, hb));
    if (ha != hb) CHECK(hs == std::max(ha, hb));
  }
}

TEST_CASE("property: Horner agrees with power sums") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r = random_poly(rng, 2, 6);
    const cd t{u(rng), u(rng)};
    const auto v = r.evaluate(t);
    for (int j = 1; j <= 2; ++j) CHECK(std::abs(v(j - 1) - oracle::power_sum(r.comp(j), t)) < 1e-12);
  }
}
