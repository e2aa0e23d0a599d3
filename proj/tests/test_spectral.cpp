#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "specband/errors.hpp"
#include "specband/spectral.hpp"

using namespace specband;

namespace {

const double kPi = std::numbers::pi;

struct Built {
  FiniteHermitian m;
  StructureInfo s;
  BoundaryMatrix t;
  SpectralData sd;
  StepMeasure mu;
  std::vector<VectorPolynomial> p;
  std::vector<VectorPolynomial> q;
};

Built build(const MatrixSpec& spec, int N, const BoundaryMatrix& t) {
  Built b;
  b.m = truncate(spec, N);
  b.s = analyze_structure(spec, N);
  b.t = t;
  b.sd = eigen_decompose(b.m);
  b.mu = step_measure(b.sd, t);
  b.p = build_p(b.m, b.s, t);
  b.q = build_q(b.m, b.s, b.p);
  return b;
}

Built build(const MatrixSpec& spec, int N) { return build(spec, N, BoundaryMatrix::identity(spec.n)); }

VectorPolynomial scalar(std::vector<cd> c) { return VectorPolynomial(1, {std::move(c)}); }

// Two decoupled exchange matrices: eigenvalues -1 and 1, each twice.
MatrixSpec double_flip() {
  MatrixSpec s;
  s.n = 2;
  s.n_max = 4;
  s.set_entry(1, 3, 1.0);
  s.set_entry(2, 4, 1.0);
  s.pivot = {{3, 1}, {4, 2}};
  s.tail = Tail{1, 3};
  return s;
}

double det_scale(const Built& b) {
  double scale = 0.0;
  const double lo = b.sd.lambdas.minCoeff() - 1.0, hi = b.sd.lambdas.maxCoeff() + 1.0;
  for (int i = 0; i <= 50; ++i) scale = std::max(scale, std::abs(det_theta(b.m, b.s, b.t, lo + (hi - lo) * i / 50.0)));
  return scale;
}

}  // namespace

TEST_CASE("boundary matrix") {
  Eigen::MatrixXcd t(2, 2);
  t << 1.0, 2.0, 0.0, 3.0;
  CHECK(BoundaryMatrix(t).n() == 2);
  t(1, 0) = 1.0;
  CHECK_THROWS_AS(BoundaryMatrix{t}, DimensionMismatch);
  t(1, 0) = 0.0;
  t(1, 1) = 0.0;
  CHECK_THROWS_AS(BoundaryMatrix{t}, SingularBoundary);
  CHECK(BoundaryMatrix::random(3, 5) == BoundaryMatrix::random(3, 5));
  const auto r = BoundaryMatrix::random(4, 8, 0.5, 2.0, true).matrix();
  for (int i = 0; i < 4; ++i) {
    CHECK(std::abs(r(i, i)) >= 0.5);
    CHECK(std::abs(r(i, i)) <= 2.0);
  }
}

TEST_CASE("eigen_decompose") {
  SUBCASE("exchange matrix") {
    const auto sd = eigen_decompose(truncate(fixtures::flip2(), 2));
    CHECK(std::abs(sd.lambdas(0) + 1.0) < 1e-14);
    CHECK(std::abs(sd.lambdas(1) - 1.0) < 1e-14);
    const double r = 1.0 / std::sqrt(2.0);
    // Phase choice makes the first entry positive.
    CHECK(std::abs(sd.phi(0, 0) - r) < 1e-14);
    CHECK(std::abs(sd.phi(1, 0) + r) < 1e-14);
    CHECK(std::abs(sd.phi(0, 1) - r) < 1e-14);
    CHECK(std::abs(sd.phi(1, 1) - r) < 1e-14);
  }
  SUBCASE("free Jacobi") {
    const auto sd = eigen_decompose(truncate(fixtures::jac5(), 5));
    for (int i = 0; i < 5; ++i) CHECK(std::abs(sd.lambdas(i) - 2.0 * std::cos((5 - i) * kPi / 6.0)) < 1e-13);
  }
  SUBCASE("seven-row fixture against a second eigensolver") {
    const auto m = truncate(fixtures::fix7(), 7);
    const auto sd = eigen_decompose(m);
    const auto ref = oracle::jacobi_eigenvalues(m.data());
    for (int i = 0; i < 7; ++i) CHECK(std::abs(sd.lambdas(i) - ref[i]) < 1e-10);
    CHECK(oracle::max_abs(sd.phi.adjoint() * sd.phi - Eigen::MatrixXcd::Identity(7, 7)) < 1e-10 * 7);
  }
}

TEST_CASE("build_p") {
  SUBCASE("exchange matrix") {
    const auto b = build(fixtures::flip2(), 2);
    REQUIRE(b.p.size() == 2);
    CHECK(b.p[0] == scalar({1.0}));
    CHECK(oracle::coeff_gap(b.p[1].comps(), {{0.0, 1.0}}) < 1e-15);
  }
  SUBCASE("free Jacobi gives Chebyshev U") {
    const auto b = build(fixtures::jac5(), 5);
    for (int k = 0; k < 5; ++k) {
      const auto u = oracle::chebyshev_u_half(k);
      CHECK(oracle::coeff_gap(b.p[k].comps(), {std::vector<cd>(u.begin(), u.end())}) < 1e-13);
    }
  }
  SUBCASE("seven-row fixture, first recursion step") {
    const auto spec = fixtures::fix7();
    const auto b = build(spec, 7);
    // p4 = ((z - m11) p1 - m12 p2 - m13 p3) / m14 with p_i = e_i.
    const cd m11 = spec.entry(1, 1), m12 = spec.entry(1, 2), m13 = spec.entry(1, 3), m14 = spec.entry(1, 4);
    const std::vector<std::vector<cd>> expect{{-m11 / m14, 1.0 / m14}, {-m12 / m14}, {-m13 / m14}};
    CHECK(oracle::coeff_gap(b.p[3].comps(), expect) < 1e-14);
    for (int k = 1; k <= 3; ++k) CHECK(height(b.p[k - 1]) == Height(k - 1));
  }
  SUBCASE("boundary columns") {
    Eigen::MatrixXcd t(3, 3);
    t << 2.0, 0.5, cd(0.0, 1.0), 0.0, 1.0, -1.0, 0.0, 0.0, 3.0;
    const auto b = build(fixtures::fix7(), 7, BoundaryMatrix(t));
    for (int k = 0; k < 3; ++k) CHECK(b.p[k] == VectorPolynomial::constant(t.col(k)));
  }
  SUBCASE("zero pivot entry") {
    auto spec = fixtures::fix7();
    const auto m = truncate(spec, 7);
    auto s = analyze_structure(spec, 7);
    Eigen::MatrixXcd d = m.data();
    d(0, 3) = d(3, 0) = 0.0;
    CHECK_THROWS_AS(build_p(FiniteHermitian(d), s, BoundaryMatrix::identity(3)), PivotViolation);
  }
}

TEST_CASE("build_q") {
  SUBCASE("exchange matrix") {
    const auto b = build(fixtures::flip2(), 2);
    REQUIRE(b.q.size() == 1);
    CHECK(oracle::coeff_gap(b.q[0].comps(), {{1.0, 0.0, -1.0}}) < 1e-15);
  }
  SUBCASE("seven-row fixture, last row") {
    const auto spec = fixtures::fix7();
    const auto b = build(spec, 7);
    REQUIRE(b.q.size() == 3);
    const auto expect = b.p[6] * spec.entry(7, 7) - b.p[6].times_z() + b.p[5] * spec.entry(6, 7);
    CHECK(oracle::coeff_gap(b.q[2].comps(), expect.comps()) < 1e-12);
  }
  SUBCASE("free Jacobi roots are the eigenvalues") {
    const auto spec = fixtures::jac5();
    const auto b = build(spec, 5);
    REQUIRE(b.q.size() == 1);
    const auto expect = b.p[4] * spec.entry(5, 5) - b.p[4].times_z() + b.p[3] * spec.entry(4, 5);
    CHECK(oracle::coeff_gap(b.q[0].comps(), expect.comps()) < 1e-13);
    for (int i = 0; i < 5; ++i) CHECK(std::abs(b.q[0].evaluate(b.sd.lambdas(i))(0)) < 1e-12);
  }
}

TEST_CASE("c_vectors") {
  SUBCASE("exchange matrix") {
    const auto b = build(fixtures::flip2(), 2);
    for (const auto& pt : b.mu.points) CHECK(std::abs(pt.C(0) - 1.0 / std::sqrt(2.0)) < 1e-14);
  }
  SUBCASE("free Jacobi") {
    const auto b = build(fixtures::jac5(), 5);
    for (int i = 0; i < 5; ++i) {
      const int k = 5 - i;
      CHECK(std::abs(b.mu.points[i].C(0) - std::sqrt(1.0 / 3.0) * std::sin(k * kPi / 6.0)) < 1e-13);
    }
  }
  SUBCASE("scalar boundary scales by the conjugate reciprocal") {
    const auto m = truncate(fixtures::fix7(), 7);
    const auto sd = eigen_decompose(m);
    const cd alpha{1.5, -0.5};
    const auto base = c_vectors(sd, BoundaryMatrix::identity(3));
    const auto scaled = c_vectors(sd, BoundaryMatrix(alpha * Eigen::MatrixXcd::Identity(3, 3)));
    for (std::size_t k = 0; k < base.size(); ++k) CHECK(oracle::max_abs(scaled[k] - base[k] / std::conj(alpha)) < 1e-14);
  }
  SUBCASE("every C is nonzero") {
    const auto b = build(fixtures::fix7(), 7);
    for (const auto& pt : b.mu.points) CHECK(pt.C.norm() > 1e-8);
  }
}

TEST_CASE("step_measure") {
  SUBCASE("exchange matrix") {
    const auto mu = build(fixtures::flip2(), 2).mu;
    const auto jumps = mu.jumps();
    REQUIRE(jumps.size() == 2);
    CHECK(std::abs(jumps[0].lambda + 1.0) < 1e-14);
    CHECK(std::abs(jumps[1].lambda - 1.0) < 1e-14);
    for (const auto& j : jumps) CHECK(std::abs(j.mass(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(mu.total_mass()(0, 0) - 1.0) < 1e-14);
    CHECK(std::abs(mu.value_at(0.0)(0, 0) - 0.5) < 1e-14);
    CHECK(std::abs(mu.value_at(-1.0)(0, 0)) < 1e-14);
  }
  SUBCASE("free Jacobi") {
    const auto mu = build(fixtures::jac5(), 5).mu;
    const auto jumps = mu.jumps();
    REQUIRE(jumps.size() == 5);
    for (int i = 0; i < 5; ++i) {
      const double s = std::sin((5 - i) * kPi / 6.0);
      CHECK(std::abs(jumps[i].mass(0, 0) - s * s / 3.0) < 1e-13);
    }
    CHECK(std::abs(mu.total_mass()(0, 0) - 1.0) < 1e-13);
  }
  SUBCASE("seven-row fixture rank sum") {
    int total = 0;
    for (const auto& j : build(fixtures::fix7(), 7).mu.jumps()) total += j.rank;
    CHECK(total == 7);
  }
  SUBCASE("double eigenvalues give rank-two jumps") {
    const auto mu = build(double_flip(), 4).mu;
    const auto jumps = mu.jumps();
    REQUIRE(jumps.size() == 2);
    for (const auto& j : jumps) {
      CHECK(j.rank == 2);
      CHECK(j.count == 2);
      CHECK(oracle::max_abs(j.mass - 0.5 * Eigen::MatrixXcd::Identity(2, 2)) < 1e-13);
    }
  }
}

TEST_CASE("inner products and moments") {
  const auto b = build(fixtures::flip2(), 2);
  CHECK(std::abs(inner_product(b.p[0], b.p[0], b.mu) - 1.0) < 1e-14);
  CHECK(std::abs(inner_product(b.q[0], b.q[0], b.mu)) < 1e-14);
  const auto S = moments(b.mu, 2);
  CHECK(std::abs(S[0](0, 0) - 1.0) < 1e-14);
  CHECK(std::abs(S[1](0, 0)) < 1e-14);
  CHECK(std::abs(S[2](0, 0) - 1.0) < 1e-14);
  CHECK_THROWS_AS(inner_product(b.p[0], VectorPolynomial(2, {{1.0}, {}}), b.mu), DimensionMismatch);

  const auto j = build(fixtures::jac5(), 5);
  CHECK(std::abs(moment(j.mu, 0)(0, 0) - 1.0) < 1e-13);
  CHECK(std::abs(moment(j.mu, 2)(0, 0) - 1.0) < 1e-13);
  CHECK(std::abs(moment(j.mu, 4)(0, 0) - 2.0) < 1e-13);
}

TEST_CASE("det Theta") {
  SUBCASE("exchange matrix") {
    const auto b = build(fixtures::flip2(), 2);
    CHECK(std::abs(det_theta(b.m, b.s, b.t, 1.0)) < 1e-15);
    // Theta(z) = 1 - z^2 for the identity boundary.
    CHECK(std::abs(std::abs(det_theta(b.m, b.s, b.t, 0.0)) - 1.0) < 1e-15);
  }
  SUBCASE("seven-row fixture vanishes on the spectrum") {
    const auto b = build(fixtures::fix7(), 7);
    const double scale = det_scale(b);
    for (int i = 0; i < 7; ++i) CHECK(std::abs(det_theta(b.m, b.s, b.t, b.sd.lambdas(i))) <= 1e-8 * scale);
  }
  SUBCASE("interpolated polynomial has the spectrum as roots") {
    for (const auto& spec : {fixtures::jac5(), fixtures::fix7()}) {
      const int N = spec.n_max;
      const auto b = build(spec, N);
      const auto cheb = interpolate_det_theta(b.m, b.s, b.t);
      const auto roots = cheb.roots();
      REQUIRE(roots.size() == static_cast<std::size_t>(N));
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(roots[i].real() - b.sd.lambdas(i)) < 1e-8);
        CHECK(std::abs(roots[i].imag()) < 1e-8);
      }
      const cd z{0.3, 0.2};
      CHECK(std::abs(cheb(z) - det_theta(b.m, b.s, b.t, z)) < 1e-9 * det_scale(b));
    }
  }
}

TEST_CASE("property: orthonormality, zero norms and multiplication by t") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const bool complex_entries = seed % 3 == 0;
    const auto inst = fixtures::random_instance(seed, 16, complex_entries);
    const auto t = BoundaryMatrix::random(inst.spec.n, seed, 0.5, 2.0, complex_entries);
    const auto b = build(inst.spec, inst.N, t);
    CAPTURE(seed);
    const int N = inst.N;
    const auto G = gram(b.p, b.mu);
    CHECK(oracle::max_abs(G - Eigen::MatrixXcd::Identity(N, N)) < 1e-9);
    for (const auto& q : b.q) CHECK(std::abs(inner_product(q, q, b.mu)) < 1e-9);
    double mult = 0.0;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j)
        mult = std::max(mult, std::abs(inner_product(b.p[i], b.p[j].times_z(), b.mu) - b.m(i + 1, j + 1)));
    CHECK(mult < 1e-9);
  }
}

TEST_CASE("property: completeness, pointwise Theta C = 0, multiplicity") {
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    const bool complex_entries = seed % 2 == 0;
    const auto inst = fixtures::random_instance(seed, 18, complex_entries);
    const int n = inst.spec.n;
    const auto t = BoundaryMatrix::random(n, seed + 1000, 0.5, 2.0, complex_entries);
    const auto b = build(inst.spec, inst.N, t);
    CAPTURE(seed);
    const Eigen::MatrixXcd T = t.matrix();
    CHECK(oracle::max_abs(T.adjoint() * b.mu.total_mass() * T - Eigen::MatrixXcd::Identity(n, n)) < 1e-10);
    for (int k = 0; k < inst.N; ++k) {
      const auto sys = evaluate_system(b.m, b.s, t, b.sd.lambdas(k));
      const auto& C = b.mu.points[k].C;
      CHECK((sys.theta * C).norm() < 1e-8 * std::max(1.0, sys.theta.norm()));
      // Psi C reproduces the eigenvector itself.
      CHECK((sys.psi * C - b.sd.phi.col(k)).norm() < 1e-8 * std::max(1.0, sys.psi.norm()));
    }
    int ranks = 0;
    for (const auto& j : b.mu.jumps()) {
      CHECK(j.rank <= n);
      CHECK(j.rank == j.count);
      ranks += j.rank;
    }
    CHECK(ranks == inst.N);
  }
}

TEST_CASE("property: moments match matrix powers") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = fixtures::random_instance(seed, 14, seed % 2 == 1);
    const auto t = BoundaryMatrix::random(inst.spec.n, seed, 0.5, 2.0, seed % 2 == 1);
    const auto b = build(inst.spec, inst.N, t);
    CAPTURE(seed);
    for (int k = 0; k <= 4; ++k) {
      const auto ref = oracle::moment_from_powers(b.m.data(), t.matrix(), k);
      CHECK(oracle::max_abs(moment(b.mu, k) - ref) < 1e-9 * std::max(1.0, oracle::max_abs(ref)));
    }
    const auto S1 = moment(b.mu, 1);
    const int n = inst.spec.n;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        CHECK(std::abs(S1(i - 1, j - 1) - inner_product(canonical_e(i, n), canonical_e(j, n).times_z(), b.mu)) < 1e-10);
  }
}

TEST_CASE("property: kernel of the pivot rows is spanned by Psi") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto inst = fixtures::random_instance(seed, 14, seed % 2 == 0);
    const auto m = truncate(inst.spec, inst.N);
    const auto s = analyze_structure(inst.spec, inst.N);
    const auto t = BoundaryMatrix::random(s.n, seed);
    const double z = u(rng);
    const int N = inst.N;
    Eigen::MatrixXcd A(static_cast<int>(s.K_perp.size()), N);
    for (std::size_t i = 0; i < s.K_perp.size(); ++i) {
      A.row(static_cast<int>(i)) = m.data().row(s.K_perp[i] - 1);
      A(static_cast<int>(i), s.K_perp[i] - 1) -= z;
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(A);
    const Eigen::MatrixXcd ker = lu.kernel();
    CAPTURE(seed);
    CHECK(ker.cols() == s.n);
    const auto psi = evaluate_system(m, s, t, z).psi;
    CHECK(oracle::max_abs(A * psi) < 1e-9 * std::max(1.0, psi.norm()));
    for (int c = 0; c < ker.cols(); ++c) {
      const Eigen::VectorXcd C = psi.colPivHouseholderQr().solve(ker.col(c));
      CHECK((psi * C - ker.col(c)).norm() < 1e-8 * ker.col(c).norm());
    }
  }
}
