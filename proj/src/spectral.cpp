#include "specband/spectral.hpp"

#include <algorithm>
#include <random>

#include <Eigen/Eigenvalues>

#include "specband/errors.hpp"

namespace specband {

BoundaryMatrix::BoundaryMatrix(Eigen::MatrixXcd t) : t_(std::move(t)) {
  if (t_.rows() != t_.cols() || t_.rows() == 0) throw DimensionMismatch("boundary matrix must be square");
  for (int i = 0; i < t_.rows(); ++i) {
    for (int j = 0; j < i; ++j) {
      if (t_(i, j) != cd{}) throw DimensionMismatch("boundary matrix must be upper triangular");
    }
    if (t_(i, i) == cd{}) throw SingularBoundary("boundary matrix has a zero diagonal entry");
  }
}

BoundaryMatrix BoundaryMatrix::identity(int n) {
  return BoundaryMatrix(Eigen::MatrixXcd::Identity(n, n));
}

BoundaryMatrix BoundaryMatrix::random(int n, std::uint64_t seed, double diag_lo, double diag_hi,
                                      bool complex_entries) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> diag(diag_lo, diag_hi);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    t(i, i) = diag(rng);
    for (int j = i + 1; j < n; ++j) {
      t(i, j) = complex_entries ? cd{unit(rng), unit(rng)} / std::sqrt(2.0) : cd{unit(rng)};
    }
  }
  return BoundaryMatrix(std::move(t));
}

Eigen::MatrixXcd StepMeasure::value_at(double t) const {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& pt : points) {
    if (pt.lambda < t) s += pt.C * pt.C.adjoint();
  }
  return s;
}

Eigen::MatrixXcd StepMeasure::total_mass() const {
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& pt : points) s += pt.C * pt.C.adjoint();
  return s;
}

std::vector<Jump> StepMeasure::jumps(const Tolerances& tol) const {
  std::vector<const MeasurePoint*> order;
  for (const auto& pt : points) order.push_back(&pt);
  std::stable_sort(order.begin(), order.end(),
                   [](const MeasurePoint* x, const MeasurePoint* y) { return x->lambda < y->lambda; });
  std::vector<Jump> out;
  double last = 0.0;
  for (const MeasurePoint* pt : order) {
    const bool same = !out.empty() && std::abs(pt->lambda - last) <= tol.cluster * (1.0 + std::abs(pt->lambda));
    if (!same) out.push_back({pt->lambda, Eigen::MatrixXcd::Zero(n, n), 0, 0});
    out.back().mass += pt->C * pt->C.adjoint();
    out.back().count += 1;
    last = pt->lambda;
  }
  for (auto& j : out) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(j.mass, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd sv = es.eigenvalues().cwiseAbs();
    const double top = sv.maxCoeff();
    j.rank = top == 0.0 ? 0 : static_cast<int>((sv.array() > tol.rank * top).count());
  }
  return out;
}

SpectralData eigen_decompose(const FiniteHermitian& m) {
  const int N = m.size();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m.data());
  if (es.info() != Eigen::Success) throw NumericalFailure("Hermitian eigensolver did not converge");
  SpectralData sd;
  sd.lambdas = es.eigenvalues();
  sd.phi = es.eigenvectors();
  for (int k = 0; k < N; ++k) {
    auto col = sd.phi.col(k);
    const double cut = 1e-8 * col.cwiseAbs().maxCoeff();
    for (int i = 0; i < N; ++i) {
      if (std::abs(col(i)) > cut) {
        col *= std::conj(col(i)) / std::abs(col(i));
        break;
      }
    }
  }
  const double defect = (sd.phi.adjoint() * sd.phi - Eigen::MatrixXcd::Identity(N, N)).cwiseAbs().maxCoeff();
  if (defect > 1e-10 * N) throw NumericalFailure("eigenvector matrix is not unitary");
  return sd;
}

namespace {

// Coefficients of one vector polynomial, slot-major, in extended precision.
using Wide = std::vector<std::vector<std::complex<long double>>>;

std::complex<long double> widen(cd x) { return {x.real(), x.imag()}; }

VectorPolynomial narrow(const Wide& w) {
  std::vector<ScalarPolynomial> comps;
  for (const auto& slot : w) {
    ScalarPolynomial c;
    for (const auto& x : slot) c.emplace_back(static_cast<double>(x.real()), static_cast<double>(x.imag()));
    comps.push_back(std::move(c));
  }
  return VectorPolynomial(static_cast<int>(w.size()), std::move(comps));
}

}  // namespace

std::vector<VectorPolynomial> build_p(const FiniteHermitian& m, const StructureInfo& s,
                                      const BoundaryMatrix& t, const Tolerances& tol) {
  const int n = s.n;
  const int N = m.size();
  if (t.n() != n) throw DimensionMismatch("boundary matrix size differs from n");
  if (s.N != N) throw DimensionMismatch("structure info was computed for another truncation");
  // The recursion cancels heavily in monomial coefficients; accumulate wide, round once.
  const std::size_t len = static_cast<std::size_t>(N + 1);
  std::vector<Wide> w;
  w.reserve(N);
  for (int k = 1; k <= n; ++k) {
    Wide a(n, std::vector<std::complex<long double>>(len));
    for (int c = 0; c < n; ++c) a[c][0] = widen(t.matrix()(c, k - 1));
    w.push_back(std::move(a));
  }
  for (int c = n + 1; c <= N; ++c) {
    const int r = s.pivot.at(c);
    const cd edge = m(r, c);
    if (edge == cd{}) throw PivotViolation("zero row-edge entry at column " + std::to_string(c));
    Wide acc(n, std::vector<std::complex<long double>>(len));
    for (int q = 0; q < n; ++q)
      for (std::size_t d = 1; d < len; ++d) acc[q][d] = w[r - 1][q][d - 1];
    for (int i = 1; i < c; ++i) {
      const cd v = m(r, i);
      if (v == cd{}) continue;
      const auto cv = widen(std::conj(v));
      for (int q = 0; q < n; ++q)
        for (std::size_t d = 0; d < len; ++d) acc[q][d] -= w[i - 1][q][d] * cv;
    }
    const auto ce = widen(std::conj(edge));
    for (auto& slot : acc)
      for (auto& x : slot) x /= ce;
    w.push_back(std::move(acc));
  }
  std::vector<VectorPolynomial> p;
  p.reserve(N);
  for (const auto& a : w) p.push_back(std::move(narrow(a).trim(tol.coefficient)));
  return p;
}

std::vector<VectorPolynomial> build_q(const FiniteHermitian& m, const StructureInfo& s,
                                      const std::vector<VectorPolynomial>& p, const Tolerances& tol) {
  const int N = m.size();
  if (static_cast<int>(p.size()) != N) throw DimensionMismatch("need one p per row");
  std::vector<VectorPolynomial> q;
  for (int k : s.K) {
    VectorPolynomial acc = -p[k - 1].times_z();
    for (int i = 1; i <= N; ++i) {
      const cd v = m(k, i);
      if (v != cd{}) acc += p[i - 1] * std::conj(v);
    }
    q.push_back(std::move(acc.trim(tol.coefficient)));
  }
  return q;
}

std::vector<Eigen::VectorXcd> c_vectors(const SpectralData& sd, const BoundaryMatrix& t) {
  const int n = t.n();
  const auto& T = t.matrix();
  for (int i = 0; i < n; ++i) {
    if (T(i, i) == cd{}) throw SingularBoundary("boundary matrix is singular");
  }
  if (sd.phi.rows() < n) throw DimensionMismatch("eigenvectors shorter than n");
  const Eigen::MatrixXcd lower = T.adjoint();
  std::vector<Eigen::VectorXcd> out;
  out.reserve(static_cast<std::size_t>(sd.phi.cols()));
  for (int k = 0; k < sd.phi.cols(); ++k) {
    Eigen::VectorXcd phi0 = sd.phi.col(k).head(n);
    out.push_back(lower.triangularView<Eigen::Lower>().solve(phi0));
  }
  return out;
}

StepMeasure step_measure(const SpectralData& sd, const BoundaryMatrix& t) {
  const auto C = c_vectors(sd, t);
  StepMeasure mu;
  mu.n = t.n();
  for (std::size_t k = 0; k < C.size(); ++k) mu.points.push_back({sd.lambdas(static_cast<int>(k)), C[k]});
  return mu;
}

Eigen::VectorXcd samples(const VectorPolynomial& r, const StepMeasure& mu) {
  if (r.dim() != mu.n) throw DimensionMismatch("polynomial and measure dimensions differ");
  Eigen::VectorXcd out(static_cast<int>(mu.points.size()));
  for (std::size_t k = 0; k < mu.points.size(); ++k) {
    const auto& pt = mu.points[k];
    out(static_cast<int>(k)) = pt.C.dot(r.evaluate(pt.lambda));
  }
  return out;
}

cd inner_product(const VectorPolynomial& f, const VectorPolynomial& g, const StepMeasure& mu) {
  if (f.dim() != g.dim()) throw DimensionMismatch("polynomial dimensions differ");
  return samples(f, mu).dot(samples(g, mu));
}

Eigen::MatrixXcd gram(const std::vector<VectorPolynomial>& polys, const StepMeasure& mu) {
  Eigen::MatrixXcd S(static_cast<int>(mu.points.size()), static_cast<int>(polys.size()));
  for (std::size_t i = 0; i < polys.size(); ++i) S.col(static_cast<int>(i)) = samples(polys[i], mu);
  return S.adjoint() * S;
}

Eigen::MatrixXcd moment(const StepMeasure& mu, int k) {
  if (k < 0) throw std::invalid_argument("moment order must be nonnegative");
  Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(mu.n, mu.n);
  for (const auto& pt : mu.points) s += std::pow(pt.lambda, k) * (pt.C * pt.C.adjoint());
  return s;
}

std::vector<Eigen::MatrixXcd> moments(const StepMeasure& mu, int kmax) {
  std::vector<Eigen::MatrixXcd> out;
  for (int k = 0; k <= kmax; ++k) out.push_back(moment(mu, k));
  return out;
}

SystemValues evaluate_system(const FiniteHermitian& m, const StructureInfo& s, const BoundaryMatrix& t,
                             cd z) {
  const int n = s.n;
  const int N = m.size();
  if (t.n() != n) throw DimensionMismatch("boundary matrix size differs from n");
  SystemValues out;
  out.psi = Eigen::MatrixXcd::Zero(N, n);
  out.psi.topRows(n) = t.matrix().adjoint();
  for (int c = n + 1; c <= N; ++c) {
    const int r = s.pivot.at(c);
    Eigen::RowVectorXcd acc = z * out.psi.row(r - 1);
    for (int i = 1; i < c; ++i) acc -= m(r, i) * out.psi.row(i - 1);
    out.psi.row(c - 1) = acc / m(r, c);
  }
  out.theta = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t j = 0; j < s.K.size(); ++j) {
    const int k = s.K[j];
    Eigen::RowVectorXcd acc = -z * out.psi.row(k - 1);
    for (int i = 1; i <= N; ++i) acc += m(k, i) * out.psi.row(i - 1);
    out.theta.row(static_cast<int>(j)) = acc;
  }
  return out;
}

cd det_theta(const FiniteHermitian& m, const StructureInfo& s, const BoundaryMatrix& t, cd z) {
  return evaluate_system(m, s, t, z).theta.determinant();
}

cd ChebyshevPolynomial::operator()(cd z) const {
  const cd x = (2.0 * z - (a + b)) / (b - a);
  // Clenshaw recurrence.
  cd b1{}, b2{};
  for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) {
    const cd b0 = 2.0 * x * b1 - b2 + coeffs[k];
    b2 = b1;
    b1 = b0;
  }
  return coeffs.empty() ? cd{} : x * b1 - b2 + coeffs[0];
}

std::vector<cd> ChebyshevPolynomial::roots() const {
  std::vector<cd> c = coeffs;
  const double top = c.empty() ? 0.0 : std::abs(*std::max_element(
                                            c.begin(), c.end(), [](cd x, cd y) { return std::abs(x) < std::abs(y); }));
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * top) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  std::vector<cd> out;
  if (deg < 1) return out;
  Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(deg, deg);
  if (deg == 1) {
    A(0, 0) = -c[0] / c[1];
  } else {
    A(0, 1) = 1.0;
    for (int i = 1; i < deg; ++i) {
      A(i, i - 1) = 0.5;
      if (i + 1 < deg) A(i, i + 1) = 0.5;
    }
    for (int k = 0; k < deg; ++k) A(deg - 1, k) -= c[k] / (2.0 * c[deg]);
  }
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(A, false);
  if (es.info() != Eigen::Success) throw NumericalFailure("colleague matrix eigensolver did not converge");
  for (int i = 0; i < deg; ++i) {
    const cd x = es.eigenvalues()(i);
    out.push_back(0.5 * (b - a) * x + 0.5 * (a + b));
  }
  std::sort(out.begin(), out.end(), [](cd x, cd y) { return x.real() < y.real(); });
  return out;
}

namespace {

ChebyshevPolynomial interpolate_on(const FiniteHermitian& m, const StructureInfo& s, const BoundaryMatrix& t,
                                   double lo, double hi) {
  ChebyshevPolynomial poly;
  poly.a = lo;
  poly.b = hi;
  const int nodes = m.size() + 1;
  std::vector<cd> f(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double x = std::cos(M_PI * (j + 0.5) / nodes);
    f[j] = det_theta(m, s, t, 0.5 * (hi - lo) * x + 0.5 * (hi + lo));
  }
  poly.coeffs.assign(nodes, cd{});
  for (int k = 0; k < nodes; ++k) {
    cd acc{};
    for (int j = 0; j < nodes; ++j) acc += f[j] * std::cos(k * M_PI * (j + 0.5) / nodes);
    poly.coeffs[k] = acc * (2.0 / nodes);
  }
  poly.coeffs[0] *= 0.5;
  return poly;
}

}  // namespace

ChebyshevPolynomial interpolate_det_theta(const FiniteHermitian& m, const StructureInfo& s,
                                          const BoundaryMatrix& t) {
  const int N = m.size();
  const auto& d = m.data();
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < N; ++i) {
    const double radius = d.row(i).cwiseAbs().sum() - std::abs(d(i, i));
    const double c = d(i, i).real();
    lo = i == 0 ? c - radius : std::min(lo, c - radius);
    hi = i == 0 ? c + radius : std::max(hi, c + radius);
  }
  if (hi - lo < 1e-12) {
    lo -= 1.0;
    hi += 1.0;
  }
  // det Theta grows fast outside the spectrum, so a loose interval buries the
  // small values near the roots. Shrink to the hull of the current roots.
  auto poly = interpolate_on(m, s, t, lo, hi);
  for (int pass = 0; pass < 3; ++pass) {
    const auto r = poly.roots();
    if (static_cast<int>(r.size()) != N) break;
    const double rlo = r.front().real(), rhi = r.back().real();
    const double margin = 0.05 * (rhi - rlo) + 1e-3 * std::max({1.0, std::abs(rlo), std::abs(rhi)});
    const double nlo = std::max(lo, rlo - margin), nhi = std::min(hi, rhi + margin);
    if (!(nhi > nlo) || (nhi - nlo) > 0.9 * (poly.b - poly.a)) break;
    poly = interpolate_on(m, s, t, nlo, nhi);
  }
  return poly;
}

}  // namespace specband
