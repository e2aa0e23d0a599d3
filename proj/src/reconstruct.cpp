#include "specband/reconstruct.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <set>

#include <Eigen/Eigenvalues>

#include "specband/errors.hpp"

namespace specband {

namespace {

using Coeffs = std::vector<cd>;  // indexed by height

Coeffs shifted(const Coeffs& c, int by) {
  Coeffs out(c.size() + static_cast<std::size_t>(by), cd{});
  std::copy(c.begin(), c.end(), out.begin() + by);
  return out;
}

void axpy(Coeffs& y, cd a, const Coeffs& x, int shift = 0) {
  if (y.size() < x.size() + static_cast<std::size_t>(shift)) y.resize(x.size() + shift, cd{});
  for (std::size_t i = 0; i < x.size(); ++i) y[i + shift] += a * x[i];
}

Eigen::VectorXcd canonical_samples(const StepMeasure& mu, int h) {
  const int slot = h % mu.n;
  const int deg = h / mu.n;
  Eigen::VectorXcd s(static_cast<int>(mu.points.size()));
  for (std::size_t k = 0; k < mu.points.size(); ++k) {
    const auto& pt = mu.points[k];
    s(static_cast<int>(k)) = std::conj(pt.C(slot)) * std::pow(pt.lambda, deg);
  }
  return s;
}

struct Degeneration {
  int height;
  Coeffs coeffs;  // leading coefficient 1 at `height`
};

// Removes the coefficients sitting on the lattice {h(q) + n l : l >= 0} of
// every recorded degeneration, by subtracting z^l q. `keep` is left untouched.
void lattice_reduce(Coeffs& c, const std::vector<Degeneration>& degs, int n, int keep) {
  for (int g = static_cast<int>(c.size()) - 1; g >= 0; --g) {
    if (g == keep || c[g] == cd{}) continue;
    for (const auto& d : degs) {
      if (g >= d.height && (g - d.height) % n == 0) {
        axpy(c, -c[g], d.coeffs, g - d.height);
        c[g] = cd{};
        break;
      }
    }
  }
}

double max_entry(const Eigen::MatrixXcd& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

OrthoResult orthonormalize(const StepMeasure& mu, int max_k, const Tolerances& tol) {
  const int n = mu.n;
  const int P = static_cast<int>(mu.points.size());
  if (n < 1) throw DimensionMismatch("measure dimension must be positive");
  if (max_k < n) throw std::invalid_argument("max_k must be at least n");

  const Eigen::MatrixXcd S0 = mu.total_mass();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(S0, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd ev = es.eigenvalues();
  if (ev.maxCoeff() <= 0.0 || ev.minCoeff() <= 1e-12 * ev.maxCoeff()) {
    throw SingularZerothMoment("zeroth moment is not invertible");
  }

  int rank = 0;
  for (const auto& j : mu.jumps(tol)) rank += j.rank;
  const int target = std::min(max_k, rank);

  OrthoResult res;
  res.n = n;
  Eigen::MatrixXcd Q(P, 0);
  std::vector<Coeffs> pc;
  std::map<int, int> p_at_height;
  std::vector<Degeneration> degs;
  std::set<int> residues;

  double rho = 0.0;
  for (const auto& pt : mu.points) rho = std::max(rho, std::abs(pt.lambda));
  const int guard = n * (rank + n + 2) + n;
  for (int h = 0; h <= guard; ++h) {
    const int emitted = static_cast<int>(pc.size());
    if (emitted >= target) {
      if (emitted < rank) break;
      res.rank_exhausted = true;
      if (static_cast<int>(residues.size()) == n) break;
    }

    bool on_lattice = false;
    for (const auto& d : degs) {
      if (h > d.height && (h - d.height) % n == 0) on_lattice = true;
    }
    if (on_lattice) {
      Eigen::VectorXcd e = canonical_samples(mu, h);
      const double enorm = e.norm();
      for (int pass = 0; pass < 2; ++pass) e -= Q * (Q.adjoint() * e);
      res.skip_log.push_back(h + 1);
      res.skip_residuals.push_back(enorm > 0.0 ? e.norm() / enorm : 0.0);
      continue;
    }

    // Candidate of height h: e_{h+1} for the constants, z * p~ of height h - n otherwise.
    Eigen::VectorXcd s;
    Coeffs c;
    if (h < n) {
      s = canonical_samples(mu, h);
      c.assign(static_cast<std::size_t>(h + 1), cd{});
      c[h] = 1.0;
    } else {
      auto it = p_at_height.find(h - n);
      if (it == p_at_height.end()) throw NumericalFailure("height bookkeeping lost track of h - n");
      Eigen::VectorXd lam(P);
      for (int k = 0; k < P; ++k) lam(k) = mu.points[k].lambda;
      s = lam.cast<cd>().cwiseProduct(Q.col(it->second));
      c = shifted(pc[it->second], n);
    }
    // z p~ is formed from a unit vector, so its rounding scale is max |lambda|
    // even when the product itself nearly vanishes.
    const double cnorm = h < n ? s.norm() : std::max(s.norm(), rho);
    for (int pass = 0; pass < 2; ++pass) {
      for (int j = 0; j < Q.cols(); ++j) {
        const cd a = Q.col(j).dot(s);
        s -= a * Q.col(j);
        axpy(c, -a, pc[j]);
      }
    }
    const double rnorm = s.norm();

    if (rnorm <= tol.zero_norm * cnorm || emitted >= target) {
      const cd lead = c[h];
      for (auto& x : c) x /= lead;
      lattice_reduce(c, degs, n, h);
      c[h] = 1.0;
      degs.push_back({h, c});
      residues.insert(h % n);
      res.q_index.push_back(h + 1);
      res.zero_ratios.push_back(cnorm > 0.0 ? rnorm / cnorm : 0.0);
      continue;
    }
    lattice_reduce(c, degs, n, h);
    for (auto& x : c) x /= rnorm;
    Q.conservativeResize(Eigen::NoChange, Q.cols() + 1);
    Q.col(Q.cols() - 1) = s / rnorm;
    p_at_height[h] = static_cast<int>(pc.size());
    pc.push_back(std::move(c));
    res.p_index.push_back(h + 1);
  }

  for (const auto& c : pc) res.p_tilde.push_back(VectorPolynomial::from_height_coefficients(n, c));
  for (const auto& d : degs) res.q_tilde.push_back(VectorPolynomial::from_height_coefficients(n, d.coeffs));
  res.p_samples = Q;

  if (static_cast<int>(pc.size()) < n) throw SingularZerothMoment("fewer than n orthonormal constants");
  Eigen::MatrixXcd T = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i <= k; ++i) T(i, k) = i < static_cast<int>(pc[k].size()) ? pc[k][i] : cd{};
  }
  res.t_tilde = BoundaryMatrix(T);
  return res;
}

FiniteHermitian recover_matrix(const OrthoResult& res, const StepMeasure& mu) {
  const Eigen::MatrixXcd& Q = res.p_samples;
  if (Q.rows() != static_cast<int>(mu.points.size())) {
    throw DimensionMismatch("orthonormalization was run on another measure");
  }
  Eigen::VectorXd lam(Q.rows());
  for (int k = 0; k < Q.rows(); ++k) lam(k) = mu.points[k].lambda;
  Eigen::MatrixXcd m = Q.adjoint() * lam.cast<cd>().asDiagonal() * Q;
  Eigen::MatrixXcd sym = (m + m.adjoint()) / 2.0;
  return FiniteHermitian(std::move(sym));
}

std::pair<double, double> compare_measures(const StepMeasure& a, const StepMeasure& b, const Tolerances& tol) {
  const auto ja = a.jumps(tol);
  const auto jb = b.jumps(tol);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (ja.size() != jb.size() || a.n != b.n) return {inf, inf};
  double loc = 0.0, mass = 0.0;
  for (std::size_t i = 0; i < ja.size(); ++i) {
    loc = std::max(loc, std::abs(ja[i].lambda - jb[i].lambda));
    mass = std::max(mass, max_entry(ja[i].mass - jb[i].mass));
  }
  return {loc, mass};
}

namespace {

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const NumericalError& e) {
    throw StageError(name, e.what(), true);
  } catch (const Error& e) {
    throw StageError(name, e.what(), false);
  }
}

}  // namespace

RoundTripReport roundtrip(const MatrixSpec& spec, const BoundaryMatrix& t, int N, const Tolerances& tol) {
  RoundTripReport rep;
  rep.n = spec.n;
  rep.N = N;
  if (t.n() != spec.n) throw StageError("truncate", "boundary matrix size differs from n", false);
  const FiniteHermitian m = stage("truncate", [&] {
    analyze_structure(spec, N, tol);
    return truncate(spec, N);
  });
  const SpectralData sd = stage("eigen", [&] { return eigen_decompose(m); });
  const StepMeasure mu = stage("measure", [&] { return step_measure(sd, t); });
  const OrthoResult res = stage("orthonormalize", [&] { return orthonormalize(mu, N, tol); });
  rep.m_tilde = stage("recover", [&] { return recover_matrix(res, mu); });
  rep.t_tilde = res.t_tilde;
  rep.p_count = static_cast<int>(res.p_tilde.size());
  rep.q_count = static_cast<int>(res.q_tilde.size());
  std::set<int> resid;
  rep.q_residues_distinct = true;
  for (const auto& q : res.q_tilde) {
    const Height h = height(q);
    rep.q_heights.push_back(h);
    if (!h.finite() || !resid.insert(h.value() % spec.n).second) rep.q_residues_distinct = false;
  }

  try {
    rep.mtilde_spec = spec_from_matrix(rep.m_tilde, spec.n, tol.recover_zero);
    rep.validation = validate_class(rep.mtilde_spec, MatrixClass::MTilde, tol);
  } catch (const StructureError& e) {
    rep.validation = ValidationReport{};
    rep.validation.which = MatrixClass::MTilde;
    rep.validation.pass = false;
    rep.validation.violations.push_back({"cond1", 0, 0, e.what()});
  }

  stage("compare", [&] {
    const SpectralData sd2 = eigen_decompose(rep.m_tilde);
    const StepMeasure mu2 = step_measure(sd2, rep.t_tilde);
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (sd2.lambdas.size() == sd.lambdas.size()) {
      rep.eigen_error = (sd2.lambdas - sd.lambdas).cwiseAbs().maxCoeff();
    } else {
      rep.eigen_error = inf;
    }
    rep.jumps_in = static_cast<int>(mu.jumps(tol).size());
    rep.jumps_out = static_cast<int>(mu2.jumps(tol).size());
    std::tie(rep.location_error, rep.mass_error) = compare_measures(mu, mu2, tol);
    const int d = spec.tail ? spec.tail->offset() : 1;
    rep.moment_order = 2 * ((N - spec.n) / std::max(d, 1));
    for (int k = 0; k <= rep.moment_order; ++k) {
      const Eigen::MatrixXcd a = moment(mu, k);
      const Eigen::MatrixXcd b = moment(mu2, k);
      rep.moment_error = std::max(rep.moment_error, max_entry(a - b) / std::max(1.0, max_entry(a)));
    }
    return 0;
  });
  return rep;
}

double idempotence_error(const RoundTripReport& rep, const Tolerances& tol) {
  const RoundTripReport again = roundtrip(rep.mtilde_spec, rep.t_tilde, rep.N, tol);
  if (again.m_tilde.size() != rep.m_tilde.size()) return std::numeric_limits<double>::infinity();
  return max_entry(again.m_tilde.data() - rep.m_tilde.data());
}

}  // namespace specband
