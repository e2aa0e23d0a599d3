#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "specband/config.hpp"
#include "specband/core_types.hpp"
#include "specband/vector_poly.hpp"

namespace specband {

/// n x n upper-triangular invertible boundary matrix T.
class BoundaryMatrix {
 public:
  BoundaryMatrix() = default;
  /// Throws DimensionMismatch if not square or not upper triangular,
  /// SingularBoundary if a diagonal entry is zero.
  explicit BoundaryMatrix(Eigen::MatrixXcd t);

  static BoundaryMatrix identity(int n);
  /// Diagonal uniform in [diag_lo, diag_hi], strictly upper part with modulus <= 1.
  static BoundaryMatrix random(int n, std::uint64_t seed, double diag_lo = 0.5, double diag_hi = 2.0,
                               bool complex_entries = false);

  int n() const { return static_cast<int>(t_.rows()); }
  const Eigen::MatrixXcd& matrix() const { return t_; }

  bool operator==(const BoundaryMatrix& o) const { return t_ == o.t_; }

 private:
  Eigen::MatrixXcd t_;
};

/// Eigenvalues (ascending, repeated by multiplicity) and unitary eigenvector matrix.
struct SpectralData {
  Eigen::VectorXd lambdas;
  Eigen::MatrixXcd phi;  // column k is the eigenvector of lambdas(k)
};

struct MeasurePoint {
  double lambda = 0.0;
  Eigen::VectorXcd C;

  bool operator==(const MeasurePoint& o) const {
    return lambda == o.lambda && C.size() == o.C.size() && C == o.C;
  }
};

/// Growth point of a step measure with the summands sharing it merged.
struct Jump {
  double lambda = 0.0;     // smallest location in the cluster
  Eigen::MatrixXcd mass;   // sum of C C^*
  int rank = 0;
  int count = 0;           // number of rank-one summands
};

/// sigma(t) = sum over lambda_k < t of C^k (C^k)^*.
struct StepMeasure {
  int n = 0;
  std::vector<MeasurePoint> points;  // ascending lambda

  Eigen::MatrixXcd value_at(double t) const;
  Eigen::MatrixXcd total_mass() const;
  std::vector<Jump> jumps(const Tolerances& tol = default_tolerances()) const;

  bool operator==(const StepMeasure&) const = default;
};

SpectralData eigen_decompose(const FiniteHermitian& m);

/// p_1..p_N. The first n are the columns of T; the rest follow the pivot rows.
std::vector<VectorPolynomial> build_p(const FiniteHermitian& m, const StructureInfo& s,
                                      const BoundaryMatrix& t,
                                      const Tolerances& tol = default_tolerances());

/// q_1..q_n, one per row of K.
std::vector<VectorPolynomial> build_q(const FiniteHermitian& m, const StructureInfo& s,
                                      const std::vector<VectorPolynomial>& p,
                                      const Tolerances& tol = default_tolerances());

std::vector<Eigen::VectorXcd> c_vectors(const SpectralData& sd, const BoundaryMatrix& t);
StepMeasure step_measure(const SpectralData& sd, const BoundaryMatrix& t);

/// (C^k)^* r(lambda_k) for every point; the inner product is the Euclidean one on these.
Eigen::VectorXcd samples(const VectorPolynomial& r, const StepMeasure& mu);

cd inner_product(const VectorPolynomial& f, const VectorPolynomial& g, const StepMeasure& mu);
Eigen::MatrixXcd gram(const std::vector<VectorPolynomial>& polys, const StepMeasure& mu);
Eigen::MatrixXcd moment(const StepMeasure& mu, int k);
/// S_0..S_kmax.
std::vector<Eigen::MatrixXcd> moments(const StepMeasure& mu, int kmax);

/// Psi(z) (N x n) from the pivot recursion and Theta(z) = Pi_K (M_N - zI) Psi(z) (n x n).
struct SystemValues {
  Eigen::MatrixXcd psi;
  Eigen::MatrixXcd theta;
};

SystemValues evaluate_system(const FiniteHermitian& m, const StructureInfo& s,
                             const BoundaryMatrix& t, cd z);
cd det_theta(const FiniteHermitian& m, const StructureInfo& s, const BoundaryMatrix& t, cd z);

/// Polynomial given by its Chebyshev coefficients on [a, b].
struct ChebyshevPolynomial {
  double a = -1.0;
  double b = 1.0;
  std::vector<cd> coeffs;

  cd operator()(cd z) const;
  /// Roots from the colleague matrix, sorted by real part.
  std::vector<cd> roots() const;
};

/// Interpolates det Theta at N+1 Chebyshev nodes, starting on a Gershgorin interval of M_N
/// and shrinking it to the hull of the computed roots.
ChebyshevPolynomial interpolate_det_theta(const FiniteHermitian& m, const StructureInfo& s,
                                          const BoundaryMatrix& t);

}  // namespace specband
