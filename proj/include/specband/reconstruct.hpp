#pragma once

#include <vector>

#include <Eigen/Dense>

#include "specband/config.hpp"
#include "specband/core_types.hpp"
#include "specband/spectral.hpp"
#include "specband/vector_poly.hpp"

namespace specband {

struct OrthoResult {
  int n = 0;
  std::vector<VectorPolynomial> p_tilde;  // orthonormal, heights increasing
  std::vector<VectorPolynomial> q_tilde;  // zero norm, leading coefficient 1
  BoundaryMatrix t_tilde;
  std::vector<int> p_index;   // k such that p_tilde[i] has the height of e_k
  std::vector<int> q_index;
  std::vector<int> skip_log;  // k skipped by the height-lattice rule
  std::vector<double> skip_residuals;  // |e_k - projection| / |e_k| for each skipped k
  std::vector<double> zero_ratios;     // residual / reference norm for each q_tilde
  Eigen::MatrixXcd p_samples;  // column i holds samples(p_tilde[i], mu)
  bool rank_exhausted = false;
};

/// Gram-Schmidt with degenerations on L2(sigma), processing heights 0, 1, 2, ...
/// Throws SingularZerothMoment if the total mass is not invertible.
OrthoResult orthonormalize(const StepMeasure& mu, int max_k, const Tolerances& tol = default_tolerances());

/// m_ij = <p_i, t p_j> over the orthonormal polynomials.
FiniteHermitian recover_matrix(const OrthoResult& res, const StepMeasure& mu);

struct RoundTripReport {
  int n = 0;
  int N = 0;
  FiniteHermitian m_tilde;
  BoundaryMatrix t_tilde;
  MatrixSpec mtilde_spec;  // structural zeros dropped
  ValidationReport validation;
  int p_count = 0;
  int q_count = 0;
  std::vector<Height> q_heights;
  bool q_residues_distinct = false;
  double eigen_error = 0.0;       // max |lambda - lambda~|
  int jumps_in = 0;
  int jumps_out = 0;
  double location_error = 0.0;    // max jump location mismatch
  double mass_error = 0.0;        // max entrywise jump-matrix mismatch
  int moment_order = 0;           // 2l
  double moment_error = 0.0;      // max entrywise |S_k - S~_k| / max(1, |S_k|)
};

/// truncate -> eigen -> measure -> orthonormalize -> recover -> compare.
/// Failures are rethrown as StageError tagged with the stage name.
RoundTripReport roundtrip(const MatrixSpec& spec, const BoundaryMatrix& t, int N,
                          const Tolerances& tol = default_tolerances());

/// Max entrywise difference between M~ and the matrix obtained by round-tripping M~ itself.
double idempotence_error(const RoundTripReport& rep, const Tolerances& tol = default_tolerances());

/// Jump-by-jump comparison of two measures: {location error, mass error};
/// infinite when the jump counts differ.
std::pair<double, double> compare_measures(const StepMeasure& a, const StepMeasure& b,
                                           const Tolerances& tol = default_tolerances());

}  // namespace specband
