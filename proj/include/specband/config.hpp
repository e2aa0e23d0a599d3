#pragma once

namespace specband {

/// Numerical thresholds shared by the pipeline. Defaults are the values the
/// library is tested against; the CLI can override them.
struct Tolerances {
  double structural = 1e-12;   // |m| > structural * max|m| counts as nonzero
  double coefficient = 1e-12;  // absolute trim threshold for polynomial coefficients
  double cluster = 1e-9;       // |λi - λj| <= cluster * (1 + |λ|) share a jump
  double rank = 1e-8;          // singular values > rank * σmax count toward a jump's rank
  double zero_norm = 1e-8;     // Gram–Schmidt residual ratio declaring a degeneration
  double lstsq = 1e-10;        // least-squares / kernel rank cut, relative to σmax
  double recover_zero = 1e-8;  // reconstructed entries below this * max|m| are structural zeros
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace specband
