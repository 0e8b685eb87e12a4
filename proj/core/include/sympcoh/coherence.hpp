#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "sympcoh/gaussian_core.hpp"
#include "sympcoh/rng.hpp"

namespace sympcoh {

// ||V_xp||_F^2.
double symplectic_coherence(const CovMat& cov);
double symplectic_coherence(const Matrix& v);

// Drops the position-momentum block. Always a valid covariance matrix.
CovMat closest_free_cm(const CovMat& cov);

struct CoherenceReport {
  double c;
  double hs_distance_sq_to_free;  // ||V - V_free||_F^2 = 2c
  CovMat closest_free;
};

CoherenceReport coherence_report(const CovMat& cov);

bool is_free(const CovMat& cov, double tol = kDefaultTol);

// (E - 2m)^2 / 4 + (E - 2m). Throws DomainError when E < 2m.
double max_symplectic_coherence(double E, int m);

// r >= 0 with e^{2r} + e^{-2r} = E - 2(m - 1).
double msc_squeezing(double E, int m);

struct MscSpec {
  double E;
  int m;
  double r;
  Vector theta;  // one phase per mode
  Matrix o1;
  Matrix o2;

  // r from msc_squeezing, theta = (pi/4, 0, ..., 0), O1 = O2 = I.
  static MscSpec canonical(double E, int m);
};

// O2 R(theta) O1 (squeezed(r) on mode 1, vacuum elsewhere).
GaussianState msc_state(const MscSpec& spec);
GaussianState msc_canonical(double E, int m);

struct MembershipResult {
  bool holds;
  // |2|A_1j| - delta_1j| for A in {O^T C^2 O, O^T S^2 O, O^T (CS) O}; indexed [condition][j].
  std::vector<std::vector<double>> residuals;
  double max_residual;
};

// C = diag(cos theta), S = diag(sin theta). O is the orthogonal applied before the phases.
MembershipResult msc_membership_conditions(const Matrix& o, const Vector& theta, double tol = 1e-8);

struct MixedMscResult {
  bool ok;
  std::vector<std::string> reasons;
};

// V = (V1 + V2)/2 with V1, V2 pure, equal traces, equal V_xp and both at c_max.
MixedMscResult mixed_msc_check(const CovMat& v, const CovMat& v1, const CovMat& v2, double tol = kPurityTol);

// 800 E^2 eps + 40 sqrt(2) E max(sqrt(c_rho), sqrt(c_sigma)) sqrt(eps).
double perturbation_bound(double c_rho, double c_sigma, double E, double eps);

// 40 E sqrt(m * trace_dist).
double trace_distance_cov_bound(double E_cap, int m, double trace_dist);

struct MaxSearchResult {
  double best_c;         // after refinement
  double best_sample_c;  // before refinement
  double c_max;
  std::size_t best_trial;
  Matrix passive;        // S_U of the best sample
  Vector theta;          // refined phases applied after S_U
  Vector d;              // refined squeezing spectrum (d_i = e^{2 r_i})
  CovMat cov;
};

// Random pure states at fixed trace E (unitary-kind micro-canonical samples),
// followed by coordinate-wise golden-section refinement of the per-mode
// phases and of the split of squeezing energy between mode pairs.
MaxSearchResult numeric_max_search(double E, int m, std::size_t trials, std::uint64_t seed = kDefaultSeed,
                                   int threads = 1);

}  // namespace sympcoh
