#pragma once

// Covariance matrices and Gaussian states in (q1..qm, p1..pm) ordering with
// hbar = 2, so the vacuum covariance matrix is the identity.

#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "sympcoh/errors.hpp"

namespace sympcoh {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kPurityTol = 1e-8;

// Omega = [[0, I], [-I, 0]] on m modes.
Matrix symplectic_form(int m);

enum class Invariant {
  kNonFinite,
  kSymmetry,
  kPositiveDefinite,
  kUncertainty,
  kPositionBlock,
  kMomentumBlock,
  kMinimumTrace,
};

std::string_view invariant_name(Invariant inv);

struct Violation {
  Invariant invariant;
  // How far past the tolerance the check failed (asymmetry, negative eigenvalue, trace deficit).
  double magnitude;
};

struct ValidityReport {
  std::vector<Violation> violations;

  bool valid() const { return violations.empty(); }
  bool violates(Invariant inv) const;
  std::string describe() const;
};

// Checks every covariance-matrix invariant at `tol`. The V + i*Omega check is a
// complex Hermitian eigen-solve. Throws DimensionError on non-square or
// odd-dimension input.
ValidityReport validate(const Matrix& v, double tol = kDefaultTol);

class InvalidCovariance : public Error {
 public:
  explicit InvalidCovariance(ValidityReport report);
  const ValidityReport& report() const { return report_; }

 private:
  ValidityReport report_;
};

// A validated 2m x 2m covariance matrix. Immutable once constructed.
class CovMat {
 public:
  explicit CovMat(Matrix v, double tol = kDefaultTol);

  static CovMat vacuum(int m);

  int modes() const { return modes_; }
  Eigen::Index dim() const { return v_.rows(); }
  const Matrix& matrix() const { return v_; }
  double tol() const { return tol_; }
  double trace() const { return v_.trace(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return v_(i, j); }

 private:
  Matrix v_;
  double tol_;
  int modes_;
};

struct Blocks {
  Matrix x;   // position-position
  Matrix p;   // momentum-momentum
  Matrix xp;  // position-momentum
};

Blocks blocks(const CovMat& cov);
Blocks blocks(const Matrix& v);
Matrix assemble(const Blocks& b);

class GaussianState {
 public:
  // An empty `mean` stands for zero first moments.
  explicit GaussianState(CovMat cov, Vector mean = Vector());

  static GaussianState vacuum(int m);

  int modes() const { return cov_.modes(); }
  const CovMat& cov() const { return cov_; }
  const Vector& mean() const { return mean_; }

 private:
  CovMat cov_;
  Vector mean_;
};

// (Tr[V] + d^T d) / 4.
double mean_energy(const GaussianState& state);

// Williamson invariants, descending, from the spectrum of Omega*V.
std::vector<double> symplectic_eigenvalues(const CovMat& cov);

bool is_pure(const CovMat& cov, double tol = kPurityTol);

struct ReducedMode {
  Matrix cov;     // 2x2 covariance matrix of mode 1
  double nu_sq;   // sigma_x sigma_p - sigma_xp^2
  double energy;  // trace of the 2x2 block
};

ReducedMode reduced_first_mode(const CovMat& cov);

}  // namespace sympcoh
