#include "sympcoh/gaussian_core.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <sstream>
#include <utility>

namespace sympcoh {
namespace {

constexpr double kPairingTol = 1e-8;

void require_even_square(const Matrix& v) {
  if (v.rows() != v.cols()) {
    std::ostringstream os;
    os << "covariance matrix must be square, got " << v.rows() << "x" << v.cols();
    throw DimensionError(os.str());
  }
  if (v.rows() == 0 || v.rows() % 2 != 0) {
    std::ostringstream os;
    os << "covariance matrix dimension must be a positive even number, got " << v.rows();
    throw DimensionError(os.str());
  }
}

double min_eigenvalue(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigen-solve failed");
  return solver.eigenvalues().minCoeff();
}

}  // namespace

Matrix symplectic_form(int m) {
  if (m < 1) throw DimensionError("mode count must be positive");
  Matrix omega = Matrix::Zero(2 * m, 2 * m);
  omega.topRightCorner(m, m).setIdentity();
  omega.bottomLeftCorner(m, m) = -Matrix::Identity(m, m);
  return omega;
}

std::string_view invariant_name(Invariant inv) {
  switch (inv) {
    case Invariant::kNonFinite:
      return "finite entries";
    case Invariant::kSymmetry:
      return "symmetry (V = V^T)";
    case Invariant::kPositiveDefinite:
      return "positivity (V > 0)";
    case Invariant::kUncertainty:
      return "uncertainty relation (V + i*Omega >= 0)";
    case Invariant::kPositionBlock:
      return "position block positivity (V_x > 0)";
    case Invariant::kMomentumBlock:
      return "momentum block positivity (V_p > 0)";
    case Invariant::kMinimumTrace:
      return "minimum trace (Tr[V] >= 2m)";
  }
  return "unknown";
}

bool ValidityReport::violates(Invariant inv) const {
  return std::any_of(violations.begin(), violations.end(),
                     [inv](const Violation& v) { return v.invariant == inv; });
}

std::string ValidityReport::describe() const {
  if (violations.empty()) return "valid";
  std::ostringstream os;
  for (std::size_t i = 0; i < violations.size(); ++i) {
    if (i) os << "; ";
    os << invariant_name(violations[i].invariant) << " violated by " << violations[i].magnitude;
  }
  return os.str();
}

ValidityReport validate(const Matrix& v, double tol) {
  require_even_square(v);
  ValidityReport report;
  if (!v.allFinite()) {
    report.violations.push_back({Invariant::kNonFinite, std::numeric_limits<double>::infinity()});
    return report;
  }
  const Eigen::Index n = v.rows();
  const int m = static_cast<int>(n / 2);

  const double asym = (v - v.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol) report.violations.push_back({Invariant::kSymmetry, asym});

  // Eigen-solves below read only the lower triangle, so use the symmetric part.
  const Matrix sym = 0.5 * (v + v.transpose());

  const double min_v = min_eigenvalue(sym);
  if (min_v <= -tol) report.violations.push_back({Invariant::kPositiveDefinite, -min_v});

  Eigen::MatrixXcd herm = sym.cast<std::complex<double>>();
  herm += std::complex<double>(0.0, 1.0) * symplectic_form(m).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> hsolver(herm, Eigen::EigenvaluesOnly);
  if (hsolver.info() != Eigen::Success) throw NumericError("Hermitian eigen-solve failed");
  const double min_h = hsolver.eigenvalues().minCoeff();
  if (min_h < -tol) report.violations.push_back({Invariant::kUncertainty, -min_h});

  const double min_x = min_eigenvalue(sym.topLeftCorner(m, m));
  if (min_x <= -tol) report.violations.push_back({Invariant::kPositionBlock, -min_x});
  const double min_p = min_eigenvalue(sym.bottomRightCorner(m, m));
  if (min_p <= -tol) report.violations.push_back({Invariant::kMomentumBlock, -min_p});

  const double deficit = 2.0 * m - v.trace();
  if (deficit > tol) report.violations.push_back({Invariant::kMinimumTrace, deficit});
  return report;
}

InvalidCovariance::InvalidCovariance(ValidityReport report)
    : Error("invalid covariance matrix: " + report.describe()), report_(std::move(report)) {}

CovMat::CovMat(Matrix v, double tol) : v_(std::move(v)), tol_(tol), modes_(0) {
  if (tol < 0.0) throw DomainError("validation tolerance must be nonnegative");
  ValidityReport report = validate(v_, tol_);
  if (!report.valid()) throw InvalidCovariance(std::move(report));
  modes_ = static_cast<int>(v_.rows() / 2);
}

CovMat CovMat::vacuum(int m) {
  if (m < 1) throw DimensionError("mode count must be positive");
  return CovMat(Matrix::Identity(2 * m, 2 * m));
}

Blocks blocks(const Matrix& v) {
  require_even_square(v);
  const Eigen::Index m = v.rows() / 2;
  return Blocks{v.topLeftCorner(m, m), v.bottomRightCorner(m, m), v.topRightCorner(m, m)};
}

Blocks blocks(const CovMat& cov) { return blocks(cov.matrix()); }

Matrix assemble(const Blocks& b) {
  const Eigen::Index m = b.x.rows();
  if (b.x.cols() != m || b.p.rows() != m || b.p.cols() != m || b.xp.rows() != m || b.xp.cols() != m) {
    throw DimensionError("blocks must all be m x m");
  }
  Matrix v(2 * m, 2 * m);
  v.topLeftCorner(m, m) = b.x;
  v.topRightCorner(m, m) = b.xp;
  v.bottomLeftCorner(m, m) = b.xp.transpose();
  v.bottomRightCorner(m, m) = b.p;
  return v;
}

GaussianState::GaussianState(CovMat cov, Vector mean) : cov_(std::move(cov)), mean_(std::move(mean)) {
  if (mean_.size() == 0) mean_ = Vector::Zero(cov_.dim());
  if (mean_.size() != cov_.dim()) {
    std::ostringstream os;
    os << "first-moment vector has length " << mean_.size() << ", expected " << cov_.dim();
    throw DimensionError(os.str());
  }
  if (!mean_.allFinite()) throw DomainError("first-moment vector must be finite");
}

GaussianState GaussianState::vacuum(int m) { return GaussianState(CovMat::vacuum(m)); }

double mean_energy(const GaussianState& state) {
  return (state.cov().trace() + state.mean().squaredNorm()) / 4.0;
}

std::vector<double> symplectic_eigenvalues(const CovMat& cov) {
  const int m = cov.modes();
  const Matrix omega_v = symplectic_form(m) * cov.matrix();
  Eigen::EigenSolver<Matrix> solver(omega_v, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw NumericError("eigen-solve of Omega*V failed");

  std::vector<double> moduli;
  moduli.reserve(2 * m);
  for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i) {
    moduli.push_back(std::abs(solver.eigenvalues()[i].imag()));
  }
  std::sort(moduli.begin(), moduli.end(), std::greater<>());

  std::vector<double> nu;
  nu.reserve(m);
  for (int k = 0; k < m; ++k) {
    const double a = moduli[2 * k];
    const double b = moduli[2 * k + 1];
    if (std::abs(a - b) > kPairingTol * std::max(1.0, a)) {
      std::ostringstream os;
      os << "symplectic eigenvalues did not pair: " << a << " vs " << b;
      throw NumericError(os.str());
    }
    nu.push_back(0.5 * (a + b));
  }
  return nu;
}

bool is_pure(const CovMat& cov, double tol) {
  const auto nu = symplectic_eigenvalues(cov);
  return std::all_of(nu.begin(), nu.end(), [tol](double x) { return std::abs(x - 1.0) <= tol; });
}

ReducedMode reduced_first_mode(const CovMat& cov) {
  const int m = cov.modes();
  Matrix red(2, 2);
  red << cov(0, 0), cov(0, m), cov(m, 0), cov(m, m);
  const double nu_sq = red(0, 0) * red(1, 1) - red(0, 1) * red(0, 1);
  return ReducedMode{red, nu_sq, red.trace()};
}

}  // namespace sympcoh
