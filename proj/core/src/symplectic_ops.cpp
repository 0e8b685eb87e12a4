#include "sympcoh/symplectic_ops.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace sympcoh {
namespace {

void require_mode(int m, int mode) {
  if (m < 1) throw DimensionError("mode count must be positive");
  if (mode < 1 || mode > m) {
    std::ostringstream os;
    os << "mode " << mode << " out of range 1.." << m;
    throw DimensionError(os.str());
  }
}

Matrix symmetrized(const Matrix& v) { return 0.5 * (v + v.transpose()); }

void require_gate_fits(const SympGate& gate, Eigen::Index dim) {
  if (gate.matrix().rows() != dim) {
    std::ostringstream os;
    os << "gate acts on " << gate.modes() << " modes, state has " << dim / 2;
    throw DimensionError(os.str());
  }
}

}  // namespace

double symplectic_residual(const Matrix& s) {
  if (s.rows() != s.cols() || s.rows() == 0 || s.rows() % 2 != 0) {
    throw DimensionError("symplectic matrix must be square with positive even dimension");
  }
  const Matrix omega = symplectic_form(static_cast<int>(s.rows() / 2));
  return (s * omega * s.transpose() - omega).norm();
}

bool is_symplectic(const Matrix& s, double tol) { return symplectic_residual(s) <= tol; }

bool is_orthogonal(const Matrix& o, double tol) {
  if (o.rows() != o.cols() || o.rows() == 0) return false;
  return (o * o.transpose() - Matrix::Identity(o.rows(), o.rows())).norm() <= tol;
}

SympGate::SympGate(Matrix s, Vector disp) : s_(std::move(s)), disp_(std::move(disp)) {
  const double res = symplectic_residual(s_);
  if (!(res <= kSymplecticTol)) {
    std::ostringstream os;
    os << "matrix is not symplectic: |S Omega S^T - Omega|_F = " << res;
    throw DomainError(os.str());
  }
  if (disp_.size() == 0) disp_ = Vector::Zero(s_.rows());
  if (disp_.size() != s_.rows()) throw DimensionError("displacement length must be 2m");
  if (!disp_.allFinite()) throw DomainError("displacement must be finite");
}

SympGate SympGate::identity(int m) {
  if (m < 1) throw DimensionError("mode count must be positive");
  return SympGate(Matrix::Identity(2 * m, 2 * m));
}

SympGate SympGate::then(const SympGate& next) const {
  if (next.modes() != modes()) throw DimensionError("cannot compose gates on different mode counts");
  return SympGate(next.s_ * s_, next.s_ * disp_ + next.disp_);
}

SympGate squeezer(int m, int mode, double r) {
  require_mode(m, mode);
  if (!std::isfinite(r)) throw DomainError("squeezing must be finite");
  Matrix s = Matrix::Identity(2 * m, 2 * m);
  s(mode - 1, mode - 1) = std::exp(r);
  s(m + mode - 1, m + mode - 1) = std::exp(-r);
  return SympGate(std::move(s));
}

SympGate phase_shifter(int m, int mode, double theta) {
  require_mode(m, mode);
  if (!std::isfinite(theta)) throw DomainError("phase must be finite");
  Matrix s = Matrix::Identity(2 * m, 2 * m);
  const int q = mode - 1;
  const int p = m + mode - 1;
  s(q, q) = std::cos(theta);
  s(q, p) = std::sin(theta);
  s(p, q) = -std::sin(theta);
  s(p, p) = std::cos(theta);
  return SympGate(std::move(s));
}

SympGate block_orthogonal(const Matrix& o) {
  if (!is_orthogonal(o)) throw DomainError("matrix is not orthogonal");
  const Eigen::Index m = o.rows();
  Matrix s = Matrix::Zero(2 * m, 2 * m);
  s.topLeftCorner(m, m) = o;
  s.bottomRightCorner(m, m) = o;
  return SympGate(std::move(s));
}

SympGate passive_from_unitary(const Matrix& x, const Matrix& y) {
  const Eigen::Index m = x.rows();
  if (m == 0 || x.cols() != m || y.rows() != m || y.cols() != m) {
    throw DimensionError("unitary parts must be m x m");
  }
  const Matrix re = x * x.transpose() + y * y.transpose() - Matrix::Identity(m, m);
  const Matrix im = y * x.transpose() - x * y.transpose();
  if (std::sqrt(re.squaredNorm() + im.squaredNorm()) > kSymplecticTol) {
    throw DomainError("X + iY is not unitary");
  }
  Matrix s(2 * m, 2 * m);
  s << x, y, -y, x;
  return SympGate(std::move(s));
}

SympGate displacement(const Vector& d) {
  if (d.size() == 0 || d.size() % 2 != 0) throw DimensionError("displacement length must be a positive even number");
  return SympGate(Matrix::Identity(d.size(), d.size()), d);
}

SympGate block_diagonal_active(const Matrix& a) {
  const Eigen::Index m = a.rows();
  if (m == 0 || a.cols() != m) throw DimensionError("active block must be square");
  Eigen::FullPivLU<Matrix> lu(a);
  if (!lu.isInvertible()) throw DomainError("active block must be invertible");
  Matrix s = Matrix::Zero(2 * m, 2 * m);
  s.topLeftCorner(m, m) = a;
  s.bottomRightCorner(m, m) = lu.inverse().transpose();
  return SympGate(std::move(s));
}

CovMat apply(const SympGate& gate, const CovMat& cov) {
  require_gate_fits(gate, cov.dim());
  const Matrix& s = gate.matrix();
  return CovMat(symmetrized(s * cov.matrix() * s.transpose()), cov.tol());
}

GaussianState apply(const SympGate& gate, const GaussianState& state) {
  CovMat cov = apply(gate, state.cov());
  return GaussianState(std::move(cov), gate.matrix() * state.mean() + gate.displacement());
}

CovMat pure_gaussian_cm(const SympGate& passive, const Vector& r) {
  const Eigen::Index m = passive.modes();
  if (r.size() != m) throw DimensionError("squeezing vector length must equal the mode count");
  if (!r.allFinite()) throw DomainError("squeezing parameters must be finite");
  if (!is_orthogonal(passive.matrix())) throw DomainError("passive gate must be orthogonal");
  Vector diag(2 * m);
  for (Eigen::Index i = 0; i < m; ++i) {
    diag(i) = std::exp(2.0 * r(i));
    diag(m + i) = std::exp(-2.0 * r(i));
  }
  const Matrix& s = passive.matrix();
  return CovMat(symmetrized(s * diag.asDiagonal() * s.transpose()));
}

LossChannel::LossChannel(double eta) : eta_(eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
}

CovMat apply_loss(const CovMat& cov, double eta) {
  const LossChannel ch(eta);
  const Eigen::Index n = cov.dim();
  return CovMat(ch.eta() * cov.matrix() + (1.0 - ch.eta()) * Matrix::Identity(n, n), cov.tol());
}

GaussianState apply_loss_state(const GaussianState& state, double eta) {
  CovMat cov = apply_loss(state.cov(), eta);
  return GaussianState(std::move(cov), std::sqrt(eta) * state.mean());
}

Matrix direct_sum_permutation(int m_a, int m_b) {
  if (m_a < 1 || m_b < 1) throw DimensionError("mode counts must be positive");
  const int m = m_a + m_b;
  Matrix p = Matrix::Zero(2 * m, 2 * m);
  // Source layout: qA (0..m_a), pA (m_a..2m_a), qB, pB.
  for (int i = 0; i < m_a; ++i) {
    p(i, i) = 1.0;
    p(m + i, m_a + i) = 1.0;
  }
  for (int j = 0; j < m_b; ++j) {
    p(m_a + j, 2 * m_a + j) = 1.0;
    p(m + m_a + j, 2 * m_a + m_b + j) = 1.0;
  }
  return p;
}

CovMat tensor(const CovMat& a, const CovMat& b) {
  const Eigen::Index na = a.dim();
  const Eigen::Index nb = b.dim();
  Matrix direct = Matrix::Zero(na + nb, na + nb);
  direct.topLeftCorner(na, na) = a.matrix();
  direct.bottomRightCorner(nb, nb) = b.matrix();
  const Matrix p = direct_sum_permutation(a.modes(), b.modes());
  return CovMat(p * direct * p.transpose(), std::max(a.tol(), b.tol()));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  Vector d(a.mean().size() + b.mean().size());
  d << a.mean(), b.mean();
  const Vector perm = direct_sum_permutation(a.modes(), b.modes()) * d;
  return GaussianState(tensor(a.cov(), b.cov()), perm);
}

namespace {

std::vector<Eigen::Index> quadrature_indices(int m, std::span<const int> keep) {
  if (keep.empty()) throw DimensionError("partial trace must keep at least one mode");
  std::vector<bool> seen(m, false);
  const Eigen::Index k = static_cast<Eigen::Index>(keep.size());
  std::vector<Eigen::Index> idx(2 * k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const int mode = keep[i];
    require_mode(m, mode);
    if (seen[mode - 1]) throw DimensionError("partial trace mode list has duplicates");
    seen[mode - 1] = true;
    idx[i] = mode - 1;
    idx[k + i] = m + mode - 1;
  }
  return idx;
}

}  // namespace

CovMat partial_trace(const CovMat& cov, std::span<const int> keep) {
  const auto idx = quadrature_indices(cov.modes(), keep);
  return CovMat(cov.matrix()(idx, idx), cov.tol());
}

GaussianState partial_trace(const GaussianState& state, std::span<const int> keep) {
  const auto idx = quadrature_indices(state.modes(), keep);
  return GaussianState(CovMat(state.cov().matrix()(idx, idx), state.cov().tol()), state.mean()(idx));
}

GaussianState mix(std::span<const WeightedState> components) {
  if (components.empty()) throw DimensionError("mixture needs at least one component");
  const Eigen::Index n = components.front().state.cov().dim();
  double total = 0.0;
  Vector mean = Vector::Zero(n);
  Matrix second = Matrix::Zero(n, n);
  for (const auto& c : components) {
    if (c.state.cov().dim() != n) throw DimensionError("mixture components must share the mode count");
    if (!(c.weight >= 0.0) || !std::isfinite(c.weight)) throw DomainError("mixture weights must be nonnegative");
    total += c.weight;
    mean += c.weight * c.state.mean();
    second += c.weight * (c.state.cov().matrix() + c.state.mean() * c.state.mean().transpose());
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("mixture weights must sum to 1");
  return GaussianState(CovMat(symmetrized(second - mean * mean.transpose())), mean);
}

GaussianState orthogonal_stinespring(const GaussianState& state, const Matrix& o, const CovMat& env,
                                     const Vector& disp, double free_tol) {
  const int m = state.modes();
  const int k = env.modes();
  if (o.rows() != m + k || o.cols() != m + k) {
    std::ostringstream os;
    os << "orthogonal matrix must be " << (m + k) << "x" << (m + k);
    throw DimensionError(os.str());
  }
  if (blocks(env).xp.cwiseAbs().maxCoeff() > free_tol) {
    throw DomainError("environment state is not free (nonzero position-momentum block)");
  }
  const SympGate gate(block_orthogonal(o).matrix(), disp);
  const GaussianState joint = apply(gate, tensor(state, GaussianState(env)));
  std::vector<int> keep(m);
  for (int i = 0; i < m; ++i) keep[i] = i + 1;
  return partial_trace(joint, keep);
}

Matrix beam_splitter_orthogonal(double eta, int m) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
  if (m < 1) throw DimensionError("mode count must be positive");
  const double t = std::sqrt(eta);
  const double s = std::sqrt(1.0 - eta);
  const Matrix id = Matrix::Identity(m, m);
  Matrix o(2 * m, 2 * m);
  o << t * id, s * id, -s * id, t * id;
  return o;
}

Matrix haar_orthogonal(int m, Rng& rng) {
  if (m < 1) throw DimensionError("dimension must be positive");
  std::normal_distribution<double> normal;
  Matrix g(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < m; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  return q;
}

UnitaryParts haar_unitary(int m, Rng& rng) {
  if (m < 1) throw DimensionError("dimension must be positive");
  using Complex = std::complex<double>;
  std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
  Eigen::MatrixXcd g(m, m);
  for (int j = 0; j < m; ++j)
    for (int i = 0; i < m; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  for (int j = 0; j < m; ++j) {
    const Complex rjj = qr.matrixQR()(j, j);
    const double mag = std::abs(rjj);
    if (mag > 0.0) q.col(j) *= rjj / mag;
  }
  return UnitaryParts{q.real(), q.imag()};
}

}  // namespace sympcoh
