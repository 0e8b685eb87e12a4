#pragma once

// Gaussian unitaries as (S, displacement) pairs, pure loss, orthogonal
// Stinespring dilations, tensor products and Haar samplers. Mode indices in
// this interface are 1-based.

#include <span>
#include <vector>

#include "sympcoh/gaussian_core.hpp"
#include "sympcoh/rng.hpp"

namespace sympcoh {

inline constexpr double kSymplecticTol = 1e-9;

// Frobenius norm of S*Omega*S^T - Omega.
double symplectic_residual(const Matrix& s);
bool is_symplectic(const Matrix& s, double tol = kSymplecticTol);
bool is_orthogonal(const Matrix& o, double tol = kSymplecticTol);

class SympGate {
 public:
  // Throws DomainError when S is not symplectic within kSymplecticTol.
  SympGate(Matrix s, Vector disp = Vector());

  static SympGate identity(int m);

  int modes() const { return static_cast<int>(s_.rows() / 2); }
  const Matrix& matrix() const { return s_; }
  const Vector& displacement() const { return disp_; }

  // `next` applied after *this.
  SympGate then(const SympGate& next) const;

 private:
  Matrix s_;
  Vector disp_;
};

SympGate squeezer(int m, int mode, double r);
SympGate phase_shifter(int m, int mode, double theta);
SympGate block_orthogonal(const Matrix& o);
SympGate passive_from_unitary(const Matrix& x, const Matrix& y);
SympGate displacement(const Vector& d);
// diag(A, A^{-T}); does not mix quadratures but is not free in general.
SympGate block_diagonal_active(const Matrix& a);

GaussianState apply(const SympGate& gate, const GaussianState& state);
CovMat apply(const SympGate& gate, const CovMat& cov);

// S_U diag(e^{2r}, e^{-2r}) S_U^T for a passive (orthogonal symplectic) S_U.
CovMat pure_gaussian_cm(const SympGate& passive, const Vector& r);

class LossChannel {
 public:
  explicit LossChannel(double eta);
  double eta() const { return eta_; }

 private:
  double eta_;
};

// eta*V + (1 - eta)*I; first moments scale by sqrt(eta).
CovMat apply_loss(const CovMat& cov, double eta);
GaussianState apply_loss_state(const GaussianState& state, double eta);

// Permutation P with P * (A (+) B) * P^T in (qA, qB, pA, pB) ordering when
// A (+) B is laid out as (qA, pA, qB, pB).
Matrix direct_sum_permutation(int m_a, int m_b);

CovMat tensor(const CovMat& a, const CovMat& b);
GaussianState tensor(const GaussianState& a, const GaussianState& b);

// Keeps the listed modes (1-based, in the given order).
GaussianState partial_trace(const GaussianState& state, std::span<const int> keep);
CovMat partial_trace(const CovMat& cov, std::span<const int> keep);

struct WeightedState {
  double weight;
  GaussianState state;
};

// Covariance of a classical mixture, including the spread of first moments.
GaussianState mix(std::span<const WeightedState> components);

// Trace out the k environment modes of D O (rho (x) env) O^T D^dagger.
// `o` is the (m+k)x(m+k) orthogonal matrix, applied as diag(o, o); `env` must be
// free (V_xp = 0); `disp` has length 2(m+k) or is empty.
GaussianState orthogonal_stinespring(const GaussianState& state, const Matrix& o, const CovMat& env,
                                     const Vector& disp = Vector(), double free_tol = kDefaultTol);

// [[sqrt(eta) I, sqrt(1-eta) I], [-sqrt(1-eta) I, sqrt(eta) I]] on m system + m environment modes.
Matrix beam_splitter_orthogonal(double eta, int m = 1);

// QR of an i.i.d. Gaussian matrix with sign (phase) correction of R's diagonal.
Matrix haar_orthogonal(int m, Rng& rng);

struct UnitaryParts {
  Matrix x;  // real part
  Matrix y;  // imaginary part
};

UnitaryParts haar_unitary(int m, Rng& rng);

}  // namespace sympcoh
