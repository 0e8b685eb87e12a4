#pragma once

// Micro-canonical ensembles of pure Gaussian states at fixed trace E.

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "sympcoh/gaussian_core.hpp"
#include "sympcoh/rng.hpp"

namespace sympcoh {

enum class EnsembleKind { kOrthogonal, kUnitary };

std::string_view ensemble_kind_name(EnsembleKind kind);
EnsembleKind parse_ensemble_kind(std::string_view name);

struct EnsembleConfig {
  int m = 1;
  double E = 2.0;
  std::size_t n_samples = 1000;
  std::uint64_t seed = kDefaultSeed;
  EnsembleKind kind = EnsembleKind::kOrthogonal;
  int threads = 1;
};

void check_config(const EnsembleConfig& config);

// w uniform on the unit sphere, x_i = (E - 2m) w_i^2, d_i = 1 + x_i/2 + sqrt(x_i + x_i^2/4),
// so that sum(d_i + 1/d_i) = E.
Vector sample_d(double E, int m, Rng& rng);

struct PureSample {
  Matrix passive;  // S_U
  Vector d;
  CovMat cov;      // S_U diag(D, D^{-1}) S_U^T
};

PureSample sample_pure(EnsembleKind kind, double E, int m, Rng& rng);
CovMat sample_pure_cm(const EnsembleConfig& config, Rng& rng);

struct EnsembleSample {
  double nu_sq;
  double c;
};

struct EnsembleStats {
  double mean_nu_sq = 0.0;
  double std_error = 0.0;
  double s1_hat = 0.0;
  double s2_hat = 0.0;
  double analytic_mean = 0.0;
  // Per-sample nu_1^2 minus the per-sample analytic expression; its mean is
  // mean_nu_sq - analytic_mean.
  double formula_residual = 0.0;
  double formula_residual_std_error = 0.0;
  std::vector<EnsembleSample> samples;  // filled only when requested
};

// 3/(m+2) + S1/(2m(m+2)) or 2/(m+1) + (S1 + S2)/(4m(m+1)).
double analytic_mean_nu_sq(EnsembleKind kind, int m, double s1, double s2);

// Sum over i != j of (d_i/d_j + d_j/d_i) and of (d_i d_j + 1/(d_i d_j)).
double s1_term(const Vector& d);
double s2_term(const Vector& d);

EnsembleStats ensemble_nu_sq(const EnsembleConfig& config, bool keep_samples = false);

struct MomentEstimate {
  std::string name;  // e.g. "O1i^2 O1j^2"
  int i;             // 1-based
  int j;
  double estimate;
  double std_error;
  double exact;

  double z_score() const;
};

// Fourth moments of the first row of Haar orthogonal and unitary matrices,
// for every 1 <= i <= j <= m.
std::vector<MomentEstimate> haar_moment_check(int m, std::size_t n_samples, std::uint64_t seed = kDefaultSeed,
                                              int threads = 1);

// ((nu+1)/2) ln((nu+1)/2) - ((nu-1)/2) ln((nu-1)/2).
double entanglement_entropy(double nu);

}  // namespace sympcoh
