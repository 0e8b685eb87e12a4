#pragma once

// Metrology and channel-discrimination formulas, plus a Monte-Carlo
// simulator of the median-of-means discrimination protocol.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sympcoh/gaussian_core.hpp"
#include "sympcoh/rng.hpp"

namespace sympcoh {

struct QfiResult {
  double value;
  bool exact;  // pure probe: equality; mixed probe: upper bound
};

// 2(V_x + V_p) + 4|V_xp| for a single-mode probe. A negative V_xp is first
// mapped to a positive one by the Fourier gate.
QfiResult qfi_displacement(const CovMat& cov);

// (1/200) min(1, sqrt((E1-E2)^2/(2m) + 2(sqrt(c1)-sqrt(c2))^2) / (E_cap+1)).
double td_lower_bound_gaussian(double E1, double E2, double c1, double c2, double E_cap, int m);

// ((E1-E2)^2/(2m) + 2(sqrt(c1)-sqrt(c2))^2) / (3200 E_tilde_sq m).
double td_lower_bound_general(double E1, double E2, double c1, double c2, double E_tilde_sq, int m);

// 1/2 + (1/400) min(1, sqrt((1-eta)^2 (E-2m)^2/(2m) + 2c(1-eta)^2) / (E+1)).
double helstrom_lower_bound_loss(double E, int m, double eta, double c);

// sigma_x cos^2(theta) + sigma_p sin^2(theta) + sigma_xp sin(2 theta).
double rotated_quadrature_variance(const CovMat& cov, double theta);

struct TvdBound {
  double stated;    // min(1, h1, h2)
  double inflated;  // min(1, 3/2 min(h1, h2))
};

// Two channel outputs sharing the diagonal entries of `cov` and differing only
// in sigma_xp (sxp1 vs sxp2), measured along the quadrature at angle theta.
TvdBound tvd_bound_ppmm(const CovMat& cov, double sxp1, double sxp2, double theta);

// Total variation distance between N(0, var1) and N(0, var2).
double tvd_exact_zero_mean_normals(double var1, double var2);

struct IdentityChannel {};

struct LossSpec {
  double eta;
};

struct StinespringSpec {
  Matrix o;     // (m+k) x (m+k) orthogonal
  CovMat env;   // free k-mode environment
  Vector disp;  // length 2(m+k) or empty
};

using Channel = std::variant<IdentityChannel, LossSpec, StinespringSpec>;

GaussianState apply_channel(const GaussianState& state, const Channel& channel);
std::string describe(const Channel& channel);

struct MeasMoments {
  double mu;   // (V_xp)_11 of the output
  double var;  // 1 + nu_1^2 + 2 mu^2
};

// Moments of M = {q_1, p_1}/2 on the channel output. The probe must have zero first moments.
MeasMoments meas_moments(const GaussianState& probe, const Channel& channel);

// 1 + (E/2 - (m-1))^2.
double f_energy(int m, double E);

double n_thres_orthogonal(double mu1, double mu2, int m, double E, double delta);
// 272 log(2/delta) (f/(4c) + 1/4) and the equivalent 68 log(2/delta)(1 + f/c).
double n_thres_orthogonal_optimal(int m, double E, double c, double delta);
double n_thres_orthogonal_optimal_68(int m, double E, double c, double delta);

// (eta^2 nu^2 + (1-eta)^2 + eta(1-eta) E1 + 2 eta^2 mu^2) / mu^2.
double g_loss(double nu_sq, double mu, double E1, double eta);
// (eta^2 + (1-eta)^2) / c_max(m, E) + 2 eta^2.
double g_tilde(int m, double E, double eta);

double n_thres_loss(double mu, double nu_sq, double E1, double eta1, double eta2, double delta);
double n_thres_loss_optimal(int m, double E, double eta1, double eta2, double delta);

// K = max(1, ceil(8 ln(2/delta))), capped at the sample count.
std::size_t mom_block_count(std::size_t n, double delta);
double median_of_means(std::span<const double> samples, double delta);

struct WilsonInterval {
  double lo;
  double hi;
};

WilsonInterval wilson_interval(std::size_t failures, std::size_t trials, double z = 1.959963984540054);

struct DiscriminationConfig {
  GaussianState probe;
  std::array<Channel, 2> channels;
  double delta = 0.1;
  std::size_t n_samples = 0;  // 0: use ceil(n_thres)
  std::size_t trials = 500;
  std::uint64_t seed = kDefaultSeed;
  int threads = 1;
  bool keep_trials = false;
};

struct TrialOutcome {
  int true_channel;  // 1 or 2
  int predicted;
  double estimate;
};

struct DiscriminationReport {
  double mu1, mu2;
  double var1, var2;
  double threshold;
  double n_thres;
  std::string n_thres_kind;  // "loss" or "orthogonal"
  std::size_t n_samples;
  std::size_t blocks;
  std::size_t trials;
  std::size_t failures;
  double empirical_error;
  WilsonInterval wilson;
  std::vector<TrialOutcome> per_trial;
};

// Outcomes of M are drawn as normals with the exact quantum mean and variance.
DiscriminationReport run_discrimination(const DiscriminationConfig& config);

}  // namespace sympcoh
