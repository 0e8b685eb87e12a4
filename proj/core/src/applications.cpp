#include "sympcoh/applications.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>

#include "sympcoh/coherence.hpp"
#include "sympcoh/parallel.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh {
namespace {

void require_single_mode(const CovMat& cov) {
  if (cov.modes() != 1) {
    std::ostringstream os;
    os << "single-mode covariance matrix required, got m = " << cov.modes();
    throw DimensionError(os.str());
  }
}

void require_delta(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw DomainError("delta must lie in (0, 1)");
}

void require_eta(double eta) {
  if (!(eta >= 0.0 && eta <= 1.0)) throw DomainError("transmissivity must lie in [0, 1]");
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0)) throw DomainError(std::string(name) + " must be nonnegative");
}

double distinguishability(double E1, double E2, double c1, double c2, int m) {
  require_nonnegative(E1, "E1");
  require_nonnegative(E2, "E2");
  require_nonnegative(c1, "c1");
  require_nonnegative(c2, "c2");
  if (m < 1) throw DimensionError("mode count must be positive");
  const double de = E1 - E2;
  const double dc = std::sqrt(c1) - std::sqrt(c2);
  return de * de / (2.0 * m) + 2.0 * dc * dc;
}

}  // namespace

QfiResult qfi_displacement(const CovMat& cov) {
  require_single_mode(cov);
  const double value = 2.0 * (cov(0, 0) + cov(1, 1)) + 4.0 * std::abs(cov(0, 1));
  return QfiResult{value, is_pure(cov)};
}

double td_lower_bound_gaussian(double E1, double E2, double c1, double c2, double E_cap, int m) {
  require_nonnegative(E_cap, "E");
  const double arg = std::sqrt(distinguishability(E1, E2, c1, c2, m)) / (E_cap + 1.0);
  return std::min(1.0, arg) / 200.0;
}

double td_lower_bound_general(double E1, double E2, double c1, double c2, double E_tilde_sq, int m) {
  if (!(E_tilde_sq > 0.0)) throw DomainError("second-moment energy must be positive");
  return distinguishability(E1, E2, c1, c2, m) / (3200.0 * E_tilde_sq * m);
}

double helstrom_lower_bound_loss(double E, int m, double eta, double c) {
  require_eta(eta);
  require_nonnegative(c, "c");
  if (m < 1) throw DimensionError("mode count must be positive");
  if (!(E >= 2.0 * m)) throw DomainError("energy must be at least 2m");
  const double loss = 1.0 - eta;
  const double excess = E - 2.0 * m;
  const double arg = std::sqrt(loss * loss * excess * excess / (2.0 * m) + 2.0 * c * loss * loss) / (E + 1.0);
  return 0.5 + std::min(1.0, arg) / 400.0;
}

double rotated_quadrature_variance(const CovMat& cov, double theta) {
  require_single_mode(cov);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return cov(0, 0) * c * c + cov(1, 1) * s * s + cov(0, 1) * std::sin(2.0 * theta);
}

TvdBound tvd_bound_ppmm(const CovMat& cov, double sxp1, double sxp2, double theta) {
  require_single_mode(cov);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double s2 = std::sin(2.0 * theta);
  const double diag = cov(0, 0) * c * c + cov(1, 1) * s * s;
  const double var1 = diag + sxp1 * s2;
  const double var2 = diag + sxp2 * s2;
  if (var1 == 0.0 || var2 == 0.0) throw NumericError("degenerate rotated-quadrature variance");
  const double num = std::abs(s2) * std::abs(sxp1 - sxp2);
  const double h1 = num / std::abs(var1);
  const double h2 = num / std::abs(var2);
  return TvdBound{std::min({1.0, h1, h2}), std::min(1.0, 1.5 * std::min(h1, h2))};
}

double tvd_exact_zero_mean_normals(double var1, double var2) {
  if (!(var1 > 0.0) || !(var2 > 0.0)) throw DomainError("variances must be positive");
  if (var1 == var2) return 0.0;
  const double x_sq = var1 * var2 * std::log(var2 / var1) / (var2 - var1);
  const double x = std::sqrt(x_sq);
  return std::abs(std::erf(x / std::sqrt(2.0 * var1)) - std::erf(x / std::sqrt(2.0 * var2)));
}

GaussianState apply_channel(const GaussianState& state, const Channel& channel) {
  struct Visitor {
    const GaussianState& state;
    GaussianState operator()(const IdentityChannel&) const { return state; }
    GaussianState operator()(const LossSpec& l) const { return apply_loss_state(state, l.eta); }
    GaussianState operator()(const StinespringSpec& s) const {
      return orthogonal_stinespring(state, s.o, s.env, s.disp);
    }
  };
  return std::visit(Visitor{state}, channel);
}

std::string describe(const Channel& channel) {
  struct Visitor {
    std::string operator()(const IdentityChannel&) const { return "identity"; }
    std::string operator()(const LossSpec& l) const {
      std::ostringstream os;
      os << "loss(eta=" << l.eta << ")";
      return os.str();
    }
    std::string operator()(const StinespringSpec& s) const {
      std::ostringstream os;
      os << "stinespring(env_modes=" << s.env.modes() << ")";
      return os.str();
    }
  };
  return std::visit(Visitor{}, channel);
}

MeasMoments meas_moments(const GaussianState& probe, const Channel& channel) {
  if (probe.mean().cwiseAbs().maxCoeff() != 0.0) throw DomainError("probe must have zero first moments");
  const GaussianState out = apply_channel(probe, channel);
  const ReducedMode red = reduced_first_mode(out.cov());
  const double mu = red.cov(0, 1);
  return MeasMoments{mu, 1.0 + red.nu_sq + 2.0 * mu * mu};
}

double f_energy(int m, double E) {
  if (m < 1) throw DimensionError("mode count must be positive");
  const double t = 0.5 * E - (m - 1);
  return 1.0 + t * t;
}

double n_thres_orthogonal(double mu1, double mu2, int m, double E, double delta) {
  require_delta(delta);
  if (mu1 == mu2) throw DomainError("channel means coincide: the sample threshold is infinite");
  const double gap = mu2 - mu1;
  return 272.0 * std::log(2.0 / delta) * (std::max(mu1 * mu1, mu2 * mu2) + f_energy(m, E)) / (gap * gap);
}

double n_thres_orthogonal_optimal(int m, double E, double c, double delta) {
  require_delta(delta);
  if (!(c > 0.0)) throw DomainError("symplectic coherence must be positive");
  return 272.0 * std::log(2.0 / delta) * (f_energy(m, E) / (4.0 * c) + 0.25);
}

double n_thres_orthogonal_optimal_68(int m, double E, double c, double delta) {
  require_delta(delta);
  if (!(c > 0.0)) throw DomainError("symplectic coherence must be positive");
  return 68.0 * std::log(2.0 / delta) * (1.0 + f_energy(m, E) / c);
}

double g_loss(double nu_sq, double mu, double E1, double eta) {
  require_eta(eta);
  if (mu == 0.0) throw DomainError("probe mean of M must be nonzero");
  const double mu_sq = mu * mu;
  return (eta * eta * nu_sq + (1.0 - eta) * (1.0 - eta) + eta * (1.0 - eta) * E1 + 2.0 * eta * eta * mu_sq) / mu_sq;
}

double g_tilde(int m, double E, double eta) {
  require_eta(eta);
  const double cmax = max_symplectic_coherence(E, m);
  if (!(cmax > 0.0)) throw DomainError("maximal coherence vanishes at E = 2m");
  return (eta * eta + (1.0 - eta) * (1.0 - eta)) / cmax + 2.0 * eta * eta;
}

double n_thres_loss(double mu, double nu_sq, double E1, double eta1, double eta2, double delta) {
  require_delta(delta);
  if (eta1 == eta2) throw DomainError("transmissivities coincide: the sample threshold is infinite");
  const double gap = eta2 - eta1;
  const double g = std::max(g_loss(nu_sq, mu, E1, eta1), g_loss(nu_sq, mu, E1, eta2));
  return 272.0 * std::log(2.0 / delta) * g / (gap * gap);
}

double n_thres_loss_optimal(int m, double E, double eta1, double eta2, double delta) {
  require_delta(delta);
  if (eta1 == eta2) throw DomainError("transmissivities coincide: the sample threshold is infinite");
  const double gap = eta2 - eta1;
  return 272.0 * std::log(2.0 / delta) * std::max(g_tilde(m, E, eta1), g_tilde(m, E, eta2)) / (gap * gap);
}

std::size_t mom_block_count(std::size_t n, double delta) {
  require_delta(delta);
  const auto k = static_cast<std::size_t>(std::max(1.0, std::ceil(8.0 * std::log(2.0 / delta))));
  return std::max<std::size_t>(1, std::min(k, n));
}

double median_of_means(std::span<const double> samples, double delta) {
  if (samples.empty()) throw DomainError("median of means needs at least one sample");
  const std::size_t k = mom_block_count(samples.size(), delta);
  const std::size_t size = samples.size() / k;
  std::vector<double> means(k);
  for (std::size_t b = 0; b < k; ++b) means[b] = pairwise_sum(samples.subspan(b * size, size)) / size;
  std::sort(means.begin(), means.end());
  if (k % 2 == 1) return means[k / 2];
  return 0.5 * (means[k / 2 - 1] + means[k / 2]);
}

WilsonInterval wilson_interval(std::size_t failures, std::size_t trials, double z) {
  if (trials == 0) throw DomainError("Wilson interval needs at least one trial");
  if (failures > trials) throw DomainError("failures exceed trials");
  const double n = static_cast<double>(trials);
  const double p = failures / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  const double lo = failures == 0 ? 0.0 : std::max(0.0, center - half);
  const double hi = failures == trials ? 1.0 : std::min(1.0, center + half);
  return WilsonInterval{lo, hi};
}

namespace {

// Loss transmissivity of a channel that is identity or pure loss.
std::optional<double> as_loss(const Channel& channel) {
  if (std::holds_alternative<IdentityChannel>(channel)) return 1.0;
  if (const auto* l = std::get_if<LossSpec>(&channel)) return l->eta;
  return std::nullopt;
}

}  // namespace

DiscriminationReport run_discrimination(const DiscriminationConfig& config) {
  require_delta(config.delta);
  if (config.trials < 1) throw DomainError("trials must be at least 1");
  const MeasMoments a = meas_moments(config.probe, config.channels[0]);
  const MeasMoments b = meas_moments(config.probe, config.channels[1]);
  if (a.mu == b.mu) throw DomainError("channel means coincide; the channels cannot be told apart by M");

  DiscriminationReport report{};
  report.mu1 = a.mu;
  report.mu2 = b.mu;
  report.var1 = a.var;
  report.var2 = b.var;
  report.threshold = 0.5 * (a.mu + b.mu);

  const auto eta1 = as_loss(config.channels[0]);
  const auto eta2 = as_loss(config.channels[1]);
  if (eta1 && eta2) {
    const ReducedMode red = reduced_first_mode(config.probe.cov());
    report.n_thres = n_thres_loss(red.cov(0, 1), red.nu_sq, red.energy, *eta1, *eta2, config.delta);
    report.n_thres_kind = "loss";
  } else {
    report.n_thres = n_thres_orthogonal(a.mu, b.mu, config.probe.modes(), config.probe.cov().trace(), config.delta);
    report.n_thres_kind = "orthogonal";
  }

  const double n_req = config.n_samples > 0 ? static_cast<double>(config.n_samples) : std::ceil(report.n_thres);
  if (!(n_req <= 1e9)) throw DomainError("sample count exceeds 1e9; pass n_samples explicitly");
  report.n_samples = static_cast<std::size_t>(n_req);
  report.blocks = mom_block_count(report.n_samples, config.delta);
  report.trials = config.trials;

  // Channel 2 is predicted above the threshold when its mean is the larger one.
  const int above = b.mu > a.mu ? 2 : 1;
  const int below = 3 - above;
  std::vector<TrialOutcome> outcomes(config.trials);
  parallel_for(config.trials, config.threads, [&](std::size_t t) {
    Rng rng = stream(config.seed, t);
    const int truth = std::bernoulli_distribution(0.5)(rng) ? 2 : 1;
    const MeasMoments& mom = truth == 1 ? a : b;
    std::normal_distribution<double> normal(mom.mu, std::sqrt(mom.var));
    std::vector<double> xs(report.n_samples);
    for (double& x : xs) x = normal(rng);
    const double est = median_of_means(xs, config.delta);
    outcomes[t] = TrialOutcome{truth, est > report.threshold ? above : below, est};
  });

  report.failures = static_cast<std::size_t>(
      std::count_if(outcomes.begin(), outcomes.end(), [](const TrialOutcome& o) { return o.predicted != o.true_channel; }));
  report.empirical_error = static_cast<double>(report.failures) / static_cast<double>(report.trials);
  report.wilson = wilson_interval(report.failures, report.trials);
  if (config.keep_trials) report.per_trial = std::move(outcomes);
  return report;
}

}  // namespace sympcoh
