#include "sympcoh/ensembles.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "sympcoh/coherence.hpp"
#include "sympcoh/parallel.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh {

std::string_view ensemble_kind_name(EnsembleKind kind) {
  return kind == EnsembleKind::kOrthogonal ? "orthogonal" : "unitary";
}

EnsembleKind parse_ensemble_kind(std::string_view name) {
  if (name == "orthogonal") return EnsembleKind::kOrthogonal;
  if (name == "unitary") return EnsembleKind::kUnitary;
  throw DomainError("ensemble kind must be 'orthogonal' or 'unitary', got '" + std::string(name) + "'");
}

void check_config(const EnsembleConfig& config) {
  if (config.m < 1) throw DimensionError("mode count must be positive");
  if (!(config.E >= 2.0 * config.m)) {
    std::ostringstream os;
    os << "energy E = " << config.E << " is below the vacuum trace 2m = " << 2 * config.m;
    throw DomainError(os.str());
  }
  if (config.n_samples < 1) throw DomainError("n_samples must be at least 1");
}

Vector sample_d(double E, int m, Rng& rng) {
  check_config(EnsembleConfig{m, E, 1});
  std::normal_distribution<double> normal;
  Vector w(m);
  double norm_sq = 0.0;
  do {
    for (int i = 0; i < m; ++i) w(i) = normal(rng);
    norm_sq = w.squaredNorm();
  } while (norm_sq == 0.0);
  const double excess = E - 2.0 * m;
  Vector d(m);
  for (int i = 0; i < m; ++i) {
    const double x = excess * w(i) * w(i) / norm_sq;
    d(i) = 1.0 + 0.5 * x + std::sqrt(x + 0.25 * x * x);
  }
  return d;
}

PureSample sample_pure(EnsembleKind kind, double E, int m, Rng& rng) {
  Matrix s(2 * m, 2 * m);
  if (kind == EnsembleKind::kOrthogonal) {
    const Matrix o = haar_orthogonal(m, rng);
    s.setZero();
    s.topLeftCorner(m, m) = o;
    s.bottomRightCorner(m, m) = o;
  } else {
    const UnitaryParts u = haar_unitary(m, rng);
    s << u.x, u.y, -u.y, u.x;
  }
  Vector d = sample_d(E, m, rng);
  Vector diag(2 * m);
  diag << d, d.cwiseInverse();
  Matrix v = s * diag.asDiagonal() * s.transpose();
  v = 0.5 * (v + v.transpose());
  return PureSample{std::move(s), std::move(d), CovMat(std::move(v))};
}

CovMat sample_pure_cm(const EnsembleConfig& config, Rng& rng) {
  check_config(config);
  return sample_pure(config.kind, config.E, config.m, rng).cov;
}

double analytic_mean_nu_sq(EnsembleKind kind, int m, double s1, double s2) {
  const double md = m;
  if (kind == EnsembleKind::kOrthogonal) return 3.0 / (md + 2.0) + s1 / (2.0 * md * (md + 2.0));
  return 2.0 / (md + 1.0) + (s1 + s2) / (4.0 * md * (md + 1.0));
}

double s1_term(const Vector& d) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    for (Eigen::Index j = 0; j < d.size(); ++j)
      if (i != j) s += d(i) / d(j) + d(j) / d(i);
  return s;
}

double s2_term(const Vector& d) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d.size(); ++i)
    for (Eigen::Index j = 0; j < d.size(); ++j)
      if (i != j) s += d(i) * d(j) + 1.0 / (d(i) * d(j));
  return s;
}

EnsembleStats ensemble_nu_sq(const EnsembleConfig& config, bool keep_samples) {
  check_config(config);
  const std::size_t n = config.n_samples;
  std::vector<double> nu_sq(n), c(n), s1(n), s2(n), resid(n);
  parallel_for(n, config.threads, [&](std::size_t i) {
    Rng rng = stream(config.seed, i);
    const PureSample sample = sample_pure(config.kind, config.E, config.m, rng);
    nu_sq[i] = reduced_first_mode(sample.cov).nu_sq;
    c[i] = symplectic_coherence(sample.cov);
    s1[i] = s1_term(sample.d);
    s2[i] = s2_term(sample.d);
    resid[i] = nu_sq[i] - analytic_mean_nu_sq(config.kind, config.m, s1[i], s2[i]);
  });

  EnsembleStats stats;
  const SampleMoments nu = sample_moments(nu_sq);
  stats.mean_nu_sq = nu.mean;
  stats.std_error = nu.std_error;
  stats.s1_hat = sample_moments(s1).mean;
  stats.s2_hat = sample_moments(s2).mean;
  stats.analytic_mean = analytic_mean_nu_sq(config.kind, config.m, stats.s1_hat, stats.s2_hat);
  const SampleMoments r = sample_moments(resid);
  stats.formula_residual = r.mean;
  stats.formula_residual_std_error = r.std_error;
  if (keep_samples) {
    stats.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) stats.samples[i] = {nu_sq[i], c[i]};
  }
  return stats;
}

double MomentEstimate::z_score() const {
  const double diff = estimate - exact;
  if (std_error > 0.0) return diff / std_error;
  return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

std::vector<MomentEstimate> haar_moment_check(int m, std::size_t n_samples, std::uint64_t seed, int threads) {
  if (m < 1) throw DimensionError("dimension must be positive");
  if (n_samples < 2) throw DomainError("moment check needs at least two samples");
  const std::size_t n = n_samples;
  // Row-major per sample: first rows of O, X and Y.
  std::vector<double> o_row(n * m), x_row(n * m), y_row(n * m);
  parallel_for(n, threads, [&](std::size_t s) {
    Rng rng_o = stream(seed, 2 * s);
    Rng rng_u = stream(seed, 2 * s + 1);
    const Matrix o = haar_orthogonal(m, rng_o);
    const UnitaryParts u = haar_unitary(m, rng_u);
    for (int k = 0; k < m; ++k) {
      o_row[s * m + k] = o(0, k);
      x_row[s * m + k] = u.x(0, k);
      y_row[s * m + k] = u.y(0, k);
    }
  });

  const double md = m;
  const double ortho_same = 3.0 / (md * (md + 2.0));
  const double ortho_diff = 1.0 / (md * (md + 2.0));
  const double uni_base = 1.0 / (4.0 * md * (md + 1.0));

  std::vector<MomentEstimate> out;
  std::vector<double> values(n);
  auto estimate = [&](std::string name, int i, int j, double exact, auto&& term) {
    for (std::size_t s = 0; s < n; ++s) values[s] = term(s);
    const SampleMoments mom = sample_moments(values);
    out.push_back({std::move(name), i + 1, j + 1, mom.mean, mom.std_error, exact});
  };

  for (int i = 0; i < m; ++i) {
    estimate("O1i^2", i, i, 1.0 / md, [&](std::size_t s) { return o_row[s * m + i] * o_row[s * m + i]; });
  }
  for (int i = 0; i < m; ++i) {
    for (int j = i; j < m; ++j) {
      const bool same = i == j;
      estimate("O1i^2 O1j^2", i, j, same ? ortho_same : ortho_diff, [&](std::size_t s) {
        const double a = o_row[s * m + i], b = o_row[s * m + j];
        return a * a * b * b;
      });
      estimate("X1i^2 Y1j^2", i, j, uni_base, [&](std::size_t s) {
        const double a = x_row[s * m + i], b = y_row[s * m + j];
        return a * a * b * b;
      });
      estimate("X1i^2 X1j^2", i, j, same ? 3.0 * uni_base : uni_base, [&](std::size_t s) {
        const double a = x_row[s * m + i], b = x_row[s * m + j];
        return a * a * b * b;
      });
      estimate("Y1i^2 Y1j^2", i, j, same ? 3.0 * uni_base : uni_base, [&](std::size_t s) {
        const double a = y_row[s * m + i], b = y_row[s * m + j];
        return a * a * b * b;
      });
      estimate("X1i Y1i X1j Y1j", i, j, same ? uni_base : 0.0, [&](std::size_t s) {
        return x_row[s * m + i] * y_row[s * m + i] * x_row[s * m + j] * y_row[s * m + j];
      });
    }
  }
  return out;
}

double entanglement_entropy(double nu) {
  if (!(nu >= 1.0 - 1e-12)) throw DomainError("symplectic eigenvalue must be at least 1");
  if (nu - 1.0 < 1e-12) return 0.0;
  const double a = 0.5 * (nu + 1.0);
  const double b = 0.5 * (nu - 1.0);
  return a * std::log(a) - b * std::log(b);
}

}  // namespace sympcoh
