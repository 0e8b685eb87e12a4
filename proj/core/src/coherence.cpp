#include "sympcoh/coherence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "sympcoh/ensembles.hpp"
#include "sympcoh/parallel.hpp"
#include "sympcoh/symplectic_ops.hpp"

namespace sympcoh {
namespace {

void require_energy(double E, int m) {
  if (m < 1) throw DimensionError("mode count must be positive");
  if (!std::isfinite(E) || E < 2.0 * m) {
    std::ostringstream os;
    os << "energy E = " << E << " is below the vacuum trace 2m = " << 2 * m;
    throw DomainError(os.str());
  }
}

void require_nonnegative(double x, const char* name) {
  if (!(x >= 0.0)) throw DomainError(std::string(name) + " must be nonnegative");
}

}  // namespace

double symplectic_coherence(const Matrix& v) { return blocks(v).xp.squaredNorm(); }

double symplectic_coherence(const CovMat& cov) { return symplectic_coherence(cov.matrix()); }

CovMat closest_free_cm(const CovMat& cov) {
  Blocks b = blocks(cov);
  b.xp.setZero();
  return CovMat(assemble(b), cov.tol());
}

CoherenceReport coherence_report(const CovMat& cov) {
  CovMat free = closest_free_cm(cov);
  const double dist = (cov.matrix() - free.matrix()).squaredNorm();
  return CoherenceReport{symplectic_coherence(cov), dist, std::move(free)};
}

bool is_free(const CovMat& cov, double tol) { return blocks(cov).xp.cwiseAbs().maxCoeff() <= tol; }

double max_symplectic_coherence(double E, int m) {
  require_energy(E, m);
  const double y = E - 2.0 * m;
  return 0.25 * y * y + y;
}

double msc_squeezing(double E, int m) {
  require_energy(E, m);
  return 0.5 * std::acosh(std::max(1.0, 0.5 * (E - 2.0 * (m - 1))));
}

MscSpec MscSpec::canonical(double E, int m) {
  MscSpec spec{E, m, msc_squeezing(E, m), Vector::Zero(m), Matrix::Identity(m, m), Matrix::Identity(m, m)};
  spec.theta(0) = std::numbers::pi / 4.0;
  return spec;
}

GaussianState msc_state(const MscSpec& spec) {
  require_energy(spec.E, spec.m);
  const int m = spec.m;
  if (!(spec.r >= 0.0)) throw DomainError("squeezing r must be nonnegative");
  if (spec.theta.size() != m) throw DimensionError("need one phase per mode");
  if (spec.o1.rows() != m || spec.o2.rows() != m) throw DimensionError("orthogonal matrices must be m x m");

  SympGate gate = squeezer(m, 1, spec.r).then(block_orthogonal(spec.o1));
  for (int k = 0; k < m; ++k) gate = gate.then(phase_shifter(m, k + 1, spec.theta(k)));
  gate = gate.then(block_orthogonal(spec.o2));
  return apply(gate, GaussianState::vacuum(m));
}

GaussianState msc_canonical(double E, int m) { return msc_state(MscSpec::canonical(E, m)); }

MembershipResult msc_membership_conditions(const Matrix& o, const Vector& theta, double tol) {
  if (!is_orthogonal(o)) throw DomainError("matrix is not orthogonal");
  const Eigen::Index m = o.rows();
  if (theta.size() != m) throw DimensionError("need one phase per mode");
  const Vector cos = theta.array().cos();
  const Vector sin = theta.array().sin();
  const Matrix c2 = o.transpose() * cos.cwiseProduct(cos).asDiagonal() * o;
  const Matrix s2 = o.transpose() * sin.cwiseProduct(sin).asDiagonal() * o;
  const Matrix cs = o.transpose() * cos.cwiseProduct(sin).asDiagonal() * o;

  MembershipResult out{true, {}, 0.0};
  for (const Matrix* a : {&c2, &s2, &cs}) {
    std::vector<double> row(m);
    for (Eigen::Index j = 0; j < m; ++j) {
      row[j] = std::abs(2.0 * std::abs((*a)(0, j)) - (j == 0 ? 1.0 : 0.0));
      out.max_residual = std::max(out.max_residual, row[j]);
    }
    out.residuals.push_back(std::move(row));
  }
  out.holds = out.max_residual <= tol;
  return out;
}

MixedMscResult mixed_msc_check(const CovMat& v, const CovMat& v1, const CovMat& v2, double tol) {
  MixedMscResult out{true, {}};
  auto fail = [&](std::string reason) {
    out.ok = false;
    out.reasons.push_back(std::move(reason));
  };
  if (v.dim() != v1.dim() || v.dim() != v2.dim()) {
    fail("mode counts differ");
    return out;
  }
  const int m = v.modes();
  const double mix_err = (v.matrix() - 0.5 * (v1.matrix() + v2.matrix())).cwiseAbs().maxCoeff();
  if (mix_err > tol) fail("V is not the equal-weight mixture of V1 and V2");
  if (!is_pure(v1, tol)) fail("V1 is not pure");
  if (!is_pure(v2, tol)) fail("V2 is not pure");
  const double e1 = v1.trace();
  const double e2 = v2.trace();
  if (std::abs(e1 - e2) > tol * std::max(1.0, e1)) fail("V1 and V2 have different traces");
  if ((blocks(v1).xp - blocks(v2).xp).cwiseAbs().maxCoeff() > tol) {
    fail("V1 and V2 have different position-momentum blocks");
  }
  for (const auto& [cov, label] : {std::pair{&v1, "V1"}, std::pair{&v2, "V2"}}) {
    const double cmax = max_symplectic_coherence(std::max(cov->trace(), 2.0 * m), m);
    if (std::abs(symplectic_coherence(*cov) - cmax) > tol * std::max(1.0, cmax)) {
      fail(std::string(label) + " does not reach the maximal symplectic coherence");
    }
  }
  return out;
}

double perturbation_bound(double c_rho, double c_sigma, double E, double eps) {
  require_nonnegative(c_rho, "c_rho");
  require_nonnegative(c_sigma, "c_sigma");
  require_nonnegative(E, "E");
  require_nonnegative(eps, "eps");
  return 800.0 * E * E * eps +
         40.0 * std::numbers::sqrt2 * E * std::sqrt(std::max(c_rho, c_sigma)) * std::sqrt(eps);
}

double trace_distance_cov_bound(double E_cap, int m, double trace_dist) {
  require_nonnegative(E_cap, "E");
  require_nonnegative(trace_dist, "trace distance");
  if (m < 1) throw DimensionError("mode count must be positive");
  return 40.0 * E_cap * std::sqrt(m * trace_dist);
}

namespace {

constexpr int kGridPoints = 24;
constexpr int kGoldenIters = 60;
constexpr int kMaxSweeps = 40;

struct Probe {
  const Matrix& passive;
  int m;

  Matrix cov(const Vector& theta, const Vector& excess) const {
    Vector diag(2 * m);
    for (int i = 0; i < m; ++i) {
      const double x = std::max(0.0, excess(i));
      const double d = 1.0 + 0.5 * x + std::sqrt(x + 0.25 * x * x);
      diag(i) = d;
      diag(m + i) = 1.0 / d;
    }
    Matrix rot = Matrix::Zero(2 * m, 2 * m);
    for (int i = 0; i < m; ++i) {
      const double c = std::cos(theta(i));
      const double s = std::sin(theta(i));
      rot(i, i) = c;
      rot(i, m + i) = s;
      rot(m + i, i) = -s;
      rot(m + i, m + i) = c;
    }
    const Matrix s = rot * passive;
    const Matrix v = s * diag.asDiagonal() * s.transpose();
    return 0.5 * (v + v.transpose());
  }

  double value(const Vector& theta, const Vector& excess) const {
    return symplectic_coherence(cov(theta, excess));
  }
};

// Grid scan of [lo, hi] followed by golden-section search in the best cell.
// With `periodic` the bracket may extend past the ends of the interval.
template <class F>
std::pair<double, double> maximize_1d(F&& f, double lo, double hi, bool periodic = false) {
  const double step = (hi - lo) / kGridPoints;
  double best_x = lo;
  double best_f = f(lo);
  for (int k = 1; k <= kGridPoints; ++k) {
    const double x = lo + k * step;
    const double fx = f(x);
    if (fx > best_f) {
      best_f = fx;
      best_x = x;
    }
  }
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = periodic ? best_x - step : std::max(lo, best_x - step);
  double b = periodic ? best_x + step : std::min(hi, best_x + step);
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  for (int it = 0; it < kGoldenIters; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    }
  }
  if (f1 > best_f) {
    best_f = f1;
    best_x = x1;
  }
  if (f2 > best_f) {
    best_f = f2;
    best_x = x2;
  }
  return {best_x, best_f};
}

}  // namespace

MaxSearchResult numeric_max_search(double E, int m, std::size_t trials, std::uint64_t seed, int threads) {
  require_energy(E, m);
  if (trials < 1) throw DomainError("trials must be at least 1");

  std::vector<double> c(trials);
  parallel_for(trials, threads, [&](std::size_t i) {
    Rng rng = stream(seed, i);
    c[i] = symplectic_coherence(sample_pure(EnsembleKind::kUnitary, E, m, rng).cov);
  });
  const std::size_t best =
      static_cast<std::size_t>(std::distance(c.begin(), std::max_element(c.begin(), c.end())));

  Rng rng = stream(seed, best);
  const PureSample sample = sample_pure(EnsembleKind::kUnitary, E, m, rng);
  const Probe probe{sample.passive, m};

  Vector theta = Vector::Zero(m);
  Vector excess(m);
  for (int i = 0; i < m; ++i) excess(i) = sample.d(i) + 1.0 / sample.d(i) - 2.0;
  double current = probe.value(theta, excess);

  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    const double before = current;
    for (int i = 0; i < m; ++i) {
      auto f = [&](double t) {
        Vector th = theta;
        th(i) = t;
        return probe.value(th, excess);
      };
      const auto [t, ft] = maximize_1d(f, 0.0, std::numbers::pi, true);
      if (ft > current) {
        theta(i) = t;
        current = ft;
      }
    }
    for (int i = 0; m > 1 && i < m; ++i) {
      const int j = (i + 1) % m;
      const double total = excess(i) + excess(j);
      auto f = [&](double s) {
        Vector x = excess;
        x(i) = s * total;
        x(j) = (1.0 - s) * total;
        return probe.value(theta, x);
      };
      const auto [s, fs] = maximize_1d(f, 0.0, 1.0);
      if (fs > current) {
        excess(i) = s * total;
        excess(j) = (1.0 - s) * total;
        current = fs;
      }
    }
    if (current - before <= 1e-14 * std::max(1.0, current)) break;
  }

  Vector d(m);
  for (int i = 0; i < m; ++i) {
    const double x = excess(i);
    d(i) = 1.0 + 0.5 * x + std::sqrt(x + 0.25 * x * x);
  }
  CovMat cov(probe.cov(theta, excess));
  return MaxSearchResult{current, c[best], max_symplectic_coherence(E, m), best, sample.passive,
                         theta, d, std::move(cov)};
}

}  // namespace sympcoh
