#include "sympcoh/discord_map.hpp"

#include <cmath>
#include <sstream>

#include "sympcoh/coherence.hpp"

namespace sympcoh {

DiscordImage to_density(const CovMat& cov) {
  const double tr = cov.trace();
  return DiscordImage{cov.modes(), cov.matrix() / tr, tr};
}

CovMat from_density(const DiscordImage& image, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw DomainError("scale must be positive and finite");
  CovMat cov(scale * image.rho);
  if (scale < image.c_scale * (1.0 - 1e-12)) {
    std::ostringstream os;
    os << "scale " << scale << " is below the image's c_scale " << image.c_scale;
    throw DomainError(os.str());
  }
  return cov;
}

double geometric_discord(const DiscordImage& image) {
  return 2.0 * image.rho.topRightCorner(image.m, image.m).squaredNorm();
}

bool is_classical_quantum(const DiscordImage& image, double tol) {
  return image.rho.topRightCorner(image.m, image.m).cwiseAbs().maxCoeff() <= tol;
}

DiscordRelation coherence_discord_relation_check(const CovMat& cov) {
  const double c = symplectic_coherence(cov);
  const double dg = geometric_discord(to_density(cov));
  const double tr = cov.trace();
  return DiscordRelation{c, dg, std::abs(c - 0.5 * tr * tr * dg)};
}

}  // namespace sympcoh
