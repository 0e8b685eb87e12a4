#pragma once

// Virtual qubit-qudit state obtained by normalizing a covariance matrix, and
// its geometric discord with respect to computational-basis qubit measurements.

#include "sympcoh/gaussian_core.hpp"

namespace sympcoh {

struct DiscordImage {
  int m;
  Matrix rho;      // V / Tr[V]
  double c_scale;  // Tr[V] of the source; rho + i*Omega/c_scale >= 0
};

DiscordImage to_density(const CovMat& cov);

// scale * rho, fully revalidated. Throws InvalidCovariance when the result
// violates an invariant, DomainError when scale < c_scale otherwise.
CovMat from_density(const DiscordImage& image, double scale);

// 2 ||rho_01||_F^2 with rho_01 the top-right m x m block.
double geometric_discord(const DiscordImage& image);

bool is_classical_quantum(const DiscordImage& image, double tol = 1e-12);

struct DiscordRelation {
  double c;
  double discord;
  double residual;  // |c - Tr[V]^2 D_G / 2|
};

DiscordRelation coherence_discord_relation_check(const CovMat& cov);

}  // namespace sympcoh
