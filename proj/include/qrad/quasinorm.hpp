#pragma once

#include <cstdint>

#include "qrad/domain.hpp"
#include "qrad/lingroup.hpp"

namespace qrad {

// Validated pair (Omega, A): every orbit t^A xi crosses the boundary once, at a
// sampled angle bounded below by theta.
class CompatiblePair {
 public:
  CompatiblePair(ConvexDomain domain, DilationGroup group, double theta, int theta_samples);

  const ConvexDomain& domain() const { return domain_; }
  const DilationGroup& group() const { return group_; }
  double theta() const { return theta_; }
  int theta_samples() const { return theta_samples_; }
  int M() const { return domain_.M(); }

  // The unique t with t^{-A} xi on the boundary; rho(0) = 0.
  double rho(Vec2 xi) const;
  // Root-finding path even when a closed form exists.
  double rho_generic(Vec2 xi) const;
  // rho(xi)^{-A} xi, the boundary point on the orbit of xi.
  Vec2 project(Vec2 xi) const;
  void rho_and_project(Vec2 xi, double& rho, Vec2& proj) const;

 private:
  ConvexDomain domain_;
  DilationGroup group_;
  double theta_;
  int theta_samples_;
};

CompatiblePair check_compatibility(const ConvexDomain& domain, const DilationGroup& group, int samples = 4096);

double eval_rho(const CompatiblePair& pair, Vec2 xi);

struct Annulus {
  double inner = 0.5;
  double outer = 2.0;
};

// Largest finite-difference Lipschitz quotient of rho over random nearby pairs
// in the annulus inner <= |xi| <= outer.
double rho_lipschitz_probe(const CompatiblePair& pair, Annulus annulus, int samples, std::uint64_t seed = 1);

}  // namespace qrad
