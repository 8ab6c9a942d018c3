#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qrad/types.hpp"

namespace qrad {

enum class DomainKind { Disk, Superellipse, Polygon, Sampled };

const char* to_string(DomainKind kind);

// Convex domain containing a neighbourhood of the origin, described by its
// gauge (Minkowski functional). Immutable; copies share the representation.
class ConvexDomain {
 public:
  static constexpr int kSampledResolution = 1 << 14;

  static ConvexDomain disk(double radius);
  static ConvexDomain superellipse(double a, double b, double p);
  // Vertices in counterclockwise order.
  static ConvexDomain polygon(std::vector<Vec2> vertices);
  static ConvexDomain regular_polygon(int sides, double circumradius, double first_vertex_angle);
  // Boundary radii at the polar angles 2*pi*k/n, periodic cubic interpolation.
  // min_inradius is the radius of the ball the domain must contain.
  static ConvexDomain sampled(std::vector<double> radii, double min_inradius = 8.0);

  DomainKind kind() const;
  int M() const;
  double max_radius() const;
  double inradius() const;

  double gauge(Vec2 x) const;
  Vec2 gauge_gradient(Vec2 x) const;
  double radius(double phi) const;
  Vec2 boundary_point(double phi) const;
  double support(double theta) const;

  // Unit directions of the supporting lines / outward normals at a boundary
  // point; two entries at polygon vertices.
  std::vector<Vec2> tangents_at(Vec2 p) const;
  std::vector<Vec2> normals_at(Vec2 p) const;

  const std::vector<Vec2>& vertices() const;
  // Support-function convexity test h + h'' >= -tol on a uniform angle grid.
  double min_support_curvature(int samples = kSampledResolution) const;
  std::string describe() const;

  struct Impl;

 private:
  explicit ConvexDomain(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// Least positive M with max boundary radius < 2^M.
int compute_M(const ConvexDomain& domain);

// Upper boundary of the rotated domain Rot(rotation) * Omega over x1 in [-1, 1],
// reflected so the graph is convex: gamma(t) = 2^M + 1 - u(t) where u is the
// upper boundary height.
class BoundaryArc {
 public:
  BoundaryArc(ConvexDomain domain, double rotation);

  double rotation() const { return rotation_; }
  int M() const { return M_; }
  const ConvexDomain& domain() const { return domain_; }

  double gamma(double t) const;
  double dL(double t) const;
  double dR(double t) const;
  // Height of the upper boundary in the rotated frame.
  double height(double t) const;
  // Boundary point in the original coordinates whose rotated abscissa is t.
  Vec2 point(double t) const;
  // Rotated coordinates of a point.
  Vec2 to_frame(Vec2 x) const { return rot_ * x; }
  Vec2 from_frame(Vec2 y) const { return rot_.transpose() * y; }

 private:
  void slopes(double t, double& left, double& right) const;

  ConvexDomain domain_;
  double rotation_;
  Mat2 rot_;
  int M_;
};

BoundaryArc boundary_arc(const ConvexDomain& domain, double rotation);

// Inscribed n-gon with vertices at angles 2*pi*i/n from the xi_2 axis, with each
// vertex mollified at scale 600/d, d the shorter adjacent edge.
ConvexDomain smooth_approximate(const ConvexDomain& domain, int n);

// Built-in domains: "disk", "superellipse", "hexagon", "square".
ConvexDomain builtin_domain(const std::string& name);

}  // namespace qrad
