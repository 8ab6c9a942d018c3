#pragma once

#include <utility>

#include "qrad/types.hpp"

namespace qrad {

// One-parameter group t^A = exp(log(t) A) generated by a real 2x2 matrix whose
// eigenvalues have positive real parts.
class DilationGroup {
 public:
  enum class Form { Scalar, DistinctReal, Repeated, General };

  explicit DilationGroup(const Mat2& A);

  const Mat2& A() const { return A_; }
  std::pair<double, double> eig_re() const { return eig_re_; }
  Form form() const { return form_; }
  bool is_scalar() const { return form_ == Form::Scalar; }
  double trace() const { return A_.trace(); }

  // exp(s A) for real s.
  Mat2 exp(double s) const;
  // t^A for t > 0.
  Mat2 power(double t) const;
  // t^{-1} A t^A xi.
  Vec2 orbit_tangent(Vec2 xi, double t = 1.0) const;

 private:
  Mat2 A_;
  std::pair<double, double> eig_re_;
  Form form_;
  double l1_ = 0.0, l2_ = 0.0;
};

Mat2 matrix_power(const DilationGroup& group, double t);
Vec2 orbit_tangent(const DilationGroup& group, Vec2 xi, double t = 1.0);

// Scaling-and-squaring with a (6,6) Pade approximant.
Mat2 expm_pade6(const Mat2& M);

}  // namespace qrad
