#include "qrad/lingroup.hpp"

#include <cmath>
#include <sstream>

#include "qrad/errors.hpp"

namespace qrad {

namespace {

double inf_norm(const Mat2& m) {
  return std::fmax(std::fabs(m.a) + std::fabs(m.b), std::fabs(m.c) + std::fabs(m.d));
}

}  // namespace

DilationGroup::DilationGroup(const Mat2& A) : A_(A) {
  const double tr = A.trace();
  const double det = A.det();
  if (!(tr > 0.0) || !(det > 0.0)) {
    std::ostringstream os;
    os << "dilation matrix must have eigenvalues with positive real parts (trace " << tr << ", det " << det
       << ")";
    fail(ErrorKind::Validation, os.str());
  }
  const double half = 0.5 * tr;
  const double disc = half * half - det;
  const double scale = A.max_abs();

  if (A.b == 0.0 && A.c == 0.0 && A.a == A.d) {
    form_ = Form::Scalar;
    l1_ = l2_ = A.a;
    eig_re_ = {A.a, A.a};
  } else if (disc > 0.0) {
    const double sq = std::sqrt(disc);
    l1_ = half + sq;
    l2_ = det / l1_;
    eig_re_ = {l1_, l2_};
    form_ = (l1_ - l2_ >= 1e-4 * scale) ? Form::DistinctReal : Form::General;
  } else if (disc == 0.0) {
    l1_ = l2_ = half;
    eig_re_ = {half, half};
    form_ = Form::Repeated;
  } else {
    eig_re_ = {half, half};
    form_ = Form::General;
  }
}

Mat2 DilationGroup::exp(double s) const {
  const Mat2 I = Mat2::identity();
  switch (form_) {
    case Form::Scalar:
      return I * std::exp(s * l1_);
    case Form::DistinctReal: {
      const double e1 = std::exp(s * l1_);
      const double e2 = std::exp(s * l2_);
      return ((A_ - I * l2_) * e1 - (A_ - I * l1_) * e2) * (1.0 / (l1_ - l2_));
    }
    case Form::Repeated:
      return (I + (A_ - I * l1_) * s) * std::exp(s * l1_);
    case Form::General:
      break;
  }
  return expm_pade6(A_ * s);
}

Mat2 DilationGroup::power(double t) const {
  if (!(t > 0.0)) {
    std::ostringstream os;
    os << "t^A requires t > 0, got " << t;
    fail(ErrorKind::Domain, os.str());
  }
  if (t == 1.0) return Mat2::identity();
  return exp(std::log(t));
}

Vec2 DilationGroup::orbit_tangent(Vec2 xi, double t) const {
  if (xi.x == 0.0 && xi.y == 0.0) fail(ErrorKind::Domain, "orbit tangent undefined at the origin");
  return (A_ * (power(t) * xi)) / t;
}

Mat2 matrix_power(const DilationGroup& group, double t) { return group.power(t); }

Vec2 orbit_tangent(const DilationGroup& group, Vec2 xi, double t) { return group.orbit_tangent(xi, t); }

Mat2 expm_pade6(const Mat2& M) {
  static constexpr double c[7] = {1.0,          0.5,           5.0 / 44.0,     1.0 / 66.0,
                                  1.0 / 792.0,  1.0 / 15840.0, 1.0 / 665280.0};
  const double nrm = inf_norm(M);
  int squarings = 0;
  if (nrm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
  const Mat2 X = M * std::ldexp(1.0, -squarings);

  const Mat2 I = Mat2::identity();
  Mat2 P = I;
  Mat2 num = I;
  Mat2 den = I;
  for (int k = 1; k <= 6; ++k) {
    P = P * X;
    num = num + P * c[k];
    den = den + P * ((k % 2 == 0) ? c[k] : -c[k]);
  }
  Mat2 R = den.inverse() * num;
  for (int k = 0; k < squarings; ++k) R = R * R;
  return R;
}

}  // namespace qrad
