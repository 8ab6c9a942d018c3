#pragma once

#include <vector>

#include "qrad/domain.hpp"

namespace qrad {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  double length() const { return hi - lo; }
  bool contains(double x) const { return lo <= x && x <= hi; }
};

struct CapDecomposition {
  double delta = 0.0;
  std::vector<double> points;  // a_0 = -1 < ... < a_Q = 1
  std::vector<Interval> refined;  // I_j = [i_j, b_{j+1}]
  std::vector<int> cap_of;  // cap index l of each refined interval
  int Q = 0;
  int Qprime = 0;
  bool admissible = false;  // delta below the smallness constant 2^{-M-4}

  // Index j of the refined interval containing x (clamped to [-1, 1]).
  int locate(double x) const;
};

// Smallness constant for delta: 2^{-M-4}.
double admissible_delta(int M);

// a_l by the inductive rule: a_l = 1 once the product bound holds on the rest
// of the window, otherwise the infimum where (t - a)(gamma'_L(t) - gamma'_R(a))
// exceeds delta, found by bisection.
std::vector<double> cap_decomposition(const BoundaryArc& arc, double delta);

// Each cap of length l splits into lengths l/2, l/4, ..., l/2^K, l/2^K with
// K = max(0, ceil(log2(l / delta))).
std::vector<Interval> refine_intervals(const std::vector<double>& points, double delta,
                                       std::vector<int>* cap_of = nullptr);

CapDecomposition decompose(const BoundaryArc& arc, double delta);

// (t - a)(gamma'_L(t) - gamma'_R(a)).
double cap_product(const BoundaryArc& arc, double a, double t);

struct CapInvariants {
  double left_excess = 0.0;  // max over l of product(a_l, a_{l+1}) - delta; <= 0 when (left) holds
  double right_deficit = 0.0;  // max over l < Q-1 of delta - product(a_l, a_{l+1} + step); < 0 when (right) holds
};
// Both inductive invariants, the second probed at t = a_{l+1} + step.
CapInvariants check_cap_invariants(const BoundaryArc& arc, const std::vector<double>& points, double delta,
                                   double step = 1e-10);

}  // namespace qrad
