#pragma once

#include <string>
#include <vector>

#include "qrad/bumps.hpp"
#include "qrad/fit.hpp"
#include "qrad/geometry.hpp"
#include "qrad/grid.hpp"
#include "qrad/lingroup.hpp"

namespace qrad {

// Rectangles of dimensions lambda x N lambda at the N directions pi i / N,
// dilated by (2^k)^A for k in `scales`.
struct RectangleFamily {
  double lambda = 4.0;
  int N = 8;
  std::vector<int> scales{0};
  DilationGroup group{Mat2::identity()};
};

// (2^k)^A R for the centred rectangle R at direction index i, counterclockwise.
Polygon family_shape(const RectangleFamily& fam, int direction, int scale);

// Exact membership of a point in family_shape(fam, direction, scale), with an
// absolute boundary tolerance.
bool family_shape_contains(const RectangleFamily& fam, int direction, int scale, Vec2 p, double tol);

// area(cell_c cap S) for cells of side dx centred at c dx, over the bounding box of S.
struct CellWeights {
  int c1_min = 0, c2_min = 0, width = 0, height = 0;
  std::vector<double> w;  // row-major over (c2, c1)
  double at(int c1, int c2) const { return w[static_cast<std::size_t>(c2 - c2_min) * width + (c1 - c1_min)]; }
};
CellWeights cell_weights(const Polygon& shape, double dx);

// Maximal function sampled every `stride` cells in both axes.
struct MaximalField {
  GridSpec spec;
  int stride = 1;
  std::vector<double> values;  // row-major over the sub-lattice
  int size() const { return spec.N / stride; }
  double at(int a, int b) const { return values[static_cast<std::size_t>(a) * size() + b]; }
  double l2() const;
  double measure_above(double level) const;
};

struct MaximalOptions {
  int eval_stride = 1;
};

// sup over rectangles S + y (y a grid offset, x in S + y) of the average of |f|
// on the periodic grid. Throws a configuration error when dx > lambda/4.
MaximalField nikodym_maximal(const GridField& f, const RectangleFamily& fam, const MaximalOptions& opt = {});
MaximalField nikodym_maximal_scale(const GridField& f, const RectangleFamily& fam, int k,
                                   const MaximalOptions& opt = {});

// Sum of the family's rectangles (scale 0) through the origin, rasterized by
// exact cell overlaps.
GridField kakeya_bush(const GridSpec& spec, const RectangleFamily& fam);
// Indicator of the disk of radius r, rasterized by cell overlaps of a 64-gon.
GridField ball_indicator(const GridSpec& spec, double r);

struct Weak11Row {
  double alpha = 0.0;
  double measure = 0.0;  // |{Mf > 4 alpha}|
  double bound = 0.0;  // N ||f||_1 / alpha
  double ratio = 0.0;
};
std::vector<Weak11Row> weak11_probe(const GridField& f, const RectangleFamily& fam, const std::vector<double>& alphas,
                                    const MaximalOptions& opt = {});

struct MaximalReport {
  std::vector<int> Ns;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> ratios;  // [member][N] ||Mf||_2 / ||f||_2
  std::vector<double> max_ratio;  // per N
  LinearFit power_fit;  // log ratio against log N
  LinearFit polylog_fit;  // log ratio against log log(3N)
};

// Growth of ||M f||_2 / ||f||_2 over N on the focusing family (bush and
// lambda-ball), lambda = 4 cells, grid 4 N lambda rounded up to a power of two.
MaximalReport maximal_growth(const std::vector<int>& Ns, const DilationGroup& group, const std::vector<int>& scales,
                             int eval_stride);

struct KernelMaximalOptions {
  double t_step_factor = 0.125;  // log-t step in units of delta
  int n_min = 0, n_max = 0;
};

struct KernelMaximalResult {
  GridField values;  // M-bar f, real and nonnegative
  int tiles = 0;
  int evaluations = 0;
};

// sup over tiles and t in [2^{n-10}, 2^{n+10}] of |psi_t * K_{i,j,m,n} * f|,
// as the multiplier Phi((rho/t - 1)/delta) sigma_{i,j,m,n} on the spectrum of f.
KernelMaximalResult kernel_maximal(const PartitionOfUnity& pou, const FrequencyGeometry& geom, const GridField& f,
                                   const KernelMaximalOptions& opt = {});

}  // namespace qrad
