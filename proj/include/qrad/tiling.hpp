#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "qrad/capdecomp.hpp"
#include "qrad/geometry.hpp"
#include "qrad/quasinorm.hpp"

namespace qrad {

// Orbit cone over a boundary window |x_i| <= w in the frame R_i, where R_i
// rotates the window centre direction to the positive x2 axis.
struct Sector {
  int index = 0;
  double center = 0.0;  // polar angle of the window centre direction
  Mat2 rot;  // R_i
  double start = 0.0, end = 0.0;  // boundary polar angles at x_i = +w and x_i = -w
  double ext_start = 0.0, ext_end = 0.0;  // polar angles at x_i = +1 and x_i = -1
  double plateau_start = 0.0, plateau_end = 0.0;  // polar angles at x_i = +1/4 and -1/4
  Vec2 seed, seed_prime;  // boundary points at x_i = -1 and x_i = +1
};

class SectorSystem {
 public:
  static constexpr double kMaxHalfWidth = 0.45;
  static constexpr double kPlateau = 0.25;

  explicit SectorSystem(const CompatiblePair& pair);

  const CompatiblePair& pair() const { return pair_; }
  int size() const { return static_cast<int>(sectors_.size()); }
  const Sector& operator[](int i) const { return sectors_[i]; }
  const std::vector<Sector>& sectors() const { return sectors_; }
  double half_width() const { return w_; }
  BoundaryArc arc(int i) const;

  // Sector whose window contains the boundary polar angle.
  int sector_of(double boundary_angle) const;
  // Sectors whose extended window |x_i| <= 1 contains the boundary point.
  void extended_sectors(Vec2 boundary_point, std::vector<int>& out) const;
  // Smooth partition of unity over sectors as a function of the boundary
  // polar angle; nonzero for at most two sectors.
  double Psi(int i, double boundary_angle) const;
  // Rotated abscissa x_i of a boundary point.
  double x_coord(int i, Vec2 boundary_point) const { return (sectors_[i].rot * boundary_point).x; }

 private:
  CompatiblePair pair_;
  std::vector<Sector> sectors_;
  double w_ = kMaxHalfWidth;
};

std::shared_ptr<const SectorSystem> build_sectors(const CompatiblePair& pair);

struct TileIndex {
  int i = 0, j = 0, m = 0, n = 0;
  auto operator<=>(const TileIndex&) const = default;
};

// Tiles B_{i,j,m,n} = (4^n)^A r^{mA} B_{i,j,0,0}, r = (1+2 delta)/(1-2 delta),
// where B_{i,j,0,0} is the part of {1-2 delta <= rho <= 1+2 delta} whose
// boundary projection has rotated abscissa x_i in I_j and positive height.
class Tiling {
 public:
  Tiling(std::shared_ptr<const SectorSystem> sectors, double delta, int n_min, int n_max);

  const SectorSystem& sectors() const { return *sectors_; }
  std::shared_ptr<const SectorSystem> sector_ptr() const { return sectors_; }
  const CompatiblePair& pair() const { return sectors_->pair(); }
  double delta() const { return delta_; }
  double ratio() const { return r_; }
  int N_delta() const { return N_delta_; }
  int Nprime_delta() const { return Nprime_delta_; }
  int n_min() const { return n_min_; }
  int n_max() const { return n_max_; }
  const CapDecomposition& caps(int i) const { return caps_[i]; }

  // Literal predicate: undo the dilations, then test B_{i,j,0,0}.
  bool contains(const TileIndex& t, Vec2 xi) const;
  // Same predicate from precomputed rho(xi) and boundary projection.
  bool contains(const TileIndex& t, double rho, Vec2 proj) const;
  // All tiles containing the point, with m in [N_delta, N'_delta] and n in range.
  void tiles_at(double rho, Vec2 proj, std::vector<TileIndex>& out) const;
  // rho-range [lo, hi] of a tile.
  void rho_range(const TileIndex& t, double& lo, double& hi) const;
  // Convex hull of boundary samples of B_{i,j,m,n}.
  Polygon hull(const TileIndex& t, int samples_per_side = 16) const;
  // Boundary point of sector i at rotated abscissa x.
  Vec2 boundary_point(int i, double x) const;

 private:
  std::shared_ptr<const SectorSystem> sectors_;
  double delta_;
  double r_;
  int N_delta_, Nprime_delta_;
  int n_min_, n_max_;
  std::vector<CapDecomposition> caps_;
  std::vector<BoundaryArc> arcs_;
};

Tiling build_tiling(const CompatiblePair& pair, double delta, int n_min, int n_max);

// m-range for the sandwich R_i within the union over m within R_i'.
int tiling_N_delta(double delta);
int tiling_Nprime_delta(double delta);

struct SampleGrid {
  int N = 512;  // samples per axis
};

struct OverlapReport {
  double delta = 0.0;
  int max_overlap = 0;
  std::map<int, std::int64_t> histogram;
  int family_size = 0;
  double spacing = 0.0;
  std::vector<std::pair<double, double>> fit_data;
};

// Multiplicity of the tile family over a sample of {1/2 <= rho <= 2}: a square
// grid over the bounding box of rho <= 2, restricted to the annulus.
OverlapReport tile_multiplicity(const Tiling& tiling, int samples_per_axis);

struct SumOverlapOptions {
  double spacing_factor = 1.0 / 8.0;  // sample spacing h = factor * delta
  bool both_halves = false;  // include the lower half of the region near xi_1 = 0
  double window = 0.5;  // |xi_1| <= window in the region T_0
};

// Tiles meeting {rho = 1/t} inside T_1.
std::vector<TileIndex> level_tiles(const Tiling& tiling, double t, const SumOverlapOptions& opt);

// Maximal number of sum sets A + B (A in A_t, B in A_u) containing a sample point.
OverlapReport count_sum_overlaps(const Tiling& tiling, double u, double t, const SumOverlapOptions& opt = {});

// Maximal number of sets A + B_rho(0, 2/t), A in A_u, containing a sample point.
OverlapReport count_ball_sum_overlaps(const Tiling& tiling, double u, double t,
                                      const SumOverlapOptions& opt = {});

// Log-measure of {t : tile meets the annulus t(1-delta) <= rho <= t(1+delta)},
// by a log-t scan of step delta/16 over [t_lo, t_hi].
double active_time_measure(const Tiling& tiling, const TileIndex& tile, double t_lo, double t_hi);

}  // namespace qrad
