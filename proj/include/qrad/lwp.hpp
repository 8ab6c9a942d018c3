#pragma once

#include <vector>

#include "qrad/bumps.hpp"
#include "qrad/grid.hpp"

namespace qrad {

// Enlarged bumps phi_{i,j,m,n}: identically 1 on supp sigma_{i,j,m,n}, with
// support in a neighbourhood of width one tile on each side. Only tiles whose
// sigma is not identically zero are active.
class ProjectionFamily {
 public:
  explicit ProjectionFamily(const PartitionOfUnity& pou);

  const PartitionOfUnity& pou() const { return *pou_; }
  bool active(const TileIndex& t) const;
  double phi(const TileIndex& t, double rho, Vec2 proj) const;
  // Tiles with phi != 0 at the point, n in [n_min, n_max].
  void nonzero(double rho, Vec2 proj, int n_min, int n_max, std::vector<std::pair<TileIndex, double>>& out) const;

 private:
  const PartitionOfUnity* pou_;
  double log_r_;
  std::vector<std::pair<int, int>> active_;  // cap range per sector
};

// (sum over tiles |P~ f|^2)^{1/2}, P~ the multiplier phi_{i,j,m,n}.
GridField tile_projection_square_function(const ProjectionFamily& fam, const FrequencyGeometry& geom,
                                          const GridField& f, int n_min = 0, int n_max = 0, int* tiles_used = nullptr);

// phi(s) = 1 on [1/2, 2], supported in (1/4, 4), smooth in log s.
double dyadic_cutoff(double s);

// (sum_n |P_n f|^2)^{1/2} with P_n the multiplier phi(2^{-n} rho).
GridField dyadic_projection_square_function(const FrequencyGeometry& geom, const GridField& f);

}  // namespace qrad
