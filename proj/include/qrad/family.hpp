#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrad/bumps.hpp"
#include "qrad/fit.hpp"
#include "qrad/grid.hpp"

namespace qrad {

struct TestFunction {
  std::string id;
  GridField f;  // physical samples
};

// f^ = random +-1 signs times Phi((rho - 1)/delta).
TestFunction random_phase_annulus(const FrequencyGeometry& geom, double delta, std::uint64_t seed);
// f^ = Phi((rho - 1)/delta): every direction focuses at the origin.
TestFunction focusing_annulus(const FrequencyGeometry& geom, double delta);
// f^ = sum over tiles (i, j, 0, 0) of sigma e^{-i<x_tile, xi>}, each wave packet
// shifted along its normal by a random multiple of 1/(4 delta).
TestFunction kakeya_sum(const FrequencyGeometry& geom, const PartitionOfUnity& pou, std::uint64_t seed);
// f^ = Phi((rho - 1)/delta) Psi_s(angle), s the sector of the top boundary
// point, with random +-1 signs (seed != 0) or constant phase (seed == 0).
TestFunction sector_patch(const FrequencyGeometry& geom, const SectorSystem& sectors, double delta, std::uint64_t seed);
// Two random patches, the focusing patch, and the modulated Gaussian at the
// top boundary point: the members used by the tile-localized probes.
std::vector<TestFunction> patch_family(const CompatiblePair& pair, const FrequencyGeometry& geom,
                                       const SectorSystem& sectors, double delta, std::uint64_t seed);
// exp(-|x|^2 / (2 w^2)) e^{i<xi0, x>}.
TestFunction modulated_gaussian(const GridSpec& spec, double width, Vec2 xi0);
// f^ = plateau_bump((rho - 1)/halfwidth), zero phase.
TestFunction radial_bump(const FrequencyGeometry& geom, double halfwidth);

struct FamilySpec {
  std::string name = "std";  // std | gaussian | random | focusing
  int random_members = 2;
  std::uint64_t seed = 1;
};

// Members of the named family at scale delta.
std::vector<TestFunction> build_family(const FamilySpec& spec, const CompatiblePair& pair, const FrequencyGeometry& geom,
                                       double delta, const PartitionOfUnity* pou);

struct ScalingRow {
  double delta = 0.0;
  std::string id;
  double ratio = 0.0;  // ||S_delta f||_4 / ||f||_4
  int t_samples = 0;
};

struct ScalingReport {
  std::vector<double> deltas;
  std::vector<ScalingRow> rows;
  std::vector<double> max_ratio;  // per delta
  std::vector<std::string> argmax;  // per delta
  LinearFit fit;  // log max_ratio against log delta
  std::vector<double> refinement_change;  // relative change of the max member on log-step halving
};

ScalingReport delta_scaling_experiment(const CompatiblePair& pair, const std::vector<double>& deltas,
                                       const FamilySpec& family, const GridSpec& grid, bool refinement_check = true);

// t-grid [rho_min, 2 rho_max] over the spectrum of fhat with log step
// step_scale * dxi / |xi|_max, so the quadrature follows the frequency sampling.
LogGrid glambda_t_grid(const FrequencyGeometry& geom, const GridField& fhat, double step_scale = 1.0);

struct GlambdaRow {
  int N = 0;
  double L = 0.0;
  double lambda = 0.0;
  std::string id;
  double ratio = 0.0;  // ||G^lambda f||_4 / ||f||_4
  int t_samples = 0;
};

// Ratios over grids (N, L) with fixed cell size; members radial_bump and a
// modulated Gaussian near rho = 1.
std::vector<GlambdaRow> glambda_refinement_probe(const CompatiblePair& pair, const std::vector<double>& lambdas,
                                                 const std::vector<GridSpec>& grids, double step_scale = 1.0,
                                                 bool gaussian_member = true);

}  // namespace qrad
