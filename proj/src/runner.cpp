#include "qrad/runner.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qrad/capdecomp.hpp"
#include "qrad/errors.hpp"
#include "qrad/experiments.hpp"
#include "qrad/family.hpp"
#include "qrad/lwp.hpp"

namespace qrad {

namespace {

using nlohmann::json;

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  for (int p = 15; p <= 17; ++p) {
    std::snprintf(buf, sizeof buf, "%.*g", p, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

class Csv {
 public:
  explicit Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  Csv& row() {
    rows_.emplace_back();
    return *this;
  }
  Csv& operator<<(double v) {
    rows_.back().push_back(num(v));
    return *this;
  }
  Csv& operator<<(int v) {
    rows_.back().push_back(std::to_string(v));
    return *this;
  }
  Csv& operator<<(long long v) {
    rows_.back().push_back(std::to_string(v));
    return *this;
  }
  Csv& operator<<(const std::string& v) {
    rows_.back().push_back(v);
    return *this;
  }
  std::string text() const {
    std::string s;
    for (std::size_t k = 0; k < columns_.size(); ++k) s += (k ? "," : "") + columns_[k];
    s += "\n";
    for (const auto& r : rows_) {
      for (std::size_t k = 0; k < r.size(); ++k) s += (k ? "," : "") + r[k];
      s += "\n";
    }
    return s;
  }

 private:
  std::vector<std::string> columns_;
  std::vector<std::vector<std::string>> rows_;
};

struct Outcome {
  Csv csv{{}};
  json summary = json::object();
  json thresholds = json::object();
  bool pass = true;
};

json fit_json(const LinearFit& f) {
  return {{"intercept", f.intercept}, {"slope", f.slope}, {"max_relative_residual", f.max_relative_residual()}};
}

std::vector<int> int_list(const std::vector<double>& v) {
  std::vector<int> out;
  for (double x : v) out.push_back(static_cast<int>(std::lround(x)));
  return out;
}

Outcome run_decompose(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"delta", "index", "point"});
  const BoundaryArc arc = boundary_arc(builtin_domain(c.pair.domain), c.param("rotation", 0.0));
  const double tol = 1e-10;
  json rows = json::array();
  for (double d : c.deltas) {
    const CapDecomposition cd = decompose(arc, d);
    const CapInvariants inv = check_cap_invariants(arc, cd.points, d);
    for (std::size_t k = 0; k < cd.points.size(); ++k) o.csv.row() << d << static_cast<int>(k) << cd.points[k];
    json intervals = json::array();
    for (const auto& I : cd.refined) intervals.push_back({I.lo, I.hi});
    rows.push_back({{"delta", d}, {"Q", cd.Q}, {"Qprime", cd.Qprime}, {"admissible", cd.admissible},
                    {"points", cd.points}, {"intervals", intervals}, {"left_excess", inv.left_excess},
                    {"right_deficit", inv.right_deficit}});
    o.pass = o.pass && inv.left_excess <= tol && inv.right_deficit <= tol;
  }
  o.summary["decompositions"] = rows;
  o.thresholds = {{"invariant_tolerance", tol}};
  return o;
}

Outcome run_tile(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"delta", "max_overlap", "uncovered", "samples", "N_delta", "Nprime_delta"});
  const auto rows = coverage_sweep(make_pair(c.pair), c.deltas, static_cast<int>(c.param("samples", 256)));
  for (const auto& r : rows) {
    o.csv.row() << r.delta << r.max_overlap << static_cast<long long>(r.uncovered) << static_cast<long long>(r.samples)
                << r.N_delta << r.Nprime_delta;
    o.pass = o.pass && r.uncovered == 0 && r.max_overlap <= rows.front().max_overlap;
  }
  o.summary["max_overlap"] = rows.front().max_overlap;
  o.thresholds = {{"uncovered", 0}, {"max_overlap_constant", true}};
  return o;
}

Outcome run_overlap(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"delta", "sum_max", "sum_family", "ball_max"});
  const OverlapSweep s = overlap_sweep(make_pair(c.pair), c.deltas, c.param("ball_exponent", 8.0));
  std::vector<double> balls;
  for (const auto& r : s.rows) {
    o.csv.row() << r.delta << r.sum_max << r.sum_family << r.ball_max;
    balls.push_back(r.ball_max);
  }
  o.summary["sum_fit"] = fit_json(s.sum_fit);
  o.summary["ball_spread"] = spread(balls);
  o.thresholds = {{"sum_fit_slope_min", 0.0}, {"sum_fit_residual_max", 0.2}, {"ball_spread_max", 2.0}};
  o.pass = c.deltas.size() >= 2 && s.sum_fit.slope > 0.0 && s.sum_fit.max_relative_residual() < 0.2 &&
           spread(balls) <= 2.0;
  return o;
}

Outcome run_active_time(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"delta", "tiles", "max_ratio", "mean_ratio"});
  const auto rows =
      active_time_sweep(make_pair(c.pair), c.deltas, static_cast<int>(c.param("tiles", 100)), c.seed);
  std::vector<double> m;
  for (const auto& r : rows) {
    o.csv.row() << r.delta << r.tiles << r.max_ratio << r.mean_ratio;
    m.push_back(r.max_ratio);
  }
  o.summary["spread"] = spread(m);
  o.thresholds = {{"spread_max", 2.0}};
  o.pass = spread(m) <= 2.0;
  return o;
}

Outcome run_kernel_l1(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"k", "value"});
  const CompatiblePair pair = make_pair(c.pair);
  const int k_min = static_cast<int>(c.param("k_min", -3));
  const int k_max = static_cast<int>(c.param("k_max", std::floor(std::log2(c.grid.L)) - 1));
  const auto idx = c.param_list("indices", {});
  if (!idx.empty()) {
    if (idx.size() != 4) fail(ErrorKind::Configuration, "invalid configuration:\n  params.indices: expected i,j,m,n");
    const auto sectors = build_sectors(pair);
    const Tiling T(sectors, c.deltas.front(), 0, 0);
    const PartitionOfUnity pou(T);
    const auto ii = int_list(idx);
    const TileIndex t{ii[0], ii[1], ii[2], ii[3]};
    if (t.i < 0 || t.i >= T.sectors().size() || t.j < 0 || t.j >= T.caps(t.i).Qprime)
      fail(ErrorKind::Configuration, "invalid configuration:\n  params.indices: no such tile");
    const FrequencyGeometry geom = frequency_geometry(pair, c.grid, true);
    const Kernel K = kernel_build(pou, t, geom);
    for (int k = k_min; k <= k_max; ++k) o.csv.row() << k << kernel_annulus_l1(K.values, k);
    o.summary["l1"] = K.l1;
    o.summary["tail_fraction"] = K.tail_fraction;
    return o;
  }
  const int l = static_cast<int>(c.param("l", 5));
  const AnnulusKernelTable t = annulus_kernel_table(pair, l, c.grid, k_min, k_max);
  for (std::size_t q = 0; q < t.ks.size(); ++q) o.csv.row() << t.ks[q] << t.values[q];
  const double inner = t.min_inner_ratio(2), outer = t.min_outer_ratio(2);
  o.summary["l"] = l;
  o.summary["l1"] = t.l1;
  o.summary["tail_fraction"] = t.tail_fraction;
  o.summary["min_inner_ratio"] = std::isfinite(inner) ? json(inner) : json(nullptr);
  o.summary["min_outer_ratio"] = std::isfinite(outer) ? json(outer) : json(nullptr);
  o.thresholds = {{"decay_ratio_min", 1.5}, {"skip", 2}};
  o.pass = std::isfinite(inner) && std::isfinite(outer) && inner >= 1.5 && outer >= 1.5;
  return o;
}

Outcome run_sqfn(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"delta", "id", "ratio", "t_samples"});
  FamilySpec fam = c.family;
  fam.seed = c.seed;
  const ScalingReport rep = delta_scaling_experiment(make_pair(c.pair), c.deltas, fam, c.grid, true);
  for (const auto& r : rep.rows) o.csv.row() << r.delta << r.id << r.ratio << r.t_samples;
  o.summary["max_ratio"] = rep.max_ratio;
  o.summary["argmax"] = rep.argmax;
  o.summary["fit"] = fit_json(rep.fit);
  o.summary["refinement_change"] = rep.refinement_change;
  const double worst = rep.refinement_change.empty()
                           ? 0.0
                           : *std::max_element(rep.refinement_change.begin(), rep.refinement_change.end());
  o.thresholds = {{"slope_min", 0.45}, {"refinement_change_max", 0.005}};
  o.pass = c.deltas.size() >= 2 && rep.fit.slope >= 0.45 && worst < 0.005;
  return o;
}

// Ratio spread per (lambda, member) and the pass rule: spread < 1.5 for
// lambda > -1/2, growth >= 2 of the radial member otherwise.
bool glambda_verdict(const std::vector<GlambdaRow>& rows, json& per) {
  std::map<std::pair<double, std::string>, std::vector<double>> groups;
  for (const auto& r : rows) groups[{r.lambda, r.id}].push_back(r.ratio);
  bool pass = true;
  per = json::array();
  for (const auto& [key, v] : groups) {
    const double s = spread(v);
    const double growth = v.back() / v.front();
    per.push_back({{"lambda", key.first}, {"id", key.second}, {"spread", s}, {"growth", growth}});
    if (key.first > -0.5) pass = pass && s < 1.5;
    else if (key.second == "radial") pass = pass && growth >= 2.0;
  }
  return pass;
}

Outcome run_glambda(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"N", "L", "lambda", "id", "ratio", "t_samples"});
  std::vector<GridSpec> grids;
  for (int N : int_list(c.param_list("Ns", {256, 512, 1024}))) grids.push_back({N, 0.5 * N * c.grid.dx(), {}});
  const auto rows = glambda_refinement_probe(make_pair(c.pair), c.param_list("lambdas", {-0.25, 0.0, 0.5, -0.6}),
                                             grids, c.param("step_scale", 1.0));
  for (const auto& r : rows) o.csv.row() << r.N << r.L << r.lambda << r.id << r.ratio << r.t_samples;
  json per;
  o.pass = glambda_verdict(rows, per);
  o.summary["groups"] = per;
  o.thresholds = {{"spread_max_inside", 1.5}, {"growth_min_outside", 2.0}};
  return o;
}

Outcome run_maximal(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"N", "id", "ratio"});
  const CompatiblePair pair = make_pair(c.pair);
  const auto Ns = int_list(c.param_list("Ns", {8, 16, 32, 64, 128}));
  const MaximalReport rep = maximal_growth(Ns, pair.group(), int_list(c.param_list("scales", {0})),
                                           static_cast<int>(c.param("stride", 4)));
  for (std::size_t m = 0; m < rep.ids.size(); ++m)
    for (std::size_t k = 0; k < Ns.size(); ++k) o.csv.row() << Ns[k] << rep.ids[m] << rep.ratios[m][k];
  o.summary["max_ratio"] = rep.max_ratio;
  o.summary["power_fit"] = fit_json(rep.power_fit);
  o.summary["polylog_fit"] = fit_json(rep.polylog_fit);
  o.thresholds = {{"power_exponent_max", 0.2}};
  o.pass = Ns.size() >= 2 && rep.power_fit.slope <= 0.2;
  return o;
}

void delta_probe_outcome(const DeltaProbe& p, Outcome& o) {
  o.csv = Csv({"delta", "id", "ratio", "tiles", "evaluations"});
  for (const auto& r : p.rows) o.csv.row() << r.delta << r.id << r.ratio << r.tiles << r.evaluations;
  o.summary["max_ratio"] = p.max_ratio;
  o.summary["fit"] = fit_json(p.fit);
  o.summary["exponent"] = p.exponent();
}

Outcome run_kernel_maximal(const ExperimentConfig& c) {
  Outcome o;
  const DeltaProbe p = kernel_maximal_probe(make_pair(c.pair), c.deltas, c.grid, c.seed);
  delta_probe_outcome(p, o);
  o.thresholds = {{"exponent_max", 0.1}};
  o.pass = c.deltas.size() >= 2 && p.exponent() <= 0.1;
  return o;
}

Outcome run_lwp(const ExperimentConfig& c) {
  Outcome o;
  const CompatiblePair pair = make_pair(c.pair);
  const DeltaProbe p = tile_projection_probe(pair, c.deltas, c.grid, c.seed);
  delta_probe_outcome(p, o);
  const auto dyadic = dyadic_projection_probe(pair, int_list(c.param_list("Ns", {256, 512, 1024})), c.grid.dx());
  std::map<std::string, std::vector<double>> by_id;
  json rows = json::array();
  for (const auto& r : dyadic) {
    by_id[r.id].push_back(r.ratio);
    rows.push_back({{"N", r.N}, {"L", r.L}, {"id", r.id}, {"ratio", r.ratio}});
  }
  double worst = 1.0;
  for (const auto& [id, v] : by_id) worst = std::max(worst, spread(v));
  o.summary["dyadic"] = rows;
  o.summary["dyadic_spread"] = worst;
  o.thresholds = {{"exponent_max", 0.1}, {"dyadic_spread_max", 1.25}};
  o.pass = c.deltas.size() >= 2 && p.exponent() <= 0.1 && worst <= 1.25;
  return o;
}

Outcome run_mult_norm(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"symbol", "t", "value"});
  const auto ts = c.param_list("t", {0.5, 1.0, 2.0, 4.0});
  const MultiplierProbe p = multiplier_probe(c.param("alpha", 0.6), c.param("lambda", 0.25), ts);
  auto emit = [&](const std::string& name, const SobolevNormResult& r) {
    for (std::size_t k = 0; k < r.per_t.size(); ++k) o.csv.row() << name << ts[k] << r.per_t[k];
    o.summary[name] = {{"value", std::isfinite(r.value) ? json(r.value) : json(nullptr)},
                       {"divergent", r.divergent},
                       {"samples", r.samples}};
  };
  emit("one", p.one);
  emit("riesz", p.riesz);
  emit("bump", p.bump);
  o.summary["one_spread"] = p.one_spread;
  o.thresholds = {{"one_spread_max", 1e-10}, {"riesz_divergent", true}};
  o.pass = p.one_spread <= 1e-10 && p.riesz.divergent;
  return o;
}

// ||R_t^lambda f||_p / ||f||_p for the radial bump, p = 2 and 4, over t.
Outcome run_br_mean(const ExperimentConfig& c) {
  Outcome o;
  o.csv = Csv({"t", "lambda", "ratio_2", "ratio_4"});
  const CompatiblePair pair = make_pair(c.pair);
  const FrequencyGeometry geom = frequency_geometry(pair, c.grid, false);
  const TestFunction f = radial_bump(geom, c.param("halfwidth", 0.25));
  const double lambda = c.param("lambda", 0.5);
  const double n2 = f.f.norm_p(2.0), n4 = f.f.norm_p(4.0);
  double worst = 0.0;
  for (double t : c.param_list("t", {0.5, 1.0, 1.5, 2.0})) {
    const GridField R = bochner_riesz_mean(geom, f.f, t, lambda);
    const double r2 = R.norm_p(2.0) / n2;
    o.csv.row() << t << lambda << r2 << R.norm_p(4.0) / n4;
    worst = std::max(worst, r2);
  }
  // The symbol is bounded by 1, so the L2 ratio cannot exceed 1.
  o.summary["max_ratio_2"] = worst;
  o.thresholds = {{"ratio_2_max", 1.0 + 1e-10}};
  o.pass = worst <= 1.0 + 1e-10;
  return o;
}

const std::map<std::string, std::function<Outcome(const ExperimentConfig&)>>& table() {
  static const std::map<std::string, std::function<Outcome(const ExperimentConfig&)>> t{
      {"decompose", run_decompose},
      {"tile", run_tile},
      {"overlap-count", run_overlap},
      {"active-time", run_active_time},
      {"kernel-l1", run_kernel_l1},
      {"sqfn-scaling", run_sqfn},
      {"glambda-probe", run_glambda},
      {"maximal-growth", run_maximal},
      {"kernel-maximal-probe", run_kernel_maximal},
      {"lwp-probe", run_lwp},
      {"mult-norm", run_mult_norm},
      {"br-mean", run_br_mean},
  };
  return t;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) fail(ErrorKind::Configuration, "cannot write " + path.string());
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [k, f] : table()) v.push_back(k);
    return v;
  }();
  return names;
}

RunResult run(const ExperimentConfig& config, const std::string& subcommand) {
  const auto it = table().find(subcommand);
  if (it == table().end()) throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  validate(config);
  Outcome o = it->second(config);
  const std::string hash = config_hash(config);
  const std::filesystem::path dir(config.out);
  std::filesystem::create_directories(dir);
  RunResult res;
  res.pass = o.pass;
  const std::string csv_name = subcommand + ".csv", json_name = subcommand + ".json";
  write_file(dir / csv_name, "# config_hash " + hash + "\n" + o.csv.text());
  json summary;
  summary["subcommand"] = subcommand;
  summary["config_hash"] = hash;
  summary["pass"] = o.pass;
  summary["thresholds"] = o.thresholds;
  summary["results"] = o.summary;
  res.summary = summary.dump(2);
  write_file(dir / json_name, res.summary + "\n");
  json manifest;
  manifest["qrad_version"] = QRAD_VERSION;
  manifest["fftw_version"] = std::string(fftw_version);
  manifest["compiler"] = __VERSION__;
  manifest["cxx_standard"] = __cplusplus;
  manifest["subcommand"] = subcommand;
  manifest["config_hash"] = hash;
  manifest["config"] = json::parse(to_json(config));
  manifest["files"] = {csv_name, json_name};
  write_file(dir / "manifest.json", manifest.dump(2) + "\n");
  res.files = {csv_name, json_name, "manifest.json"};
  return res;
}

int exit_status(const RunResult& result) { return result.pass ? 0 : 2; }

int exit_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Numeric:
    case ErrorKind::Resolution: return 4;
    default: return 3;
  }
}

}  // namespace qrad
