#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include <CLI11.hpp>

#include "qrad/config.hpp"
#include "qrad/errors.hpp"
#include "qrad/runner.hpp"

namespace {

constexpr int kUsage = 64;

void apply_threads() {
  const char* env = std::getenv("QRAD_THREADS");
  if (!env) return;
  const int n = std::atoi(env);
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

std::vector<double> split_numbers(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t next = text.find(',', pos);
    const std::string item = text.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    std::size_t used = 0;
    const double v = std::stod(item, &used);
    if (used != item.size()) throw std::invalid_argument(item);
    out.push_back(v);
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qrlab: quasiradial Bochner-Riesz experiments"};
  std::string subcommand, config_path, out, domain, matrix, grid, family;
  std::vector<double> deltas;
  std::vector<std::string> params;
  std::uint64_t seed = 0;
  bool print_config = false;
  std::string names;
  for (const auto& s : qrad::subcommands()) names += (names.empty() ? "" : ", ") + s;
  app.add_option("subcommand", subcommand, "one of: " + names)->required();
  app.add_option("-c,--config", config_path, "JSON configuration file");
  app.add_option("--seed", seed, "random seed (overrides the configuration)");
  app.add_option("--out", out, "output directory (overrides the configuration)");
  app.add_option("--domain", domain, "disk, superellipse, hexagon or square");
  app.add_option("--matrix", matrix, "dilation matrix a,b,c,d in row-major order");
  app.add_option("--delta", deltas, "delta values")->delimiter(',');
  app.add_option("--grid", grid, "grid N,L");
  app.add_option("--family", family, "std, gaussian, random or focusing");
  app.add_option("-p,--param", params, "subcommand parameter key=v1,v2,...");
  app.add_flag("--print-config", print_config, "print the effective configuration and exit");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }
  bool known = false;
  for (const auto& s : qrad::subcommands()) known = known || s == subcommand;
  if (!known) {
    std::cerr << "unknown subcommand '" << subcommand << "'; expected one of: " << names << "\n";
    return kUsage;
  }
  apply_threads();
  try {
    qrad::ExperimentConfig cfg = config_path.empty() ? qrad::ExperimentConfig{} : qrad::load_config(config_path);
    if (app.count("--seed")) cfg.seed = seed;
    if (!out.empty()) cfg.out = out;
    if (!domain.empty()) cfg.pair.domain = domain;
    try {
      if (!matrix.empty()) {
        const auto a = split_numbers(matrix);
        if (a.size() != 4) throw std::invalid_argument(matrix);
        cfg.pair.A = qrad::Mat2(a[0], a[1], a[2], a[3]);
      }
      if (!grid.empty()) {
        const auto g = split_numbers(grid);
        if (g.size() != 2) throw std::invalid_argument(grid);
        cfg.grid.N = static_cast<int>(g[0]);
        cfg.grid.L = g[1];
      }
      for (const auto& p : params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos || eq == 0) throw std::invalid_argument(p);
        cfg.params[p.substr(0, eq)] = split_numbers(p.substr(eq + 1));
      }
    } catch (const std::invalid_argument& e) {
      std::cerr << "malformed numeric option: " << e.what() << "\n";
      return kUsage;
    }
    if (!deltas.empty()) cfg.deltas = deltas;
    if (!family.empty()) cfg.family.name = family;
    cfg.family.seed = cfg.seed;
    qrad::validate(cfg);
    if (print_config) {
      std::cout << qrad::to_json(cfg) << "\n";
      return 0;
    }
    const qrad::RunResult res = qrad::run(cfg, subcommand);
    std::cout << res.summary << "\n";
    return qrad::exit_status(res);
  } catch (const qrad::Error& e) {
    std::cerr << qrad::to_string(e.kind()) << " error: " << e.what() << "\n";
    return qrad::exit_status(e.kind());
  }
}
