#pragma once

// Command-line experiment runners. Each builds its inputs from the shared
// config, writes machine-readable outputs (CSV, PGM, JSON sidecars), prints a
// short human summary, and returns a process exit code.

#include <array>
#include <cstdint>
#include <optional>
#include <string>

namespace isolat {

struct ExperimentConfig {
  int dim = 2;
  double radius = 500.0;
  int kmax = 200;
  int trials = 50;
  std::uint64_t seed = 1;
  std::optional<double> theta;                             // repeated plane rotation
  std::optional<std::array<std::int64_t, 3>> pythagorean;  // repeated rational rotation
  std::int64_t vmax = 20;  // vector box bound; doubles as the translation search radius
  double eps = 0.05;
  int bins = 10;
  std::string in_path;
  std::string out_path;  // empty picks a per-command default name
};

int run_tau_curve(const ExperimentConfig& cfg);
int run_gamma_image(const ExperimentConfig& cfg);
int run_tau_single(const ExperimentConfig& cfg);
int run_rho_map(const ExperimentConfig& cfg);
int run_validate(const ExperimentConfig& cfg);
int run_translations(const ExperimentConfig& cfg);
int run_rotate_image(const ExperimentConfig& cfg);
int run_equidistribution(const ExperimentConfig& cfg);

}  // namespace isolat
