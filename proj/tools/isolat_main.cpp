#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "isolat/experiments.hpp"
#include "isolat/io.hpp"

namespace {

struct RawOptions {
  isolat::ExperimentConfig cfg;
  std::string theta_text;
  std::string triple_text;
};

void add_common(CLI::App* cmd, RawOptions& raw) {
  cmd->add_option("--dim", raw.cfg.dim, "ambient dimension")->capture_default_str();
  cmd->add_option("--radius", raw.cfg.radius, "trusted window radius")->capture_default_str();
  cmd->add_option("--kmax", raw.cfg.kmax, "number of chain steps")->capture_default_str();
  cmd->add_option("--trials", raw.cfg.trials, "independent sampled sequences")->capture_default_str();
  cmd->add_option("--seed", raw.cfg.seed, "master RNG seed")->capture_default_str();
  cmd->add_option("--theta", raw.theta_text, "repeat a fixed rotation angle, e.g. 0.7 or pi/4");
  cmd->add_option("--pythagorean", raw.triple_text, "repeat a rational rotation, e.g. 3,4,5");
  cmd->add_option("--vmax", raw.cfg.vmax, "vector box bound / translation search radius")
      ->capture_default_str();
  cmd->add_option("--eps", raw.cfg.eps, "near-translation tolerance")->capture_default_str();
  cmd->add_option("--bins", raw.cfg.bins, "boxes per axis for equidistribution")
      ->capture_default_str();
  cmd->add_option("--in", raw.cfg.in_path, "input raster (PGM/PPM)");
  cmd->add_option("--out", raw.cfg.out_path, "output path (per-command default otherwise)");
}

// Angle and triple strings need custom parsing; CLI11 sees them as text.
int resolve_text_options(RawOptions& raw) {
  if (!raw.theta_text.empty()) {
    const auto angle = isolat::parse_angle(raw.theta_text);
    if (!angle) {
      std::fprintf(stderr, "error: cannot parse angle '%s'\n", raw.theta_text.c_str());
      return 2;
    }
    raw.cfg.theta = *angle;
  }
  if (!raw.triple_text.empty()) {
    const auto triple = isolat::parse_triple(raw.triple_text);
    if (!triple) {
      std::fprintf(stderr, "error: cannot parse triple '%s'\n", raw.triple_text.c_str());
      return 2;
    }
    raw.cfg.pythagorean = *triple;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dynamics of discretized linear isometries on the integer lattice"};
  app.require_subcommand(1);

  RawOptions raw;
  using Runner = int (*)(const isolat::ExperimentConfig&);
  struct Command {
    const char* name;
    const char* description;
    Runner fn;
  };
  const Command commands[] = {
      {"tau-curve", "mean injectivity rate against step count, written as CSV",
       isolat::run_tau_curve},
      {"gamma-image", "render the k-step image of the lattice as a PGM", isolat::run_gamma_image},
      {"tau-single", "one sequence's rate with a window convergence check",
       isolat::run_tau_single},
      {"rho-map", "difference-frequency histogram of the image set, CSV", isolat::run_rho_map},
      {"validate", "cross-check battery over the independent prediction routes",
       isolat::run_validate},
      {"translations", "near-translation vectors of the image set, CSV",
       isolat::run_translations},
      {"rotate-image", "push a raster through the discretized chain", isolat::run_rotate_image},
      {"equidistribution", "pushforward uniformity diagnostic", isolat::run_equidistribution},
  };

  Runner chosen = nullptr;
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.description);
    add_common(sub, raw);
    sub->callback([&chosen, fn = c.fn] { chosen = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  if (const int rc = resolve_text_options(raw); rc != 0) return rc;
  try {
    return chosen(raw.cfg);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
