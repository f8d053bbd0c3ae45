#include "isolat/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "json.hpp"

#include "isolat/density.hpp"
#include "isolat/discretize.hpp"
#include "isolat/io.hpp"
#include "isolat/lattice.hpp"
#include "isolat/raster.hpp"
#include "isolat/rng.hpp"
#include "isolat/torus.hpp"
#include "isolat/validation.hpp"

namespace isolat {

namespace {

using ordered_json = nlohmann::ordered_json;

IsometrySequence make_sequence(const ExperimentConfig& cfg, int k) {
  if (k < 0) throw std::domain_error("step count must be >= 0");
  if (cfg.pythagorean) {
    if (cfg.dim != 2) throw std::domain_error("rational rotations need --dim 2");
    IsometrySequence seq;
    seq.n = 2;
    seq.master_seed = cfg.seed;
    const auto& t = *cfg.pythagorean;
    for (int j = 0; j < k; ++j) seq.items.push_back(make_pythagorean(t[0], t[1], t[2]));
    return seq;
  }
  if (cfg.theta) {
    if (cfg.dim != 2) throw std::domain_error("plane rotations need --dim 2");
    IsometrySequence seq;
    seq.n = 2;
    seq.master_seed = cfg.seed;
    for (int j = 0; j < k; ++j) seq.items.push_back(make_rotation2d(*cfg.theta));
    return seq;
  }
  return IsometrySequence::sample(cfg.dim, cfg.seed, static_cast<std::size_t>(k));
}

std::string sequence_label(const ExperimentConfig& cfg) {
  if (cfg.pythagorean)
    return "pythagorean " + std::to_string((*cfg.pythagorean)[0]) + "," +
           std::to_string((*cfg.pythagorean)[1]) + "," + std::to_string((*cfg.pythagorean)[2]);
  if (cfg.theta) return "rotation theta=" + format_double(*cfg.theta);
  return "sampled seed=" + std::to_string(cfg.seed);
}

// Materializes only the last stage of the chain.
WindowedSet final_stage(const IsometrySequence& seq, double R) {
  std::optional<WindowedSet> out;
  const int k = static_cast<int>(seq.size());
  chain_scan(seq, R, [&](const StageView& s) {
    if (s.k != k) return;
    if (s.flat == nullptr) {
      out.emplace(integer_ball(s.trusted_radius, s.dim));
      return;
    }
    std::vector<std::int64_t> pts(s.count * static_cast<std::size_t>(s.dim));
    std::copy(s.flat, s.flat + pts.size(), pts.begin());
    out.emplace(WindowedSet(s.dim, s.trusted_radius, std::move(pts)));
  });
  return std::move(*out);
}

ordered_json config_json(const ExperimentConfig& cfg) {
  ordered_json j;
  j["dim"] = cfg.dim;
  j["radius"] = cfg.radius;
  j["kmax"] = cfg.kmax;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed;
  if (cfg.theta) j["theta"] = *cfg.theta;
  if (cfg.pythagorean)
    j["pythagorean"] = {(*cfg.pythagorean)[0], (*cfg.pythagorean)[1], (*cfg.pythagorean)[2]};
  j["vmax"] = cfg.vmax;
  j["eps"] = cfg.eps;
  j["bins"] = cfg.bins;
  j["sequence"] = sequence_label(cfg);
  return j;
}

void write_json(const std::string& path, const ordered_json& j) {
  atomic_write_file(path, j.dump(2) + "\n");
}

std::string out_or(const ExperimentConfig& cfg, const char* fallback) {
  return cfg.out_path.empty() ? std::string(fallback) : cfg.out_path;
}

void append_config_lines(std::string& text, const char* tool, const ExperimentConfig& cfg) {
  text += "# tool: isolat ";
  text += tool;
  text += "\n# dim: " + std::to_string(cfg.dim);
  text += "\n# radius: " + format_double(cfg.radius);
  text += "\n# kmax: " + std::to_string(cfg.kmax);
  text += "\n# trials: " + std::to_string(cfg.trials);
  text += "\n# seed: " + std::to_string(cfg.seed);
  text += "\n# sequence: " + sequence_label(cfg);
  text += "\n";
}

}  // namespace

int run_tau_curve(const ExperimentConfig& cfg) {
  DensityCurve curve;
  if (cfg.theta || cfg.pythagorean) {
    // deterministic sequence: a single chain pass, no spread to report
    const auto seq = make_sequence(cfg, cfg.kmax);
    curve.dim = cfg.dim;
    curve.trials = 1;
    curve.radius = cfg.radius;
    curve.seed = cfg.seed;
    curve.entries.resize(static_cast<std::size_t>(cfg.kmax) + 1);
    const double card = lattice_ball_card(cfg.radius, cfg.dim);
    chain_scan(seq, cfg.radius, [&](const StageView& s) {
      auto& e = curve.entries[static_cast<std::size_t>(s.k)];
      e.k = s.k;
      e.tau_mean = static_cast<double>(s.count_in_ball(cfg.radius)) / card;
      e.tau_stderr = 0.0;
    });
  } else {
    curve = rate_curve(cfg.dim, cfg.kmax, cfg.radius, cfg.trials, cfg.seed);
  }

  std::string csv;
  ExperimentConfig echo = cfg;
  echo.trials = curve.trials;
  append_config_lines(csv, "tau-curve", echo);
  csv += "k,tau_mean,tau_stderr\n";
  for (const auto& e : curve.entries) {
    csv += std::to_string(e.k);
    csv += ',';
    csv += format_double(e.tau_mean);
    csv += ',';
    csv += format_double(e.tau_stderr);
    csv += '\n';
  }
  const std::string out = out_or(cfg, "tau_curve.csv");
  atomic_write_file(out, csv);
  std::printf("tau-curve: %zu stages, final mean %s (stderr %s) -> %s\n", curve.entries.size(),
              format_double(curve.entries.back().tau_mean).c_str(),
              format_double(curve.entries.back().tau_stderr).c_str(), out.c_str());
  return 0;
}

int run_gamma_image(const ExperimentConfig& cfg) {
  if (cfg.dim != 2) throw std::domain_error("gamma-image renders two-dimensional sets only");
  const auto seq = make_sequence(cfg, cfg.kmax);
  const auto gamma = final_stage(seq, cfg.radius);

  const auto w = static_cast<std::int64_t>(std::ceil(gamma.trusted_radius())) - 1;
  if (w < 0) throw std::domain_error("gamma-image: window too small");
  const auto side = static_cast<int>(2 * w + 1);
  Raster img = make_raster(side, side, 1);
  std::fill(img.data.begin(), img.data.end(), std::uint8_t{255});
  std::size_t members = 0;
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    const auto p = gamma.point(i);
    if (std::abs(p[0]) > w || std::abs(p[1]) > w) continue;
    const auto col = static_cast<std::size_t>(p[0] + w);
    const auto row = static_cast<std::size_t>(w - p[1]);
    img.data[row * static_cast<std::size_t>(side) + col] = 0;
    ++members;
  }
  const std::string out = out_or(cfg, "gamma.pgm");
  write_raster(out, img);

  ordered_json j;
  j["config"] = config_json(cfg);
  j["k"] = cfg.kmax;
  j["window_half_width"] = w;
  j["members"] = members;
  j["density"] = static_cast<double>(members) / (static_cast<double>(side) * side);
  write_json(out + ".json", j);
  std::printf("gamma-image: k=%d, %zu members, density %s -> %s\n", cfg.kmax, members,
              format_double(j["density"].get<double>()).c_str(), out.c_str());
  return 0;
}

int run_tau_single(const ExperimentConfig& cfg) {
  const auto seq = make_sequence(cfg, cfg.kmax);
  const auto res = rate_with_convergence(seq, cfg.radius);
  std::printf("tau-single: k=%d tau=%s (half-window %s) %s\n", cfg.kmax,
              format_double(res.value).c_str(), format_double(res.small_window).c_str(),
              res.converged ? "converged" : "NOT CONVERGED");
  if (!cfg.out_path.empty()) {
    ordered_json j;
    j["config"] = config_json(cfg);
    j["tau"] = res.value;
    j["tau_half_window"] = res.small_window;
    j["converged"] = res.converged;
    write_json(cfg.out_path, j);
  }
  return 0;
}

int run_rho_map(const ExperimentConfig& cfg) {
  const auto seq = make_sequence(cfg, cfg.kmax);
  const auto gamma = final_stage(seq, cfg.radius);
  const auto hist = diff_histogram(gamma, cfg.vmax);
  const double mean = bohr_mean(hist);

  std::string csv;
  append_config_lines(csv, "rho-map", cfg);
  csv += "# vmax: " + std::to_string(cfg.vmax);
  csv += "\n# window_radius: " + format_double(hist.window_radius);
  csv += "\n# base_density: " + format_double(hist.base_density);
  csv += "\n# mean_frequency: " + format_double(mean);
  csv += "\n";
  for (int d = 1; d <= cfg.dim; ++d) {
    csv += "v" + std::to_string(d);
    csv += ',';
  }
  csv += "rho\n";
  for (const auto& [v, f] : hist.freqs) {
    for (const auto c : v) {
      csv += std::to_string(c);
      csv += ',';
    }
    csv += format_double(f);
    csv += '\n';
  }
  const std::string out = out_or(cfg, "rho_map.csv");
  atomic_write_file(out, csv);
  std::printf("rho-map: %zu vectors, base density %s, mean frequency %s -> %s\n",
              hist.freqs.size(), format_double(hist.base_density).c_str(),
              format_double(mean).c_str(), out.c_str());
  return 0;
}

int run_validate(const ExperimentConfig& cfg) {
  const auto report = run_validation(cfg.radius, cfg.seed);
  for (const auto& c : report.checks) {
    const std::string tol =
        c.relation == "within" ? "tol=" + format_double(c.tolerance) + " " : std::string();
    std::printf("%-36s %-8s measured=%-12s expected=%-12s %s%s\n", c.name.c_str(),
                c.relation.c_str(), format_double(c.measured).c_str(),
                format_double(c.expected).c_str(), tol.c_str(), c.pass ? "PASS" : "FAIL");
  }
  if (!cfg.out_path.empty()) {
    ordered_json j;
    j["config"] = config_json(cfg);
    ordered_json arr = ordered_json::array();
    for (const auto& c : report.checks) {
      ordered_json e;
      e["name"] = c.name;
      e["relation"] = c.relation;
      e["measured"] = c.measured;
      e["expected"] = c.expected;
      e["tolerance"] = c.tolerance;
      e["pass"] = c.pass;
      arr.push_back(e);
    }
    j["checks"] = arr;
    j["all_pass"] = report.all_pass();
    write_json(cfg.out_path, j);
  }
  std::printf("validate: %s\n", report.all_pass() ? "all checks passed" : "FAILURES present");
  return report.all_pass() ? 0 : 1;
}

int run_translations(const ExperimentConfig& cfg) {
  const auto seq = make_sequence(cfg, cfg.kmax);
  const auto gamma = final_stage(seq, cfg.radius);
  const auto found = find_translations(gamma, cfg.eps, cfg.vmax);

  std::string csv;
  append_config_lines(csv, "translations", cfg);
  csv += "# eps: " + format_double(cfg.eps);
  csv += "\n# search_radius: " + std::to_string(cfg.vmax);
  csv += "\n# found: " + std::to_string(found.size());
  csv += "\n";
  for (int d = 1; d <= cfg.dim; ++d) {
    csv += "v" + std::to_string(d);
    csv += d < cfg.dim ? ',' : '\n';
  }
  for (const auto& v : found) {
    for (std::size_t d = 0; d < v.size(); ++d) {
      csv += std::to_string(v[d]);
      csv += d + 1 < v.size() ? ',' : '\n';
    }
  }
  const std::string out = out_or(cfg, "translations.csv");
  atomic_write_file(out, csv);
  std::printf("translations: %zu vectors within eps=%s of full periodicity -> %s\n", found.size(),
              format_double(cfg.eps).c_str(), out.c_str());
  return 0;
}

int run_rotate_image(const ExperimentConfig& cfg) {
  if (cfg.in_path.empty()) throw std::domain_error("rotate-image needs --in <raster>");
  const Raster src = read_raster(cfg.in_path);
  const auto seq = make_sequence(cfg, cfg.kmax);
  RotateStats stats;
  const Raster dst = rotate_raster(src, seq, &stats);
  const std::string out = out_or(cfg, src.channels == 3 ? "rotated.ppm" : "rotated.pgm");
  write_raster(out, dst);

  ordered_json j;
  j["config"] = config_json(cfg);
  j["width"] = dst.width;
  j["height"] = dst.height;
  j["hole_fraction"] = stats.hole_fraction;
  j["collision_fraction"] = stats.collision_fraction;
  j["step_density"] = stats.step_density;
  write_json(out + ".json", j);
  std::printf("rotate-image: %dx%d, holes %s, collisions %s -> %s\n", dst.width, dst.height,
              format_double(stats.hole_fraction).c_str(),
              format_double(stats.collision_fraction).c_str(), out.c_str());
  return 0;
}

int run_equidistribution(const ExperimentConfig& cfg) {
  Isometry iso = cfg.pythagorean || cfg.theta
                     ? make_sequence(cfg, 1).items.front()
                     : IsometrySequence::sample(cfg.dim, cfg.seed, 1).items.front();
  const auto ball = integer_ball(cfg.radius, cfg.dim);
  const double dev = equidistribution_discrepancy(iso, ball, cfg.bins);
  std::printf("equidistribution: max relative deviation %s over %d^%d boxes (%s)\n",
              format_double(dev).c_str(), cfg.bins, cfg.dim, sequence_label(cfg).c_str());
  if (!cfg.out_path.empty()) {
    ordered_json j;
    j["config"] = config_json(cfg);
    j["deviation"] = dev;
    write_json(cfg.out_path, j);
  }
  return 0;
}

}  // namespace isolat
