#include "isolat/validation.hpp"

#include <cmath>
#include <numbers>

#include "isolat/density.hpp"
#include "isolat/discretize.hpp"
#include "isolat/lattice.hpp"
#include "isolat/rng.hpp"
#include "isolat/torus.hpp"

namespace isolat {

namespace {

ValidationCheck within(std::string name, double measured, double expected, double tol) {
  ValidationCheck c;
  c.name = std::move(name);
  c.relation = "within";
  c.measured = measured;
  c.expected = expected;
  c.tolerance = tol;
  c.pass = std::abs(measured - expected) <= tol;
  return c;
}

ValidationCheck at_least(std::string name, double measured, double expected) {
  ValidationCheck c;
  c.name = std::move(name);
  c.relation = "at_least";
  c.measured = measured;
  c.expected = expected;
  c.pass = measured >= expected;
  return c;
}

ValidationCheck at_most(std::string name, double measured, double expected) {
  ValidationCheck c;
  c.name = std::move(name);
  c.relation = "at_most";
  c.measured = measured;
  c.expected = expected;
  c.pass = measured <= expected;
  return c;
}

IsometrySequence single(const Isometry& iso) {
  IsometrySequence seq;
  seq.n = iso.dim();
  seq.items.push_back(iso);
  return seq;
}

// One-step image density over the half-open box [-half, half)^2, counted from
// a chain whose trusted radius covers the box. Exact integer counting.
std::int64_t box_count_one_step(const Isometry& iso, std::int64_t half) {
  std::int64_t cnt = 0;
  chain_scan(single(iso), static_cast<double>(half) + 0.5, [&](const StageView& s) {
    if (s.k != 1) return;
    for (std::size_t i = 0; i < s.count; ++i) {
      const std::int32_t* p = s.flat + 2 * i;
      if (p[0] >= -half && p[0] < half && p[1] >= -half && p[1] < half) ++cnt;
    }
  });
  return cnt;
}

}  // namespace

bool ValidationReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

ValidationReport run_validation(double radius, std::uint64_t seed) {
  ValidationReport report;
  const double pi = std::numbers::pi;
  const double count_tol = 0.02 + 3.0 / std::sqrt(radius);

  // closed form against lattice counting for two named angles
  for (const double angle : {pi / 4, pi / 6}) {
    const double counted = rate_of_injectivity(single(make_rotation2d(angle)), radius);
    report.checks.push_back(within(angle == pi / 4 ? "rate-quarter-turn-half" : "rate-sixth-turn",
                                   counted, rotation_rate_closed_form(angle), count_tol));
  }

  // rational rotation: residue arithmetic must match box counting exactly.
  // The one-step image is periodic with covolume 25 and period dividing 25 in
  // each axis, so a box with side a multiple of 25 gives exact agreement.
  {
    const std::int64_t box_half =
        25 * std::max<std::int64_t>(2, static_cast<std::int64_t>(radius) / 50);
    const std::int64_t cnt = box_count_one_step(make_pythagorean(3, 4, 5), box_half);
    const double measured = static_cast<double>(cnt) / static_cast<double>(4 * box_half * box_half);
    report.checks.push_back(within("rational-rotation-exact-density", measured,
                                   pythagorean_tau_exact(3, 4, 5), 0.0));
  }

  // torus sampling against the closed form at a generic angle
  {
    TorusSampler sampler;
    sampler.samples = 200000;
    sampler.seed = seed;
    const auto est = rate_geometric(make_rotation2d(0.7), sampler);
    report.checks.push_back(within("rate-geometric-vs-closed-form", est.value,
                                   rotation_rate_closed_form(0.7),
                                   est.half_width95 + 0.005));
  }

  // difference frequencies: torus sampling against direct lattice counting
  {
    const auto iso = make_rotation2d(0.7);
    const auto chain = image_chain(single(iso), radius);
    const auto& gamma = chain.stages.back();
    TorusSampler sampler;
    sampler.samples = 200000;
    sampler.seed = seed + 1;
    for (const IntPoint& v : {IntPoint{1, 0}, IntPoint{1, 1}, IntPoint{2, -1}}) {
      const double counted = diff_frequency(gamma, v);
      const auto est = diff_frequency_geometric(iso, v, sampler);
      report.checks.push_back(within("diff-frequency-geometric-v" + std::to_string(v[0]) +
                                         std::to_string(v[1] < 0 ? 'm' : 'p') +
                                         std::to_string(std::abs(v[1])),
                                     est.value, counted, count_tol));
    }
  }

  // averaged difference frequency approaches the set density
  {
    const auto seq = IsometrySequence::sample(2, seed, 2);
    const auto chain = image_chain(seq, radius);
    const auto hist = diff_histogram(chain.stages.back(), 10);
    report.checks.push_back(
        within("mean-diff-frequency-vs-density", bohr_mean(hist), hist.base_density, 0.05));
  }

  // pushforward equidistribution: generic angle spreads, rational stays lumpy
  {
    const auto ball = integer_ball(radius, 2);
    report.checks.push_back(at_most("equidistribution-sampled-rotation",
                                    equidistribution_discrepancy(
                                        sample_isometry(2, rng::substream_seed(seed, 7)), ball, 10),
                                    0.1));
    report.checks.push_back(at_least("equidistribution-rational-rotation",
                                     equidistribution_discrepancy(make_pythagorean(3, 4, 5), ball, 10),
                                     1.0));
  }

  return report;
}

}  // namespace isolat
