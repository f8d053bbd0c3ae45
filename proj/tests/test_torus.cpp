#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isolat/density.hpp"
#include "isolat/discretize.hpp"
#include "isolat/lattice.hpp"
#include "isolat/rng.hpp"
#include "isolat/torus.hpp"

using namespace isolat;

namespace {

WindowedSet one_step_image(const Isometry& iso, double R) {
  IsometrySequence seq;
  seq.n = iso.dim();
  seq.items.push_back(iso);
  auto chain = image_chain(seq, R);
  return std::move(chain.stages.back());
}

}  // namespace

TEST_CASE("vertex weights at reference points") {
  const auto whole = weighted_projection({2.0, -3.0});
  REQUIRE(whole.weights.size() == 1);
  CHECK(whole.weights.at(IntPoint{2, -3}) == 1.0);

  const auto split = weighted_projection({0.3, 0.6});
  REQUIRE(split.weights.size() == 4);
  CHECK(split.weights.at(IntPoint{0, 0}) == doctest::Approx(0.28).epsilon(1e-12));
  CHECK(split.weights.at(IntPoint{1, 0}) == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(split.weights.at(IntPoint{0, 1}) == doctest::Approx(0.42).epsilon(1e-12));
  CHECK(split.weights.at(IntPoint{1, 1}) == doctest::Approx(0.18).epsilon(1e-12));

  const auto mid = weighted_projection({0.5});
  REQUIRE(mid.weights.size() == 2);
  CHECK(mid.weights.at(IntPoint{0}) == 0.5);
  CHECK(mid.weights.at(IntPoint{1}) == 0.5);
}

TEST_CASE("vertex weights always sum to one on their cube") {
  rng::Stream stream(2024);
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 1 + trial % 4;
    RealVec u(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d)
      u[static_cast<std::size_t>(d)] = 20.0 * stream.uniform01() - 10.0;
    const auto w = weighted_projection(u);
    double sum = 0.0;
    for (const auto& [vertex, mass] : w.weights) {
      sum += mass;
      for (int d = 0; d < n; ++d) {
        const double diff =
            static_cast<double>(vertex[static_cast<std::size_t>(d)]) -
            u[static_cast<std::size_t>(d)];
        REQUIRE(std::abs(diff) < 1.0);  // support inside the surrounding cube
      }
    }
    REQUIRE(std::abs(sum - 1.0) <= 1e-12);
  }
}

TEST_CASE("closed form rate at landmark angles") {
  CHECK(rotation_rate_closed_form(0.0) == 1.0);
  CHECK(rotation_rate_closed_form(std::numbers::pi / 2) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rotation_rate_closed_form(std::numbers::pi / 4) ==
        doctest::Approx(2 * std::sqrt(2.0) - 2).epsilon(1e-12));
  CHECK(rotation_rate_closed_form(std::numbers::pi / 6) ==
        doctest::Approx(std::sqrt(3.0) / 2).epsilon(1e-12));
  // pi/2 periodicity and reflection symmetry
  CHECK(rotation_rate_closed_form(0.3 + std::numbers::pi / 2) ==
        doctest::Approx(rotation_rate_closed_form(0.3)).epsilon(1e-12));
  CHECK(rotation_rate_closed_form(-0.3) ==
        doctest::Approx(rotation_rate_closed_form(0.3)).epsilon(1e-12));
}

TEST_CASE("geometric rate estimate agrees with the closed form") {
  TorusSampler sampler;
  sampler.samples = 150000;
  sampler.seed = 5;
  const auto est = rate_geometric(make_rotation2d(0.9), sampler);
  CHECK(std::abs(est.value - rotation_rate_closed_form(0.9)) < est.half_width95 + 0.003);
  CHECK_FALSE(est.rational_warning);

  sampler.scheme = TorusSampler::Scheme::monte_carlo;
  const auto mc = rate_geometric(make_rotation2d(0.9), sampler);
  CHECK(std::abs(mc.value - rotation_rate_closed_form(0.9)) < mc.half_width95 + 0.01);
}

TEST_CASE("geometric rate of an integer matrix is one") {
  TorusSampler sampler;
  sampler.samples = 2000;
  const auto est = rate_geometric(make_rotation2d(std::numbers::pi / 2), sampler);
  CHECK(est.value == 1.0);
  CHECK(est.rational_warning);
}

TEST_CASE("geometric difference frequency basics") {
  TorusSampler sampler;
  sampler.samples = 5000;
  const auto id = rate_geometric(make_rotation2d(0.0), sampler);
  CHECK(id.value == 1.0);

  const auto est = diff_frequency_geometric(make_rotation2d(0.0), {4, -1}, sampler);
  CHECK(est.value == 1.0);

  CHECK_THROWS_AS(
      (void)diff_frequency_geometric(make_rotation2d(0.0), {1, 2, 3}, sampler),
      std::domain_error);
}

TEST_CASE("geometric difference frequency is symmetric under negation") {
  TorusSampler sampler;
  sampler.samples = 120000;
  sampler.seed = 8;
  const auto iso = make_rotation2d(1.2);
  const auto plus = diff_frequency_geometric(iso, {2, 1}, sampler);
  const auto minus = diff_frequency_geometric(iso, {-2, -1}, sampler);
  CHECK(std::abs(plus.value - minus.value) < 0.005);
}

TEST_CASE("geometric difference frequency matches lattice counting") {
  const auto iso = make_rotation2d(0.7);
  const auto gamma = one_step_image(iso, 100);
  TorusSampler sampler;
  sampler.samples = 120000;
  sampler.seed = 3;
  for (const IntPoint& v : {IntPoint{1, 0}, IntPoint{1, 1}}) {
    const auto est = diff_frequency_geometric(iso, v, sampler);
    CHECK(std::abs(est.value - diff_frequency(gamma, v)) < 0.02);
  }
}

TEST_CASE("diffusion through an integer matrix is a pure reindexing") {
  const auto quarter = make_rotation2d(std::numbers::pi / 2);
  const auto h = diff_histogram(integer_ball(10, 2), 2);
  const auto bounds = diffusion_step(quarter, h);
  CHECK(bounds.upper.size() == h.freqs.size());
  for (const auto& [v, f] : h.freqs) {
    const IntPoint image = {-v[1], v[0]};
    CHECK(bounds.upper.at(image) == f);
    CHECK(bounds.lower.at(image) == f);
  }
  CHECK_FALSE(bounds.box_leak);
}

TEST_CASE("diffusion of the flat histogram against a direct summation oracle") {
  const auto iso = make_rotation2d(std::numbers::pi / 4);
  const auto h = diff_histogram(integer_ball(10, 2), 3);
  const auto bounds = diffusion_step(iso, h);

  // independent oracle: accumulate the tent product directly over the box
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  double at_zero = 0.0;
  for (int vx = -3; vx <= 3; ++vx)
    for (int vy = -3; vy <= 3; ++vy) {
      const double ix = c * vx - s * vy;
      const double iy = s * vx + c * vy;
      const double wx = 1.0 - std::abs(ix);
      const double wy = 1.0 - std::abs(iy);
      if (wx > 0 && wy > 0) at_zero += wx * wy;
    }
  CHECK(bounds.upper.at(IntPoint{0, 0}) == doctest::Approx(at_zero).epsilon(1e-12));
  CHECK(bounds.upper.at(IntPoint{0, 0}) == doctest::Approx(1.3431457505076194).epsilon(1e-9));
  CHECK(bounds.box_leak);  // images of far box vectors land outside the box
  CHECK(bounds.reliable_radius ==
        doctest::Approx(3.0 - std::sqrt(2.0)).epsilon(1e-12));
  // the lower envelope never exceeds the upper sum anywhere
  for (const auto& [vertex, low] : bounds.lower) CHECK(low <= bounds.upper.at(vertex) + 1e-15);
}

TEST_CASE("strict decrease criterion follows the unit cube") {
  const auto h = diff_histogram(integer_ball(12, 2), 2);

  const auto none = density_decrease(make_rotation2d(std::numbers::pi / 2), h);
  CHECK_FALSE(none.strict);
  CHECK(none.excess == 0.0);

  const auto drop = density_decrease(make_rotation2d(std::numbers::pi / 4), h);
  CHECK(drop.strict);
  CHECK(drop.excess == doctest::Approx(0.3431457505076194).epsilon(1e-9));
}

TEST_CASE("predicted decrease is observed on a one step chain") {
  const double theta = 0.7;
  const auto iso = make_rotation2d(theta);
  const auto h = diff_histogram(integer_ball(40, 2), 3);
  const auto bound = density_decrease(iso, h);
  CHECK(bound.strict);

  const auto gamma = one_step_image(iso, 100);
  const double tau =
      static_cast<double>(gamma.count_in_ball(100)) / lattice_ball_card(100, 2);
  const double drop = 1.0 - tau;
  // pair collisions halve the worst case mass excess
  CHECK(drop >= bound.excess / 2 - 0.03);
}

TEST_CASE("equidistribution discrepancy separates the three regimes") {
  const auto ball = integer_ball(120, 2);

  const double generic = equidistribution_discrepancy(sample_isometry(2, 19), ball, 10);
  CHECK(generic < 0.12);

  // identity stacks all mass in the corner box: maximal deviation
  const double frozen = equidistribution_discrepancy(make_rotation2d(0.0), ball, 10);
  CHECK(frozen == doctest::Approx(99.0).epsilon(1e-12));

  const double rational =
      equidistribution_discrepancy(make_pythagorean(3, 4, 5), ball, 10);
  CHECK(rational > 1.0);
}
