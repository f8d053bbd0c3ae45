#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "isolat/density.hpp"
#include "isolat/discretize.hpp"
#include "isolat/lattice.hpp"

using namespace isolat;

namespace {

IsometrySequence seq_of(std::vector<Isometry> items, int n) {
  IsometrySequence seq;
  seq.n = n;
  seq.items = std::move(items);
  seq.master_seed = 0;
  return seq;
}

// sorted flat copy of the points of s with inf norm strictly below r
std::vector<IntPoint> sorted_points_within(const WindowedSet& s, double r) {
  std::vector<IntPoint> pts;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    if (inf_norm_int(p) < r) pts.emplace_back(p.begin(), p.end());
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

}  // namespace

TEST_CASE("single point images under the discretized map") {
  const auto id = make_rotation2d(0.0);
  CHECK(apply_discretized(id, {5, -3}) == IntPoint{5, -3});

  const auto quarter = make_rotation2d(std::numbers::pi / 2);
  CHECK(apply_discretized(quarter, {1, 0}) == IntPoint{0, 1});

  const auto eighth = make_rotation2d(std::numbers::pi / 4);
  CHECK(apply_discretized(eighth, {1, 0}) == IntPoint{1, 1});

  CHECK_THROWS_AS((void)apply_discretized(id, {1, 2, 3}), std::domain_error);
}

TEST_CASE("discretized image stays within half a unit of the exact image") {
  const auto iso = sample_isometry(3, 91);
  const IntPoint x = {7, -2, 4};
  const auto y = apply_discretized(iso, x);
  const auto exact = iso.apply(RealVec(x.begin(), x.end()));
  for (int d = 0; d < 3; ++d)
    CHECK(std::abs(static_cast<double>(y[static_cast<std::size_t>(d)]) -
                   exact[static_cast<std::size_t>(d)]) <= 0.5);
}

TEST_CASE("window inflation bound") {
  CHECK(safe_window_radius(100, 0, 2) == doctest::Approx(141.4213562373095).epsilon(1e-12));
  CHECK(safe_window_radius(250, 0, 1) == 250.0);
  CHECK(safe_window_radius(100, 3, 2) == doctest::Approx(143.54267658086917).epsilon(1e-12));
  CHECK_THROWS_AS((void)safe_window_radius(-1, 0, 2), std::domain_error);
  CHECK_THROWS_AS((void)safe_window_radius(10, -1, 2), std::domain_error);
}

TEST_CASE("identity chains reproduce the integer lattice") {
  const auto id = make_rotation2d(0.0);
  const auto chain = image_chain(seq_of({id, id}, 2), 10);
  REQUIRE(chain.stages.size() == 3);
  for (const auto& stage : chain.stages) {
    CHECK(stage.trusted_radius() >= 10.0);
    CHECK(static_cast<double>(stage.count_in_ball(10)) == lattice_ball_card(10, 2));
  }
}

TEST_CASE("empty sequence still yields the base window") {
  const auto chain = image_chain(seq_of({}, 2), 10);
  REQUIRE(chain.stages.size() == 1);
  CHECK(static_cast<double>(chain.stages[0].count_in_ball(10)) == lattice_ball_card(10, 2));
}

TEST_CASE("one eighth turn thins the lattice to the known density") {
  const auto chain = image_chain(seq_of({make_rotation2d(std::numbers::pi / 4)}, 2), 50);
  REQUIRE(chain.stages.size() == 2);
  const double density =
      static_cast<double>(chain.stages[1].count_in_ball(50)) / lattice_ball_card(50, 2);
  CHECK(std::abs(density - (2 * std::sqrt(2.0) - 2)) < 0.02);
}

TEST_CASE("window soundness: doubling the window does not change the core") {
  const auto seq = IsometrySequence::sample(2, 4242, 3);
  const auto small = image_chain(seq, 30);
  const auto large = image_chain(seq, 60);
  REQUIRE(small.stages.size() == large.stages.size());
  for (std::size_t j = 0; j < small.stages.size(); ++j)
    CHECK(sorted_points_within(small.stages[j], 30) ==
          sorted_points_within(large.stages[j], 30));
}

TEST_CASE("integer matrices give bijective chains") {
  const auto quarter = make_rotation2d(std::numbers::pi / 2);
  const auto chain = image_chain(seq_of({quarter, quarter, quarter, quarter}, 2), 25);
  const auto full = static_cast<std::size_t>(lattice_ball_card(25, 2));
  for (const auto& stage : chain.stages) CHECK(stage.count_in_ball(25) == full);
}

TEST_CASE("densities along a chain never increase beyond boundary noise") {
  const auto seq = IsometrySequence::sample(2, 99, 6);
  const double R = 40;
  std::vector<double> dens;
  chain_scan(seq, R, [&](const StageView& s) {
    dens.push_back(static_cast<double>(s.count_in_ball(R)) / lattice_ball_card(R, 2));
  });
  REQUIRE(dens.size() == 7);
  for (std::size_t j = 1; j < dens.size(); ++j) CHECK(dens[j] <= dens[j - 1] + 2.0 / R);
}

TEST_CASE("chain scan and materialized chain agree") {
  const auto seq = IsometrySequence::sample(2, 1234, 2);
  const auto chain = image_chain(seq, 20);
  std::size_t stage = 0;
  chain_scan(seq, 20, [&](const StageView& s) {
    REQUIRE(stage < chain.stages.size());
    CHECK(s.count_in_ball(20) == chain.stages[stage].count_in_ball(20));
    CHECK(s.trusted_radius == doctest::Approx(chain.stages[stage].trusted_radius()));
    ++stage;
  });
  CHECK(stage == 3);
}

TEST_CASE("stage views refuse counts beyond their trusted radius") {
  const auto seq = IsometrySequence::sample(2, 5, 1);
  CHECK_THROWS_AS(chain_scan(seq, 15,
                             [&](const StageView& s) {
                               (void)s.count_in_ball(s.trusted_radius + 1.0);
                             }),
                  std::domain_error);
  CHECK_THROWS_AS((void)image_chain(seq, -3), std::domain_error);
}

TEST_CASE("rational rotation chains stay at full density") {
  // the 3-4-5 rotation discretizes to a bijection of the integer lattice, so
  // every window stays completely covered; the residue oracle agrees
  const auto chain = image_chain(seq_of({make_pythagorean(3, 4, 5)}, 2), 60);
  const double tau =
      static_cast<double>(chain.stages[1].count_in_ball(60)) / lattice_ball_card(60, 2);
  CHECK(tau == 1.0);
  CHECK(pythagorean_tau_exact(3, 4, 5) == 1.0);
}

TEST_CASE("high dimensional chains are refused, low ones work") {
  CHECK_THROWS_AS(chain_scan(IsometrySequence::sample(17, 3, 1), 2,
                             [](const StageView&) {}),
                  std::length_error);
  const auto chain3 = image_chain(IsometrySequence::sample(3, 8, 1), 6);
  CHECK(chain3.stages[1].count_in_ball(6) > 0);
}
