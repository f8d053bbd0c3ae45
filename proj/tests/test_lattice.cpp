#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "isolat/lattice.hpp"

using namespace isolat;

TEST_CASE("rounding picks the unique interval with the upper half open") {
  CHECK(round_half_low(0.0) == 0);
  CHECK(round_half_low(0.5) == 0);
  CHECK(round_half_low(-0.5) == -1);
  CHECK(round_half_low(0.5000001) == 1);
  CHECK(round_half_low(1.49) == 1);
  CHECK(round_half_low(1.5) == 1);
  CHECK(round_half_low(2.5) == 2);
  CHECK(round_half_low(-2.5) == -3);
  CHECK(round_half_low(-0.49) == 0);
  CHECK(round_half_low(1e9 + 0.5) == 1000000000);
  CHECK_THROWS_AS((void)round_half_low(std::nan("")), std::domain_error);
  CHECK_THROWS_AS((void)round_half_low(1.0 / 0.0), std::domain_error);
}

TEST_CASE("projection rounds coordinatewise") {
  const auto p = project({0.5, -0.5, 1.7, -2.2});
  REQUIRE(p.size() == 4);
  CHECK(p[0] == 0);
  CHECK(p[1] == -1);
  CHECK(p[2] == 2);
  CHECK(p[3] == -2);
}

TEST_CASE("norm helpers") {
  const IntPoint v = {3, -4};
  CHECK(inf_norm_int(v) == 4.0);
  CHECK(two_norm_int(v) == doctest::Approx(5.0));
  const RealVec w = {-0.25, 0.75};
  CHECK(inf_norm(w) == 0.75);
  CHECK(two_norm(w) == doctest::Approx(std::sqrt(0.0625 + 0.5625)));
}

TEST_CASE("matrix product and transpose agree with direct evaluation") {
  Mat a(2);
  a.at(0, 0) = 1; a.at(0, 1) = 2;
  a.at(1, 0) = 3; a.at(1, 1) = 4;
  Mat b(2);
  b.at(0, 0) = 5; b.at(0, 1) = 6;
  b.at(1, 0) = 7; b.at(1, 1) = 8;
  const Mat c = a.mul(b);
  CHECK(c.at(0, 0) == 19);
  CHECK(c.at(0, 1) == 22);
  CHECK(c.at(1, 0) == 43);
  CHECK(c.at(1, 1) == 50);
  const Mat t = a.transposed();
  CHECK(t.at(0, 1) == 3);
  CHECK(t.at(1, 0) == 2);
  CHECK(Mat::identity(3).orthogonality_defect() == 0.0);
}

TEST_CASE("quarter turn snaps to exact integer entries") {
  const auto iso = make_rotation2d(std::acos(-1.0) / 2);
  CHECK(iso.matrix().at(0, 0) == 0.0);
  CHECK(iso.matrix().at(0, 1) == -1.0);
  CHECK(iso.matrix().at(1, 0) == 1.0);
  CHECK(iso.matrix().at(1, 1) == 0.0);
  CHECK(iso.all_rows_rational());
  CHECK(iso.matrix().orthogonality_defect() == 0.0);
}

TEST_CASE("generic rotation carries cosine and sine") {
  const auto iso = make_rotation2d(0.7);
  CHECK(iso.matrix().at(0, 0) == doctest::Approx(std::cos(0.7)).epsilon(1e-15));
  CHECK(iso.matrix().at(1, 0) == doctest::Approx(std::sin(0.7)).epsilon(1e-15));
  CHECK(iso.rational_rows().empty());
  CHECK(iso.matrix().orthogonality_defect() < 1e-12);
}

TEST_CASE("pythagorean rotations are exactly rational") {
  const auto iso = make_pythagorean(3, 4, 5);
  CHECK(iso.matrix().at(0, 0) == 0.6);
  CHECK(iso.matrix().at(0, 1) == -0.8);
  CHECK(iso.matrix().at(1, 0) == 0.8);
  CHECK(iso.matrix().at(1, 1) == 0.6);
  CHECK(iso.all_rows_rational());
  CHECK_THROWS_AS((void)make_pythagorean(3, 4, 6), std::domain_error);
  // the degenerate leg (0,4,4) is still a genuine signed permutation
  const auto quarter = make_pythagorean(0, 4, 4);
  CHECK(quarter.matrix().at(0, 0) == 0.0);
  CHECK(quarter.matrix().at(0, 1) == -1.0);
}

TEST_CASE("isometry construction rejects a skewed matrix") {
  Mat bad(2);
  bad.at(0, 0) = 1.0; bad.at(0, 1) = 0.1;
  bad.at(1, 0) = 0.0; bad.at(1, 1) = 1.0;
  CHECK_THROWS_AS(Isometry(bad, ExplicitTag{}, {}), std::domain_error);
}

TEST_CASE("sampled isometries are orthogonal in every supported dimension") {
  for (int n = 1; n <= 5; ++n) {
    const auto iso = sample_isometry(n, 1000 + static_cast<std::uint64_t>(n));
    const auto& m = iso.matrix();
    // independent orthogonality oracle: direct triple loop, no Mat helpers
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double dot = 0.0;
        for (int k = 0; k < n; ++k) dot += m.at(k, i) * m.at(k, j);
        CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
    }
  }
}

TEST_CASE("sampled isometries are pure functions of dimension and seed") {
  const auto a = sample_isometry(3, 77);
  const auto b = sample_isometry(3, 77);
  const auto c = sample_isometry(3, 78);
  CHECK(a.matrix().a == b.matrix().a);
  CHECK(a.matrix().a != c.matrix().a);
}

TEST_CASE("sequence sampling produces validated members") {
  const auto seq = IsometrySequence::sample(3, 5, 4);
  CHECK(seq.dim() == 3);
  CHECK(seq.size() == 4);
  CHECK_NOTHROW(seq.validate());

  IsometrySequence broken;
  broken.n = 2;
  broken.items.push_back(sample_isometry(3, 1));
  CHECK_THROWS_AS(broken.validate(), std::domain_error);
}

TEST_CASE("integer balls use the strict inf norm bound") {
  CHECK(integer_ball(1.5, 2).size() == 9);
  CHECK(integer_ball(0.4, 2).size() == 1);
  CHECK(integer_ball(10, 1).size() == 19);
  CHECK(integer_ball(1.0, 2).size() == 1);
  CHECK(integer_ball(-1.0, 3).size() == 0);
  CHECK(lattice_ball_card(1.5, 2) == 9.0);
  CHECK(lattice_ball_card(10, 1) == 19.0);
  CHECK(lattice_ball_card(0.4, 3) == 1.0);
}

TEST_CASE("windowed sets deduplicate and answer membership") {
  // (1,2) appears twice; order of the rest is scrambled on purpose
  WindowedSet s(2, 5.0, {1, 2, -3, 0, 1, 2, 4, -4});
  CHECK(s.size() == 3);
  CHECK(s.contains(IntPoint{1, 2}));
  CHECK(s.contains(IntPoint{-3, 0}));
  CHECK(s.contains(IntPoint{4, -4}));
  CHECK_FALSE(s.contains(IntPoint{2, 1}));
  CHECK_FALSE(s.contains(IntPoint{100, 100}));

  CHECK(s.count_in_ball(5.0) == 3);
  CHECK(s.count_in_ball(4.0) == 2);   // (4,-4) has inf norm exactly 4
  CHECK(s.count_in_ball(4.01) == 3);
  CHECK(s.count_in_ball(1.0) == 0);
}

TEST_CASE("integer ball counting matches its own cardinality") {
  const auto ball = integer_ball(7.3, 2);
  CHECK(ball.trusted_radius() == 7.3);
  CHECK(static_cast<double>(ball.size()) == lattice_ball_card(7.3, 2));
  CHECK(ball.count_in_ball(7.3) == ball.size());
  CHECK(ball.count_in_ball(3.0) == 25);  // {-2..2}^2
}
