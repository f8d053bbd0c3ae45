#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "isolat/discretize.hpp"
#include "isolat/raster.hpp"
#include "isolat/torus.hpp"

using namespace isolat;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_bytes(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

IsometrySequence single(const Isometry& iso) {
  IsometrySequence seq;
  seq.n = 2;
  seq.items.push_back(iso);
  return seq;
}

}  // namespace

TEST_CASE("gray and color rasters survive a write read cycle") {
  Raster g = make_raster(7, 5, 1);
  for (std::size_t i = 0; i < g.data.size(); ++i)
    g.data[i] = static_cast<std::uint8_t>(i * 37 % 256);
  const auto gp = temp_file("isolat_test_roundtrip.pgm");
  write_raster(gp.string(), g);
  const Raster g2 = read_raster(gp.string());
  CHECK(g2.width == 7);
  CHECK(g2.height == 5);
  CHECK(g2.channels == 1);
  CHECK(g2.data == g.data);

  Raster c = make_raster(4, 6, 3);
  for (std::size_t i = 0; i < c.data.size(); ++i)
    c.data[i] = static_cast<std::uint8_t>(i * 11 % 256);
  const auto cp = temp_file("isolat_test_roundtrip.ppm");
  write_raster(cp.string(), c);
  const Raster c2 = read_raster(cp.string());
  CHECK(c2.channels == 3);
  CHECK(c2.data == c.data);
  std::filesystem::remove(gp);
  std::filesystem::remove(cp);
}

TEST_CASE("header comments are accepted") {
  const auto p = temp_file("isolat_test_comment.pgm");
  write_bytes(p, "P5\n# a comment line\n2 2\n255\nabcd");
  const Raster r = read_raster(p.string());
  CHECK(r.width == 2);
  CHECK(r.height == 2);
  CHECK(r.data == std::vector<std::uint8_t>{'a', 'b', 'c', 'd'});
  std::filesystem::remove(p);
}

TEST_CASE("malformed rasters fail with a byte offset") {
  const auto p = temp_file("isolat_test_bad.pgm");

  write_bytes(p, "P7\n2 2\n255\nabcd");
  CHECK_THROWS_WITH_AS((void)read_raster(p.string()),
                       doctest::Contains("byte"), std::runtime_error);

  write_bytes(p, "P5\n2 2\n255\nab");  // truncated pixel payload
  CHECK_THROWS_WITH_AS((void)read_raster(p.string()),
                       doctest::Contains("byte"), std::runtime_error);

  write_bytes(p, "P5\n2 -2\n255\nabcd");
  CHECK_THROWS_AS((void)read_raster(p.string()), std::runtime_error);

  CHECK_THROWS_AS((void)read_raster("/nonexistent/isolat.pgm"), std::runtime_error);
  std::filesystem::remove(p);
}

TEST_CASE("identity chain leaves a raster untouched") {
  Raster img = make_raster(9, 9, 1);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<std::uint8_t>((i * 7) % 251);
  RotateStats stats;
  const Raster out = rotate_raster(img, single(make_rotation2d(0.0)), &stats);
  CHECK(out.data == img.data);
  CHECK(stats.hole_fraction == 0.0);
  CHECK(stats.collision_fraction == 0.0);
  REQUIRE(stats.step_density.size() == 2);
  CHECK(stats.step_density[1] == 1.0);
}

TEST_CASE("quarter turn moves pixels exactly") {
  Raster img = make_raster(5, 5, 1);
  // one black pixel right of center: lattice offset (1, 0)
  img.data[img.index(3, 2)] = 0;
  RotateStats stats;
  const Raster out = rotate_raster(img, single(make_rotation2d(std::numbers::pi / 2)), &stats);
  // (1,0) -> (0,1) in lattice coordinates, pixel (2, 3)
  CHECK(out.data[out.index(2, 3)] == 0);
  CHECK(out.data[out.index(3, 2)] == 255);
  CHECK(stats.hole_fraction == 0.0);
  CHECK(stats.collision_fraction == 0.0);
}

TEST_CASE("four quarter turns compose to the identity on any frame") {
  Raster img = make_raster(10, 8, 3);
  for (std::size_t i = 0; i < img.data.size(); ++i)
    img.data[i] = static_cast<std::uint8_t>((i * 13 + 5) % 256);
  const auto quarter = make_rotation2d(std::numbers::pi / 2);
  IsometrySequence seq;
  seq.n = 2;
  seq.items = {quarter, quarter, quarter, quarter};
  const Raster out = rotate_raster(img, seq);
  CHECK(out.data == img.data);
}

TEST_CASE("eighth turn holes match the density loss") {
  Raster img = make_raster(100, 100, 1);
  std::fill(img.data.begin(), img.data.end(), std::uint8_t{128});
  RotateStats stats;
  (void)rotate_raster(img, single(make_rotation2d(std::numbers::pi / 4)), &stats);
  const double predicted_holes = 1.0 - rotation_rate_closed_form(std::numbers::pi / 4);
  CHECK(std::abs(stats.hole_fraction - predicted_holes) < 0.03);
  // collisions mirror holes for a norm preserving map up to boundary effects
  CHECK(std::abs(stats.collision_fraction - stats.hole_fraction) < 0.05);
  REQUIRE(stats.step_density.size() == 2);
  CHECK(std::abs(stats.step_density[1] - rotation_rate_closed_form(std::numbers::pi / 4)) < 0.02);
}

TEST_CASE("rotation requires a two dimensional sequence") {
  Raster img = make_raster(4, 4, 1);
  IsometrySequence seq3 = IsometrySequence::sample(3, 1, 1);
  CHECK_THROWS_AS((void)rotate_raster(img, seq3), std::domain_error);
}
