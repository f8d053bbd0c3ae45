#pragma once

// Core lattice types: integer points, orthogonal matrices with provenance,
// windowed subsets of Z^n with an explicit trust contract.

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace isolat {

using IntPoint = std::vector<std::int64_t>;
using RealVec = std::vector<double>;

double inf_norm(std::span<const double> v);
double inf_norm_int(std::span<const std::int64_t> v);
double two_norm(std::span<const double> v);
double two_norm_int(std::span<const std::int64_t> v);

// Rounding to the unique integer k with k - 1/2 < x <= k + 1/2.
// Halves round down: 0.5 -> 0, -0.5 -> -1. Throws std::domain_error on
// non-finite input.
std::int64_t round_half_low(double x);

// Coordinatewise round_half_low.
IntPoint project(const RealVec& v);

// Small dense square matrix, row-major.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int dim, double fill = 0.0) : n(dim), a(static_cast<std::size_t>(dim) * dim, fill) {}
  static Mat identity(int dim);

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  Mat mul(const Mat& other) const;
  Mat transposed() const;
  void apply(const double* x, double* y) const;  // y = A x
  RealVec apply(const RealVec& x) const;

  // max |A^T A - I| entrywise; zero for exactly orthogonal matrices.
  double orthogonality_defect() const;
};

struct Rotation2DTag {
  double theta = 0.0;
};
struct PythagoreanTag {
  std::int64_t p = 0, q = 0, r = 0;
};
struct SampledTag {
  std::uint64_t seed = 0;
};
struct ExplicitTag {};

using Provenance = std::variant<ExplicitTag, Rotation2DTag, PythagoreanTag, SampledTag>;

// An orthogonal matrix together with how it was built and which rows are known
// to be rational. Construction validates orthogonality to 1e-12.
class Isometry {
 public:
  Isometry(Mat m, Provenance prov, std::vector<int> rational_rows);

  int dim() const { return mat_.n; }
  const Mat& matrix() const { return mat_; }
  const Provenance& provenance() const { return prov_; }
  const std::vector<int>& rational_rows() const { return rational_rows_; }
  bool all_rows_rational() const {
    return static_cast<int>(rational_rows_.size()) == mat_.n;
  }

  RealVec apply(const RealVec& x) const { return mat_.apply(x); }

 private:
  Mat mat_;
  Provenance prov_;
  std::vector<int> rational_rows_;  // 0-based, sorted
};

// Rotation of R^2 by theta. Angles within 1e-12 of a multiple of pi/2 get
// exact 0/±1 entries and both rows marked rational.
Isometry make_rotation2d(double theta);

// Rotation with matrix rows (p/r, -q/r) and (q/r, p/r). Requires a
// pythagorean triple p^2 + q^2 = r^2 with r > 0.
Isometry make_pythagorean(std::int64_t p, std::int64_t q, std::int64_t r);

// Reproducible draw from the orthogonal group. n = 2 uses a rotation by a
// uniform angle; other n orthonormalize a standard normal matrix with the
// pivot signs fixed, so the result is a pure function of (n, seed).
Isometry sample_isometry(int n, std::uint64_t seed);

struct IsometrySequence {
  int n = 2;  // ambient dimension; meaningful even when items is empty
  std::vector<Isometry> items;
  std::uint64_t master_seed = 0;

  int dim() const { return n; }
  std::size_t size() const { return items.size(); }

  // Throws std::domain_error unless every item is n-dimensional.
  void validate() const;

  // k isometries drawn from substreams of master: item j uses
  // substream_seed(substream_seed(master, 0), j). Trial-indexed variants use
  // rate_curve's convention (see density.hpp).
  static IsometrySequence sample(int n, std::uint64_t master, std::size_t k);
};

// A finite point set S in Z^n carrying the radius up to which it is exact:
// points() intersected with the open ball B(0, trusted_radius) equals the
// modeled infinite set there. Outside that ball the points are genuine members
// of the modeled set but possibly incomplete. Immutable after construction.
class WindowedSet {
 public:
  WindowedSet(int dim, double trusted_radius, std::vector<std::int64_t> flat_coords);

  int dim() const { return dim_; }
  double trusted_radius() const { return trusted_; }
  std::size_t size() const { return count_; }
  std::span<const std::int64_t> point(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  const std::vector<std::int64_t>& flat() const { return coords_; }

  bool contains(std::span<const std::int64_t> p) const;
  bool contains(const IntPoint& p) const { return contains(std::span<const std::int64_t>(p)); }

  // Number of set points with inf-norm strictly below r.
  std::size_t count_in_ball(double r) const;

 private:
  void build_index();

  int dim_;
  double trusted_;
  std::size_t count_ = 0;
  std::vector<std::int64_t> coords_;  // flat, dim-strided, deduplicated
  // dense bit index over the bounding box
  std::vector<std::int64_t> lo_, span_;
  std::vector<std::uint64_t> bits_;
  bool indexed_ = false;
};

// Z^n intersected with the open inf-norm ball of radius R: all x with
// |x_i| < R. trusted_radius = R. Empty for R <= 0.
WindowedSet integer_ball(double R, int n);

// Integer points x with |x_i| < R per axis; helper shared by density code.
// Equals (2*ceil(R)-1)^n clamped at 0, as a double to avoid overflow.
double lattice_ball_card(double R, int n);

}  // namespace isolat
