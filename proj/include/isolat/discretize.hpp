#pragma once

// Discretized action of isometries on Z^n: single-point maps, finite-window
// image chains with explicit trust bookkeeping, and raster rotation.

#include <cstdint>
#include <functional>
#include <vector>

#include "isolat/lattice.hpp"
#include "isolat/raster.hpp"

namespace isolat {

// Image of an integer point under "round after applying P".
IntPoint apply_discretized(const Isometry& iso, const IntPoint& x);

// Window radius whose integer ball is guaranteed to contain every chain
// preimage of the ball B(0, R) after k steps in dimension n: sqrt(n)*(R+k/2).
// The isometry preserves the 2-norm, each rounding moves a point by at most
// sqrt(n)/2 in the 2-norm, and the inf-norm is dominated by the 2-norm.
double safe_window_radius(double R, int k, int n);

// One stage of a chain scan. For stage 0 `flat` may be null, meaning the stage
// is exactly integer_ball(safe_window_radius(R, k, n), n) and was streamed
// rather than stored; `count` still holds its cardinality.
struct StageView {
  int k = 0;
  int dim = 0;
  const std::int32_t* flat = nullptr;
  std::size_t count = 0;
  double trusted_radius = 0.0;

  // Points of the stage with inf-norm strictly below r; valid for r up to
  // trusted_radius.
  std::size_t count_in_ball(double r) const;
};

using StageFn = std::function<void(const StageView&)>;

// Streams the image chain of Z^n through seq over a window sized for R,
// invoking fn for every stage 0..k. Stage j is exact inside the open ball of
// its trusted radius: sqrt(n)*(R + k/2) for stage 0 and R + (k-j)/2 after j
// steps (the Euclidean argument behind safe_window_radius, applied stepwise).
// Deterministic: points are generated and deduplicated in a fixed order.
void chain_scan(const IsometrySequence& seq, double R, const StageFn& fn);

// Materialized chain: stage 0 is the full starting window, later stages the
// deduplicated images. Memory grows with k; prefer chain_scan for long chains.
struct ImageChain {
  IsometrySequence seq;
  double requested_radius = 0.0;
  std::vector<WindowedSet> stages;
};

ImageChain image_chain(const IsometrySequence& seq, double R);

struct RotateStats {
  double hole_fraction = 0.0;
  double collision_fraction = 0.0;
  std::vector<double> step_density;  // density estimate after each step
};

// Applies the discretized chain to a raster: every lattice point of a window
// covering all preimages of the frame is mapped through the chain; a point
// landing on a pixel writes the color of its source position (background
// color for sources outside the frame), last writer wins in row-major source
// order. Pixels no chain image reaches are holes and filled with background.
// 2D only.
Raster rotate_raster(const Raster& src, const IsometrySequence& seq, RotateStats* stats = nullptr);

}  // namespace isolat
