#pragma once

// Torus-side predictions: geometric sampling estimators for densities and
// difference frequencies, cube-vertex mass splitting, one-step diffusion
// bounds, and equidistribution diagnostics. These predict what the lattice
// counters in density.hpp measure, without running any chain.

#include <cstdint>
#include <map>
#include <vector>

#include "isolat/density.hpp"
#include "isolat/lattice.hpp"

namespace isolat {

// Mass split of a real point over the vertices of its surrounding unit cube,
// vertex v getting prod_i (1 - |u_i - v_i|). Zero-weight vertices are omitted;
// the stored weights always sum to 1.
struct SparseWeights {
  std::map<IntPoint, double> weights;
};

SparseWeights weighted_projection(const RealVec& u);

// Quasi-random point source on [0,1)^n: a Kronecker lattice sequence with a
// seeded random shift by default, plain Monte Carlo as the fallback scheme.
struct TorusSampler {
  enum class Scheme { kronecker_shifted, monte_carlo };

  std::size_t samples = 100000;
  std::uint64_t seed = 1;
  Scheme scheme = Scheme::kronecker_shifted;
};

struct RateEstimate {
  double value = 0.0;
  double half_width95 = 0.0;      // binomial 95% half-width (conservative for QMC)
  bool rational_warning = false;  // exact rational rows undermine equidistribution
};

// One-step injectivity rate predicted on the torus: the measure of points of
// the unit cube landing within rounding reach of the transformed lattice.
RateEstimate rate_geometric(const Isometry& iso, const TorusSampler& sampler);

// Closed form for plane rotations: 1 - (cos a + sin a - 1)^2 with the angle
// reduced mod pi/2 (the rate is pi/2-periodic and symmetric in the axes).
double rotation_rate_closed_form(double angle);

// One-step difference frequency predicted on the torus: among cube points
// within rounding reach of the transformed lattice, the fraction that remain
// within reach after translating by v.
RateEstimate diff_frequency_geometric(const Isometry& iso, const IntPoint& v,
                                      const TorusSampler& sampler);

// One transport step of a difference-frequency histogram: each vector's mass
// moves to the cube vertices around its image. upper sums all arriving mass,
// lower keeps the largest single arrival; the measured next-step frequency is
// expected between them (up to histogram noise) inside the reliable region.
struct DiffusionBounds {
  std::map<IntPoint, double> upper;
  std::map<IntPoint, double> lower;
  double reliable_radius = 0.0;  // 2-norm radius where arrivals were complete
  bool box_leak = false;         // mass landed outside the input vector box
};

DiffusionBounds diffusion_step(const Isometry& iso, const DiffHistogram& h);

// Predicted relative excess of transported mass at the heaviest target vector
// and the strict-drop criterion: the density strictly decreases one step later
// exactly when some occurring nonzero difference maps strictly inside the open
// unit cube. The guaranteed relative drop is half the excess for plain pair
// collisions.
struct DecreaseBound {
  double excess = 0.0;
  bool strict = false;
};

DecreaseBound density_decrease(const Isometry& iso, const DiffHistogram& h);

// Max relative deviation from uniform of the pushforward of s through the
// isometry on the torus, over a bins^n box grid. Near 0 for equidistributing
// maps, 1 or more when whole boxes stay empty.
double equidistribution_discrepancy(const Isometry& iso, const WindowedSet& s, int bins);

}  // namespace isolat
