#pragma once

// Density, injectivity-rate, and difference-frequency estimators over
// windowed integer sets. Every estimator confines its counting to the trusted
// region of its input and throws window_exceeded when that is impossible.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "isolat/discretize.hpp"
#include "isolat/lattice.hpp"

namespace isolat {

struct window_exceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Upper relative density at scale R: the largest fraction of ball points
// belonging to s over a coarse grid of ball centers (stride max(1,
// floor(R/2)), all centers with |c|_inf <= trusted - R, origin included).
// The denominator is the same for every integer center.
double uniform_density(const WindowedSet& s, double R);

// tau^k of the sequence: fraction of the radius-R window still covered by the
// k-step image of Z^n. One streamed chain pass.
double rate_of_injectivity(const IsometrySequence& seq, double R);

struct RateWithConvergence {
  double value = 0.0;         // estimate over the doubled window
  double small_window = 0.0;  // estimate over the requested window
  bool converged = false;     // the two agree within 3/sqrt(R)
};

// Runs the chain once over a window sized for 2R and compares the counts at R
// and 2R; disagreement beyond 3/sqrt(R) flags a window that is too small.
RateWithConvergence rate_with_convergence(const IsometrySequence& seq, double R);

struct DensityCurveEntry {
  int k = 0;
  double tau_mean = 0.0;
  double tau_stderr = 0.0;
};

struct DensityCurve {
  std::vector<DensityCurveEntry> entries;  // one per stage 0..kmax
  int dim = 0;
  int trials = 0;
  double radius = 0.0;
  std::uint64_t seed = 0;
};

// Mean and standard error of tau^k over independent random sequences. Trial t
// draws its sequence with substream_seed(seed, t) as master, so any prefix of
// trials is reproducible regardless of the total count.
DensityCurve rate_curve(int n, int kmax, double R, int trials, std::uint64_t seed);

// Fraction of set points that remain in the set when translated by v, counted
// over the ball of radius trusted - |v|_inf so the translate stays trusted.
double diff_frequency(const WindowedSet& s, const IntPoint& v);

struct DiffHistogram {
  std::map<IntPoint, double> freqs;  // difference frequency per vector
  double base_density = 0.0;         // set density over the counting window
  double window_radius = 0.0;        // counting ball radius actually used
  std::int64_t diff_radius = 0;      // vectors |v|_inf <= diff_radius included
};

// Difference frequencies for every |v|_inf <= vmax, each counted over its own
// largest certified ball exactly like the single-vector operation, so the
// batched entries agree with diff_frequency bit for bit.
DiffHistogram diff_histogram(const WindowedSet& s, std::int64_t vmax);

// Average of the histogram entries; for sets with a mean autocorrelation this
// approaches the set's density as the vector box grows.
double bohr_mean(const DiffHistogram& h);

// Relative density (against the full integer grid) of the symmetric
// difference of s and s+v inside the ball of radius R. Needs R + |v|_inf
// within the trusted radius.
double translate_defect(const WindowedSet& s, const IntPoint& v, double R);

// Nonzero vectors |v|_inf <= search_radius whose symmetric-difference density
// against the shifted set stays below eps on the certified counting ball of
// radius trusted - search_radius: the near-translations of the set.
// Deterministic order (ascending odometer over the vector box).
std::vector<IntPoint> find_translations(const WindowedSet& s, double eps,
                                        std::int64_t search_radius);

struct DeloneParameters {
  double packing_radius = 0.0;   // half the minimum pairwise inf-norm distance
  double covering_radius = 0.0;  // max over space of the inf-distance to the set
};

// Both radii measured inside the trusted window; needs at least two points.
DeloneParameters delone_parameters(const WindowedSet& s);

// Exact density of the one-step image of Z^2 under the rational rotation with
// cosine p/r and sine q/r, by pure residue arithmetic: the image is periodic
// under the scaled rotation lattice, and classes are counted via an exact
// integer invariant. Independent of the chain runner; used to cross-check it.
double pythagorean_tau_exact(std::int64_t p, std::int64_t q, std::int64_t r);

}  // namespace isolat
