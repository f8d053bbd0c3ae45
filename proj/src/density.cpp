#include "isolat/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>
#include <utility>

#include "isolat/rng.hpp"

namespace isolat {

namespace {

// Odometer over the box {-b..b}^n, invoking fn(const int64*) per point.
template <typename Fn>
void scan_box(int n, std::int64_t b, Fn&& fn) {
  std::vector<std::int64_t> x(static_cast<std::size_t>(n), -b);
  for (;;) {
    fn(x.data());
    int d = 0;
    while (d < n && x[static_cast<std::size_t>(d)] == b) {
      x[static_cast<std::size_t>(d)] = -b;
      ++d;
    }
    if (d == n) return;
    ++x[static_cast<std::size_t>(d)];
  }
}

// Indices of set points with inf-norm strictly below r.
std::vector<std::size_t> points_in_ball(const WindowedSet& s, double r) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (inf_norm_int(s.point(i)) < r) idx.push_back(i);
  return idx;
}

}  // namespace

double uniform_density(const WindowedSet& s, double R) {
  if (!std::isfinite(R) || R <= 0) throw std::domain_error("uniform_density: bad radius");
  const int n = s.dim();
  const double margin = s.trusted_radius() - R;
  if (margin < 0) throw window_exceeded("uniform_density: ball does not fit the trusted window");

  const auto stride = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(R / 2)));
  const auto m = static_cast<std::int64_t>(std::floor(margin / static_cast<double>(stride)));
  double centers = 1.0;
  for (int d = 0; d < n; ++d) centers *= static_cast<double>(2 * m + 1);
  if (centers > 1.0e6) throw std::length_error("uniform_density: too many centers");

  std::vector<std::int64_t> flat_centers;
  scan_box(n, m, [&](const std::int64_t* c) {
    for (int d = 0; d < n; ++d) flat_centers.push_back(c[d] * stride);
  });
  const std::size_t nc = flat_centers.size() / static_cast<std::size_t>(n);

  // The estimator is the sup flavor of relative density: the worst (largest)
  // count over all sampled ball centers, not their average.
  std::vector<std::uint64_t> per_center(nc, 0);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    for (std::size_t c = 0; c < nc; ++c) {
      const std::int64_t* cc = flat_centers.data() + c * static_cast<std::size_t>(n);
      bool in = true;
      for (int d = 0; d < n; ++d) {
        const std::int64_t diff = p[static_cast<std::size_t>(d)] - cc[d];
        if (!(static_cast<double>(diff < 0 ? -diff : diff) < R)) {
          in = false;
          break;
        }
      }
      if (in) ++per_center[c];
    }
  }
  const std::uint64_t top = *std::max_element(per_center.begin(), per_center.end());
  return static_cast<double>(top) / lattice_ball_card(R, n);
}

double rate_of_injectivity(const IsometrySequence& seq, double R) {
  const int k = static_cast<int>(seq.size());
  const double card = lattice_ball_card(R, seq.dim());
  double tau = std::numeric_limits<double>::quiet_NaN();
  chain_scan(seq, R, [&](const StageView& s) {
    if (s.k == k) tau = static_cast<double>(s.count_in_ball(R)) / card;
  });
  return tau;
}

RateWithConvergence rate_with_convergence(const IsometrySequence& seq, double R) {
  const int k = static_cast<int>(seq.size());
  const int n = seq.dim();
  RateWithConvergence out;
  chain_scan(seq, 2 * R, [&](const StageView& s) {
    if (s.k == k) {
      out.value = static_cast<double>(s.count_in_ball(2 * R)) / lattice_ball_card(2 * R, n);
      out.small_window = static_cast<double>(s.count_in_ball(R)) / lattice_ball_card(R, n);
    }
  });
  out.converged = std::abs(out.value - out.small_window) <= 3.0 / std::sqrt(R);
  return out;
}

DensityCurve rate_curve(int n, int kmax, double R, int trials, std::uint64_t seed) {
  if (n < 1) throw std::domain_error("rate_curve: dimension must be >= 1");
  if (kmax < 0) throw std::domain_error("rate_curve: negative step count");
  if (trials < 1) throw std::domain_error("rate_curve: need at least one trial");
  if (!std::isfinite(R) || R <= 0) throw std::domain_error("rate_curve: bad radius");

  const std::size_t stages = static_cast<std::size_t>(kmax) + 1;
  std::vector<double> mean(stages, 0.0), m2(stages, 0.0);
  const double card = lattice_ball_card(R, n);

  for (int t = 0; t < trials; ++t) {
    const auto seq =
        IsometrySequence::sample(n, rng::substream_seed(seed, static_cast<std::uint64_t>(t)),
                                 static_cast<std::size_t>(kmax));
    chain_scan(seq, R, [&](const StageView& s) {
      const double tau = static_cast<double>(s.count_in_ball(R)) / card;
      const auto j = static_cast<std::size_t>(s.k);
      const double delta = tau - mean[j];
      mean[j] += delta / (t + 1);
      m2[j] += delta * (tau - mean[j]);
    });
  }

  DensityCurve curve;
  curve.dim = n;
  curve.trials = trials;
  curve.radius = R;
  curve.seed = seed;
  curve.entries.resize(stages);
  for (std::size_t j = 0; j < stages; ++j) {
    curve.entries[j].k = static_cast<int>(j);
    curve.entries[j].tau_mean = mean[j];
    curve.entries[j].tau_stderr =
        trials > 1 ? std::sqrt(m2[j] / (static_cast<double>(trials) * (trials - 1))) : 0.0;
  }
  return curve;
}

double diff_frequency(const WindowedSet& s, const IntPoint& v) {
  const int n = s.dim();
  if (static_cast<int>(v.size()) != n) throw std::domain_error("diff_frequency: dimension mismatch");
  const double rv = s.trusted_radius() - static_cast<double>(inf_norm_int(v));
  if (rv <= 0) throw window_exceeded("diff_frequency: vector too long for the trusted window");

  std::uint64_t den = 0, num = 0;
  IntPoint q(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    if (!(inf_norm_int(p) < rv)) continue;
    ++den;
    for (int d = 0; d < n; ++d) q[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d)] + v[static_cast<std::size_t>(d)];
    if (s.contains(q)) ++num;
  }
  if (den == 0) throw window_exceeded("diff_frequency: empty counting window");
  return static_cast<double>(num) / static_cast<double>(den);
}

DiffHistogram diff_histogram(const WindowedSet& s, std::int64_t vmax) {
  if (vmax < 0) throw std::domain_error("diff_histogram: negative vector bound");
  const int n = s.dim();
  if (s.trusted_radius() - static_cast<double>(vmax) <= 0)
    throw window_exceeded("diff_histogram: vector bound too large for the trusted window");

  // Each vector v is counted inside the largest certified ball for that v,
  // radius trusted - |v|, exactly as the single-vector operation does. Points
  // sorted by inf-norm give each window as a prefix of one flat array.
  const auto tmax = static_cast<std::int64_t>(std::ceil(s.trusted_radius())) - 1;
  std::vector<std::vector<std::int64_t>> buckets(static_cast<std::size_t>(tmax) + 1);
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    const auto t = static_cast<std::int64_t>(inf_norm_int(p));
    if (t <= tmax) buckets[static_cast<std::size_t>(t)].insert(
        buckets[static_cast<std::size_t>(t)].end(), p.begin(), p.end());
  }
  std::vector<std::int64_t> flat;
  std::vector<std::size_t> prefix(static_cast<std::size_t>(tmax) + 1, 0);
  for (std::int64_t t = 0; t <= tmax; ++t) {
    flat.insert(flat.end(), buckets[static_cast<std::size_t>(t)].begin(),
                buckets[static_cast<std::size_t>(t)].end());
    prefix[static_cast<std::size_t>(t)] = flat.size() / static_cast<std::size_t>(n);
  }
  if (flat.empty()) throw window_exceeded("diff_histogram: empty counting window");

  DiffHistogram h;
  h.window_radius = s.trusted_radius();
  h.diff_radius = vmax;
  h.base_density =
      static_cast<double>(prefix[static_cast<std::size_t>(tmax)]) /
      lattice_ball_card(s.trusted_radius(), n);

  IntPoint q(static_cast<std::size_t>(n));
  scan_box(n, vmax, [&](const std::int64_t* v) {
    std::int64_t vlen = 0;
    for (int d = 0; d < n; ++d) {
      const std::int64_t a = v[d] < 0 ? -v[d] : v[d];
      if (a > vlen) vlen = a;
    }
    const double rv = s.trusted_radius() - static_cast<double>(vlen);
    const auto tv = static_cast<std::int64_t>(std::ceil(rv)) - 1;
    const std::size_t den = prefix[static_cast<std::size_t>(tv)];
    if (den == 0) throw window_exceeded("diff_histogram: empty counting window");
    std::uint64_t cnt = 0;
    for (std::size_t i = 0; i < den; ++i) {
      const std::int64_t* p = flat.data() + i * static_cast<std::size_t>(n);
      for (int d = 0; d < n; ++d) q[static_cast<std::size_t>(d)] = p[d] + v[d];
      if (s.contains(q)) ++cnt;
    }
    h.freqs.emplace(IntPoint(v, v + n), static_cast<double>(cnt) / static_cast<double>(den));
  });
  return h;
}

double bohr_mean(const DiffHistogram& h) {
  if (h.freqs.empty()) throw std::domain_error("bohr_mean: empty histogram");
  double sum = 0.0;
  for (const auto& [v, f] : h.freqs) sum += f;
  return sum / static_cast<double>(h.freqs.size());
}

double translate_defect(const WindowedSet& s, const IntPoint& v, double R) {
  const int n = s.dim();
  if (static_cast<int>(v.size()) != n)
    throw std::domain_error("translate_defect: dimension mismatch");
  if (!std::isfinite(R) || R <= 0) throw std::domain_error("translate_defect: bad radius");
  const auto vmax = inf_norm_int(v);
  if (R + static_cast<double>(vmax) > s.trusted_radius())
    throw window_exceeded("translate_defect: window too small for the shift");

  // Density of the symmetric difference of S and S+v inside the ball B(0,R),
  // relative to the full integer grid. Both one-sided parts need membership
  // queries only within R + |v| of the origin, which the guard above keeps
  // inside the trusted region.
  std::uint64_t mism = 0;
  IntPoint q(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    // part one: points of S in the ball that leave S when shifted back by v
    if (inf_norm_int(p) < R) {
      for (int d = 0; d < n; ++d)
        q[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d)] - v[static_cast<std::size_t>(d)];
      if (!s.contains(q)) ++mism;
    }
    // part two: points of S whose shift lands in the ball but outside S
    bool in = true;
    for (int d = 0; d < n; ++d) {
      q[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d)] + v[static_cast<std::size_t>(d)];
      const std::int64_t a = q[static_cast<std::size_t>(d)] < 0 ? -q[static_cast<std::size_t>(d)] : q[static_cast<std::size_t>(d)];
      if (!(static_cast<double>(a) < R)) in = false;
    }
    if (in && !s.contains(q)) ++mism;
  }
  return static_cast<double>(mism) / lattice_ball_card(R, s.dim());
}

std::vector<IntPoint> find_translations(const WindowedSet& s, double eps,
                                        std::int64_t search_radius) {
  if (!(eps >= 0 && eps < 1)) throw std::domain_error("find_translations: eps must be in [0, 1)");
  if (search_radius < 1) throw std::domain_error("find_translations: search radius must be >= 1");
  const int n = s.dim();
  const double rw = s.trusted_radius() - static_cast<double>(search_radius);
  if (rw <= 0)
    throw window_exceeded("find_translations: search radius too large for the trusted window");

  // Candidate points: everything that can touch the counting ball before or
  // after a shift of length at most search_radius.
  const auto wide = points_in_ball(s, rw + static_cast<double>(search_radius));
  if (wide.empty()) throw window_exceeded("find_translations: empty counting window");
  std::vector<std::int64_t> flat;
  flat.reserve(wide.size() * static_cast<std::size_t>(n));
  for (const std::size_t i : wide) {
    const auto p = s.point(i);
    flat.insert(flat.end(), p.begin(), p.end());
  }

  // v is accepted when the symmetric difference of S and S+v has relative
  // density below eps on the counting ball. Membership queries reach at most
  // rw + search_radius = trusted_radius from the origin, so only the origin
  // ball gives fully certified counts; it is the sole center used.
  const double limit = eps * lattice_ball_card(rw, n);
  std::vector<IntPoint> out;
  IntPoint q(static_cast<std::size_t>(n));
  scan_box(n, search_radius, [&](const std::int64_t* v) {
    bool zero = true;
    for (int d = 0; d < n; ++d)
      if (v[d] != 0) {
        zero = false;
        break;
      }
    if (zero) return;
    std::uint64_t mism = 0;
    for (std::size_t i = 0; i < wide.size(); ++i) {
      const std::int64_t* p = flat.data() + i * static_cast<std::size_t>(n);
      // S \ (S+v) on the ball: p in S with p-v outside S
      bool in = true;
      for (int d = 0; d < n; ++d) {
        const std::int64_t a = p[d] < 0 ? -p[d] : p[d];
        if (!(static_cast<double>(a) < rw)) in = false;
      }
      if (in) {
        for (int d = 0; d < n; ++d) q[static_cast<std::size_t>(d)] = p[d] - v[d];
        if (!s.contains(q)) ++mism;
      }
      // (S+v) \ S on the ball: p+v inside the ball but outside S
      in = true;
      for (int d = 0; d < n; ++d) {
        q[static_cast<std::size_t>(d)] = p[d] + v[d];
        const std::int64_t a = q[static_cast<std::size_t>(d)] < 0 ? -q[static_cast<std::size_t>(d)] : q[static_cast<std::size_t>(d)];
        if (!(static_cast<double>(a) < rw)) in = false;
      }
      if (in && !s.contains(q)) ++mism;
      if (static_cast<double>(mism) >= limit) break;
    }
    if (static_cast<double>(mism) < limit) out.emplace_back(v, v + n);
  });
  return out;
}

DeloneParameters delone_parameters(const WindowedSet& s) {
  if (s.size() < 2) throw std::domain_error("delone_parameters: need at least two points");
  const int n = s.dim();

  // Packing: half the minimal pairwise inf-norm distance, found per point by
  // expanding square rings until a neighbor appears or the global best is
  // matched. Distinct integer points are at least one apart, so the search
  // ends as soon as some pair achieves distance one.
  std::int64_t best = 0;
  {
    const auto p0 = s.point(0);
    const auto p1 = s.point(1);
    for (int d = 0; d < n; ++d) {
      std::int64_t a = p1[static_cast<std::size_t>(d)] - p0[static_cast<std::size_t>(d)];
      if (a < 0) a = -a;
      if (a > best) best = a;
    }
  }
  IntPoint q(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < s.size() && best > 1; ++i) {
    const auto p = s.point(i);
    for (std::int64_t r = 1; r < best; ++r) {
      bool hit = false;
      scan_box(n, r, [&](const std::int64_t* o) {
        if (hit) return;
        std::int64_t inf = 0;
        for (int d = 0; d < n; ++d) {
          const std::int64_t a = o[d] < 0 ? -o[d] : o[d];
          if (a > inf) inf = a;
        }
        if (inf != r) return;
        for (int d = 0; d < n; ++d) q[static_cast<std::size_t>(d)] = p[static_cast<std::size_t>(d)] + o[d];
        if (s.contains(q)) hit = true;
      });
      if (hit) {
        best = r;
        break;
      }
    }
  }

  // Covering: chessboard distance transform on the half-integer refinement of
  // the trusted box (sources doubled), so plateau vertices are hit exactly.
  const auto m = static_cast<std::int64_t>(std::floor(2 * s.trusted_radius()));
  if (m < 1) throw window_exceeded("delone_parameters: trusted window too small");
  const std::int64_t side = 2 * m + 1;
  double cells_est = 1.0;
  for (int d = 0; d < n; ++d) cells_est *= static_cast<double>(side);
  if (cells_est > 3.0e8) throw std::length_error("delone_parameters: covering grid too large");
  const auto cells = static_cast<std::size_t>(cells_est);

  std::vector<std::size_t> stride(static_cast<std::size_t>(n));
  {
    std::size_t acc = 1;
    for (int d = 0; d < n; ++d) {
      stride[static_cast<std::size_t>(d)] = acc;
      acc *= static_cast<std::size_t>(side);
    }
  }
  const auto cell_index = [&](const std::int64_t* c) {
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) idx += static_cast<std::size_t>(c[d] + m) * stride[static_cast<std::size_t>(d)];
    return idx;
  };

  constexpr std::int32_t kUnset = std::numeric_limits<std::int32_t>::max();
  std::vector<std::int32_t> dist(cells, kUnset);
  std::vector<std::size_t> frontier, next;
  std::vector<std::int64_t> coord(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    bool inside = true;
    for (int d = 0; d < n; ++d) {
      coord[static_cast<std::size_t>(d)] = 2 * p[static_cast<std::size_t>(d)];
      if (coord[static_cast<std::size_t>(d)] < -m || coord[static_cast<std::size_t>(d)] > m) inside = false;
    }
    if (!inside) continue;
    const std::size_t idx = cell_index(coord.data());
    if (dist[idx] != 0) {
      dist[idx] = 0;
      frontier.push_back(idx);
    }
  }
  if (frontier.empty()) throw window_exceeded("delone_parameters: no set points in covering grid");

  // chessboard BFS: every step grows the reached region by one in inf-norm
  std::vector<std::int64_t> c(static_cast<std::size_t>(n));
  for (std::int32_t level = 1; !frontier.empty(); ++level) {
    next.clear();
    for (const std::size_t idx : frontier) {
      std::size_t rem = idx;
      for (int d = 0; d < n; ++d) {
        c[static_cast<std::size_t>(d)] = static_cast<std::int64_t>(rem % static_cast<std::size_t>(side)) - m;
        rem /= static_cast<std::size_t>(side);
      }
      scan_box(n, 1, [&](const std::int64_t* o) {
        std::size_t nidx = 0;
        for (int d = 0; d < n; ++d) {
          const std::int64_t cd = c[static_cast<std::size_t>(d)] + o[d];
          if (cd < -m || cd > m) return;
          nidx += static_cast<std::size_t>(cd + m) * stride[static_cast<std::size_t>(d)];
        }
        if (dist[nidx] > level) {
          dist[nidx] = level;
          next.push_back(nidx);
        }
      });
    }
    frontier.swap(next);
  }

  // keep only cells whose distance ball is fully inside the trusted region
  double covering = 0.0;
  bool any = false;
  const double tr2 = 2 * s.trusted_radius();
  for (std::size_t idx = 0; idx < cells; ++idx) {
    std::size_t rem = idx;
    std::int64_t inf = 0;
    for (int d = 0; d < n; ++d) {
      const std::int64_t cd = static_cast<std::int64_t>(rem % static_cast<std::size_t>(side)) - m;
      rem /= static_cast<std::size_t>(side);
      const std::int64_t a = cd < 0 ? -cd : cd;
      if (a > inf) inf = a;
    }
    if (dist[idx] == kUnset) continue;
    if (static_cast<double>(dist[idx]) + static_cast<double>(inf) > tr2) continue;
    any = true;
    covering = std::max(covering, static_cast<double>(dist[idx]) / 2.0);
  }
  if (!any) throw window_exceeded("delone_parameters: covering not certifiable in window");

  DeloneParameters out;
  out.packing_radius = static_cast<double>(best) / 2.0;
  out.covering_radius = covering;
  return out;
}

namespace {

// ceil(num / den) for den > 0 in exact integer arithmetic
std::int64_t ceil_div(std::int64_t num, std::int64_t den) {
  const std::int64_t quo = num / den;
  return quo + (num % den > 0 ? 1 : 0);
}

}  // namespace

double pythagorean_tau_exact(std::int64_t p, std::int64_t q, std::int64_t r) {
  if (r <= 0 || p <= 0 || q <= 0 || p * p + q * q != r * r)
    throw std::domain_error("pythagorean_tau_exact: not a pythagorean triple");
  if (r > 20000) throw std::length_error("pythagorean_tau_exact: hypotenuse too large");
  const std::int64_t mod = r * r;
  const auto reduce = [mod](std::int64_t v) { return ((v % mod) + mod) % mod; };

  // The one-step image is periodic under L = {(p*m1 - q*m2, q*m1 + p*m2)} of
  // covolume r^2, and y -> (p*y1 + q*y2, -q*y1 + p*y2) mod r^2 identifies
  // residue classes mod L exactly. The class of the image point depends only
  // on the start point mod r.
  std::set<std::pair<std::int64_t, std::int64_t>> classes;
  for (std::int64_t x1 = 0; x1 < r; ++x1) {
    for (std::int64_t x2 = 0; x2 < r; ++x2) {
      const std::int64_t a = p * x1 - q * x2;  // r times the rotated first coordinate
      const std::int64_t b = q * x1 + p * x2;
      const std::int64_t y1 = ceil_div(2 * a - r, 2 * r);
      const std::int64_t y2 = ceil_div(2 * b - r, 2 * r);
      classes.emplace(reduce(p * y1 + q * y2), reduce(-q * y1 + p * y2));
    }
  }
  return static_cast<double>(classes.size()) / static_cast<double>(mod);
}

}  // namespace isolat
