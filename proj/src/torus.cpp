#include "isolat/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "isolat/rng.hpp"

namespace isolat {

namespace {

// Positive root of x^(d+1) = x + 1, the base of the d-dimensional Kronecker
// lattice directions. Lies in (1, 2] for every d >= 1.
double kronecker_base(int d) {
  double lo = 1.0, hi = 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (std::pow(mid, d + 1) > mid + 1.0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

double frac(double x) { return x - std::floor(x); }

// Streams `sampler.samples` points of [0,1)^n into fn(const double*).
template <typename Fn>
void sample_unit_cube(int n, const TorusSampler& sampler, Fn&& fn) {
  if (n < 1) throw std::domain_error("torus sampler: dimension must be >= 1");
  if (sampler.samples == 0) throw std::domain_error("torus sampler: need samples");
  std::vector<double> u(static_cast<std::size_t>(n));
  rng::Stream stream(sampler.seed);
  if (sampler.scheme == TorusSampler::Scheme::monte_carlo) {
    for (std::size_t j = 0; j < sampler.samples; ++j) {
      for (int d = 0; d < n; ++d) u[static_cast<std::size_t>(d)] = stream.uniform01();
      fn(u.data());
    }
    return;
  }
  // shifted Kronecker sequence: u_j = frac(shift + (j+1) * alpha)
  std::vector<double> alpha(static_cast<std::size_t>(n)), shift(static_cast<std::size_t>(n));
  const double base = kronecker_base(n);
  double power = 1.0;
  for (int d = 0; d < n; ++d) {
    power /= base;
    alpha[static_cast<std::size_t>(d)] = power;
    shift[static_cast<std::size_t>(d)] = stream.uniform01();
  }
  for (std::size_t j = 0; j < sampler.samples; ++j) {
    for (int d = 0; d < n; ++d)
      u[static_cast<std::size_t>(d)] =
          frac(shift[static_cast<std::size_t>(d)] +
               static_cast<double>(j + 1) * alpha[static_cast<std::size_t>(d)]);
    fn(u.data());
  }
}

// Images P*m of all integer m with |m|_2 <= reach, flattened row after row.
std::vector<double> lattice_images(const Isometry& iso, double reach) {
  const int n = iso.dim();
  const auto bound = static_cast<std::int64_t>(std::floor(reach));
  std::vector<double> out;
  std::vector<std::int64_t> m(static_cast<std::size_t>(n), -bound);
  std::vector<double> mr(static_cast<std::size_t>(n)), im(static_cast<std::size_t>(n));
  const double reach2 = reach * reach;
  for (;;) {
    double norm2 = 0;
    for (int d = 0; d < n; ++d) {
      mr[static_cast<std::size_t>(d)] = static_cast<double>(m[static_cast<std::size_t>(d)]);
      norm2 += mr[static_cast<std::size_t>(d)] * mr[static_cast<std::size_t>(d)];
    }
    if (norm2 <= reach2) {
      iso.matrix().apply(mr.data(), im.data());
      out.insert(out.end(), im.begin(), im.end());
    }
    int d = 0;
    while (d < n && m[static_cast<std::size_t>(d)] == bound) {
      m[static_cast<std::size_t>(d)] = -bound;
      ++d;
    }
    if (d == n) break;
    ++m[static_cast<std::size_t>(d)];
  }
  return out;
}

// whether some image point is within rounding reach (inf-distance 1/2) of x
bool within_reach(const double* x, const std::vector<double>& images, int n) {
  const std::size_t cnt = images.size() / static_cast<std::size_t>(n);
  for (std::size_t c = 0; c < cnt; ++c) {
    const double* g = images.data() + c * static_cast<std::size_t>(n);
    bool ok = true;
    for (int d = 0; d < n; ++d) {
      if (std::abs(x[d] - g[d]) > 0.5) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  }
  return false;
}

double binomial_half_width(double phat, double trials) {
  return trials > 0 ? 1.96 * std::sqrt(phat * (1.0 - phat) / trials) : 0.0;
}

}  // namespace

SparseWeights weighted_projection(const RealVec& u) {
  const int n = static_cast<int>(u.size());
  if (n < 1) throw std::domain_error("weighted_projection: empty input");
  std::vector<std::int64_t> lo(static_cast<std::size_t>(n));
  std::vector<double> fr(static_cast<std::size_t>(n));
  for (int d = 0; d < n; ++d) {
    const double f = std::floor(u[static_cast<std::size_t>(d)]);
    lo[static_cast<std::size_t>(d)] = static_cast<std::int64_t>(f);
    fr[static_cast<std::size_t>(d)] = u[static_cast<std::size_t>(d)] - f;
  }
  SparseWeights out;
  IntPoint vertex(static_cast<std::size_t>(n));
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    double w = 1.0;
    for (int d = 0; d < n; ++d) {
      const bool high = (mask >> d) & 1u;
      w *= high ? fr[static_cast<std::size_t>(d)] : 1.0 - fr[static_cast<std::size_t>(d)];
      vertex[static_cast<std::size_t>(d)] = lo[static_cast<std::size_t>(d)] + (high ? 1 : 0);
    }
    if (w > 0.0) out.weights.emplace(vertex, w);
  }
  return out;
}

RateEstimate rate_geometric(const Isometry& iso, const TorusSampler& sampler) {
  const int n = iso.dim();
  const double rn = std::sqrt(static_cast<double>(n));
  const auto images = lattice_images(iso, rn + rn / 2 + 1.0);
  std::vector<double> x(static_cast<std::size_t>(n));
  std::size_t hits = 0;
  sample_unit_cube(n, sampler, [&](const double* u) {
    iso.matrix().apply(u, x.data());
    if (within_reach(x.data(), images, n)) ++hits;
  });
  RateEstimate est;
  est.value = static_cast<double>(hits) / static_cast<double>(sampler.samples);
  est.half_width95 = binomial_half_width(est.value, static_cast<double>(sampler.samples));
  est.rational_warning = !iso.rational_rows().empty();
  return est;
}

double rotation_rate_closed_form(double angle) {
  if (!std::isfinite(angle)) throw std::domain_error("rotation_rate_closed_form: bad angle");
  const double quarter = std::numbers::pi / 2;
  double a = angle - quarter * std::floor(angle / quarter);
  const double c = std::cos(a) + std::sin(a) - 1.0;
  return 1.0 - c * c;
}

RateEstimate diff_frequency_geometric(const Isometry& iso, const IntPoint& v,
                                      const TorusSampler& sampler) {
  const int n = iso.dim();
  if (static_cast<int>(v.size()) != n)
    throw std::domain_error("diff_frequency_geometric: dimension mismatch");
  const double rn = std::sqrt(static_cast<double>(n));
  const double vnorm = two_norm_int(v);
  const auto images = lattice_images(iso, rn + rn / 2 + 1.0);
  const auto images_shifted = lattice_images(iso, rn + rn / 2 + 1.0 + vnorm);

  std::vector<double> x(static_cast<std::size_t>(n)), xv(static_cast<std::size_t>(n));
  std::size_t den = 0, num = 0;
  sample_unit_cube(n, sampler, [&](const double* u) {
    iso.matrix().apply(u, x.data());
    if (!within_reach(x.data(), images, n)) return;
    ++den;
    for (int d = 0; d < n; ++d)
      xv[static_cast<std::size_t>(d)] =
          x[static_cast<std::size_t>(d)] + static_cast<double>(v[static_cast<std::size_t>(d)]);
    if (within_reach(xv.data(), images_shifted, n)) ++num;
  });
  if (den == 0) throw std::domain_error("diff_frequency_geometric: no covered samples");
  RateEstimate est;
  est.value = static_cast<double>(num) / static_cast<double>(den);
  est.half_width95 = binomial_half_width(est.value, static_cast<double>(den));
  est.rational_warning = !iso.rational_rows().empty();
  return est;
}

DiffusionBounds diffusion_step(const Isometry& iso, const DiffHistogram& h) {
  const int n = iso.dim();
  DiffusionBounds out;
  std::vector<double> vr(static_cast<std::size_t>(n)), image(static_cast<std::size_t>(n));
  for (const auto& [v, mass] : h.freqs) {
    if (static_cast<int>(v.size()) != n)
      throw std::domain_error("diffusion_step: dimension mismatch");
    for (int d = 0; d < n; ++d)
      vr[static_cast<std::size_t>(d)] = static_cast<double>(v[static_cast<std::size_t>(d)]);
    iso.matrix().apply(vr.data(), image.data());
    const auto split = weighted_projection(RealVec(image.begin(), image.end()));
    for (const auto& [vertex, w] : split.weights) {
      const double arriving = w * mass;
      out.upper[vertex] += arriving;
      auto& slot = out.lower[vertex];
      slot = std::max(slot, arriving);
      if (inf_norm_int(vertex) > static_cast<double>(h.diff_radius)) out.box_leak = true;
    }
  }
  const double rn = std::sqrt(static_cast<double>(n));
  out.reliable_radius = std::max(0.0, static_cast<double>(h.diff_radius) - rn);
  return out;
}

DecreaseBound density_decrease(const Isometry& iso, const DiffHistogram& h) {
  const int n = iso.dim();
  DecreaseBound out;

  // Strict decrease happens exactly when some occurring nonzero difference
  // lands strictly inside the open unit cube, so its image splits weight onto
  // the zero vertex and collides points.
  std::vector<double> vr(static_cast<std::size_t>(n)), image(static_cast<std::size_t>(n));
  for (const auto& [v, mass] : h.freqs) {
    if (mass <= 0.0 || inf_norm_int(v) == 0) continue;
    for (int d = 0; d < n; ++d)
      vr[static_cast<std::size_t>(d)] = static_cast<double>(v[static_cast<std::size_t>(d)]);
    iso.matrix().apply(vr.data(), image.data());
    if (inf_norm(image) < 1.0) {
      out.strict = true;
      break;
    }
  }

  const auto bounds = diffusion_step(iso, h);
  double peak = 0.0;
  for (const auto& [vertex, mass] : bounds.upper) peak = std::max(peak, mass);
  out.excess = std::max(0.0, peak - 1.0);
  return out;
}

double equidistribution_discrepancy(const Isometry& iso, const WindowedSet& s, int bins) {
  if (bins < 1) throw std::domain_error("equidistribution_discrepancy: bins must be >= 1");
  const int n = iso.dim();
  if (s.dim() != n) throw std::domain_error("equidistribution_discrepancy: dimension mismatch");
  if (s.size() == 0) throw std::domain_error("equidistribution_discrepancy: empty set");
  double boxes_est = 1.0;
  for (int d = 0; d < n; ++d) boxes_est *= static_cast<double>(bins);
  if (boxes_est > 1.0e8) throw std::length_error("equidistribution_discrepancy: too many boxes");
  const auto boxes = static_cast<std::size_t>(boxes_est);

  std::vector<std::uint64_t> counts(boxes, 0);
  std::vector<double> xr(static_cast<std::size_t>(n)), y(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto pt = s.point(i);
    for (int d = 0; d < n; ++d)
      xr[static_cast<std::size_t>(d)] = static_cast<double>(pt[static_cast<std::size_t>(d)]);
    iso.matrix().apply(xr.data(), y.data());
    std::size_t idx = 0;
    for (int d = 0; d < n; ++d) {
      auto b = static_cast<std::int64_t>(frac(y[static_cast<std::size_t>(d)]) * bins);
      b = std::clamp<std::int64_t>(b, 0, bins - 1);
      idx = idx * static_cast<std::size_t>(bins) + static_cast<std::size_t>(b);
    }
    ++counts[idx];
  }
  const double uniform = static_cast<double>(s.size()) / static_cast<double>(boxes);
  double dev = 0.0;
  for (const std::uint64_t c : counts)
    dev = std::max(dev, std::abs(static_cast<double>(c) / uniform - 1.0));
  return dev;
}

}  // namespace isolat
