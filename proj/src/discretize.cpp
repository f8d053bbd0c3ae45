#include "isolat/discretize.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <utility>

namespace isolat {

namespace {

// Slack added to pruning bounds so exact-boundary points survive floating
// point noise. Coordinates are integers, so anything below 1/2 is safe.
constexpr double kPruneSlack = 1e-9;

std::int64_t checked_side_pow(std::int64_t side, int n) {
  if (side <= 0) return 0;
  if (n * std::log2(static_cast<double>(side)) > 62.0)
    throw std::length_error("window cardinality exceeds 64-bit range");
  std::int64_t out = 1;
  for (int d = 0; d < n; ++d) out *= side;
  return out;
}

// Dense stamp grid over [-half, half]^n used to deduplicate stage points.
// uint16 stamps avoid clearing the whole grid between stages; on stamp
// wraparound the backing store is reset once.
class StampGrid {
 public:
  StampGrid(int n, std::int64_t half) : side_(2 * half + 1) {
    double cells = 1.0;
    for (int d = 0; d < n; ++d) cells *= static_cast<double>(side_);
    if (cells > 3.0e8) throw std::length_error("chain window too large for dedup grid");
    stamps_.assign(static_cast<std::size_t>(cells), 0);
  }

  std::int64_t side() const { return side_; }

  void next_stage() {
    if (++stamp_ == 0) {
      std::fill(stamps_.begin(), stamps_.end(), std::uint16_t{0});
      stamp_ = 1;
    }
  }

  // True the first time idx is marked within the current stage.
  bool mark(std::size_t idx) {
    if (stamps_[idx] == stamp_) return false;
    stamps_[idx] = stamp_;
    return true;
  }

 private:
  std::int64_t side_ = 0;
  std::vector<std::uint16_t> stamps_;
  std::uint16_t stamp_ = 0;
};

// Row-major n*n matrices of the sequence, flattened per step.
std::vector<std::vector<double>> step_matrices(const IsometrySequence& seq) {
  std::vector<std::vector<double>> steps;
  steps.reserve(seq.size());
  for (const auto& iso : seq.items) steps.push_back(iso.matrix().a);
  return steps;
}

// Chain runner. NT > 0 fixes the dimension at compile time so the per-point
// loops unroll; NT == 0 handles any dimension the dedup grid can afford.
template <int NT>
void run_chain(const IsometrySequence& seq, double R, const StageFn& fn) {
  constexpr int kMaxDim = 16;
  const int n = NT > 0 ? NT : seq.dim();
  const int k = static_cast<int>(seq.size());
  const double rn = std::sqrt(static_cast<double>(n));
  const double e0 = rn * (R + 0.5 * k);

  // Reported stage 0: the full integer ball of radius e0 (streamed, not stored).
  const std::int64_t a = static_cast<std::int64_t>(std::ceil(e0)) - 1;
  if (a < 0) throw std::domain_error("chain_scan: window radius too small");

  StageView s0;
  s0.k = 0;
  s0.dim = n;
  s0.flat = nullptr;
  s0.count = static_cast<std::size_t>(checked_side_pow(2 * a + 1, n));
  s0.trusted_radius = e0;
  fn(s0);
  if (k == 0) return;

  // Euclidean trust radius after j steps; consumed stepwise by rounding.
  const auto euclid = [&](int j) { return rn * (R + 0.5 * (k - j)); };

  // Source enumeration must include every integer point with |x|_2 <= e0.
  // floor handles the case of e0 landing exactly on an integer.
  const std::int64_t asrc = static_cast<std::int64_t>(std::floor(e0 + kPruneSlack));
  const std::int64_t half = a + 1;  // |y|_inf <= |y|_2 < e0 <= half for every kept point
  StampGrid grid(n, half);

  std::array<std::size_t, kMaxDim> stride{};
  {
    std::size_t s = 1;
    for (int d = 0; d < n; ++d) {
      stride[static_cast<std::size_t>(d)] = s;
      s *= static_cast<std::size_t>(grid.side());
    }
  }

  const auto steps = step_matrices(seq);
  std::vector<std::int32_t> cur, nxt;

  // Maps one source point, keeps it when inside the pruning ball and unseen.
  const auto emit = [&](const std::int32_t* x, const double* m, double cap2,
                        std::vector<std::int32_t>& out) {
    std::int32_t y[kMaxDim];
    std::int64_t norm2 = 0;
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += m[i * n + j] * x[j];
      const double yr = std::ceil(acc - 0.5);
      const auto yi = static_cast<std::int32_t>(yr);
      y[i] = yi;
      norm2 += static_cast<std::int64_t>(yi) * yi;
    }
    if (static_cast<double>(norm2) > cap2) return;
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i)
      idx += static_cast<std::size_t>(y[i] + half) * stride[static_cast<std::size_t>(i)];
    if (grid.mark(idx)) out.insert(out.end(), y, y + n);
  };

  for (int j = 1; j <= k; ++j) {
    const double ej = euclid(j) + kPruneSlack;
    const double cap2 = ej * ej;
    const double* m = steps[static_cast<std::size_t>(j - 1)].data();
    grid.next_stage();
    nxt.clear();

    if (j == 1) {
      // Stage 0 is streamed through an odometer instead of being stored.
      const double src2 = e0 + kPruneSlack;
      const double srccap2 = src2 * src2;
      std::int32_t x[kMaxDim];
      for (int d = 0; d < n; ++d) x[d] = static_cast<std::int32_t>(-asrc);
      for (;;) {
        std::int64_t norm2 = 0;
        for (int d = 0; d < n; ++d) norm2 += static_cast<std::int64_t>(x[d]) * x[d];
        if (static_cast<double>(norm2) <= srccap2) emit(x, m, cap2, nxt);
        int d = 0;
        while (d < n && x[d] == asrc) {
          x[d] = static_cast<std::int32_t>(-asrc);
          ++d;
        }
        if (d == n) break;
        ++x[d];
      }
    } else {
      const std::size_t cnt = cur.size() / static_cast<std::size_t>(n);
      for (std::size_t i = 0; i < cnt; ++i)
        emit(cur.data() + i * static_cast<std::size_t>(n), m, cap2, nxt);
    }

    StageView sv;
    sv.k = j;
    sv.dim = n;
    sv.flat = nxt.data();
    sv.count = nxt.size() / static_cast<std::size_t>(n);
    sv.trusted_radius = R + 0.5 * (k - j);
    fn(sv);
    cur.swap(nxt);
  }
}

}  // namespace

IntPoint apply_discretized(const Isometry& iso, const IntPoint& x) {
  const int n = iso.dim();
  if (static_cast<int>(x.size()) != n)
    throw std::domain_error("apply_discretized: dimension mismatch");
  RealVec xr(x.begin(), x.end());
  const RealVec y = iso.apply(xr);
  IntPoint out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = round_half_low(y[static_cast<std::size_t>(i)]);
  return out;
}

double safe_window_radius(double R, int k, int n) {
  if (!std::isfinite(R) || R < 0) throw std::domain_error("safe_window_radius: bad radius");
  if (k < 0) throw std::domain_error("safe_window_radius: negative step count");
  if (n < 1) throw std::domain_error("safe_window_radius: dimension must be >= 1");
  return std::sqrt(static_cast<double>(n)) * (R + 0.5 * k);
}

std::size_t StageView::count_in_ball(double r) const {
  if (!(r <= trusted_radius + 1e-9))
    throw std::domain_error("StageView::count_in_ball: radius beyond trusted window");
  if (r <= 0) return 0;
  const std::int64_t b = static_cast<std::int64_t>(std::ceil(r)) - 1;  // |x|_inf < r over integers
  if (b < 0) return 0;
  if (flat == nullptr)
    return static_cast<std::size_t>(checked_side_pow(2 * b + 1, dim));
  std::size_t c = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::int32_t* p = flat + i * static_cast<std::size_t>(dim);
    bool inside = true;
    for (int d = 0; d < dim; ++d) {
      const std::int64_t v = p[d] < 0 ? -static_cast<std::int64_t>(p[d]) : p[d];
      if (v > b) {
        inside = false;
        break;
      }
    }
    if (inside) ++c;
  }
  return c;
}

void chain_scan(const IsometrySequence& seq, double R, const StageFn& fn) {
  seq.validate();
  if (!std::isfinite(R) || R <= 0) throw std::domain_error("chain_scan: radius must be positive");
  switch (seq.dim()) {
    case 1: run_chain<1>(seq, R, fn); break;
    case 2: run_chain<2>(seq, R, fn); break;
    case 3: run_chain<3>(seq, R, fn); break;
    case 4: run_chain<4>(seq, R, fn); break;
    default:
      if (seq.dim() > 16) throw std::length_error("chain_scan: dimension too large");
      run_chain<0>(seq, R, fn);
  }
}

ImageChain image_chain(const IsometrySequence& seq, double R) {
  ImageChain out;
  out.seq = seq;
  out.requested_radius = R;
  out.stages.reserve(seq.size() + 1);
  chain_scan(seq, R, [&](const StageView& s) {
    if (s.flat == nullptr) {
      out.stages.push_back(integer_ball(s.trusted_radius, s.dim));
    } else {
      std::vector<std::int64_t> pts(s.count * static_cast<std::size_t>(s.dim));
      std::copy(s.flat, s.flat + pts.size(), pts.begin());
      out.stages.emplace_back(s.dim, s.trusted_radius, std::move(pts));
    }
  });
  return out;
}

Raster rotate_raster(const Raster& src, const IsometrySequence& seq, RotateStats* stats) {
  seq.validate();
  if (seq.dim() != 2) throw std::domain_error("rotate_raster: two-dimensional sequences only");
  const int W = src.width;
  const int H = src.height;
  const int C = src.channels;
  const int k = static_cast<int>(seq.size());
  const std::int64_t cx = (W - 1) / 2;
  const std::int64_t cy = (H - 1) / 2;

  // Farthest frame pixel from the center in either axis, plus unit margin.
  const double f0 = static_cast<double>(
      std::max({cx, static_cast<std::int64_t>(W) - 1 - cx, cy, static_cast<std::int64_t>(H) - 1 - cy}));
  const double frame_r = f0 + 1.0;
  const double rsrc = safe_window_radius(frame_r, k, 2);
  const std::int64_t A = static_cast<std::int64_t>(std::ceil(rsrc)) - 1;

  const auto steps = step_matrices(seq);

  Raster dst = make_raster(W, H, C);
  std::fill(dst.data.begin(), dst.data.end(), std::uint8_t{255});
  std::vector<std::uint32_t> hits(static_cast<std::size_t>(W) * static_cast<std::size_t>(H), 0);

  // Row-major source sweep; on landing collisions the later source wins.
  for (std::int64_t sy = -A; sy <= A; ++sy) {
    for (std::int64_t sx = -A; sx <= A; ++sx) {
      double px = static_cast<double>(sx);
      double py = static_cast<double>(sy);
      for (int j = 0; j < k; ++j) {
        const double* m = steps[static_cast<std::size_t>(j)].data();
        const double nx = std::ceil(m[0] * px + m[1] * py - 0.5);
        const double ny = std::ceil(m[2] * px + m[3] * py - 0.5);
        px = nx;
        py = ny;
      }
      const std::int64_t dxp = cx + static_cast<std::int64_t>(px);
      const std::int64_t dyp = cy + static_cast<std::int64_t>(py);
      if (dxp < 0 || dxp >= W || dyp < 0 || dyp >= H) continue;
      const std::size_t di = (static_cast<std::size_t>(dyp) * static_cast<std::size_t>(W) +
                              static_cast<std::size_t>(dxp));
      ++hits[di];
      const std::int64_t spx = cx + sx;
      const std::int64_t spy = cy + sy;
      std::uint8_t* outp = dst.data.data() + di * static_cast<std::size_t>(C);
      if (spx >= 0 && spx < W && spy >= 0 && spy < H) {
        const std::uint8_t* inp = src.data.data() +
                                  (static_cast<std::size_t>(spy) * static_cast<std::size_t>(W) +
                                   static_cast<std::size_t>(spx)) *
                                      static_cast<std::size_t>(C);
        std::memcpy(outp, inp, static_cast<std::size_t>(C));
      } else {
        std::memset(outp, 255, static_cast<std::size_t>(C));
      }
    }
  }

  if (stats != nullptr) {
    const double total = static_cast<double>(hits.size());
    std::size_t holes = 0;
    std::uint64_t extra = 0;
    for (const std::uint32_t h : hits) {
      if (h == 0)
        ++holes;
      else
        extra += h - 1;
    }
    stats->hole_fraction = static_cast<double>(holes) / total;
    stats->collision_fraction = static_cast<double>(extra) / total;
    stats->step_density.assign(static_cast<std::size_t>(k) + 1, 0.0);
    const double card = lattice_ball_card(frame_r, 2);
    chain_scan(seq, frame_r, [&](const StageView& s) {
      stats->step_density[static_cast<std::size_t>(s.k)] =
          static_cast<double>(s.count_in_ball(frame_r)) / card;
    });
  }
  return dst;
}

}  // namespace isolat
