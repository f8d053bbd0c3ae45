#include "isolat/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "isolat/rng.hpp"

namespace isolat {

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double inf_norm_int(std::span<const std::int64_t> v) {
  std::int64_t m = 0;
  for (std::int64_t x : v) m = std::max(m, std::abs(x));
  return static_cast<double>(m);
}

double two_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

double two_norm_int(std::span<const std::int64_t> v) {
  double s = 0.0;
  for (std::int64_t x : v) s += static_cast<double>(x) * static_cast<double>(x);
  return std::sqrt(s);
}

std::int64_t round_half_low(double x) {
  if (!std::isfinite(x)) throw std::domain_error("round_half_low: non-finite input");
  // ceil(x - 1/2) selects the k with k - 1/2 < x <= k + 1/2. The subtraction
  // is exact for |x| below 2^52, far beyond any coordinate this library sees.
  return static_cast<std::int64_t>(std::ceil(x - 0.5));
}

IntPoint project(const RealVec& v) {
  IntPoint out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = round_half_low(v[i]);
  return out;
}

Mat Mat::identity(int dim) {
  Mat m(dim);
  for (int i = 0; i < dim; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat Mat::mul(const Mat& other) const {
  Mat out(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = at(i, k);
      for (int j = 0; j < n; ++j) out.at(i, j) += aik * other.at(k, j);
    }
  return out;
}

Mat Mat::transposed() const {
  Mat out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out.at(j, i) = at(i, j);
  return out;
}

void Mat::apply(const double* x, double* y) const {
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += at(i, j) * x[j];
    y[i] = s;
  }
}

RealVec Mat::apply(const RealVec& x) const {
  if (static_cast<int>(x.size()) != n) throw std::domain_error("Mat::apply: dimension mismatch");
  RealVec y(n);
  apply(x.data(), y.data());
  return y;
}

double Mat::orthogonality_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int k = 0; k < n; ++k) s += at(k, i) * at(k, j);
      worst = std::max(worst, std::abs(s - (i == j ? 1.0 : 0.0)));
    }
  return worst;
}

Isometry::Isometry(Mat m, Provenance prov, std::vector<int> rational_rows)
    : mat_(std::move(m)), prov_(std::move(prov)), rational_rows_(std::move(rational_rows)) {
  if (mat_.n <= 0) throw std::domain_error("Isometry: dimension must be positive");
  for (double x : mat_.a)
    if (!std::isfinite(x)) throw std::domain_error("Isometry: non-finite matrix entry");
  if (mat_.orthogonality_defect() > 1e-12)
    throw std::domain_error("Isometry: matrix is not orthogonal (defect > 1e-12)");
  std::sort(rational_rows_.begin(), rational_rows_.end());
  for (int r : rational_rows_)
    if (r < 0 || r >= mat_.n) throw std::domain_error("Isometry: rational row index out of range");
  if (const auto* py = std::get_if<PythagoreanTag>(&prov_)) {
    if (py->r <= 0 || py->p * py->p + py->q * py->q != py->r * py->r)
      throw std::domain_error("Isometry: not a pythagorean triple");
    if (!all_rows_rational())
      throw std::domain_error("Isometry: pythagorean matrices must mark all rows rational");
  }
}

Isometry make_rotation2d(double theta) {
  if (!std::isfinite(theta)) throw std::domain_error("make_rotation2d: non-finite angle");
  Mat m(2);
  const double half_pi = 1.5707963267948966192313217;
  const double q = theta / half_pi;
  const double qr = std::round(q);
  std::vector<int> rational;
  if (std::abs(q - qr) < 1e-12 && std::abs(qr) < 1e15) {
    // Quarter-turn multiple: snap to the exact signed permutation matrix.
    const int k = static_cast<int>(std::llround(qr)) & 3;
    static const int cs[4] = {1, 0, -1, 0};
    static const int sn[4] = {0, 1, 0, -1};
    m.at(0, 0) = cs[k];
    m.at(0, 1) = -sn[k];
    m.at(1, 0) = sn[k];
    m.at(1, 1) = cs[k];
    rational = {0, 1};
  } else {
    const double c = std::cos(theta), s = std::sin(theta);
    m.at(0, 0) = c;
    m.at(0, 1) = -s;
    m.at(1, 0) = s;
    m.at(1, 1) = c;
  }
  return Isometry(std::move(m), Rotation2DTag{theta}, std::move(rational));
}

Isometry make_pythagorean(std::int64_t p, std::int64_t q, std::int64_t r) {
  if (r <= 0 || p * p + q * q != r * r)
    throw std::domain_error("make_pythagorean: p^2 + q^2 must equal r^2 with r > 0");
  Mat m(2);
  const double rp = static_cast<double>(p) / static_cast<double>(r);
  const double rq = static_cast<double>(q) / static_cast<double>(r);
  m.at(0, 0) = rp;
  m.at(0, 1) = -rq;
  m.at(1, 0) = rq;
  m.at(1, 1) = rp;
  return Isometry(std::move(m), PythagoreanTag{p, q, r}, {0, 1});
}

Isometry sample_isometry(int n, std::uint64_t seed) {
  if (n <= 0) throw std::domain_error("sample_isometry: dimension must be positive");
  rng::Stream stream(seed);
  if (n == 2) {
    const double theta = 6.283185307179586476925287 * stream.uniform01();
    Mat m(2);
    const double c = std::cos(theta), s = std::sin(theta);
    m.at(0, 0) = c;
    m.at(0, 1) = -s;
    m.at(1, 0) = s;
    m.at(1, 1) = c;
    return Isometry(std::move(m), SampledTag{seed}, {});
  }
  // Modified Gram-Schmidt on a standard normal matrix, pivot signs fixed so
  // the draw is a deterministic function of the stream. A second pass keeps
  // the orthogonality defect at machine precision. Near-singular draws are
  // rejected and redrawn from the same stream (measure zero, but deterministic
  // when it happens).
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mat g(n);
    for (double& x : g.a) x = stream.normal();
    bool degenerate = false;
    for (int col = 0; col < n && !degenerate; ++col) {
      for (int pass = 0; pass < 2; ++pass) {
        for (int prev = 0; prev < col; ++prev) {
          double dot = 0.0;
          for (int i = 0; i < n; ++i) dot += g.at(i, col) * g.at(i, prev);
          for (int i = 0; i < n; ++i) g.at(i, col) -= dot * g.at(i, prev);
        }
      }
      double norm = 0.0;
      for (int i = 0; i < n; ++i) norm += g.at(i, col) * g.at(i, col);
      norm = std::sqrt(norm);
      if (norm < 1e-8) {
        degenerate = true;
        break;
      }
      // Sign convention: make the leading nonzero-ish entry of each column
      // positive (equivalent to a positive R diagonal in the QR picture).
      const double sign = g.at(col, col) < 0.0 ? -1.0 : 1.0;
      for (int i = 0; i < n; ++i) g.at(i, col) = g.at(i, col) / norm * sign;
    }
    if (!degenerate) return Isometry(std::move(g), SampledTag{seed}, {});
  }
  throw std::runtime_error("sample_isometry: repeated degenerate draws");
}

void IsometrySequence::validate() const {
  if (n < 1) throw std::domain_error("IsometrySequence: dimension must be >= 1");
  for (const auto& iso : items)
    if (iso.dim() != n)
      throw std::domain_error("IsometrySequence: item dimension mismatch");
}

IsometrySequence IsometrySequence::sample(int n, std::uint64_t master, std::size_t k) {
  IsometrySequence seq;
  seq.n = n;
  seq.master_seed = master;
  seq.items.reserve(k);
  const std::uint64_t chain = rng::substream_seed(master, 0);
  for (std::size_t j = 0; j < k; ++j)
    seq.items.push_back(sample_isometry(n, rng::substream_seed(chain, j)));
  return seq;
}

WindowedSet::WindowedSet(int dim, double trusted_radius, std::vector<std::int64_t> flat_coords)
    : dim_(dim), trusted_(trusted_radius), coords_(std::move(flat_coords)) {
  if (dim_ <= 0) throw std::domain_error("WindowedSet: dimension must be positive");
  if (coords_.size() % static_cast<std::size_t>(dim_) != 0)
    throw std::domain_error("WindowedSet: flat coordinate array does not match dimension");
  count_ = coords_.size() / static_cast<std::size_t>(dim_);
  build_index();
}

void WindowedSet::build_index() {
  lo_.assign(dim_, 0);
  span_.assign(dim_, 1);
  if (count_ == 0) {
    indexed_ = true;
    bits_.clear();
    return;
  }
  std::vector<std::int64_t> hi(dim_, std::numeric_limits<std::int64_t>::min());
  lo_.assign(dim_, std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 0; i < count_; ++i) {
    auto p = point(i);
    for (int d = 0; d < dim_; ++d) {
      lo_[d] = std::min(lo_[d], p[d]);
      hi[d] = std::max(hi[d], p[d]);
    }
  }
  double cells = 1.0;
  for (int d = 0; d < dim_; ++d) {
    span_[d] = hi[d] - lo_[d] + 1;
    cells *= static_cast<double>(span_[d]);
  }
  // Dense bit index; for the window sizes this library works with (a few
  // million to a few hundred million cells) this stays well under RAM.
  if (cells > 4e9) {
    indexed_ = false;
    return;
  }
  const std::size_t ncells = static_cast<std::size_t>(cells);
  bits_.assign((ncells + 63) / 64, 0);
  bool saw_duplicate = false;
  std::vector<std::int64_t> kept;
  for (std::size_t i = 0; i < count_; ++i) {
    auto p = point(i);
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d)
      idx = idx * static_cast<std::size_t>(span_[d]) + static_cast<std::size_t>(p[d] - lo_[d]);
    const std::uint64_t mask = 1ULL << (idx & 63);
    if (bits_[idx >> 6] & mask) {
      if (!saw_duplicate) {
        saw_duplicate = true;
        kept.assign(coords_.begin(), coords_.begin() + static_cast<std::ptrdiff_t>(i) * dim_);
      }
    } else {
      bits_[idx >> 6] |= mask;
      if (saw_duplicate) kept.insert(kept.end(), p.begin(), p.end());
    }
  }
  if (saw_duplicate) {
    coords_ = std::move(kept);
    count_ = coords_.size() / static_cast<std::size_t>(dim_);
  }
  indexed_ = true;
}

bool WindowedSet::contains(std::span<const std::int64_t> p) const {
  if (static_cast<int>(p.size()) != dim_)
    throw std::domain_error("WindowedSet::contains: dimension mismatch");
  if (count_ == 0) return false;
  if (indexed_) {
    std::size_t idx = 0;
    for (int d = 0; d < dim_; ++d) {
      const std::int64_t off = p[d] - lo_[d];
      if (off < 0 || off >= span_[d]) return false;
      idx = idx * static_cast<std::size_t>(span_[d]) + static_cast<std::size_t>(off);
    }
    return (bits_[idx >> 6] >> (idx & 63)) & 1;
  }
  for (std::size_t i = 0; i < count_; ++i) {
    auto q = point(i);
    if (std::equal(q.begin(), q.end(), p.begin())) return true;
  }
  return false;
}

std::size_t WindowedSet::count_in_ball(double r) const {
  std::size_t c = 0;
  for (std::size_t i = 0; i < count_; ++i)
    if (inf_norm_int(point(i)) < r) ++c;
  return c;
}

WindowedSet integer_ball(double R, int n) {
  if (n <= 0) throw std::domain_error("integer_ball: dimension must be positive");
  if (!std::isfinite(R)) throw std::domain_error("integer_ball: non-finite radius");
  const std::int64_t a = R > 0 ? static_cast<std::int64_t>(std::ceil(R)) - 1 : -1;
  if (a < 0) return WindowedSet(n, std::max(R, 0.0), {});
  const double per_axis = static_cast<double>(2 * a + 1);
  double total = 1.0;
  for (int d = 0; d < n; ++d) total *= per_axis;
  if (total > 5e8) throw std::length_error("integer_ball: window too large to enumerate");
  std::vector<std::int64_t> flat;
  flat.reserve(static_cast<std::size_t>(total) * n);
  std::vector<std::int64_t> x(n, -a);
  while (true) {
    flat.insert(flat.end(), x.begin(), x.end());
    int d = n - 1;
    while (d >= 0 && x[d] == a) {
      x[d] = -a;
      --d;
    }
    if (d < 0) break;
    ++x[d];
  }
  return WindowedSet(n, R, std::move(flat));
}

double lattice_ball_card(double R, int n) {
  if (R <= 0) return 0.0;
  const double per_axis = 2.0 * std::ceil(R) - 1.0;
  double total = 1.0;
  for (int d = 0; d < n; ++d) total *= per_axis;
  return total;
}

}  // namespace isolat
