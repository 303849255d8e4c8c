#include "thinlim/legendre.hpp"

#include <algorithm>
#include <limits>

#include "thinlim/error.hpp"

namespace thinlim {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

struct HullPoint {
  double x, f;
};

// lower hull of finite (x_i, f_i), x ascending
std::vector<HullPoint> lower_hull(std::span<const double> x, std::span<const double> f) {
  std::vector<HullPoint> h;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (is_inf(f[i])) continue;
    const HullPoint p{x[i], f[i]};
    while (h.size() >= 2) {
      const HullPoint& a = h[h.size() - 2];
      const HullPoint& b = h.back();
      // drop b if it lies on or above segment a-p
      if ((b.f - a.f) * (p.x - a.x) >= (p.f - a.f) * (b.x - a.x)) h.pop_back();
      else break;
    }
    h.push_back(p);
  }
  return h;
}

}  // namespace

std::size_t ProductSamples::size() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= a.size();
  return n;
}

std::vector<double> lower_hull_slopes(std::span<const double> x, std::span<const double> f) {
  const auto h = lower_hull(x, f);
  std::vector<double> s;
  for (std::size_t k = 0; k + 1 < h.size(); ++k) s.push_back((h[k + 1].f - h[k].f) / (h[k + 1].x - h[k].x));
  return s;
}

std::vector<double> conjugate_1d(std::span<const double> x, std::span<const double> f, std::span<const double> s) {
  std::vector<double> out(s.size(), kNegInf);
  const auto h = lower_hull(x, f);
  if (h.empty()) return out;
  // walk hull vertices against ascending slopes: vertex k is optimal for
  // slopes between the incoming and outgoing edge slopes
  std::size_t k = 0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    while (k + 1 < h.size() && (h[k + 1].f - h[k].f) <= s[j] * (h[k + 1].x - h[k].x)) ++k;
    out[j] = s[j] * h[k].x - h[k].f;
  }
  return out;
}

ProductSamples sup_transform(const ProductSamples& in, const std::vector<std::vector<double>>& out_axes) {
  const std::size_t d = in.axes.size();
  if (out_axes.size() != d) throw ValidationError("sup_transform: dimension mismatch");
  if (in.values.size() != in.size()) throw ValidationError("sup_transform: value count mismatch");
  ProductSamples cur = in;
  for (std::size_t axis = 0; axis < d; ++axis) {
    ProductSamples next;
    next.axes = cur.axes;
    next.axes[axis] = out_axes[axis];
    next.values.assign(next.size(), kNegInf);
    std::size_t inner = 1;
    for (std::size_t a = axis + 1; a < d; ++a) inner *= cur.axes[a].size();
    std::size_t outer = 1;
    for (std::size_t a = 0; a < axis; ++a) outer *= cur.axes[a].size();
    const std::size_t n_in = cur.axes[axis].size(), n_out = out_axes[axis].size();
    std::vector<double> neg(n_in);
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t i = 0; i < inner; ++i) {
        // w(s) = max_y (s y + v(y)) = (-v)^*(s); -inf entries of v become +inf
        for (std::size_t k = 0; k < n_in; ++k) {
          const double v = cur.values[(o * n_in + k) * inner + i];
          neg[k] = v == kNegInf ? kInf : -v;
        }
        const auto w = conjugate_1d(cur.axes[axis], neg, out_axes[axis]);
        for (std::size_t k = 0; k < n_out; ++k) next.values[(o * n_out + k) * inner + i] = w[k];
      }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace thinlim
