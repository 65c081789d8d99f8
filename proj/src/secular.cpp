#include "corner/secular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "corner/error.hpp"

namespace corner {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Active {
  std::vector<double> poles;
  std::vector<double> weights;
  std::vector<double> pinned;  // roots sitting exactly on a pole
};

Active deflate(const SecularEquation& eq, const SecularOptions& opts) {
  Active a;
  const double total = std::accumulate(eq.weights.begin(), eq.weights.end(), 0.0);
  const double floor = opts.deflation_tol * total;
  for (std::size_t j = 0; j < eq.poles.size(); ++j) {
    const double d = eq.poles[j];
    const double w = eq.weights[j];
    if (!(w > floor) || w <= 0.0) {
      a.pinned.push_back(d);
      continue;
    }
    if (!a.poles.empty()) {
      const double prev = a.poles.back();
      const double scale = std::max(std::abs(prev), std::abs(d));
      if (d - prev <= 4.0 * kEps * scale) {
        // Coincident poles: the two terms collapse into one and a root stays
        // on the pole.
        a.weights.back() += w;
        a.pinned.push_back(d);
        continue;
      }
    }
    a.poles.push_back(d);
    a.weights.push_back(w);
  }
  return a;
}

// Shifted evaluation around `origin`: delta[j] = poles[j] - origin.
struct ShiftedSum {
  const std::vector<double>& delta;
  const std::vector<double>& weights;
  double shift;  // a - b * origin
  double slope;
  double origin;
  const Background& background;

  // R(tau) and R'(tau), skipping poles in [skip_lo, skip_hi].
  void remainder(double tau, std::size_t skip_lo, std::size_t skip_hi, double& r,
                 double& dr) const {
    double sum = 0.0;
    double dsum = 0.0;
    for (std::size_t j = 0; j < delta.size(); ++j) {
      if (j >= skip_lo && j <= skip_hi) continue;
      const double inv = 1.0 / (delta[j] - tau);
      sum += weights[j] * inv;
      dsum += weights[j] * inv * inv;
    }
    r = shift - slope * tau - sum;
    dr = -slope - dsum;
    if (background) {
      auto [g, dg] = background(origin + tau);
      r -= g;
      dr -= dg;
    }
  }
};

// Safeguarded Newton-bisection on a pole-free function G with G(lo) > 0 > G(hi).
template <class Eval>
double bracketed_newton(Eval&& eval, double lo, double hi, int max_it,
                        std::size_t& iterations) {
  double tau = 0.5 * (lo + hi);
  double width_before = hi - lo;
  for (int it = 0; it < max_it; ++it) {
    ++iterations;
    auto [g, dg] = eval(tau);
    if (g == 0.0) return tau;
    if (g > 0.0)
      lo = tau;
    else
      hi = tau;
    const double width = hi - lo;
    if (width <= 2.0 * kEps * std::max(std::abs(lo), std::abs(hi)) || width == 0.0)
      return 0.5 * (lo + hi);
    double next = (dg != 0.0) ? tau - g / dg : lo;
    const bool stalled = (it % 2 == 1) && width > 0.5 * width_before;
    if (it % 2 == 1) width_before = width;
    if (!(next > lo && next < hi) || stalled) {
      next = 0.5 * (lo + hi);
    } else if (std::abs(next - tau) <= 2.0 * kEps * std::abs(next)) {
      return next;
    }
    tau = next;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double secular_value(const SecularEquation& eq, double z) {
  double sum = 0.0;
  for (std::size_t j = 0; j < eq.poles.size(); ++j) sum += eq.weights[j] / (eq.poles[j] - z);
  double v = eq.shift - eq.slope * z - sum;
  if (eq.background) v -= eq.background(z).first;
  return v;
}

double secular_derivative(const SecularEquation& eq, double z) {
  double dsum = 0.0;
  for (std::size_t j = 0; j < eq.poles.size(); ++j) {
    const double inv = 1.0 / (eq.poles[j] - z);
    dsum += eq.weights[j] * inv * inv;
  }
  double d = -eq.slope - dsum;
  if (eq.background) d -= eq.background(z).second;
  return d;
}

std::vector<double> solve_secular(const SecularEquation& eq, const SecularOptions& opts,
                                  SecularStats* stats) {
  if (eq.poles.size() != eq.weights.size())
    throw ArgumentError("solve_secular: poles and weights differ in length");
  if (eq.slope < 0.0) throw ArgumentError("solve_secular: slope must be nonnegative");

  Active act = deflate(eq, opts);
  std::size_t iterations = 0;
  std::vector<double> roots;
  const auto in_range = [&](double lo, double hi) { return lo < opts.z_max && hi > opts.z_min; };
  for (double p : act.pinned)
    if (p >= opts.z_min && p <= opts.z_max) roots.push_back(p);

  const std::size_t m = act.poles.size();
  const bool outer_allowed = !eq.background;

  if (m == 0) {
    if (eq.slope > 0.0 && outer_allowed) {
      const double r = eq.shift / eq.slope;
      if (r >= opts.z_min && r <= opts.z_max) roots.push_back(r);
    }
    std::sort(roots.begin(), roots.end());
    if (stats) *stats = {act.pinned.size(), 0};
    return roots;
  }

  std::vector<double> delta(m);
  auto shifted = [&](std::size_t origin_index) {
    const double origin = act.poles[origin_index];
    for (std::size_t j = 0; j < m; ++j) delta[j] = act.poles[j] - origin;
    delta[origin_index] = 0.0;
    return ShiftedSum{delta, act.weights, eq.shift - eq.slope * origin, eq.slope, origin,
                      eq.background};
  };
  const double spread = act.poles.back() - act.poles.front();
  const double scale = std::max({spread, std::abs(act.poles.front()),
                                 std::abs(act.poles.back()), 1.0});

  // Interior gaps.
  for (std::size_t k = 0; k + 1 < m; ++k) {
    const double dl = act.poles[k];
    const double dr = act.poles[k + 1];
    if (!in_range(dl, dr)) continue;
    const double mid = dl + 0.5 * (dr - dl);
    const double fmid = secular_value(
        {act.poles, act.weights, eq.shift, eq.slope, eq.background}, mid);
    if (fmid == 0.0) {
      roots.push_back(mid);
      continue;
    }
    const std::size_t origin_index = fmid > 0.0 ? k + 1 : k;
    ShiftedSum s = shifted(origin_index);
    const double lo_d = delta[k];
    const double hi_d = delta[k + 1];
    const double wl = act.weights[k];
    const double wr = act.weights[k + 1];
    // G = (tau - lo_d)(hi_d - tau) F, which is finite at both poles.
    auto eval = [&](double tau) {
      double r, drv;
      s.remainder(tau, k, k + 1, r, drv);
      const double a = tau - lo_d;
      const double b = hi_d - tau;
      const double g = a * b * r + wl * b - wr * a;
      const double dg = (b - a) * r + a * b * drv - wl - wr;
      return std::pair{g, dg};
    };
    const double mid_tau = mid - s.origin;
    double lo = origin_index == k ? 0.0 : mid_tau;
    double hi = origin_index == k ? mid_tau : 0.0;
    const double tau = bracketed_newton(eval, lo, hi, opts.max_iterations, iterations);
    if (!std::isfinite(tau))
      throw NumericalError("secular root not bracketed in gap " + std::to_string(k),
                           static_cast<std::ptrdiff_t>(k));
    roots.push_back(s.origin + tau);
  }

  if (outer_allowed) {
    // Right unbounded gap: F runs from +inf down to shift - slope * z.
    if (act.poles.back() < opts.z_max && (eq.slope > 0.0 || eq.shift < 0.0)) {
      ShiftedSum s = shifted(m - 1);
      const double w = act.weights[m - 1];
      auto eval = [&](double tau) {
        double r, drv;
        s.remainder(tau, m - 1, m - 1, r, drv);
        return std::pair{tau * r + w, r + tau * drv};
      };
      double lo = 0.0;
      double hi = scale;
      int grow = 0;
      while (eval(hi).first >= 0.0) {
        lo = hi;
        hi *= 2.0;
        if (++grow > 2000 || !std::isfinite(hi))
          throw NumericalError("secular root not bracketed in right outer gap",
                               static_cast<std::ptrdiff_t>(m));
      }
      roots.push_back(s.origin + bracketed_newton(eval, lo, hi, opts.max_iterations, iterations));
    }
    // Left unbounded gap: F runs from shift - slope * z down to -inf.
    if (act.poles.front() > opts.z_min && (eq.slope > 0.0 || eq.shift > 0.0)) {
      ShiftedSum s = shifted(0);
      const double w = act.weights[0];
      auto eval = [&](double tau) {
        double r, drv;
        s.remainder(tau, 0, 0, r, drv);
        return std::pair{-tau * r - w, -r - tau * drv};
      };
      double hi = 0.0;
      double lo = -scale;
      int grow = 0;
      while (eval(lo).first <= 0.0) {
        hi = lo;
        lo *= 2.0;
        if (++grow > 2000 || !std::isfinite(lo))
          throw NumericalError("secular root not bracketed in left outer gap", 0);
      }
      roots.push_back(s.origin + bracketed_newton(eval, lo, hi, opts.max_iterations, iterations));
    }
  }

  std::sort(roots.begin(), roots.end());
  if (stats) *stats = {act.pinned.size(), iterations};
  return roots;
}

}  // namespace corner
