#pragma once

#include <functional>
#include <limits>
#include <span>
#include <utility>
#include <vector>

namespace corner {

// Smooth nondecreasing background term g(z) with its derivative g'(z).
using Background = std::function<std::pair<double, double>(double)>;

// F(z) = shift - slope * z - g(z) - sum_j weights[j] / (poles[j] - z).
//
// With slope >= 0 and g nondecreasing, F is strictly decreasing between
// consecutive poles, running from +inf to -inf, so each interior gap holds
// exactly one root. The rank-one border update (shift = corner entry,
// slope = 1) has a root in both unbounded gaps as well; the level-set
// problem S(z) = h (slope = 0, shift = h) has an outer root only on the
// side fixed by the sign of h.
struct SecularEquation {
  std::span<const double> poles;    // ascending
  std::span<const double> weights;  // nonnegative, same length as poles
  double shift = 0.0;
  double slope = 0.0;
  Background background;            // optional; disables outer roots
};

struct SecularOptions {
  // Weights below deflation_tol * sum(weights) pin their root to the pole.
  double deflation_tol = 1e3 * std::numeric_limits<double>::epsilon();
  // Only gaps meeting the open interval (z_min, z_max) are solved.
  double z_min = -std::numeric_limits<double>::infinity();
  double z_max = std::numeric_limits<double>::infinity();
  int max_iterations = 400;
};

struct SecularStats {
  std::size_t deflated = 0;
  std::size_t iterations = 0;
};

// Sorted roots of F. Throws NumericalError naming the gap if a bracket cannot
// be established.
std::vector<double> solve_secular(const SecularEquation& eq,
                                  const SecularOptions& opts = {},
                                  SecularStats* stats = nullptr);

double secular_value(const SecularEquation& eq, double z);
double secular_derivative(const SecularEquation& eq, double z);

}  // namespace corner
