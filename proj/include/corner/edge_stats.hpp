#pragma once

#include <cstddef>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "corner/corner_spectra.hpp"

namespace corner {

enum class Side { left, right };
Side parse_side(std::string_view name);
const char* side_name(Side side) noexcept;

// Gamma law with shape beta/2 and rate beta/2 (mean 1): the limit of the
// rescaled adjacent-level spacings and of the border weights.
struct GammaLaw {
  int beta = 2;

  double shape() const noexcept { return 0.5 * beta; }
  double rate() const noexcept { return 0.5 * beta; }
  double normalizer() const;  // (beta/2)^(beta/2) / Gamma(beta/2)
  double density(double x) const;
  double cdf(double x) const;
};

// P(X <= x) for X ~ Gamma(beta/2, rate beta/2); 0 for x < 0.
double gamma_cdf(double x, int beta);

// Row-major ell x k array.
struct EdgeGrid {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  EdgeGrid() = default;
  EdgeGrid(std::size_t r, std::size_t c) : rows(r), cols(c), values(r * c, 0.0) {}
  double& at(std::size_t i, std::size_t s) { return values[i * cols + s]; }
  double at(std::size_t i, std::size_t s) const { return values[i * cols + s]; }
};

// N^(1/6) (lambda_i + 2 sqrt(N)) for i = 1..ell on level 0 (left), or the same
// for -lambda_{N+1-i} (right). ArgumentError if ell > N.
std::vector<double> edge_rescaled_extremes(const CornerProcess& cp, std::size_t ell, Side side);

// sqrt(N) (lambda_i^(s) - lambda_i^(s+1)), i = 1..ell, s = 0..k-1; the right
// edge uses the reflected spectra.
EdgeGrid adjacent_level_spacings(const CornerProcess& cp, std::size_t ell, Side side);

// Border weights gamma_i^(s) matching the spacing entries.
EdgeGrid spacing_weights(const CornerProcess& cp, std::size_t ell, Side side);

// Entrywise sqrt(N) * spacing - weight.
EdgeGrid spacing_approx_residual(const CornerProcess& cp, std::size_t ell, Side side = Side::left);

// Error functional of the master equation near the left edge:
//   E(z) = corner - (z + 2 sqrt(N)) - (sum_{j != i-1, i} w_j / (lambda_j - z) - sqrt(N))
// with N = level.size() - level.s and i one-based. ArgumentError unless
// lambda_{i-1} < z < lambda_i (lambda_0 = -inf).
double edge_error_term(const SpectralLevel& level, const BorderData& border, double z,
                       std::size_t i);

// Default evaluation point: the gap midpoint, or for i = 1 the point half a
// gap (lambda_2 - lambda_1) to the left of lambda_1.
double edge_error_point(const SpectralLevel& level, std::size_t i);

struct EdgeSampleSet {
  std::size_t trials = 0;
  std::size_t ell = 0;
  std::size_t k = 0;
  Side side = Side::left;
  std::vector<std::vector<double>> tw;  // per trial, length ell
  std::vector<EdgeGrid> spacing;        // per trial, ell x k
  std::vector<EdgeGrid> weight;
  std::vector<EdgeGrid> residual;

  void append(const CornerProcess& cp);
  // Appends the trials of another set with the same shape.
  void extend(const EdgeSampleSet& other);
  // Column (i, s) of the spacing array across trials; i is zero-based.
  std::vector<double> spacing_column(std::size_t i, std::size_t s) const;
  std::vector<double> weight_column(std::size_t i, std::size_t s) const;
  std::vector<double> residual_column(std::size_t i, std::size_t s) const;
  std::vector<double> tw_column(std::size_t i) const;
};

// Columns trial, side, i, s, tw_value, spacing, weight, residual; tw_value is
// only filled on s = 0 rows. i is one-based.
void write_csv(std::ostream& out, const EdgeSampleSet& set);

}  // namespace corner
