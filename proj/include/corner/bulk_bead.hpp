#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "corner/corner_spectra.hpp"

namespace corner {

// Finite window of rescaled bulk points. Labels are contiguous; the first
// point at or right of the origin carries label 0 (mu_{-1} < 0 <= mu_0).
struct PointConfiguration {
  std::vector<double> points;  // ascending, all strictly inside (-window, window)
  long first_label = 0;
  double window = std::numeric_limits<double>::infinity();
  double energy = std::numeric_limits<double>::quiet_NaN();
  long origin_index = -1;  // one-based j^(s) in the source level, -1 if unknown
  std::size_t n = 0;       // source dimension N, 0 for abstract configurations
  double buffer = 5.0;     // boundary layer excluded from statistics

  // Sorts, drops points outside the window and anchors the labels.
  static PointConfiguration from_points(std::vector<double> pts, double window,
                                        double energy = std::numeric_limits<double>::quiet_NaN(),
                                        std::size_t n = 0);

  std::size_t size() const noexcept { return points.size(); }
  long label(std::size_t idx) const noexcept { return first_label + static_cast<long>(idx); }
  // #{mu_j in [a, b]}.
  std::size_t count_in(double a, double b) const;
  // Labeling convention and ordering hold.
  bool anchored() const;
  // Point lies within `buffer` of the window boundary.
  bool is_boundary(std::size_t idx) const;
  PointConfiguration restricted(double w) const;
  // max over integer x in [1, min(window, x_max)] of
  // max(|#[0,x] - x/2pi|, |#[-x,0] - x/2pi|) / (1 + x)^(3/4).
  double density_ratio(double x_max = std::numeric_limits<double>::infinity()) const;
  bool satisfies_density(double c = 3.0) const { return density_ratio() <= c; }
};

struct WeightSequence {
  std::vector<double> gamma;
  int beta = 2;

  // Smallest and largest average over consecutive blocks of `block` labels.
  std::pair<double, double> block_average_range(std::size_t block = 50) const;
  bool windowed_average_ok(std::size_t block = 50) const;
};

struct BeadLevel {
  PointConfiguration config;
  WeightSequence weights;
  double h = 0.0;
  std::size_t step = 0;

  // ArgumentError unless h is finite and weights are positive and match the
  // points one to one.
  void validate() const;
};

// -E / (2 sqrt(4 - E^2)); ArgumentError unless |E| < 2.
double bulk_level_constant(double E);
// Principal value of int rho_sc(x) / (x - E) dx by symmetric excision around E
// and adaptive quadrature; equals -E/2.
double semicircle_pv_quadrature(double E);
// |bulk_level_constant(E) - pv / sqrt(4 - E^2)| <= tol.
bool bulk_level_constant_self_test(double E, double tol = 1e-6);

// int_a^b rho_sc(x) / (x - y) dx for y outside [a, b], closed form.
double semicircle_stieltjes_segment(double a, double b, double y);

// mu_j = sqrt(N (4 - E^2)) (lambda_{j + j^(s)} - E sqrt(N)) with N the level-0
// dimension (level.size() - level.s), keeping |mu_j| < W. ExtractionError if
// no eigenvalue reaches E sqrt(N).
PointConfiguration bulk_window_extract(const SpectralLevel& level, double E, double W);

// Border weights relabeled to match a configuration extracted from `level`.
WeightSequence relabel_weights(const PointConfiguration& config, const BorderData& border,
                               int beta);

enum class StieltjesMode { raw, compensated };

// Raw: sum_j gamma_j / (mu_j - z). Compensated adds the contribution of the
// points outside the window: the semicircle integral over the excised
// macroscopic region for finite-N configurations, or a uniform density 1/2pi
// continuum for abstract ones. PoleError if z hits a point.
double weighted_stieltjes(const BeadLevel& bl, double z, StieltjesMode mode);

enum class BeadMode {
  // S(z) = h on the given points only; one root per interior gap plus an
  // outer root on the right if h < 0, on the left if h > 0.
  windowed,
  // Window padded by unit-weight lattice points 2 pi j out to pad_ratio * W,
  // continued by a uniform-density tail; roots reported inside the window.
  padded,
  // Finite-N master equation with all N + s points:
  //   corner / c - z / c^2 - E / sqrt(4 - E^2) - sum_j gamma_j / (mu_j - z) = 0,
  // c = sqrt(N (4 - E^2)).
  finite_n,
};

struct BeadOptions {
  BeadMode mode = BeadMode::windowed;
  double pad_ratio = 10.0;
  double corner_entry = 0.0;  // finite_n only
};

// One application of the bead operator; the result is relabeled and
// restricted to the input window.
PointConfiguration bead_step(const BeadLevel& bl, const BeadOptions& opts = {});

struct ChainRun {
  double energy = 0.0;
  double h = 0.0;
  int beta = 2;
  std::uint64_t seed = 0;
  std::vector<PointConfiguration> levels;  // levels[0] is the initial configuration
  std::vector<std::vector<double>> weights;  // weights[t] moves levels[t] to levels[t+1]
};

// Iterates bead_step with fresh Gamma(beta/2, rate beta/2) weights at each
// step and h fixed. Deterministic in (init, seed, trial). ArgumentError if
// steps == 0.
ChainRun bead_chain(const BeadLevel& init, std::size_t steps, std::uint64_t seed,
                    std::uint64_t trial = 0, const BeadOptions& opts = {BeadMode::padded});

// {E, h, beta, W, steps, seed, levels:[{step, points, weights}]}
nlohmann::json to_json(const ChainRun& run);

struct CountingRow {
  std::size_t step = 0;
  double x = 0.0;
  double count = 0.0;  // mean over trials of #{mu_j in [0, x]}
  double expected = 0.0;
  double deviation = 0.0;
};

// configs[trial][step]; x runs over 1, 2, ..., floor(W - buffer).
std::vector<CountingRow> counting_table(std::span<const std::vector<PointConfiguration>> configs);
// Columns step, x, count, expected, deviation.
void write_counting_csv(std::ostream& out, std::span<const CountingRow> rows);

}  // namespace corner
