#include "corner/bulk_bead.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <nlohmann/json.hpp>

#include "corner/error.hpp"
#include "corner/format.hpp"
#include "corner/rng.hpp"
#include "corner/secular.hpp"

namespace corner {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long anchor_label(const std::vector<double>& sorted) {
  const auto first_nonneg = std::lower_bound(sorted.begin(), sorted.end(), 0.0);
  return -static_cast<long>(first_nonneg - sorted.begin());
}

// Antiderivative of sqrt(4 - x^2) / (x - y) in x, valid on [-2, 2] away from
// x = y, for |y| < 2.
double stieltjes_antiderivative(double x, double y) {
  x = std::clamp(x, -2.0, 2.0);
  const double sy = std::sqrt(4.0 - y * y);
  const double sx = std::sqrt(std::max(0.0, 4.0 - x * x));
  const double arg = (4.0 - x * y + sy * sx) / (x - y);
  return -sy * std::log(std::abs(arg)) + sx - y * std::asin(x / 2.0);
}

}  // namespace

PointConfiguration PointConfiguration::from_points(std::vector<double> pts, double window,
                                                   double energy, std::size_t n) {
  if (!(window > 0.0)) throw ArgumentError("window must be positive");
  std::sort(pts.begin(), pts.end());
  PointConfiguration c;
  c.window = window;
  c.energy = energy;
  c.n = n;
  c.points.reserve(pts.size());
  for (double p : pts)
    if (std::abs(p) < window) c.points.push_back(p);
  c.first_label = anchor_label(c.points);
  return c;
}

std::size_t PointConfiguration::count_in(double a, double b) const {
  if (a > b) return 0;
  const auto lo = std::lower_bound(points.begin(), points.end(), a);
  const auto hi = std::upper_bound(points.begin(), points.end(), b);
  return static_cast<std::size_t>(hi - lo);
}

bool PointConfiguration::anchored() const {
  if (!std::is_sorted(points.begin(), points.end())) return false;
  for (double p : points)
    if (!(std::abs(p) < window)) return false;
  return first_label == anchor_label(points);
}

bool PointConfiguration::is_boundary(std::size_t idx) const {
  return std::abs(points.at(idx)) > window - buffer;
}

PointConfiguration PointConfiguration::restricted(double w) const {
  PointConfiguration c = from_points(points, std::min(w, window), energy, n);
  c.origin_index = origin_index;
  c.buffer = buffer;
  return c;
}

double PointConfiguration::density_ratio(double x_max) const {
  double reach = std::min(window, x_max);
  if (std::isinf(reach)) {
    reach = 0.0;
    for (double p : points) reach = std::max(reach, std::abs(p));
  }
  double worst = 0.0;
  for (double x = 1.0; x <= reach; x += 1.0) {
    const double expected = x / kTwoPi;
    const double right = std::abs(static_cast<double>(count_in(0.0, x)) - expected);
    const double left = std::abs(static_cast<double>(count_in(-x, 0.0)) - expected);
    worst = std::max(worst, std::max(left, right) / std::pow(1.0 + x, 0.75));
  }
  return worst;
}

std::pair<double, double> WeightSequence::block_average_range(std::size_t block) const {
  if (block == 0 || gamma.size() < block) throw ArgumentError("block longer than the sequence");
  double sum = 0.0;
  for (std::size_t j = 0; j < block; ++j) sum += gamma[j];
  double lo = sum, hi = sum;
  for (std::size_t j = block; j < gamma.size(); ++j) {
    sum += gamma[j] - gamma[j - block];
    lo = std::min(lo, sum);
    hi = std::max(hi, sum);
  }
  return {lo / static_cast<double>(block), hi / static_cast<double>(block)};
}

bool WeightSequence::windowed_average_ok(std::size_t block) const {
  if (gamma.size() < block) return true;
  auto [lo, hi] = block_average_range(block);
  return lo >= 0.7 && hi <= 1.3;
}

void BeadLevel::validate() const {
  if (!std::isfinite(h)) throw ArgumentError("bead level: h must be finite");
  if (weights.gamma.size() != config.size())
    throw ArgumentError("bead level: " + std::to_string(weights.gamma.size()) + " weights for " +
                        std::to_string(config.size()) + " points");
  for (double g : weights.gamma)
    if (!(g > 0.0) || !std::isfinite(g)) throw ArgumentError("bead level: weights must be positive");
  if (std::isfinite(config.energy) && std::abs(h - bulk_level_constant(config.energy)) > 1e-14)
    throw ArgumentError("bead level: h does not match the level constant of the energy");
}

double bulk_level_constant(double E) {
  if (!(std::abs(E) < 2.0)) throw ArgumentError("energy must lie in (-2, 2)");
  if (E == 0.0) return 0.0;
  return -E / (2.0 * std::sqrt(4.0 - E * E));
}

double semicircle_pv_quadrature(double E) {
  if (!(std::abs(E) < 2.0)) throw ArgumentError("energy must lie in (-2, 2)");
  boost::math::quadrature::tanh_sinh<double> q;
  const double d = std::min(2.0 - E, E + 2.0);
  // Pair x = E + t with x = E - t so the singularity cancels.
  const double paired = q.integrate(
      [E](double t) {
        if (t <= 0.0) return 0.0;
        return (semicircle_density(E + t) - semicircle_density(E - t)) / t;
      },
      0.0, d);
  double rest = 0.0;
  if (E + d < 2.0) {
    rest = q.integrate([E](double x) { return semicircle_density(x) / (x - E); }, E + d, 2.0);
  } else if (E - d > -2.0) {
    rest = q.integrate([E](double x) { return semicircle_density(x) / (x - E); }, -2.0, E - d);
  }
  return paired + rest;
}

bool bulk_level_constant_self_test(double E, double tol) {
  const double pv = semicircle_pv_quadrature(E) / std::sqrt(4.0 - E * E);
  return std::abs(bulk_level_constant(E) - pv) <= tol;
}

double semicircle_stieltjes_segment(double a, double b, double y) {
  a = std::max(a, -2.0);
  b = std::min(b, 2.0);
  if (!(a < b)) return 0.0;
  if (y > a && y < b) throw ArgumentError("stieltjes segment: y inside the segment");
  if (std::abs(y) < 2.0)
    return (stieltjes_antiderivative(b, y) - stieltjes_antiderivative(a, y)) / kTwoPi;
  boost::math::quadrature::tanh_sinh<double> q;
  return q.integrate([y](double x) { return semicircle_density(x) / (x - y); }, a, b);
}

PointConfiguration bulk_window_extract(const SpectralLevel& level, double E, double W) {
  if (!(std::abs(E) < 2.0)) throw ArgumentError("energy must lie in (-2, 2)");
  if (!(W > 0.0)) throw ArgumentError("window must be positive");
  if (level.size() <= level.s) throw ArgumentError("level has no level-0 dimension");
  const std::size_t n = level.size() - level.s;
  const double center = E * std::sqrt(static_cast<double>(n));
  const double c = std::sqrt(static_cast<double>(n) * (4.0 - E * E));
  const auto& ev = level.eigenvalues;
  const auto it = std::lower_bound(ev.begin(), ev.end(), center);
  if (it == ev.end())
    throw ExtractionError("no eigenvalue at or right of E sqrt(N) on level " +
                          std::to_string(level.s));
  const std::size_t origin = static_cast<std::size_t>(it - ev.begin());
  PointConfiguration cfg;
  cfg.window = W;
  cfg.energy = E;
  cfg.n = n;
  cfg.origin_index = static_cast<long>(origin) + 1;
  long first = 0;
  bool have_first = false;
  for (std::size_t j = 0; j < ev.size(); ++j) {
    const double mu = c * (ev[j] - center);
    if (!(std::abs(mu) < W)) continue;
    if (!have_first) {
      first = static_cast<long>(j) - static_cast<long>(origin);
      have_first = true;
    }
    cfg.points.push_back(mu);
  }
  cfg.first_label = have_first ? first : 0;
  return cfg;
}

WeightSequence relabel_weights(const PointConfiguration& config, const BorderData& border,
                               int beta) {
  if (config.origin_index < 1) throw ArgumentError("configuration carries no origin index");
  WeightSequence ws;
  ws.beta = beta;
  ws.gamma.reserve(config.size());
  for (std::size_t idx = 0; idx < config.size(); ++idx) {
    const long j = config.origin_index - 1 + config.label(idx);
    if (j < 0 || static_cast<std::size_t>(j) >= border.weights.size())
      throw ArgumentError("border weights do not cover the configuration");
    ws.gamma.push_back(border.weights[static_cast<std::size_t>(j)]);
  }
  return ws;
}

double weighted_stieltjes(const BeadLevel& bl, double z, StieltjesMode mode) {
  const auto& pts = bl.config.points;
  const auto& g = bl.weights.gamma;
  if (g.size() != pts.size()) throw ArgumentError("weights do not match points");
  const double tol = 1e-13 * std::max(1.0, std::abs(z));
  double sum = 0.0;
  for (std::size_t j = 0; j < pts.size(); ++j) {
    const double d = pts[j] - z;
    if (std::abs(d) <= tol)
      throw PoleError("stieltjes transform evaluated on the point with label " +
                          std::to_string(bl.config.label(j)),
                      bl.config.label(j));
    sum += g[j] / d;
  }
  if (mode == StieltjesMode::raw) return sum;

  const double W = bl.config.window;
  if (std::isinf(W)) return sum;
  if (!(std::abs(z) < W)) throw ArgumentError("compensated transform needs |z| < W");
  if (bl.config.n == 0) return sum + std::log((W + z) / (W - z)) / kTwoPi;

  const double E = bl.config.energy;
  if (!(std::abs(E) < 2.0)) throw ArgumentError("compensated transform needs energy metadata");
  const double root = std::sqrt(4.0 - E * E);
  const double scale = static_cast<double>(bl.config.n) * root;
  const double delta = W / scale;
  const double y = E + z / scale;
  const double tail = semicircle_stieltjes_segment(-2.0, E - delta, y) +
                      semicircle_stieltjes_segment(E + delta, 2.0, y);
  return sum + tail / root;
}

PointConfiguration bead_step(const BeadLevel& bl, const BeadOptions& opts) {
  bl.validate();
  const PointConfiguration& cfg = bl.config;
  SecularEquation eq;
  SecularOptions sopts;
  std::vector<double> poles;
  std::vector<double> weights;

  switch (opts.mode) {
    case BeadMode::windowed: {
      eq.poles = cfg.points;
      eq.weights = bl.weights.gamma;
      eq.shift = bl.h;
      break;
    }
    case BeadMode::padded: {
      const double W = cfg.window;
      if (!std::isfinite(W)) throw ArgumentError("padded bead step needs a finite window");
      if (!(opts.pad_ratio > 1.0)) throw ArgumentError("pad ratio must exceed 1");
      const long j_lo = static_cast<long>(std::ceil(W / kTwoPi));
      const long j_hi = static_cast<long>(std::floor(opts.pad_ratio * W / kTwoPi));
      for (long j = j_hi; j >= j_lo; --j) {
        poles.push_back(-kTwoPi * static_cast<double>(j));
        weights.push_back(1.0);
      }
      for (std::size_t i = 0; i < cfg.size(); ++i) {
        poles.push_back(cfg.points[i]);
        weights.push_back(bl.weights.gamma[i]);
      }
      for (long j = j_lo; j <= j_hi; ++j) {
        poles.push_back(kTwoPi * static_cast<double>(j));
        weights.push_back(1.0);
      }
      const double R = kTwoPi * static_cast<double>(j_hi) + std::numbers::pi;
      eq.poles = poles;
      eq.weights = weights;
      eq.shift = bl.h;
      eq.background = [R](double z) {
        return std::pair{std::log((R + z) / (R - z)) / kTwoPi,
                         (1.0 / (R + z) + 1.0 / (R - z)) / kTwoPi};
      };
      sopts.z_min = -W;
      sopts.z_max = W;
      break;
    }
    case BeadMode::finite_n: {
      if (cfg.n == 0 || !(std::abs(cfg.energy) < 2.0))
        throw ArgumentError("finite-N bead step needs a configuration extracted from a spectrum");
      const double root = std::sqrt(4.0 - cfg.energy * cfg.energy);
      const double c = std::sqrt(static_cast<double>(cfg.n)) * root;
      eq.poles = cfg.points;
      eq.weights = bl.weights.gamma;
      eq.shift = opts.corner_entry / c - cfg.energy / root;
      eq.slope = 1.0 / (c * c);
      break;
    }
  }

  std::vector<double> roots = solve_secular(eq, sopts);
  PointConfiguration out = PointConfiguration::from_points(std::move(roots), cfg.window,
                                                           cfg.energy, cfg.n);
  out.buffer = cfg.buffer;
  if (opts.mode == BeadMode::finite_n && std::isinf(cfg.window))
    out.origin_index = 1 - out.first_label;
  return out;
}

ChainRun bead_chain(const BeadLevel& init, std::size_t steps, std::uint64_t seed,
                    std::uint64_t trial, const BeadOptions& opts) {
  if (steps == 0) throw ArgumentError("bead chain needs at least one step");
  const int beta = init.weights.beta;
  if (beta != 1 && beta != 2) throw ArgumentError("bead chain: beta must be 1 or 2");
  ChainRun run;
  run.energy = std::isfinite(init.config.energy) ? init.config.energy : 0.0;
  run.h = init.h;
  run.beta = beta;
  run.seed = seed;
  run.levels.reserve(steps + 1);
  run.levels.push_back(init.config);

  CounterRng rng(seed, trial, Stream::chain);
  std::gamma_distribution<double> gamma(0.5 * beta, 2.0 / beta);
  BeadLevel cur = init;
  for (std::size_t t = 0; t < steps; ++t) {
    cur.weights.gamma.resize(cur.config.size());
    for (double& g : cur.weights.gamma) g = gamma(rng);
    cur.step = t;
    PointConfiguration next = bead_step(cur, opts);
    run.weights.push_back(cur.weights.gamma);
    run.levels.push_back(next);
    cur.config = std::move(next);
  }
  return run;
}

nlohmann::json to_json(const ChainRun& run) {
  nlohmann::json j;
  j["E"] = run.energy;
  j["h"] = run.h;
  j["beta"] = run.beta;
  j["W"] = run.levels.empty() || std::isinf(run.levels.front().window)
               ? nlohmann::json(nullptr)
               : nlohmann::json(run.levels.front().window);
  j["steps"] = run.weights.size();
  j["seed"] = run.seed;
  nlohmann::json levels = nlohmann::json::array();
  for (std::size_t t = 0; t < run.levels.size(); ++t) {
    nlohmann::json lv;
    lv["step"] = t;
    lv["points"] = run.levels[t].points;
    lv["weights"] = t < run.weights.size() ? run.weights[t] : std::vector<double>{};
    levels.push_back(std::move(lv));
  }
  j["levels"] = std::move(levels);
  return j;
}

std::vector<CountingRow> counting_table(std::span<const std::vector<PointConfiguration>> configs) {
  if (configs.empty() || configs.front().empty()) return {};
  const std::size_t steps = configs.front().size();
  const PointConfiguration& ref = configs.front().front();
  const double reach = ref.window - ref.buffer;
  if (!std::isfinite(reach)) throw ArgumentError("counting table needs a finite window");
  std::vector<CountingRow> rows;
  for (std::size_t t = 0; t < steps; ++t) {
    for (double x = 1.0; x <= reach; x += 1.0) {
      double total = 0.0;
      for (const auto& trial : configs) {
        if (trial.size() != steps) throw ArgumentError("trials have different chain lengths");
        total += static_cast<double>(trial[t].count_in(0.0, x));
      }
      CountingRow r;
      r.step = t;
      r.x = x;
      r.count = total / static_cast<double>(configs.size());
      r.expected = x / kTwoPi;
      r.deviation = r.count - r.expected;
      rows.push_back(r);
    }
  }
  return rows;
}

void write_counting_csv(std::ostream& out, std::span<const CountingRow> rows) {
  out << "step,x,count,expected,deviation\n";
  for (const auto& r : rows)
    out << r.step << ',' << format_double(r.x) << ',' << format_double(r.count) << ','
        << format_double(r.expected) << ',' << format_double(r.deviation) << '\n';
}

}  // namespace corner
