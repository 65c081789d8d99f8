#include "corner/edge_stats.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "corner/error.hpp"
#include "corner/format.hpp"

namespace corner {

Side parse_side(std::string_view name) {
  if (name == "left") return Side::left;
  if (name == "right") return Side::right;
  throw ConfigError("side", "expected left or right, got '" + std::string(name) + "'");
}

const char* side_name(Side side) noexcept { return side == Side::left ? "left" : "right"; }

double GammaLaw::normalizer() const {
  return std::pow(rate(), shape()) / std::tgamma(shape());
}

double GammaLaw::density(double x) const {
  if (x <= 0.0) return 0.0;
  return normalizer() * std::pow(x, shape() - 1.0) * std::exp(-rate() * x);
}

double GammaLaw::cdf(double x) const { return gamma_cdf(x, beta); }

double gamma_cdf(double x, int beta) {
  if (beta != 1 && beta != 2) throw ArgumentError("gamma_cdf: beta must be 1 or 2");
  if (!(x > 0.0)) return 0.0;
  if (std::isinf(x)) return 1.0;
  const double a = 0.5 * beta;
  return boost::math::gamma_p(a, a * x);
}

namespace {

// Value of the i-th (zero-based) extreme of a level seen from `side`: the
// left edge reads lambda_i, the right edge reads -lambda_{n-1-i}.
double reflected(const std::vector<double>& ev, std::size_t i, Side side) {
  return side == Side::left ? ev[i] : -ev[ev.size() - 1 - i];
}

std::size_t reflected_index(std::size_t size, std::size_t i, Side side) {
  return side == Side::left ? i : size - 1 - i;
}

void require_ell(const CornerProcess& cp, std::size_t ell) {
  if (cp.levels.empty()) throw ArgumentError("edge statistics: empty corner process");
  if (ell == 0 || ell > cp.n) throw ArgumentError("edge statistics: need 1 <= ell <= N");
}

}  // namespace

std::vector<double> edge_rescaled_extremes(const CornerProcess& cp, std::size_t ell, Side side) {
  require_ell(cp, ell);
  const double n = static_cast<double>(cp.n);
  const double scale = std::pow(n, 1.0 / 6.0);
  const double edge = 2.0 * std::sqrt(n);
  std::vector<double> out(ell);
  for (std::size_t i = 0; i < ell; ++i)
    out[i] = scale * (reflected(cp.levels[0].eigenvalues, i, side) + edge);
  return out;
}

EdgeGrid adjacent_level_spacings(const CornerProcess& cp, std::size_t ell, Side side) {
  require_ell(cp, ell);
  if (cp.levels.size() < 2) throw ArgumentError("adjacent_level_spacings: need K >= 1");
  const std::size_t k = cp.levels.size() - 1;
  const double root_n = std::sqrt(static_cast<double>(cp.n));
  EdgeGrid g(ell, k);
  for (std::size_t s = 0; s < k; ++s)
    for (std::size_t i = 0; i < ell; ++i)
      g.at(i, s) = root_n * (reflected(cp.levels[s].eigenvalues, i, side) -
                             reflected(cp.levels[s + 1].eigenvalues, i, side));
  return g;
}

EdgeGrid spacing_weights(const CornerProcess& cp, std::size_t ell, Side side) {
  require_ell(cp, ell);
  const std::size_t k = cp.borders.size();
  EdgeGrid g(ell, k);
  for (std::size_t s = 0; s < k; ++s) {
    const auto& w = cp.borders[s].weights;
    if (w.empty()) throw ArgumentError("spacing_weights: border carries no weights");
    for (std::size_t i = 0; i < ell; ++i) g.at(i, s) = w[reflected_index(w.size(), i, side)];
  }
  return g;
}

EdgeGrid spacing_approx_residual(const CornerProcess& cp, std::size_t ell, Side side) {
  EdgeGrid sp = adjacent_level_spacings(cp, ell, side);
  const EdgeGrid w = spacing_weights(cp, ell, side);
  for (std::size_t idx = 0; idx < sp.values.size(); ++idx) sp.values[idx] -= w.values[idx];
  return sp;
}

double edge_error_term(const SpectralLevel& level, const BorderData& border, double z,
                       std::size_t i) {
  const auto& ev = level.eigenvalues;
  if (i == 0 || i > ev.size()) throw ArgumentError("edge_error_term: index out of range");
  if (border.weights.size() != ev.size())
    throw ArgumentError("edge_error_term: border weights do not match the level");
  const double left = i >= 2 ? ev[i - 2] : -std::numeric_limits<double>::infinity();
  const double right = ev[i - 1];
  if (!(z > left && z < right))
    throw ArgumentError("edge_error_term: z must lie strictly inside (lambda_{i-1}, lambda_i)");
  const double root_n = std::sqrt(static_cast<double>(ev.size() - level.s));
  double sum = 0.0;
  for (std::size_t j = 0; j < ev.size(); ++j) {
    const std::size_t label = j + 1;
    if (label + 1 == i || label == i) continue;
    sum += border.weights[j] / (ev[j] - z);
  }
  return border.corner_entry - (z + 2.0 * root_n) - (sum - root_n);
}

double edge_error_point(const SpectralLevel& level, std::size_t i) {
  const auto& ev = level.eigenvalues;
  if (i == 0 || i > ev.size()) throw ArgumentError("edge_error_point: index out of range");
  if (i >= 2) return 0.5 * (ev[i - 2] + ev[i - 1]);
  const double gap = ev.size() >= 2 ? ev[1] - ev[0] : 1.0;
  return ev[0] - 0.5 * gap;
}

void EdgeSampleSet::append(const CornerProcess& cp) {
  if (trials == 0) {
    k = cp.levels.size() - 1;
  } else if (cp.levels.size() - 1 != k) {
    throw ArgumentError("EdgeSampleSet::append: inconsistent number of levels");
  }
  tw.push_back(edge_rescaled_extremes(cp, ell, side));
  spacing.push_back(adjacent_level_spacings(cp, ell, side));
  weight.push_back(spacing_weights(cp, ell, side));
  residual.push_back(spacing_approx_residual(cp, ell, side));
  ++trials;
}

void EdgeSampleSet::extend(const EdgeSampleSet& other) {
  if (other.trials == 0) return;
  if (other.ell != ell || other.side != side || (trials > 0 && other.k != k))
    throw ArgumentError("EdgeSampleSet::extend: shapes differ");
  k = other.k;
  tw.insert(tw.end(), other.tw.begin(), other.tw.end());
  spacing.insert(spacing.end(), other.spacing.begin(), other.spacing.end());
  weight.insert(weight.end(), other.weight.begin(), other.weight.end());
  residual.insert(residual.end(), other.residual.begin(), other.residual.end());
  trials += other.trials;
}

namespace {
std::vector<double> column(const std::vector<EdgeGrid>& grids, std::size_t i, std::size_t s) {
  std::vector<double> out;
  out.reserve(grids.size());
  for (const auto& g : grids) out.push_back(g.at(i, s));
  return out;
}
}  // namespace

std::vector<double> EdgeSampleSet::spacing_column(std::size_t i, std::size_t s) const {
  return column(spacing, i, s);
}
std::vector<double> EdgeSampleSet::weight_column(std::size_t i, std::size_t s) const {
  return column(weight, i, s);
}
std::vector<double> EdgeSampleSet::residual_column(std::size_t i, std::size_t s) const {
  return column(residual, i, s);
}
std::vector<double> EdgeSampleSet::tw_column(std::size_t i) const {
  std::vector<double> out;
  out.reserve(tw.size());
  for (const auto& v : tw) out.push_back(v[i]);
  return out;
}

void write_csv(std::ostream& out, const EdgeSampleSet& set) {
  out << "trial,side,i,s,tw_value,spacing,weight,residual\n";
  for (std::size_t t = 0; t < set.trials; ++t) {
    for (std::size_t i = 0; i < set.ell; ++i) {
      for (std::size_t s = 0; s < set.k; ++s) {
        out << t << ',' << side_name(set.side) << ',' << (i + 1) << ',' << s << ',';
        if (s == 0) out << format_double(set.tw[t][i]);
        out << ',' << format_double(set.spacing[t].at(i, s)) << ','
            << format_double(set.weight[t].at(i, s)) << ','
            << format_double(set.residual[t].at(i, s)) << '\n';
      }
    }
  }
}

}  // namespace corner
