#include "corner/corner_spectra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <nlohmann/json.hpp>

#include "corner/error.hpp"
#include "corner/rng.hpp"
#include "corner/secular.hpp"

namespace corner {

double SpectralLevel::diameter() const noexcept {
  if (eigenvalues.empty()) return 0.0;
  return eigenvalues.back() - eigenvalues.front();
}

double SpectralLevel::max_residual(const MinorView& minor) const {
  if (!eigenvectors) throw ArgumentError("max_residual: level has no eigenvectors");
  const auto n = static_cast<Eigen::Index>(minor.dim());
  ComplexMatrix h(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      h(i, j) = minor.entry(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
  const ComplexMatrix& u = *eigenvectors;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::VectorXcd r = h * u.col(i) - eigenvalues[static_cast<std::size_t>(i)] * u.col(i);
    worst = std::max(worst, r.norm());
  }
  return worst;
}

double BorderData::column_norm2() const noexcept {
  double acc = 0.0;
  for (const auto& c : column) acc += std::norm(c);
  return acc;
}

MinorView::MinorView(const WignerMatrix& source, std::size_t dim) : source_(&source), dim_(dim) {
  if (dim == 0 || dim > source.dim()) throw ArgumentError("MinorView: bad dimension");
}

std::complex<double> MinorView::entry(std::size_t i, std::size_t j) const {
  if (i >= dim_ || j >= dim_) throw ArgumentError("MinorView::entry: index out of range");
  return source_->entry(i, j);
}

std::vector<std::complex<double>> MinorView::next_column() const {
  if (dim_ >= source_->dim()) throw ArgumentError("MinorView: no next column");
  std::vector<std::complex<double>> col(dim_);
  for (std::size_t i = 0; i < dim_; ++i) col[i] = source_->entry(i, dim_);
  return col;
}

double MinorView::next_corner() const {
  if (dim_ >= source_->dim()) throw ArgumentError("MinorView: no next column");
  return source_->entry(dim_, dim_).real();
}

std::vector<MinorView> bordered_minor_sequence(const WignerMatrix& h, std::size_t k) {
  if (k >= h.dim())
    throw ArgumentError("bordered_minor_sequence: K must be smaller than dim(H)");
  const std::size_t n = h.dim() - k;
  std::vector<MinorView> out;
  out.reserve(k + 1);
  for (std::size_t s = 0; s <= k; ++s) out.emplace_back(h, n + s);
  return out;
}

namespace {

template <class Matrix>
SpectralLevel decompose_block(const Matrix& block, std::size_t s, bool want_vectors) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(
      block, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("dense eigensolver failed on level " + std::to_string(s),
                         static_cast<std::ptrdiff_t>(s));
  SpectralLevel level;
  level.s = s;
  const Eigen::VectorXd& ev = es.eigenvalues();
  level.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  if (want_vectors) level.eigenvectors = es.eigenvectors().template cast<std::complex<double>>();
  return level;
}

std::vector<double> projection_weights(const ComplexMatrix& u,
                                       const std::vector<std::complex<double>>& column) {
  const Eigen::Map<const Eigen::VectorXcd> h(column.data(),
                                             static_cast<Eigen::Index>(column.size()));
  const Eigen::VectorXcd proj = u.adjoint() * h;
  std::vector<double> w(static_cast<std::size_t>(proj.size()));
  for (Eigen::Index j = 0; j < proj.size(); ++j) w[static_cast<std::size_t>(j)] = std::norm(proj(j));
  return w;
}

}  // namespace

SpectralLevel decompose_minor(const MinorView& minor, std::size_t s, bool want_vectors) {
  const auto d = static_cast<Eigen::Index>(minor.dim());
  const WignerMatrix& src = minor.source();
  if (src.is_real()) {
    const RealMatrix block = src.real().topLeftCorner(d, d);
    return decompose_block(block, s, want_vectors);
  }
  const ComplexMatrix block = src.complex().topLeftCorner(d, d);
  return decompose_block(block, s, want_vectors);
}

BorderData make_border(const MinorView& minor, const SpectralLevel& level) {
  BorderData b;
  b.s = level.s;
  b.column = minor.next_column();
  b.corner_entry = minor.next_corner();
  if (level.eigenvectors) b.weights = projection_weights(*level.eigenvectors, b.column);
  return b;
}

CornerProcess corner_eigenvalues_direct(std::span<const MinorView> minors, bool want_vectors) {
  if (minors.empty()) throw ArgumentError("corner_eigenvalues_direct: no minors");
  CornerProcess cp;
  const WignerMatrix& src = minors.front().source();
  cp.n = minors.front().dim();
  cp.k = minors.size() - 1;
  cp.beta = src.beta();
  cp.seed = src.seed();
  for (std::size_t s = 0; s < minors.size(); ++s) {
    cp.levels.push_back(decompose_minor(minors[s], s, want_vectors));
    if (s + 1 < minors.size()) cp.borders.push_back(make_border(minors[s], cp.levels.back()));
  }
  return cp;
}

SpectralLevel border_step_secular(const SpectralLevel& level, const BorderData& border) {
  std::vector<double> weights = border.weights;
  if (weights.empty()) {
    if (!level.eigenvectors || border.column.empty())
      throw ArgumentError("border_step_secular: need weights or eigenvectors and column");
    weights = projection_weights(*level.eigenvectors, border.column);
  }
  if (weights.size() != level.size())
    throw ArgumentError("border_step_secular: weight count does not match level size");
  SecularEquation eq{level.eigenvalues, weights, border.corner_entry, 1.0, {}};
  SpectralLevel next;
  next.s = level.s + 1;
  try {
    next.eigenvalues = solve_secular(eq);
  } catch (const NumericalError& e) {
    throw NumericalError("border step " + std::to_string(level.s) + ": " + e.what(),
                         e.context());
  }
  if (next.eigenvalues.size() != level.size() + 1)
    throw NumericalError("border step " + std::to_string(level.s) + " produced " +
                             std::to_string(next.eigenvalues.size()) + " roots",
                         static_cast<std::ptrdiff_t>(level.s));
  return next;
}

CornerProcess corner_eigenvalues_secular(std::span<const MinorView> minors) {
  if (minors.empty()) throw ArgumentError("corner_eigenvalues_secular: no minors");
  CornerProcess cp;
  const WignerMatrix& src = minors.front().source();
  cp.n = minors.front().dim();
  cp.k = minors.size() - 1;
  cp.beta = src.beta();
  cp.seed = src.seed();
  cp.levels.push_back(decompose_minor(minors[0], 0, true));
  for (std::size_t s = 0; s + 1 < minors.size(); ++s) {
    SpectralLevel& cur = cp.levels.back();
    if (!cur.eigenvectors) {
      SpectralLevel dense = decompose_minor(minors[s], s, true);
      cur.eigenvectors = std::move(dense.eigenvectors);
    }
    cp.borders.push_back(make_border(minors[s], cur));
    cp.levels.push_back(border_step_secular(cur, cp.borders.back()));
  }
  return cp;
}

CornerProcess spectral_corner_process(std::vector<double> level0, std::size_t k, int beta,
                                      std::uint64_t seed, std::uint64_t trial,
                                      double corner_variance) {
  if (beta != 1 && beta != 2) throw ArgumentError("spectral_corner_process: beta must be 1 or 2");
  if (level0.empty()) throw ArgumentError("spectral_corner_process: empty level");
  std::sort(level0.begin(), level0.end());
  CornerProcess cp;
  cp.n = level0.size();
  cp.k = k;
  cp.beta = beta;
  cp.seed = seed;
  CounterRng wrng(seed, trial, Stream::projection);
  CounterRng crng(seed, trial, Stream::corner_entry);
  std::normal_distribution<double> normal(0.0, 1.0);
  cp.levels.push_back(SpectralLevel{0, std::move(level0), std::nullopt});
  for (std::size_t s = 0; s < k; ++s) {
    const SpectralLevel& cur = cp.levels.back();
    BorderData b;
    b.s = s;
    b.weights.resize(cur.size());
    for (double& w : b.weights) {
      if (beta == 1) {
        const double x = normal(wrng);
        w = x * x;
      } else {
        const double x = normal(wrng);
        const double y = normal(wrng);
        w = 0.5 * (x * x + y * y);
      }
    }
    b.corner_entry = normal(crng) * std::sqrt(corner_variance);
    SpectralLevel next = border_step_secular(cur, b);
    cp.borders.push_back(std::move(b));
    cp.levels.push_back(std::move(next));
  }
  return cp;
}

InterlacingReport interlacing_check(const CornerProcess& cp) {
  InterlacingReport rep;
  for (const auto& l : cp.levels) rep.diameter = std::max(rep.diameter, l.diameter());
  for (std::size_t s = 0; s + 1 < cp.levels.size(); ++s) {
    const auto& lo = cp.levels[s].eigenvalues;
    const auto& hi = cp.levels[s + 1].eigenvalues;
    if (hi.size() != lo.size() + 1)
      throw ArgumentError("interlacing_check: level sizes do not differ by one");
    double v = 0.0;
    for (std::size_t i = 0; i < lo.size(); ++i) {
      v = std::max(v, hi[i] - lo[i]);
      v = std::max(v, lo[i] - hi[i + 1]);
    }
    rep.per_step.push_back(v);
    rep.max_violation = std::max(rep.max_violation, v);
  }
  return rep;
}

StructureReport structure_check(const CornerProcess& cp) {
  StructureReport rep;
  const InterlacingReport il = interlacing_check(cp);
  rep.interlacing = il.diameter > 0.0 ? il.max_violation / il.diameter : il.max_violation;
  for (std::size_t s = 0; s < cp.borders.size(); ++s) {
    const auto& lo = cp.levels[s].eigenvalues;
    const auto& hi = cp.levels[s + 1].eigenvalues;
    const double tr_lo = std::accumulate(lo.begin(), lo.end(), 0.0);
    const double tr_hi = std::accumulate(hi.begin(), hi.end(), 0.0);
    double abs_sum = 0.0;
    for (double x : hi) abs_sum += std::abs(x);
    const double scale = std::max(abs_sum, 1.0);
    rep.max_trace_rel_error = std::max(
        rep.max_trace_rel_error, std::abs(tr_hi - tr_lo - cp.borders[s].corner_entry) / scale);
    const BorderData& b = cp.borders[s];
    if (!b.column.empty() && !b.weights.empty()) {
      const double norm2 = b.column_norm2();
      const double sum = std::accumulate(b.weights.begin(), b.weights.end(), 0.0);
      if (norm2 > 0.0)
        rep.max_parseval_rel_error = std::max(rep.max_parseval_rel_error, std::abs(sum - norm2) / norm2);
    }
  }
  return rep;
}

RigidityReport rigidity_delocalization_report(const SpectralLevel& level) {
  RigidityReport rep;
  const std::size_t n = level.size();
  const double nn = static_cast<double>(n);
  const double root_n = std::sqrt(nn);
  for (std::size_t j = 0; j < n; ++j) {
    const double predicted = nn * semicircle_cdf(level.eigenvalues[j] / root_n);
    // Count just after the jump at lambda_j, and just before it.
    std::size_t after = j + 1;
    while (after < n && level.eigenvalues[after] == level.eigenvalues[j]) ++after;
    std::size_t before = j;
    while (before > 0 && level.eigenvalues[before - 1] == level.eigenvalues[j]) --before;
    rep.max_counting_deviation =
        std::max({rep.max_counting_deviation, std::abs(static_cast<double>(after) - predicted),
                  std::abs(static_cast<double>(before) - predicted)});
  }
  if (level.eigenvectors) {
    double sup = 0.0;
    const ComplexMatrix& u = *level.eigenvectors;
    for (Eigen::Index i = 0; i < u.cols(); ++i) sup = std::max(sup, u.col(i).cwiseAbs().maxCoeff());
    rep.max_sup_norm = root_n * sup;
  }
  return rep;
}

nlohmann::json to_json(const CornerProcess& cp) {
  nlohmann::json j;
  j["n"] = cp.n;
  j["k"] = cp.k;
  j["beta"] = cp.beta;
  j["seed"] = cp.seed;
  j["levels"] = nlohmann::json::array();
  for (const auto& l : cp.levels)
    j["levels"].push_back({{"s", l.s}, {"eigenvalues", l.eigenvalues}});
  j["borders"] = nlohmann::json::array();
  for (const auto& b : cp.borders)
    j["borders"].push_back({{"s", b.s}, {"corner_entry", b.corner_entry}, {"weights", b.weights}});
  return j;
}

}  // namespace corner
