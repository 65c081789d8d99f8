#include "corner/ensembles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <random>

#include "corner/error.hpp"
#include "corner/rng.hpp"

namespace corner {

EntryLaw::EntryLaw(EntryKind kind, int beta, double df)
    : kind_(kind), beta_(beta), df_(df) {
  if (beta != 1 && beta != 2)
    throw ConfigError("beta", "must be 1 or 2, got " + std::to_string(beta));
  if (kind == EntryKind::student_t && !(df > 4.0))
    throw ConfigError("dist", "student_t needs df > 4 for a finite fourth moment");
}

EntryLaw EntryLaw::parse(std::string_view name, int beta) {
  if (name == "gaussian") return {EntryKind::gaussian, beta};
  if (name == "rademacher") return {EntryKind::rademacher, beta};
  if (name == "uniform") return {EntryKind::uniform, beta};
  if (name == "student_t") return {EntryKind::student_t, beta};
  constexpr std::string_view prefix = "student_t:";
  if (name.starts_with(prefix)) {
    const std::string_view tail = name.substr(prefix.size());
    double df = 0.0;
    auto [ptr, ec] = std::from_chars(tail.data(), tail.data() + tail.size(), df);
    if (ec != std::errc() || ptr != tail.data() + tail.size())
      throw ConfigError("dist", "bad degrees of freedom '" + std::string(tail) + "'");
    return {EntryKind::student_t, beta, df};
  }
  throw ConfigError("dist", "unknown entry law '" + std::string(name) + "'");
}

std::string EntryLaw::name() const {
  switch (kind_) {
    case EntryKind::gaussian: return "gaussian";
    case EntryKind::rademacher: return "rademacher";
    case EntryKind::uniform: return "uniform";
    case EntryKind::student_t: {
      char buf[64];
      auto res = std::to_chars(buf, buf + sizeof buf, df_);
      return "student_t:" + std::string(buf, res.ptr);
    }
  }
  return "?";
}

WignerMatrix::WignerMatrix(RealMatrix entries, EntryLaw law, std::uint64_t seed)
    : entries_(std::move(entries)), law_(law), seed_(seed) {}

WignerMatrix::WignerMatrix(ComplexMatrix entries, EntryLaw law, std::uint64_t seed)
    : entries_(std::move(entries)), law_(law), seed_(seed) {}

std::size_t WignerMatrix::dim() const noexcept {
  return std::visit([](const auto& m) { return static_cast<std::size_t>(m.rows()); },
                    entries_);
}

std::complex<double> WignerMatrix::entry(std::size_t i, std::size_t j) const {
  const auto r = static_cast<Eigen::Index>(i);
  const auto c = static_cast<Eigen::Index>(j);
  if (is_real()) return {real()(r, c), 0.0};
  return complex()(r, c);
}

WignerMatrix sample_wigner(std::size_t n, const EntryLaw& law, std::uint64_t seed,
                           std::uint64_t trial) {
  if (n == 0) throw ArgumentError("sample_wigner: n must be positive");
  CounterRng rng(seed, trial, Stream::matrix);
  const auto dim = static_cast<Eigen::Index>(n);
  // Column-major fill of the upper triangle; the lower triangle is mirrored so
  // the symmetry holds bit for bit.
  if (law.beta() == 1) {
    RealMatrix h(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) {
        h(i, j) = law.draw_unit(rng);
        h(j, i) = h(i, j);
      }
      h(j, j) = law.draw_unit(rng);
    }
    return {std::move(h), law, seed};
  }
  const double half = std::numbers::sqrt2 / 2.0;
  ComplexMatrix h(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    for (Eigen::Index i = 0; i < j; ++i) {
      const double re = law.draw_unit(rng) * half;
      const double im = law.draw_unit(rng) * half;
      h(i, j) = {re, im};
      h(j, i) = {re, -im};
    }
    h(j, j) = {law.draw_unit(rng), 0.0};
  }
  return {std::move(h), law, seed};
}

std::vector<double> tridiagonal_eigenvalues(const Eigen::VectorXd& diag,
                                            const Eigen::VectorXd& offdiag) {
  if (diag.size() == 1) return {diag(0)};
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, offdiag, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("tridiagonal eigensolver did not converge");
  const Eigen::VectorXd& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

std::vector<double> sample_gbe_spectrum(std::size_t n, double beta, std::uint64_t seed,
                                        std::uint64_t trial) {
  if (n == 0) throw ArgumentError("sample_gbe_spectrum: n must be positive");
  if (!(beta > 0.0)) throw ArgumentError("sample_gbe_spectrum: beta must be positive");
  CounterRng rng(seed, trial, Stream::gbe);
  const auto dim = static_cast<Eigen::Index>(n);
  const double scale = 1.0 / std::sqrt(beta);
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2);
  Eigen::VectorXd diag(dim);
  Eigen::VectorXd off(std::max<Eigen::Index>(dim - 1, 0));
  for (Eigen::Index k = 0; k < dim; ++k) diag(k) = normal(rng) * scale;
  for (Eigen::Index k = 0; k + 1 < dim; ++k) {
    // chi with beta * (n - k - 1) degrees of freedom, as sqrt of a Gamma(dof/2, 2).
    const double dof = beta * static_cast<double>(dim - k - 1);
    std::gamma_distribution<double> chi2(dof / 2.0, 2.0);
    off(k) = std::sqrt(chi2(rng)) * scale;
  }
  return tridiagonal_eigenvalues(diag, off);
}

std::vector<double> wigner_eigenvalues(const WignerMatrix& h) {
  Eigen::VectorXd values;
  if (h.is_real()) {
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(h.real(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver did not converge");
    values = es.eigenvalues();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h.complex(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw NumericalError("dense eigensolver did not converge");
    values = es.eigenvalues();
  }
  return {values.data(), values.data() + values.size()};
}

std::vector<double> sample_spectrum(const EnsembleSpec& spec, std::uint64_t trial) {
  if (spec.n == 0) throw ArgumentError("ensemble dimension must be positive");
  if (spec.tridiagonal) {
    if (spec.law.kind() != EntryKind::gaussian)
      throw ArgumentError("the tridiagonal model is Gaussian only");
    return sample_gbe_spectrum(spec.n, spec.law.beta(), spec.seed, trial);
  }
  return wigner_eigenvalues(sample_wigner(spec.n, spec.law, spec.seed, trial));
}

double semicircle_density(double x) noexcept {
  if (x <= -2.0 || x >= 2.0) return 0.0;
  return std::sqrt(4.0 - x * x) / (2.0 * std::numbers::pi);
}

double semicircle_cdf(double x) noexcept {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double primitive = 0.5 * x * std::sqrt(4.0 - x * x) + 2.0 * std::asin(0.5 * x);
  return 0.5 + primitive / (2.0 * std::numbers::pi);
}

double semicircle_mass(double a, double b) {
  if (a > b) throw ArgumentError("semicircle_mass: a > b");
  return semicircle_cdf(b) - semicircle_cdf(a);
}

}  // namespace corner
