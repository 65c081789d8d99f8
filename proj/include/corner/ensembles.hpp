#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace corner {

enum class EntryKind { gaussian, rademacher, uniform, student_t };

// Distribution of the matrix entries. Off-diagonal entries have E|h|^2 = 1;
// for beta = 2 the real and imaginary parts are independent with variance 1/2
// each. Diagonal entries are real with variance 1 in both symmetry classes.
class EntryLaw {
 public:
  // Throws ConfigError for beta not in {1, 2} or student_t with df <= 4.
  EntryLaw(EntryKind kind, int beta, double df = 5.0);

  // Accepts "gaussian", "rademacher", "uniform", "student_t" and
  // "student_t:<df>".
  static EntryLaw parse(std::string_view name, int beta);

  EntryKind kind() const noexcept { return kind_; }
  int beta() const noexcept { return beta_; }
  double df() const noexcept { return df_; }
  std::string name() const;

  // One real draw with mean 0 and variance 1.
  template <class Rng>
  double draw_unit(Rng& rng) const;

 private:
  EntryKind kind_;
  int beta_;
  double df_;
};

using RealMatrix = Eigen::MatrixXd;
using ComplexMatrix = Eigen::MatrixXcd;

class WignerMatrix {
 public:
  WignerMatrix(RealMatrix entries, EntryLaw law, std::uint64_t seed);
  WignerMatrix(ComplexMatrix entries, EntryLaw law, std::uint64_t seed);

  std::size_t dim() const noexcept;
  int beta() const noexcept { return law_.beta(); }
  const EntryLaw& law() const noexcept { return law_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::complex<double> entry(std::size_t i, std::size_t j) const;
  bool is_real() const noexcept {
    return std::holds_alternative<RealMatrix>(entries_);
  }
  const RealMatrix& real() const { return std::get<RealMatrix>(entries_); }
  const ComplexMatrix& complex() const {
    return std::get<ComplexMatrix>(entries_);
  }

 private:
  std::variant<RealMatrix, ComplexMatrix> entries_;
  EntryLaw law_;
  std::uint64_t seed_;
};

// Deterministic function of (n, law, seed, trial).
WignerMatrix sample_wigner(std::size_t n, const EntryLaw& law,
                           std::uint64_t seed, std::uint64_t trial = 0);

// Gaussian beta ensemble spectrum, density proportional to
// prod |l_i - l_j|^beta * exp(-beta * sum l_i^2 / 4), sampled through the
// symmetric tridiagonal model. Ascending.
std::vector<double> sample_gbe_spectrum(std::size_t n, double beta,
                                        std::uint64_t seed,
                                        std::uint64_t trial = 0);

// Eigenvalues of a symmetric tridiagonal matrix, ascending.
std::vector<double> tridiagonal_eigenvalues(const Eigen::VectorXd& diag,
                                            const Eigen::VectorXd& offdiag);

// Eigenvalues of the full matrix, ascending.
std::vector<double> wigner_eigenvalues(const WignerMatrix& h);

// Recipe for one level-0 spectrum per trial.
struct EnsembleSpec {
  std::size_t n = 0;
  EntryLaw law{EntryKind::gaussian, 2};
  std::uint64_t seed = 0;
  // Sample through the tridiagonal beta model instead of a dense matrix.
  bool tridiagonal = false;
};

std::vector<double> sample_spectrum(const EnsembleSpec& spec, std::uint64_t trial);

// Semicircle density sqrt(4 - x^2) / (2 pi) on [-2, 2].
double semicircle_density(double x) noexcept;
// Closed-form integral of the semicircle density over [a, b]; ArgumentError if
// a > b.
double semicircle_mass(double a, double b);
// Mass of (-inf, x].
double semicircle_cdf(double x) noexcept;

}  // namespace corner

#include "corner/ensembles_impl.hpp"
