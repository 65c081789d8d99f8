#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "corner/ensembles.hpp"

namespace corner {

// Eigenvalues of one minor, ascending, with optional unit eigenvectors as
// columns (always stored complex; imaginary parts vanish for beta = 1).
struct SpectralLevel {
  std::size_t s = 0;
  std::vector<double> eigenvalues;
  std::optional<ComplexMatrix> eigenvectors;

  std::size_t size() const noexcept { return eigenvalues.size(); }
  double diameter() const noexcept;
  // max_i |H u_i - lambda_i u_i| for the given minor; needs eigenvectors.
  double max_residual(const class MinorView& minor) const;
};

// Data that borders level s into level s + 1. `column` is empty when only the
// projections onto the level-s eigenbasis are known (spectral engine).
struct BorderData {
  std::size_t s = 0;
  std::vector<std::complex<double>> column;
  double corner_entry = 0.0;
  std::vector<double> weights;  // |<u_j, column>|^2, may be empty

  double column_norm2() const noexcept;
};

struct CornerProcess {
  std::size_t n = 0;  // level-0 dimension
  std::size_t k = 0;  // number of border steps
  int beta = 2;
  std::uint64_t seed = 0;
  std::vector<SpectralLevel> levels;  // s = 0..k
  std::vector<BorderData> borders;    // s = 0..k-1
};

// Leading dim x dim block of a Wigner matrix. Holds a pointer; the matrix must
// outlive the view.
class MinorView {
 public:
  MinorView(const WignerMatrix& source, std::size_t dim);
  std::size_t dim() const noexcept { return dim_; }
  const WignerMatrix& source() const noexcept { return *source_; }
  std::complex<double> entry(std::size_t i, std::size_t j) const;
  // Column dim of the source restricted to rows [0, dim), and the new diagonal
  // entry; these border this minor into the next one.
  std::vector<std::complex<double>> next_column() const;
  double next_corner() const;

 private:
  const WignerMatrix* source_;
  std::size_t dim_;
};

// H^(0), ..., H^(k) with H^(s) of size (dim(H) - k + s). ArgumentError if
// k >= dim(H).
std::vector<MinorView> bordered_minor_sequence(const WignerMatrix& h, std::size_t k);

// Dense eigendecomposition of one minor. NumericalError carrying the level on
// non-convergence.
SpectralLevel decompose_minor(const MinorView& minor, std::size_t s, bool want_vectors);

// Border data for the step s -> s+1; weights are filled when the level has
// eigenvectors.
BorderData make_border(const MinorView& minor, const SpectralLevel& level);

// Every level by dense decomposition. Border weights are present iff
// want_vectors.
CornerProcess corner_eigenvalues_direct(std::span<const MinorView> minors, bool want_vectors);

// Eigenvalues of the bordered matrix as the roots of
//   f(z) = corner - z - sum_j weights_j / (lambda_j - z).
// Needs border.weights; the level's eigenvectors are only needed if weights
// still have to be computed from the column.
SpectralLevel border_step_secular(const SpectralLevel& level, const BorderData& border);

// Level 0 by dense decomposition, every later level by border_step_secular.
// Eigenvectors are recomputed densely on each intermediate level to form the
// next weights.
CornerProcess corner_eigenvalues_secular(std::span<const MinorView> minors);

// Weights-only engine for Gaussian entries: starting from a level-0 spectrum,
// each step draws the projections of a fresh Gaussian column onto the current
// eigenbasis (i.i.d. standard real or complex Gaussians, independent of the
// spectrum) and a Gaussian corner entry, then solves the secular equation.
// This reproduces the joint law of the Gaussian Wigner corner process exactly,
// because the projection of an independent Gaussian vector onto any
// orthonormal basis is again i.i.d. Gaussian.
CornerProcess spectral_corner_process(std::vector<double> level0, std::size_t k, int beta,
                                      std::uint64_t seed, std::uint64_t trial,
                                      double corner_variance = 1.0);

struct InterlacingReport {
  std::vector<double> per_step;  // raw violation per step s -> s+1
  double max_violation = 0.0;
  double diameter = 0.0;         // largest level diameter
};
InterlacingReport interlacing_check(const CornerProcess& cp);

struct StructureReport {
  double max_trace_rel_error = 0.0;    // |tr(s+1) - tr(s) - corner| / scale
  double max_parseval_rel_error = 0.0; // |sum w - |h|^2| / |h|^2, borders with a column
  double interlacing = 0.0;            // max violation / diameter
};
StructureReport structure_check(const CornerProcess& cp);

struct RigidityReport {
  double max_counting_deviation = 0.0;
  std::optional<double> max_sup_norm;  // max_i sqrt(N) |u_i|_inf
};
// N is the level dimension.
RigidityReport rigidity_delocalization_report(const SpectralLevel& level);

// {n, k, beta, seed, levels:[{s, eigenvalues}], borders:[{s, corner_entry, weights}]}
nlohmann::json to_json(const CornerProcess& cp);

}  // namespace corner
