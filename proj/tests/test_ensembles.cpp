#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "corner/ensembles.hpp"
#include "corner/error.hpp"
#include "corner/rng.hpp"

using namespace corner;

namespace {

double quad_density(double a, double b) {
  auto rho = [](double x) { return std::sqrt(std::max(0.0, 4.0 - x * x)) / (2.0 * std::numbers::pi); };
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(rho, a, b, 20, 1e-15);
}

}  // namespace

TEST_CASE("entry law parsing and validation") {
  CHECK(EntryLaw::parse("gaussian", 1).kind() == EntryKind::gaussian);
  CHECK(EntryLaw::parse("rademacher", 2).kind() == EntryKind::rademacher);
  CHECK(EntryLaw::parse("uniform", 2).kind() == EntryKind::uniform);
  CHECK(EntryLaw::parse("student_t", 2).df() == 5.0);
  CHECK(EntryLaw::parse("student_t:7.5", 1).df() == 7.5);
  CHECK_THROWS_AS(EntryLaw::parse("student_t:4", 1), ConfigError);
  CHECK_THROWS_AS(EntryLaw::parse("student_t:3", 1), ConfigError);
  CHECK_THROWS_AS(EntryLaw::parse("cauchy", 1), ConfigError);
  CHECK_THROWS_AS(EntryLaw(EntryKind::gaussian, 3), ConfigError);
}

TEST_CASE("2x2 real sample is symmetric") {
  const WignerMatrix h = sample_wigner(2, EntryLaw(EntryKind::gaussian, 1), 11);
  CHECK(h.is_real());
  CHECK(h.entry(0, 1) == h.entry(1, 0));
}

TEST_CASE("complex Rademacher entries have |Re| = |Im| = 1/sqrt2 and real diagonal") {
  const WignerMatrix h = sample_wigner(100, EntryLaw(EntryKind::rademacher, 2), 5);
  const double r = 1.0 / std::sqrt(2.0);
  for (std::size_t i = 0; i < 100; ++i) {
    CHECK(h.entry(i, i).imag() == 0.0);
    CHECK(std::abs(h.entry(i, i).real()) == 1.0);
    for (std::size_t j = i + 1; j < 100; ++j) {
      const auto z = h.entry(i, j);
      REQUIRE(std::abs(std::abs(z.real()) - r) < 1e-15);
      REQUIRE(std::abs(std::abs(z.imag()) - r) < 1e-15);
      REQUIRE(h.entry(j, i) == std::conj(z));
    }
  }
}

TEST_CASE("Hermitian symmetry is bit exact for every law") {
  for (const char* name : {"gaussian", "rademacher", "uniform", "student_t"}) {
    for (int beta : {1, 2}) {
      const WignerMatrix h = sample_wigner(30, EntryLaw::parse(name, beta), 77, 3);
      for (std::size_t i = 0; i < 30; ++i)
        for (std::size_t j = 0; j < 30; ++j) REQUIRE(h.entry(i, j) == std::conj(h.entry(j, i)));
    }
  }
}

TEST_CASE("sampling is a deterministic function of (n, law, seed, trial)") {
  const EntryLaw law(EntryKind::uniform, 2);
  const auto a = sample_wigner(20, law, 9, 4);
  const auto b = sample_wigner(20, law, 9, 4);
  const auto c = sample_wigner(20, law, 9, 5);
  CHECK(a.complex() == b.complex());
  CHECK(a.complex() != c.complex());
}

TEST_CASE("off-diagonal moments over 10^4 samples") {
  for (const char* name : {"gaussian", "rademacher", "uniform", "student_t"}) {
    for (int beta : {1, 2}) {
      const std::string law_name = name;
    CAPTURE(law_name);
      CAPTURE(beta);
      const EntryLaw law = EntryLaw::parse(name, beta);
      double sum = 0.0, sum2 = 0.0, re2 = 0.0, im2 = 0.0;
      std::size_t count = 0;
      for (std::uint64_t t = 0; count < 10000; ++t) {
        const auto h = sample_wigner(20, law, 1234, t);
        for (std::size_t i = 0; i < 20; ++i)
          for (std::size_t j = i + 1; j < 20 && count < 10000; ++j, ++count) {
            const auto z = h.entry(i, j);
            sum += z.real() + z.imag();
            sum2 += std::norm(z);
            re2 += z.real() * z.real();
            im2 += z.imag() * z.imag();
          }
      }
      const double n = static_cast<double>(count);
      CHECK(std::abs(sum / n) < 0.05);
      CHECK(std::abs(sum2 / n - 1.0) < 0.05);
      if (beta == 2) {
        CHECK(std::abs(re2 / n - 0.5) < 0.03);
        CHECK(std::abs(im2 / n - 0.5) < 0.03);
      }
    }
  }
}

TEST_CASE("standardized fourth moment is finite and stable between 10^4 and 10^5 draws") {
  // student_t:5 has an infinite eighth moment, so its sample kurtosis has
  // infinite variance; the stability check uses df = 10 for that family.
  for (const char* name : {"gaussian", "rademacher", "uniform", "student_t", "student_t:10"}) {
    const std::string law_name = name;
    CAPTURE(law_name);
    const EntryLaw law = EntryLaw::parse(name, 1);
    CounterRng rng(8, 0, Stream::test);
    double m2 = 0.0, m4 = 0.0, k4_small = 0.0;
    for (int i = 1; i <= 100000; ++i) {
      const double x = law.draw_unit(rng);
      m2 += x * x;
      m4 += x * x * x * x;
      if (i == 10000) k4_small = (m4 / i) / ((m2 / i) * (m2 / i));
    }
    const double k4 = (m4 / 1e5) / ((m2 / 1e5) * (m2 / 1e5));
    CHECK(std::isfinite(k4));
    if (law_name != "student_t") CHECK(std::abs(k4_small - k4) / k4 < 0.2);
  }
}

TEST_CASE("GbE with n = 1 has variance 2 / beta") {
  for (double beta : {1.0, 2.0, 4.0}) {
    double s2 = 0.0;
    const int trials = 20000;
    for (int t = 0; t < trials; ++t) {
      const auto v = sample_gbe_spectrum(1, beta, 3, static_cast<std::uint64_t>(t));
      REQUIRE(v.size() == 1);
      s2 += v[0] * v[0];
    }
    // Oracle: second moment of exp(-beta x^2 / 4) by quadrature.
    auto w = [beta](double x) { return std::exp(-beta * x * x / 4.0); };
    auto xw = [beta](double x) { return x * x * std::exp(-beta * x * x / 4.0); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
    const double var = GK::integrate(xw, -40.0, 40.0, 15, 1e-14) / GK::integrate(w, -40.0, 40.0, 15, 1e-14);
    CHECK(var == doctest::Approx(2.0 / beta).epsilon(1e-10));
    CHECK(std::abs(s2 / trials - var) / var < 0.04);
  }
}

TEST_CASE("GbE spectrum is sorted and follows the semicircle") {
  std::vector<double> pooled;
  for (std::uint64_t t = 0; t < 200; ++t) {
    const auto v = sample_gbe_spectrum(200, 2.0, 21, t);
    REQUIRE(std::is_sorted(v.begin(), v.end()));
    for (double x : v) pooled.push_back(x / std::sqrt(200.0));
  }
  std::sort(pooled.begin(), pooled.end());
  double d = 0.0;
  const double n = static_cast<double>(pooled.size());
  for (std::size_t i = 0; i < pooled.size(); ++i) {
    const double f = semicircle_cdf(pooled[i]);
    d = std::max({d, (i + 1) / n - f, f - i / n});
  }
  CHECK(d < 0.05);
}

TEST_CASE("tridiagonal eigenvalues of a small matrix") {
  Eigen::VectorXd d(3), e(2);
  d << 2, 2, 2;
  e << -1, -1;
  const auto v = tridiagonal_eigenvalues(d, e);
  REQUIRE(v.size() == 3);
  CHECK(v[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-14));
  CHECK(v[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(v[2] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("semicircle utilities") {
  CHECK(semicircle_mass(-2.0, 2.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(semicircle_mass(0.0, 2.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(std::abs(semicircle_mass(-2.0, 0.5) - quad_density(-2.0, 0.5)) < 1e-12);
  CHECK(std::abs(semicircle_mass(-1.3, 1.7) - quad_density(-1.3, 1.7)) < 1e-12);
  CHECK(semicircle_density(0.0) == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-15));
  CHECK(semicircle_density(2.5) == 0.0);
  CHECK(semicircle_density(-3.0) == 0.0);
  CHECK_THROWS_AS(semicircle_mass(1.0, 0.0), ArgumentError);
  double prev = 0.0;
  for (double b = -2.0; b <= 2.0; b += 0.01) {
    const double m = semicircle_mass(-2.0, b);
    REQUIRE(m >= prev);
    prev = m;
  }
  for (double a : {-1.9, -0.4, 0.3}) {
    const double split = semicircle_mass(a, 0.6) + semicircle_mass(0.6, 1.8);
    CHECK(std::abs(split - semicircle_mass(a, 1.8)) < 1e-14);
  }
}

TEST_CASE("dense spectrum helper matches sample_spectrum") {
  EnsembleSpec spec;
  spec.n = 40;
  spec.law = EntryLaw(EntryKind::gaussian, 1);
  spec.seed = 5;
  const auto a = sample_spectrum(spec, 2);
  const auto b = wigner_eigenvalues(sample_wigner(40, spec.law, 5, 2));
  CHECK(a == b);
  spec.tridiagonal = true;
  CHECK(sample_spectrum(spec, 2) == sample_gbe_spectrum(40, 1.0, 5, 2));
  spec.law = EntryLaw(EntryKind::rademacher, 1);
  CHECK_THROWS_AS(sample_spectrum(spec, 0), ArgumentError);
}
