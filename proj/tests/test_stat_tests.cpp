#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corner/error.hpp"
#include "corner/rng.hpp"
#include "corner/stat_tests.hpp"

using namespace corner;

TEST_CASE("sample vectors reject non-finite values") {
  CHECK_THROWS_AS(SampleVector({1.0, std::nan("")}), ArgumentError);
  CHECK_THROWS_AS(SampleVector({std::numeric_limits<double>::infinity()}), ArgumentError);
  const SampleVector s({1.0, 2.0}, "x", {5, 6});
  CHECK(s.provenance().seed == 6);
}

TEST_CASE("one-sample KS special cases") {
  auto uniform = [](double x) { return std::clamp(x, 0.0, 1.0); };
  CHECK(ks_one_sample(SampleVector({0.5}), uniform) == 0.5);
  CHECK(ks_one_sample(SampleVector({100.0, 101.0, 102.0}), uniform) == 1.0);
  CHECK_THROWS_AS(ks_one_sample(SampleVector({}), uniform), ArgumentError);
}

TEST_CASE("one-sample KS is invariant under a monotone reparameterization") {
  CounterRng rng(1, 0, Stream::test);
  std::normal_distribution<double> g;
  std::vector<double> x(500), y(500);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = g(rng);
    y[i] = std::exp(x[i]);
  }
  auto phi = [](double t) { return 0.5 * std::erfc(-t / std::sqrt(2.0)); };
  auto lognormal = [&](double t) { return t <= 0.0 ? 0.0 : phi(std::log(t)); };
  CHECK(ks_one_sample(SampleVector(x), phi) == doctest::Approx(ks_one_sample(SampleVector(y), lognormal)).epsilon(1e-12));
}

TEST_CASE("one-sample KS on its own law, n = 10^4") {
  int passes = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    CounterRng rng(2, rep, Stream::test);
    std::uniform_real_distribution<double> u;
    std::vector<double> x(10000);
    for (auto& v : x) v = u(rng);
    if (ks_one_sample(SampleVector(x), [](double t) { return std::clamp(t, 0.0, 1.0); }) < 0.025) ++passes;
  }
  CHECK(passes >= 99);
}

TEST_CASE("two-sample KS") {
  const SampleVector a({1.0, 2.0, 2.0, 3.0});
  CHECK(ks_two_sample(a, a) == 0.0);
  CHECK(ks_two_sample(a, SampleVector({10.0, 11.0})) == 1.0);
  CHECK(ks_two_sample(SampleVector({1.0, 2.0}), SampleVector({2.0, 3.0})) == 0.5);
  CHECK_THROWS_AS(ks_two_sample(a, SampleVector({})), ArgumentError);
}

TEST_CASE("independence report") {
  std::vector<std::vector<double>> cols{{1, 2, 3, 4}, {1, 2, 3, 4}, {4, 1, 3, 2}, {5, 5, 5, 5}};
  const auto r = independence_report(cols);
  CHECK(r.corr(0, 1) == 1.0);
  CHECK(r.corr(0, 0) == 1.0);
  CHECK(r.corr(3, 3) == 1.0);
  CHECK(r.degenerate[3]);
  CHECK(std::isnan(r.corr(0, 3)));
  CHECK(r.max_abs_off_diagonal == 1.0);
  for (Eigen::Index i = 0; i < 3; ++i)
    for (Eigen::Index j = 0; j < 3; ++j) {
      CHECK(r.corr(i, j) == r.corr(j, i));
      CHECK(std::abs(r.corr(i, j)) <= 1.0);
    }
  std::vector<std::vector<double>> single{{1.0, 2.0}};
  const auto r1 = independence_report(single);
  CHECK(r1.corr.rows() == 1);
  CHECK(r1.corr(0, 0) == 1.0);
  std::vector<std::vector<double>> short_cols{{1.0}};
  CHECK_THROWS_AS(independence_report(short_cols), ArgumentError);
}

TEST_CASE("independent uniform columns have small correlations") {
  CounterRng rng(3, 0, Stream::test);
  std::uniform_real_distribution<double> u;
  std::vector<std::vector<double>> cols(5, std::vector<double>(10000));
  for (auto& c : cols)
    for (auto& v : c) v = u(rng);
  CHECK(independence_report(cols).max_abs_off_diagonal < 0.05);
}

TEST_CASE("number variance: full line and deterministic spectra") {
  EnsembleSpec spec;
  spec.n = 50;
  spec.seed = 9;
  const std::vector<double> full{6.0};
  const auto vc = number_variance_curve(spec, 0.0, full, 20);
  CHECK(vc.variances[0] == 0.0);
  CHECK(vc.trials == 20);
  const std::vector<double> straddle{3.0};
  CHECK_THROWS_AS(number_variance_curve(spec, 1.0, straddle, 5), ArgumentError);

  std::vector<std::vector<double>> same(10, sample_gbe_spectrum(100, 2.0, 1, 0));
  const std::vector<double> lengths{0.1, 0.5, 1.0};
  const auto det = number_variance_curve(same, 0.2, lengths);
  for (double v : det.variances) CHECK(v == 0.0);

  std::ostringstream os;
  write_variance_csv(os, det);
  CHECK(os.str().rfind("length,variance,trials\n0.1,0,10\n", 0) == 0);
}

TEST_CASE("number variance is independent of the worker count") {
  EnsembleSpec spec;
  spec.n = 60;
  spec.seed = 4;
  const std::vector<double> lengths{0.2, 0.8};
  const auto a = number_variance_curve(spec, 0.1, lengths, 16, 1);
  const auto b = number_variance_curve(spec, 0.1, lengths, 16, 4);
  CHECK(a.variances == b.variances);
}

TEST_CASE("stat report JSON") {
  StatReport r{"ks", {"a", "b"}, 10, 0.05, 0.08, true};
  const auto j = to_json(r);
  CHECK(j["test"] == "ks");
  CHECK(j["inputs"]["labels"].size() == 2);
  CHECK(j["inputs"]["trials"] == 10);
  CHECK(j["statistic"] == 0.05);
  CHECK(j["threshold"] == 0.08);
  CHECK(j["pass"] == true);
}
