#include "corner/stat_tests.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <nlohmann/json.hpp>

#include "corner/error.hpp"
#include "corner/format.hpp"
#include "corner/parallel.hpp"

namespace corner {

SampleVector::SampleVector(std::vector<double> values, std::string label, Provenance prov)
    : values_(std::move(values)), label_(std::move(label)), prov_(prov) {
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (!std::isfinite(values_[i]))
      throw ArgumentError("sample '" + label_ + "' has a non-finite value at index " +
                          std::to_string(i));
}

double ks_one_sample(const SampleVector& s, const std::function<double(double)>& cdf) {
  if (s.empty()) throw ArgumentError("ks_one_sample: empty sample");
  std::vector<double> x = s.values();
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return std::min(d, 1.0);
}

double ks_two_sample(const SampleVector& a, const SampleVector& b) {
  if (a.empty() || b.empty()) throw ArgumentError("ks_two_sample: empty sample");
  std::vector<double> x = a.values();
  std::vector<double> y = b.values();
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

CorrelationReport independence_report(std::span<const std::vector<double>> columns) {
  const std::size_t d = columns.size();
  if (d == 0) throw ArgumentError("independence_report: no columns");
  const std::size_t t = columns.front().size();
  if (t < 2) throw ArgumentError("independence_report: need at least two trials");
  for (const auto& c : columns)
    if (c.size() != t) throw ArgumentError("independence_report: ragged columns");

  std::vector<std::vector<double>> centered(d);
  std::vector<double> ss(d);
  CorrelationReport r;
  r.degenerate.assign(d, false);
  for (std::size_t a = 0; a < d; ++a) {
    double mean = 0.0;
    for (double v : columns[a]) mean += v;
    mean /= static_cast<double>(t);
    centered[a].resize(t);
    double acc = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
      centered[a][i] = columns[a][i] - mean;
      acc += centered[a][i] * centered[a][i];
    }
    ss[a] = acc;
    r.degenerate[a] = !(acc > 0.0);
  }
  r.corr = Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a + 1; b < d; ++b) {
      double v = std::numeric_limits<double>::quiet_NaN();
      if (!r.degenerate[a] && !r.degenerate[b]) {
        double sxy = 0.0;
        for (std::size_t i = 0; i < t; ++i) sxy += centered[a][i] * centered[b][i];
        v = std::clamp(sxy / std::sqrt(ss[a] * ss[b]), -1.0, 1.0);
        r.max_abs_off_diagonal = std::max(r.max_abs_off_diagonal, std::abs(v));
      }
      const auto ia = static_cast<Eigen::Index>(a);
      const auto ib = static_cast<Eigen::Index>(b);
      r.corr(ia, ib) = v;
      r.corr(ib, ia) = v;
    }
  }
  return r;
}

namespace {

void check_intervals(double center, std::span<const double> lengths) {
  for (double L : lengths) {
    if (!(L > 0.0)) throw ArgumentError("interval lengths must be positive");
    const double e1 = center - 0.5 * L;
    const double e2 = center + 0.5 * L;
    const bool in1 = std::abs(e1) < 2.0;
    const bool in2 = std::abs(e2) < 2.0;
    if (in1 != in2)
      throw ArgumentError("interval [" + format_double(e1) + ", " + format_double(e2) +
                          "] crosses the spectral edge");
  }
}

std::vector<double> centered_counts(const std::vector<double>& spectrum, double center,
                                    std::span<const double> lengths) {
  const double n = static_cast<double>(spectrum.size());
  const double root = std::sqrt(n);
  std::vector<double> out;
  out.reserve(lengths.size());
  for (double L : lengths) {
    const double e1 = center - 0.5 * L;
    const double e2 = center + 0.5 * L;
    const auto lo = std::lower_bound(spectrum.begin(), spectrum.end(), e1 * root);
    const auto hi = std::upper_bound(spectrum.begin(), spectrum.end(), e2 * root);
    out.push_back(static_cast<double>(hi - lo) - n * semicircle_mass(e1, e2));
  }
  return out;
}

VarianceCurve curve_from_counts(const std::vector<std::vector<double>>& counts,
                                std::span<const double> lengths) {
  VarianceCurve vc;
  vc.interval_lengths.assign(lengths.begin(), lengths.end());
  vc.trials = counts.size();
  for (std::size_t l = 0; l < lengths.size(); ++l) {
    if (counts.size() < 2) {
      vc.variances.push_back(0.0);
      continue;
    }
    double mean = 0.0;
    for (const auto& c : counts) mean += c[l];
    mean /= static_cast<double>(counts.size());
    double acc = 0.0;
    for (const auto& c : counts) acc += (c[l] - mean) * (c[l] - mean);
    vc.variances.push_back(acc / static_cast<double>(counts.size() - 1));
  }
  return vc;
}

}  // namespace

VarianceCurve number_variance_curve(const EnsembleSpec& spec, double center,
                                    std::span<const double> lengths, std::size_t trials,
                                    unsigned workers) {
  if (trials == 0) throw ArgumentError("number_variance_curve: trials must be positive");
  check_intervals(center, lengths);
  std::vector<std::vector<double>> counts(trials);
  parallel_for(trials, workers, [&](std::size_t t) {
    counts[t] = centered_counts(sample_spectrum(spec, t), center, lengths);
  });
  return curve_from_counts(counts, lengths);
}

VarianceCurve number_variance_curve(std::span<const std::vector<double>> spectra,
                                    double center, std::span<const double> lengths) {
  if (spectra.empty()) throw ArgumentError("number_variance_curve: no spectra");
  check_intervals(center, lengths);
  std::vector<std::vector<double>> counts;
  counts.reserve(spectra.size());
  for (const auto& s : spectra) {
    if (!std::is_sorted(s.begin(), s.end()))
      throw ArgumentError("number_variance_curve: spectrum not sorted");
    counts.push_back(centered_counts(s, center, lengths));
  }
  return curve_from_counts(counts, lengths);
}

void write_variance_csv(std::ostream& out, const VarianceCurve& curve) {
  out << "length,variance,trials\n";
  for (std::size_t i = 0; i < curve.interval_lengths.size(); ++i)
    out << format_double(curve.interval_lengths[i]) << ',' << format_double(curve.variances[i])
        << ',' << curve.trials << '\n';
}

nlohmann::json to_json(const StatReport& r) {
  nlohmann::json j;
  j["test"] = r.test;
  j["inputs"] = {{"labels", r.labels}, {"trials", r.trials}};
  j["statistic"] = r.statistic;
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  return j;
}

}  // namespace corner
