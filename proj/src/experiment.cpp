#include "corner/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "corner/bulk_bead.hpp"
#include "corner/error.hpp"
#include "corner/format.hpp"
#include "corner/parallel.hpp"

namespace corner {
namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string normalize_key(std::string_view key) {
  std::string k(trim(key));
  while (!k.empty() && k.front() == '-') k.erase(k.begin());
  std::replace(k.begin(), k.end(), '-', '_');
  return k;
}

std::uint64_t parse_unsigned(std::string_view field, std::string_view v) {
  v = trim(v);
  std::uint64_t out = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size())
    throw ConfigError(std::string(field), "expected a nonnegative integer, got '" +
                                              std::string(v) + "'");
  return out;
}

double parse_real(std::string_view field, std::string_view v) {
  v = trim(v);
  double out = 0.0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (v.empty() || res.ec != std::errc() || res.ptr != v.data() + v.size() || !std::isfinite(out))
    throw ConfigError(std::string(field), "expected a finite number, got '" + std::string(v) + "'");
  return out;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + path + "' for writing");
  return f;
}

void finish(std::ofstream& f, const std::string& path) {
  f.flush();
  if (!f) throw IoError("failed writing '" + path + "'");
}

template <class Writer>
void emit(const ExperimentConfig& cfg, std::ostream& out, Writer&& write) {
  if (cfg.out_path == "-") {
    write(out);
    out.flush();
    return;
  }
  std::ofstream f = open_output(cfg.out_path);
  write(f);
  finish(f, cfg.out_path);
}

StatReport make_report(std::string test, std::vector<std::string> labels, std::size_t trials,
                       double statistic, double threshold) {
  StatReport r;
  r.test = std::move(test);
  r.labels = std::move(labels);
  r.trials = trials;
  r.statistic = statistic;
  r.threshold = threshold;
  r.pass = statistic < threshold;
  return r;
}

nlohmann::json reports_json(const std::vector<StatReport>& reports) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : reports) arr.push_back(to_json(r));
  return arr;
}

std::string coord_label(const char* what, std::size_t i, std::size_t s) {
  return std::string(what) + "[i=" + std::to_string(i + 1) + ",s=" + std::to_string(s) + "]";
}

// ---- edge -------------------------------------------------------------------

std::vector<StatReport> edge_reports(const ExperimentConfig& cfg, const EdgeSampleSet& set) {
  std::vector<StatReport> out;
  const int beta = cfg.beta;
  const double ks_threshold = beta == 2 ? 0.06 : 0.08;
  std::vector<std::vector<double>> columns;
  std::vector<std::string> names;
  for (std::size_t i = 0; i < set.ell; ++i) {
    for (std::size_t s = 0; s < set.k; ++s) {
      auto col = set.spacing_column(i, s);
      const std::string label = coord_label("spacing", i, s);
      const double d = ks_one_sample(SampleVector(col, label, {0, cfg.seed}),
                                     [beta](double x) { return gamma_cdf(x, beta); });
      out.push_back(make_report("ks_gamma", {label}, set.trials, d, ks_threshold));
      columns.push_back(std::move(col));
      names.push_back(label);
    }
  }
  const std::size_t n_spacing = columns.size();
  for (std::size_t i = 0; i < set.ell; ++i) {
    columns.push_back(set.tw_column(i));
    names.push_back("tw[i=" + std::to_string(i + 1) + "]");
  }
  if (set.trials >= 2) {
    const CorrelationReport cr = independence_report(columns);
    double worst = 0.0;
    for (std::size_t a = 0; a < columns.size(); ++a)
      for (std::size_t b = a + 1; b < columns.size(); ++b) {
        if (a >= n_spacing) continue;  // both TW: dependent by construction
        const double v = cr.corr(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (std::isfinite(v)) worst = std::max(worst, std::abs(v));
      }
    out.push_back(make_report("max_abs_correlation", names, set.trials, worst, 0.1));
  }
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& g : set.residual)
    for (double v : g.values) {
      total += std::abs(v);
      ++count;
    }
  if (count > 0)
    out.push_back(make_report("mean_abs_spacing_residual", {"residual"}, set.trials,
                              total / static_cast<double>(count), 0.15));
  return out;
}

ExecutionResult run_edge(const ExperimentConfig& cfg, unsigned workers, std::ostream& out) {
  std::vector<EdgeSampleSet> per_trial(cfg.trials);
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    EdgeSampleSet one;
    one.ell = cfg.ell;
    one.side = cfg.side;
    one.append(simulate_corner_process(cfg, t));
    per_trial[t] = std::move(one);
  });
  EdgeSampleSet set;
  set.ell = cfg.ell;
  set.side = cfg.side;
  for (const auto& one : per_trial) set.extend(one);

  ExecutionResult result;
  result.reports = edge_reports(cfg, set);
  if (effective_format(cfg) == OutputFormat::csv) {
    emit(cfg, out, [&](std::ostream& o) { write_csv(o, set); });
    if (cfg.out_path != "-") {
      const std::string path = cfg.out_path + ".report.json";
      std::ofstream f = open_output(path);
      f << reports_json(result.reports).dump(2) << '\n';
      finish(f, path);
    }
  } else {
    nlohmann::json j;
    j["trials"] = set.trials;
    j["ell"] = set.ell;
    j["k"] = set.k;
    j["side"] = side_name(set.side);
    j["tw"] = set.tw;
    nlohmann::json sp = nlohmann::json::array();
    for (std::size_t t = 0; t < set.trials; ++t)
      sp.push_back({{"spacing", set.spacing[t].values},
                    {"weight", set.weight[t].values},
                    {"residual", set.residual[t].values}});
    j["grids"] = std::move(sp);
    j["reports"] = reports_json(result.reports);
    emit(cfg, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }
  return result;
}

// ---- bulk -------------------------------------------------------------------

ExecutionResult run_bulk(const ExperimentConfig& cfg, unsigned workers, std::ostream& out) {
  std::vector<std::vector<PointConfiguration>> configs(cfg.trials);
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    const CornerProcess cp = simulate_corner_process(cfg, t);
    for (const auto& level : cp.levels)
      configs[t].push_back(bulk_window_extract(level, cfg.energy, cfg.window));
  });
  const auto rows = counting_table(configs);
  if (effective_format(cfg) == OutputFormat::csv) {
    emit(cfg, out, [&](std::ostream& o) { write_counting_csv(o, rows); });
  } else {
    nlohmann::json j;
    j["E"] = cfg.energy;
    j["W"] = cfg.window;
    j["trials"] = cfg.trials;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows)
      arr.push_back({{"step", r.step},
                     {"x", r.x},
                     {"count", r.count},
                     {"expected", r.expected},
                     {"deviation", r.deviation}});
    j["rows"] = std::move(arr);
    emit(cfg, out, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
  }
  return {};
}

// ---- bead -------------------------------------------------------------------

std::vector<double> level0_spectrum(const ExperimentConfig& cfg, std::uint64_t trial) {
  EnsembleSpec spec;
  spec.n = cfg.n;
  spec.law = EntryLaw::parse(cfg.law, cfg.beta);
  spec.seed = cfg.seed;
  spec.tridiagonal = uses_spectral_engine(cfg) && cfg.beta == 2;
  return sample_spectrum(spec, trial);
}

ExecutionResult run_bead(const ExperimentConfig& cfg, unsigned workers, std::ostream& out) {
  std::vector<ChainRun> runs(cfg.trials);
  parallel_for(cfg.trials, workers, [&](std::size_t t) {
    SpectralLevel level0{0, level0_spectrum(cfg, t), std::nullopt};
    BeadLevel init;
    init.config = bulk_window_extract(level0, cfg.energy, cfg.window);
    init.weights.beta = cfg.beta;
    init.h = bulk_level_constant(cfg.energy);
    runs[t] = bead_chain(init, cfg.steps, cfg.seed, t, {BeadMode::padded});
  });
  if (effective_format(cfg) == OutputFormat::json) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : runs) arr.push_back(to_json(r));
    emit(cfg, out, [&](std::ostream& o) { o << arr.dump(2) << '\n'; });
  } else {
    std::vector<std::vector<PointConfiguration>> configs;
    configs.reserve(runs.size());
    for (auto& r : runs) configs.push_back(std::move(r.levels));
    const auto rows = counting_table(configs);
    emit(cfg, out, [&](std::ostream& o) { write_counting_csv(o, rows); });
  }
  return {};
}

// ---- verify -----------------------------------------------------------------

struct VerifyTrial {
  double secular = 0.0;
  double interlacing = 0.0;
  double trace = 0.0;
  double parseval = 0.0;
  double bead = 0.0;
};

double max_rel_discrepancy(const CornerProcess& a, const CornerProcess& b) {
  double worst = 0.0;
  for (std::size_t s = 0; s < a.levels.size(); ++s) {
    const auto& x = a.levels[s].eigenvalues;
    const auto& y = b.levels[s].eigenvalues;
    if (x.size() != y.size()) return std::numeric_limits<double>::infinity();
    double scale = 0.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) scale = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      worst = std::max(worst, std::abs(x[i] - y[i]) / scale);
  }
  return worst;
}

VerifyTrial verify_trial(const ExperimentConfig& cfg, std::uint64_t t) {
  const EntryLaw law = EntryLaw::parse(cfg.law, cfg.beta);
  const WignerMatrix h = sample_wigner(cfg.n + cfg.k_levels, law, cfg.seed, t);
  const auto minors = bordered_minor_sequence(h, cfg.k_levels);
  const CornerProcess direct = corner_eigenvalues_direct(minors, true);
  const CornerProcess secular = corner_eigenvalues_secular(minors);
  VerifyTrial v;
  v.secular = max_rel_discrepancy(direct, secular);
  for (const CornerProcess* cp : {&direct, &secular}) {
    const StructureReport sr = structure_check(*cp);
    v.interlacing = std::max(v.interlacing, sr.interlacing);
    v.trace = std::max(v.trace, sr.max_trace_rel_error);
    v.parseval = std::max(v.parseval, sr.max_parseval_rel_error);
  }
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < direct.borders.size(); ++s) {
    const SpectralLevel& level = direct.levels[s];
    BeadLevel bl;
    bl.config = bulk_window_extract(level, cfg.energy, inf);
    bl.weights = relabel_weights(bl.config, direct.borders[s], cfg.beta);
    bl.h = bulk_level_constant(cfg.energy);
    const PointConfiguration got =
        bead_step(bl, {BeadMode::finite_n, 10.0, direct.borders[s].corner_entry});
    const PointConfiguration want = bulk_window_extract(direct.levels[s + 1], cfg.energy, inf);
    if (got.size() != want.size() || got.first_label != want.first_label) {
      v.bead = inf;
      continue;
    }
    for (std::size_t j = 0; j < got.size(); ++j)
      v.bead = std::max(v.bead, std::abs(got.points[j] - want.points[j]) /
                                    std::max(1.0, std::abs(want.points[j])));
  }
  return v;
}

ExecutionResult run_verify(const ExperimentConfig& cfg, unsigned workers, std::ostream& out) {
  std::vector<VerifyTrial> per(cfg.trials);
  parallel_for(cfg.trials, workers, [&](std::size_t t) { per[t] = verify_trial(cfg, t); });
  VerifyTrial worst;
  for (const auto& v : per) {
    worst.secular = std::max(worst.secular, v.secular);
    worst.interlacing = std::max(worst.interlacing, v.interlacing);
    worst.trace = std::max(worst.trace, v.trace);
    worst.parseval = std::max(worst.parseval, v.parseval);
    worst.bead = std::max(worst.bead, v.bead);
  }
  double pv = 0.0;
  std::vector<double> energies{-1.5, -1.0, 0.0, 0.7, 1.9};
  if (std::find(energies.begin(), energies.end(), cfg.energy) == energies.end())
    energies.push_back(cfg.energy);
  for (double e : energies)
    pv = std::max(pv, std::abs(bulk_level_constant(e) -
                               semicircle_pv_quadrature(e) / std::sqrt(4.0 - e * e)));

  ExecutionResult result;
  const std::string lbl = cfg.law + ",beta=" + std::to_string(cfg.beta);
  result.reports.push_back(make_report("secular_vs_direct", {lbl}, cfg.trials, worst.secular, 1e-10));
  result.reports.push_back(make_report("interlacing", {lbl}, cfg.trials, worst.interlacing, 1e-9));
  result.reports.push_back(make_report("trace_identity", {lbl}, cfg.trials, worst.trace, 1e-10));
  result.reports.push_back(make_report("parseval_weights", {lbl}, cfg.trials, worst.parseval, 1e-10));
  result.reports.push_back(make_report("finite_n_bead", {lbl}, cfg.trials, worst.bead, 1e-8));
  std::vector<std::string> elabels;
  for (double e : energies) elabels.push_back("E=" + format_double(e));
  result.reports.push_back(make_report("level_constant_pv", elabels, 0, pv, 1e-6));
  for (const auto& r : result.reports)
    if (!r.pass) result.status = 1;

  if (effective_format(cfg) == OutputFormat::json) {
    emit(cfg, out, [&](std::ostream& o) { o << reports_json(result.reports).dump(2) << '\n'; });
  } else {
    emit(cfg, out, [&](std::ostream& o) {
      o << "test,statistic,threshold,pass\n";
      for (const auto& r : result.reports)
        o << r.test << ',' << format_double(r.statistic) << ',' << format_double(r.threshold)
          << ',' << (r.pass ? "true" : "false") << '\n';
    });
  }
  return result;
}

// ---- sample -----------------------------------------------------------------

ExecutionResult run_sample(const ExperimentConfig& cfg, std::ostream& out) {
  const CornerProcess cp = simulate_corner_process(cfg, 0);
  if (effective_format(cfg) == OutputFormat::json) {
    emit(cfg, out, [&](std::ostream& o) { o << to_json(cp).dump(2) << '\n'; });
  } else {
    emit(cfg, out, [&](std::ostream& o) {
      o << "s,i,eigenvalue,weight\n";
      for (const auto& level : cp.levels) {
        const BorderData* b = level.s < cp.borders.size() ? &cp.borders[level.s] : nullptr;
        for (std::size_t i = 0; i < level.size(); ++i) {
          o << level.s << ',' << i + 1 << ',' << format_double(level.eigenvalues[i]) << ',';
          if (b && i < b->weights.size()) o << format_double(b->weights[i]);
          o << '\n';
        }
      }
    });
  }
  return {};
}

}  // namespace

Command parse_command(std::string_view name) {
  name = trim(name);
  if (name == "edge") return Command::edge;
  if (name == "bulk") return Command::bulk;
  if (name == "bead") return Command::bead;
  if (name == "verify") return Command::verify;
  if (name == "sample") return Command::sample;
  throw ConfigError("command", "unknown command '" + std::string(name) + "'");
}

const char* command_name(Command c) noexcept {
  switch (c) {
    case Command::edge: return "edge";
    case Command::bulk: return "bulk";
    case Command::bead: return "bead";
    case Command::verify: return "verify";
    case Command::sample: return "sample";
  }
  return "?";
}

void set_config_value(ExperimentConfig& cfg, std::string_view raw_key, std::string_view value) {
  const std::string key = normalize_key(raw_key);
  const std::string_view v = trim(value);
  if (key == "command") {
    cfg.command = parse_command(v);
  } else if (key == "n") {
    cfg.n = parse_unsigned(key, v);
  } else if (key == "k_levels" || key == "k") {
    cfg.k_levels = parse_unsigned("k_levels", v);
  } else if (key == "ell") {
    cfg.ell = parse_unsigned(key, v);
  } else if (key == "beta") {
    const auto b = parse_unsigned(key, v);
    if (b != 1 && b != 2) throw ConfigError("beta", "must be 1 or 2");
    cfg.beta = static_cast<int>(b);
  } else if (key == "dist" || key == "law") {
    EntryLaw::parse(v, 2);
    cfg.law = std::string(v);
  } else if (key == "energy") {
    cfg.energy = parse_real(key, v);
  } else if (key == "window") {
    cfg.window = parse_real(key, v);
  } else if (key == "trials") {
    cfg.trials = parse_unsigned(key, v);
  } else if (key == "steps") {
    cfg.steps = parse_unsigned(key, v);
  } else if (key == "seed") {
    cfg.seed = parse_unsigned(key, v);
  } else if (key == "out" || key == "out_path") {
    if (v.empty()) throw ConfigError("out", "empty path");
    cfg.out_path = std::string(v);
  } else if (key == "format") {
    if (v == "csv")
      cfg.format = OutputFormat::csv;
    else if (v == "json")
      cfg.format = OutputFormat::json;
    else
      throw ConfigError("format", "expected csv or json, got '" + std::string(v) + "'");
  } else if (key == "side") {
    cfg.side = parse_side(v);
  } else if (key == "engine") {
    if (v == "auto")
      cfg.engine = Engine::automatic;
    else if (v == "dense")
      cfg.engine = Engine::dense;
    else if (v == "spectral")
      cfg.engine = Engine::spectral;
    else
      throw ConfigError("engine", "expected auto, dense or spectral, got '" + std::string(v) + "'");
  } else {
    throw ConfigError(key.empty() ? std::string("key") : key, "unknown configuration key");
  }
}

void apply_config_text(ExperimentConfig& cfg, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config", "line " + std::to_string(line_no) + ": expected key = value");
    set_config_value(cfg, line.substr(0, eq), line.substr(eq + 1));
  }
}

void load_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("config", "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  apply_config_text(cfg, ss.str());
}

OutputFormat effective_format(const ExperimentConfig& cfg) {
  if (cfg.format) return *cfg.format;
  switch (cfg.command) {
    case Command::bead:
    case Command::verify:
    case Command::sample:
      return OutputFormat::json;
    default:
      return OutputFormat::csv;
  }
}

bool uses_spectral_engine(const ExperimentConfig& cfg) {
  if (cfg.engine == Engine::spectral) return true;
  if (cfg.engine == Engine::dense) return false;
  return EntryLaw::parse(cfg.law, cfg.beta).kind() == EntryKind::gaussian;
}

void validate(const ExperimentConfig& cfg) {
  const EntryLaw law = EntryLaw::parse(cfg.law, cfg.beta);
  if (cfg.n < 2) throw ConfigError("n", "must be at least 2");
  if (cfg.trials == 0) throw ConfigError("trials", "must be positive");
  if (cfg.engine == Engine::spectral && law.kind() != EntryKind::gaussian)
    throw ConfigError("engine", "the spectral engine needs Gaussian entries");
  switch (cfg.command) {
    case Command::edge:
      if (cfg.k_levels == 0) throw ConfigError("k_levels", "must be positive");
      if (cfg.ell == 0) throw ConfigError("ell", "must be positive");
      if (cfg.ell > cfg.n) throw ConfigError("ell", "must not exceed n");
      break;
    case Command::bulk:
    case Command::bead:
    case Command::verify:
      if (!(std::abs(cfg.energy) < 2.0)) throw ConfigError("energy", "must lie in (-2, 2)");
      if (!(cfg.window > 0.0)) throw ConfigError("window", "must be positive");
      if (cfg.command == Command::bead && cfg.steps == 0)
        throw ConfigError("steps", "must be positive");
      if (cfg.command == Command::bulk && !(cfg.window > 5.0))
        throw ConfigError("window", "must exceed the boundary buffer of 5");
      if (cfg.command == Command::verify && cfg.k_levels == 0)
        throw ConfigError("k_levels", "must be positive");
      break;
    case Command::sample:
      break;
  }
  if (cfg.command == Command::bead && !(cfg.window > 5.0))
    throw ConfigError("window", "must exceed the boundary buffer of 5");
}

CornerProcess simulate_corner_process(const ExperimentConfig& cfg, std::uint64_t trial) {
  const EntryLaw law = EntryLaw::parse(cfg.law, cfg.beta);
  if (uses_spectral_engine(cfg)) {
    EnsembleSpec spec{cfg.n, law, cfg.seed, cfg.beta == 2};
    return spectral_corner_process(sample_spectrum(spec, trial), cfg.k_levels, cfg.beta, cfg.seed,
                                   trial);
  }
  const WignerMatrix h = sample_wigner(cfg.n + cfg.k_levels, law, cfg.seed, trial);
  const auto minors = bordered_minor_sequence(h, cfg.k_levels);
  return corner_eigenvalues_direct(minors, true);
}

ExecutionResult execute(const ExperimentConfig& cfg, unsigned workers, std::ostream& stdout_stream) {
  validate(cfg);
  if (workers == 0) workers = 1;
  switch (cfg.command) {
    case Command::edge: return run_edge(cfg, workers, stdout_stream);
    case Command::bulk: return run_bulk(cfg, workers, stdout_stream);
    case Command::bead: return run_bead(cfg, workers, stdout_stream);
    case Command::verify: return run_verify(cfg, workers, stdout_stream);
    case Command::sample: return run_sample(cfg, stdout_stream);
  }
  return {};
}

}  // namespace corner
