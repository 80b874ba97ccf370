#include "nsgev/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>

#include "nsgev/cdft.hpp"
#include "nsgev/csv.hpp"
#include "nsgev/diagnostics.hpp"
#include "nsgev/error.hpp"
#include "nsgev/ingest.hpp"
#include "nsgev/model_io.hpp"
#include "nsgev/nonstationary.hpp"
#include "nsgev/random.hpp"
#include "nsgev/return_levels.hpp"
#include "nsgev/stationary.hpp"
#include "nsgev/synthetic.hpp"
#include "nsgev/uncertainty.hpp"
#include "nsgev/version.hpp"

namespace nsgev::cli {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

constexpr double kConfidence = 0.95;

struct YearWindow {
  int first = 0;
  int last = 0;
};

YearWindow parse_years(const std::string& text) {
  const auto sep = text.find("..");
  const auto a = csv::parse_int(text.substr(0, sep));
  const auto b = sep == std::string::npos ? a : csv::parse_int(text.substr(sep + 2));
  if (!a || !b) throw UsageError("--years expects 'first..last' or a single year, got '" + text + "'");
  if (*b < *a) throw UsageError("--years window is empty: '" + text + "'");
  return {static_cast<int>(*a), static_cast<int>(*b)};
}

std::string tool_string() { return std::string(kToolName) + " " + kToolVersion; }

struct Meta {
  std::string command;
  std::uint64_t config_hash = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> extra;
};

void write_header(std::ostream& out, const Meta& meta) {
  out << "# tool: " << tool_string() << '\n';
  out << "# command: " << meta.command << '\n';
  out << "# config_hash: " << csv::hex64(meta.config_hash) << '\n';
  out << "# seed: " << meta.seed << '\n';
  for (const auto& line : meta.extra) out << "# " << line << '\n';
}

json meta_json(const Meta& meta) {
  json j = {{"tool", tool_string()},
            {"command", meta.command},
            {"config_hash", csv::hex64(meta.config_hash)},
            {"seed", meta.seed}};
  return j;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw DomainError("cannot write " + path);
  f << text;
  if (!f) throw DomainError("failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Config config_or_default(const std::string& path) { return path.empty() ? Config{} : load_config(path); }

std::pair<int, int> included_year_span(const BlockMaximaSeries& bm) {
  const auto recs = bm.included();
  if (recs.empty()) throw DataSizeError("no included block maxima");
  return {recs.front().year, recs.back().year};
}

// Bootstrap interval forced to contain the point estimate.
std::pair<double, double> interval_around(std::span<const double> samples, double level) {
  auto [lo, hi] = percentile_ci(samples, kConfidence);
  return {std::min(lo, level), std::max(hi, level)};
}

std::string bootstrap_note(const BootstrapResult& r) {
  return "bootstrap: parametric replicates=" + std::to_string(r.requested) +
         " succeeded=" + std::to_string(r.values.size()) + " failed=" + std::to_string(r.failed_ids.size()) +
         " lambda=fixed";
}

void dump_replicates(const std::string& path, const Meta& meta, const std::vector<std::string>& columns,
                     const BootstrapResult& r, std::ostream& out) {
  std::ostringstream s;
  Meta m = meta;
  m.extra.push_back(bootstrap_note(r));
  write_header(s, m);
  s << "replicate";
  for (const auto& c : columns) s << ',' << c;
  s << '\n';
  for (std::size_t i = 0; i < r.values.size(); ++i) {
    s << r.replicate_ids[i];
    for (double v : r.values[i]) s << ',' << csv::format(v);
    s << '\n';
  }
  write_text(path, s.str(), out);
}

BootstrapOptions bootstrap_options(std::size_t replicates, std::uint64_t seed, unsigned workers) {
  BootstrapOptions b;
  b.replicates = replicates;
  b.seed = seed;
  b.workers = workers;
  return b;
}

// Options shared by several subcommands.
struct Common {
  std::uint64_t seed = 1;
  unsigned workers = 1;
};

struct ExtractArgs {
  std::string input, out, config, block = "monthly", time_column = "time", value_column = "hs";
  std::optional<double> min_coverage;
};

int cmd_extract(const ExtractArgs& a, const Common& c, std::ostream& out) {
  const Config cfg = config_or_default(a.config);
  ColumnMap cols;
  cols.time = a.time_column;
  cols.value = a.value_column;
  const RawSeries series = parse_series(a.input, cols);
  const double cov = a.min_coverage.value_or(cfg.min_coverage);
  const BlockMaximaSeries bm = extract_block_maxima(series, block_kind_from_string(a.block), cov);
  std::size_t excluded = 0;
  for (const auto& r : bm.records) excluded += r.excluded ? 1 : 0;
  std::ostringstream s;
  write_header(s, {"extract", config_hash(cfg), c.seed, {"min_coverage: " + csv::format(cov)}});
  write_block_maxima(s, bm);
  write_text(a.out, s.str(), out);
  if (a.out != "-") {
    out << "extracted " << bm.records.size() << " " << a.block << " blocks, " << excluded << " excluded\n";
  }
  return kExitOk;
}

struct BiasArgs {
  std::string ref_local, ref_model, fut_model, out, summary, time_column = "time", value_column = "hs";
  std::size_t min_sample = kCdftMinSample;
};

int cmd_bias_correct(const BiasArgs& a, const Common& c, std::ostream& out, std::ostream& err) {
  ColumnMap cols;
  cols.time = a.time_column;
  cols.value = a.value_column;
  const RawSeries rl = parse_series(a.ref_local, cols);
  const RawSeries rm = parse_series(a.ref_model, cols);
  const RawSeries fm = parse_series(a.fut_model, cols);
  CdftOptions opts;
  opts.min_sample = a.min_sample;
  const MonthlyCdftResult r = cdft_correct_monthly(rl, rm, fm, opts);
  const Meta meta{"bias-correct", config_hash(Config{}), c.seed, {"clamped_at_zero: " + std::to_string(r.clamped)}};
  std::ostringstream s;
  write_header(s, meta);
  write_series(s, r.corrected);
  write_text(a.out, s.str(), out);
  if (!a.summary.empty()) {
    std::ostringstream t;
    write_header(t, meta);
    write_month_summary(t, r);
    write_text(a.summary, t.str(), out);
  }
  if (r.clamped > 0) err << "clamped " << r.clamped << " corrected values at 0 m\n";
  return kExitOk;
}

struct FitArgs {
  std::string maxima, model = "tensor", config, out_model;
};

int cmd_fit(const FitArgs& a, const Common& c, std::ostream& out) {
  const Config cfg = config_or_default(a.config);
  const BlockMaximaSeries bm = read_block_maxima(a.maxima);
  const ModelKind kind = model_kind_from_string(a.model);
  ModelFile file;
  file.tool_version = tool_string();
  file.config_hash = config_hash(cfg);
  file.seed = c.seed;
  file.scenario = bm.scenario;
  std::ostringstream summary;
  if (kind == ModelKind::stationary) {
    const BlockMaximaSeries annual = bm.kind == BlockKind::monthly ? annual_from_monthly(bm) : bm;
    std::tie(file.first_year, file.last_year) = included_year_span(annual);
    StationaryOptions so;
    so.xi_bounds = cfg.xi_bounds;
    so.gradient_tolerance = 1e-6;
    const StationaryFit fit = fit_stationary(annual, so);
    file.block_kind = to_string(BlockKind::annual);
    summary << "stationary fit: n=" << fit.n << " mu=" << csv::format(fit.params.mu)
            << " sigma=" << csv::format(fit.params.sigma) << " xi=" << csv::format(fit.params.xi) << '\n';
    file.model = fit;
  } else {
    if (bm.kind != BlockKind::monthly) throw DomainError(a.model + " models need monthly maxima");
    std::tie(file.first_year, file.last_year) = included_year_span(bm);
    FitOptions fo;
    fo.lambda_grid = cfg.lambda_grid;
    fo.xi_bounds = cfg.xi_bounds;
    const FittedModel fit = kind == ModelKind::seasonal ? fit_seasonal(bm, cfg.basis, fo) : fit_tensor(bm, cfg.basis, fo);
    file.block_kind = to_string(BlockKind::monthly);
    summary << a.model << " fit: n=" << fit.n << " edf=" << csv::format(fit.edf)
            << " lambda_month=" << csv::format(fit.lambdas.month) << " lambda_year=" << csv::format(fit.lambdas.year)
            << " xi=" << csv::format(fit.xi) << '\n';
    file.model = fit;
  }
  write_text(a.out_model, model_to_json(file), out);
  if (a.out_model != "-") out << summary.str();
  return kExitOk;
}

YearWindow window_or_default(const std::string& years, const ModelFile& file) {
  return years.empty() ? YearWindow{file.first_year, file.last_year} : parse_years(years);
}

struct QuantileArgs {
  std::string model_file, years, out;
  double p = 0.99;
};

int cmd_quantiles(const QuantileArgs& a, const Common& c, std::ostream& out) {
  if (!(a.p > 0.0 && a.p < 1.0)) throw UsageError("--p must lie in (0, 1)");
  const ModelFile file = load_model(a.model_file);
  const YearWindow w = window_or_default(a.years, file);
  std::ostringstream s;
  write_header(s, {"quantiles", file.config_hash, c.seed,
                   {"model_kind: " + to_string(kind_of(file.model)), "probability: " + csv::format(a.p)}});
  s << "year,month,quantile,mu,sigma,xi\n";
  for (int y = w.first; y <= w.last; ++y) {
    for (int m = 1; m <= 12; ++m) {
      GevParams p;
      if (const auto* st = std::get_if<StationaryFit>(&file.model)) {
        if (m > 1) break;
        p = st->params;
      } else {
        p = predict_params(std::get<FittedModel>(file.model), m, y);
      }
      const int month = std::holds_alternative<StationaryFit>(file.model) ? 0 : m;
      s << y << ',' << (month == 0 ? std::string() : std::to_string(month)) << ',' << csv::format(gev_quantile(a.p, p))
        << ',' << csv::format(p.mu) << ',' << csv::format(p.sigma) << ',' << csv::format(p.xi) << '\n';
    }
  }
  write_text(a.out, s.str(), out);
  return kExitOk;
}

struct LevelArgs {
  std::string model_file, years, out, dump;
  double return_period = 100.0;
  std::size_t bootstrap = 200;
};

int cmd_return_levels(const LevelArgs& a, const Common& c, std::ostream& out) {
  if (!(a.return_period > 1.0)) throw UsageError("--N must exceed 1");
  if (a.bootstrap != 0 && a.bootstrap < kMinReplicates) {
    throw UsageError("--bootstrap must be 0 or at least " + std::to_string(kMinReplicates));
  }
  const ModelFile file = load_model(a.model_file);
  const YearWindow w = window_or_default(a.years, file);
  std::vector<int> years;
  for (int y = w.first; y <= w.last; ++y) years.push_back(y);
  const double n_years = a.return_period;
  const Statistic stat = [&](const Model& m) {
    std::vector<double> v;
    v.reserve(years.size());
    for (int y : years) v.push_back(annual_return_level(m, n_years, y));
    return v;
  };
  const std::vector<double> levels = stat(file.model);

  Meta meta{"return-levels", file.config_hash, c.seed,
            {"model_kind: " + to_string(kind_of(file.model)), "return_period: " + csv::format(a.return_period)}};
  std::vector<std::pair<double, double>> bounds(years.size(), {std::nan(""), std::nan("")});
  if (a.bootstrap > 0) {
    const BootstrapResult r = parametric_bootstrap(file.model, stat, bootstrap_options(a.bootstrap, c.seed, c.workers));
    for (std::size_t j = 0; j < years.size(); ++j) bounds[j] = interval_around(r.column(j), levels[j]);
    meta.extra.push_back(bootstrap_note(r));
    meta.extra.push_back("interval: percentile 95%");
    if (!a.dump.empty()) {
      std::vector<std::string> cols;
      for (int y : years) cols.push_back("level_" + std::to_string(y));
      dump_replicates(a.dump, meta, cols, r, out);
    }
  } else if (const auto* st = std::get_if<StationaryFit>(&file.model)) {
    const LevelEstimate e = return_level_stationary(*st, a.return_period, kConfidence);
    std::fill(bounds.begin(), bounds.end(), std::pair{e.lower, e.upper});
    meta.extra.push_back("interval: delta method 95%");
  } else {
    meta.extra.push_back("interval: none (bootstrap disabled)");
  }
  std::ostringstream s;
  write_header(s, meta);
  s << "year,level,lo,hi\n";
  for (std::size_t j = 0; j < years.size(); ++j) {
    s << years[j] << ',' << csv::format(levels[j]) << ',' << csv::format(bounds[j].first) << ','
      << csv::format(bounds[j].second) << '\n';
  }
  write_text(a.out, s.str(), out);
  return kExitOk;
}

struct DesignArgs {
  std::string model_file, years, out, dump;
  int lifetime = 30;
  double p_annual = 0.01;
  std::size_t bootstrap = 200;
};

int cmd_lifetime_design(const DesignArgs& a, const Common& c, std::ostream& out) {
  if (a.lifetime < 1) throw UsageError("--lifetime must be at least 1");
  if (!(a.p_annual > 0.0 && a.p_annual < 1.0)) throw UsageError("--p-annual must lie in (0, 1)");
  if (a.bootstrap != 0 && a.bootstrap < kMinReplicates) {
    throw UsageError("--bootstrap must be 0 or at least " + std::to_string(kMinReplicates));
  }
  const ModelFile file = load_model(a.model_file);
  const YearWindow w = window_or_default(a.years, file);
  const std::vector<int> years = lifetime_years(w.first, w.last, a.lifetime);
  const int window_len = w.last - w.first + 1;
  const double p_annual = a.p_annual;
  const Statistic stat = [&](const Model& m) {
    return std::vector<double>{equivalent_design_level(m, years, p_annual).level};
  };
  DesignLevelResult result = equivalent_design_level(file.model, years, a.p_annual);

  Meta meta{"lifetime-design", file.config_hash, c.seed, {}};
  json j = {{"schema", kSchemaVersion}};
  json md = meta_json(meta);
  md["model_kind"] = to_string(kind_of(file.model));
  if (a.bootstrap > 0) {
    const BootstrapResult r = parametric_bootstrap(file.model, stat, bootstrap_options(a.bootstrap, c.seed, c.workers));
    std::tie(result.lower, result.upper) = interval_around(r.column(0), result.level);
    result.has_interval = true;
    md["bootstrap"] = {{"method", "parametric"},
                       {"replicates", r.requested},
                       {"succeeded", r.values.size()},
                       {"failed", r.failed_ids.size()},
                       {"lambda", "fixed"},
                       {"interval", "percentile"}};
    if (!a.dump.empty()) {
      meta.extra.push_back("model_kind: " + to_string(kind_of(file.model)));
      dump_replicates(a.dump, meta, {"level"}, r, out);
    }
  } else if (const auto* st = std::get_if<StationaryFit>(&file.model)) {
    // The stationary design level is the 1/p_annual-year return level.
    const LevelEstimate e = return_level_stationary(*st, 1.0 / a.p_annual, kConfidence);
    result.lower = std::min(e.lower, result.level);
    result.upper = std::max(e.upper, result.level);
    result.has_interval = true;
    md["interval_method"] = "delta";
  }
  j["metadata"] = md;
  j["level"] = result.level;
  j["target_survival"] = result.target_survival;
  j["lifetime_years"] = result.lifetime_years;
  j["p_annual"] = result.p_annual;
  j["method"] = to_string(result.method);
  j["interval"] = result.has_interval ? json{{"lower", result.lower}, {"upper", result.upper}, {"confidence", kConfidence}}
                                      : json(nullptr);
  j["years"] = {{"window", {w.first, w.last}},
                {"list", years},
                {"held_flat_years", std::max(0, a.lifetime - window_len)},
                {"truncated_years", std::max(0, window_len - a.lifetime)},
                {"extension_rule", "terminal year repeated"}};
  write_text(a.out, j.dump(2) + "\n", out);
  if (a.out != "-") {
    out << "design level " << csv::format(result.level) << " m (target survival "
        << csv::format(result.target_survival) << ")\n";
  }
  return kExitOk;
}

struct DiagnoseArgs {
  std::string model_file, maxima, out;
  std::size_t max_lag = 24;
};

int cmd_diagnose(const DiagnoseArgs& a, const Common& c, std::ostream& out) {
  const ModelFile file = load_model(a.model_file);
  BlockMaximaSeries bm = read_block_maxima(a.maxima);
  if (std::holds_alternative<StationaryFit>(file.model) && bm.kind == BlockKind::monthly) bm = annual_from_monthly(bm);
  const ResidualSeries res = pit_residuals(file.model, bm);
  const std::vector<double> values = res.values();
  const Correlogram cg = correlogram(values, a.max_lag);
  std::size_t inside = 0;
  for (std::size_t k = 1; k <= a.max_lag; ++k) inside += std::abs(cg.acf[k]) <= cg.band ? 1 : 0;

  const Meta meta{"diagnose",
                  file.config_hash,
                  c.seed,
                  {"model_kind: " + to_string(kind_of(file.model)), "residuals: " + std::to_string(values.size()),
                   "gaps: " + std::to_string(res.gap_count), "band: " + csv::format(cg.band)}};
  std::ostringstream acf_out;
  write_header(acf_out, meta);
  acf_out << "lag,acf,pacf,band\n";
  for (std::size_t k = 0; k <= a.max_lag; ++k) {
    acf_out << k << ',' << csv::format(cg.acf[k]) << ',' << (k == 0 ? std::string("NA") : csv::format(cg.pacf[k - 1]))
            << ',' << csv::format(cg.band) << '\n';
  }
  std::ostringstream qq_out;
  write_header(qq_out, meta);
  qq_out << "empirical,model\n";
  for (const auto& [e, m] : qq_data(file.model, bm)) qq_out << csv::format(e) << ',' << csv::format(m) << '\n';
  std::ostringstream res_out;
  write_header(res_out, meta);
  res_out << "year,month,residual\n";
  for (const auto& r : res.residuals) {
    res_out << r.year << ',' << (r.month == 0 ? std::string() : std::to_string(r.month)) << ','
            << (r.value ? csv::format(*r.value) : std::string("NA")) << '\n';
  }
  write_text(a.out + "_acf.csv", acf_out.str(), out);
  write_text(a.out + "_qq.csv", qq_out.str(), out);
  write_text(a.out + "_residuals.csv", res_out.str(), out);
  out << inside << " of " << a.max_lag << " ACF lags inside the white-noise band (gaps: " << res.gap_count << ")\n";
  return kExitOk;
}

struct SimulateArgs {
  std::string truth_config, years = "1991..2020", out, block = "monthly";
  bool raw = false;
};

int cmd_simulate(const SimulateArgs& a, const Common& c, std::ostream& out) {
  const YearWindow w = parse_years(a.years);
  const SyntheticTruth truth = a.truth_config.empty() ? SyntheticTruth{} : truth_from_json(read_text(a.truth_config));
  const BlockKind kind = block_kind_from_string(a.block);
  const BlockMaximaSeries monthly = simulate_monthly_maxima(truth, w.first, w.last, c.seed);
  const Meta meta{"simulate", csv::fnv1a(truth_to_json(truth)), c.seed, {"years: " + a.years}};
  std::ostringstream s;
  write_header(s, meta);
  if (a.raw) {
    write_series(s, embed_in_series(monthly, 3 * 3600, stream_seed(c.seed, 1)));
  } else {
    write_block_maxima(s, kind == BlockKind::monthly ? monthly : annual_from_monthly(monthly));
  }
  write_text(a.out, s.str(), out);
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Non-stationary GEV analysis of wave-height block maxima", kToolName};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", tool_string());
  app.failure_message(CLI::FailureMessage::help);

  Common common;
  const auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
  };
  const auto add_workers = [&](CLI::App* sub) {
    sub->add_option("--workers", common.workers, "Bootstrap worker threads")
        ->capture_default_str()
        ->check(CLI::Range(1u, 256u));
  };
  const auto block_check = CLI::IsMember({"monthly", "annual"});

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract block maxima from a raw series");
  extract->add_option("--input", ex.input, "Raw series CSV")->required();
  extract->add_option("--block", ex.block, "Block size")->check(block_check)->capture_default_str();
  extract->add_option("--min-coverage", ex.min_coverage, "Minimum fraction of observed samples per block")
      ->check(CLI::Range(0.0, 1.0));
  extract->add_option("--config", ex.config, "JSON config");
  extract->add_option("--time-column", ex.time_column)->capture_default_str();
  extract->add_option("--value-column", ex.value_column)->capture_default_str();
  extract->add_option("--out", ex.out, "Output maxima CSV")->required();
  add_seed(extract);

  BiasArgs bc;
  auto* bias = app.add_subcommand("bias-correct", "Per-month CDF-t correction of a future model series");
  bias->add_option("--ref-local", bc.ref_local, "Reference-period local series")->required();
  bias->add_option("--ref-model", bc.ref_model, "Reference-period model series")->required();
  bias->add_option("--fut-model", bc.fut_model, "Future-period model series")->required();
  bias->add_option("--out", bc.out, "Corrected series CSV")->required();
  bias->add_option("--summary", bc.summary, "Per-month summary CSV");
  bias->add_option("--min-sample", bc.min_sample, "Minimum values per month and input")->capture_default_str();
  bias->add_option("--time-column", bc.time_column)->capture_default_str();
  bias->add_option("--value-column", bc.value_column)->capture_default_str();
  add_seed(bias);

  FitArgs fa;
  auto* fit = app.add_subcommand("fit", "Fit a GEV model to block maxima");
  fit->add_option("--maxima", fa.maxima, "Block maxima CSV")->required();
  fit->add_option("--model", fa.model, "Model class")
      ->check(CLI::IsMember({"stationary", "seasonal", "tensor"}))
      ->capture_default_str();
  fit->add_option("--config", fa.config, "JSON config");
  fit->add_option("--out-model", fa.out_model, "Output model JSON")->required();
  add_seed(fit);

  QuantileArgs qa;
  auto* quant = app.add_subcommand("quantiles", "Monthly quantile surface");
  quant->add_option("--model-file", qa.model_file)->required();
  quant->add_option("--p", qa.p, "Non-exceedance probability")->capture_default_str();
  quant->add_option("--years", qa.years, "Year window first..last");
  quant->add_option("--out", qa.out)->required();
  add_seed(quant);

  LevelArgs la;
  auto* levels = app.add_subcommand("return-levels", "Annual return levels per year");
  levels->add_option("--model-file", la.model_file)->required();
  levels->add_option("--N", la.return_period, "Return period in years")->capture_default_str();
  levels->add_option("--years", la.years, "Year window first..last");
  levels->add_option("--bootstrap", la.bootstrap, "Bootstrap replicates (0 disables)")->capture_default_str();
  levels->add_option("--dump-replicates", la.dump, "Bootstrap replicate CSV");
  levels->add_option("--out", la.out)->required();
  add_seed(levels);
  add_workers(levels);

  DesignArgs da;
  auto* design = app.add_subcommand("lifetime-design", "Equivalent design level over a structure lifetime");
  design->add_option("--model-file", da.model_file)->required();
  design->add_option("--lifetime", da.lifetime, "Lifetime in years")->capture_default_str();
  design->add_option("--p-annual", da.p_annual, "Annual exceedance probability")->capture_default_str();
  design->add_option("--years", da.years, "Year window first..last");
  design->add_option("--bootstrap", da.bootstrap, "Bootstrap replicates (0 disables)")->capture_default_str();
  design->add_option("--dump-replicates", da.dump, "Bootstrap replicate CSV");
  design->add_option("--out", da.out)->required();
  add_seed(design);
  add_workers(design);

  DiagnoseArgs dg;
  auto* diag = app.add_subcommand("diagnose", "Residual ACF/PACF and QQ data");
  diag->add_option("--model-file", dg.model_file)->required();
  diag->add_option("--maxima", dg.maxima)->required();
  diag->add_option("--max-lag", dg.max_lag)->capture_default_str()->check(CLI::PositiveNumber);
  diag->add_option("--out", dg.out, "Output prefix")->required();
  add_seed(diag);

  SimulateArgs sa;
  auto* sim = app.add_subcommand("simulate", "Synthetic maxima or raw series from a known truth");
  sim->add_option("--truth-config", sa.truth_config, "Truth JSON");
  sim->add_option("--years", sa.years, "Year window first..last")->capture_default_str();
  sim->add_option("--block", sa.block, "Block size of the maxima output")->check(block_check)->capture_default_str();
  sim->add_flag("--raw", sa.raw, "Emit a 3-hourly raw series instead of maxima");
  sim->add_option("--out", sa.out)->required();
  add_seed(sim);

  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.push_back(kToolName);
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* active = app.get_subcommands().front();
  try {
    if (active == extract) return cmd_extract(ex, common, out);
    if (active == bias) return cmd_bias_correct(bc, common, out, err);
    if (active == fit) return cmd_fit(fa, common, out);
    if (active == quant) return cmd_quantiles(qa, common, out);
    if (active == levels) return cmd_return_levels(la, common, out);
    if (active == design) return cmd_lifetime_design(da, common, out);
    if (active == diag) return cmd_diagnose(dg, common, out);
    if (active == sim) return cmd_simulate(sa, common, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace nsgev::cli
