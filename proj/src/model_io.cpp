#include "nsgev/model_io.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "nsgev/csv.hpp"
#include "nsgev/error.hpp"

namespace nsgev {
namespace {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_document(const std::string& text, const char* what) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string(what) + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw DomainError(std::string(what) + " must be a JSON object");
  const int schema = j.value("schema", kSchemaVersion);
  if (schema != kSchemaVersion) {
    throw DomainError(std::string(what) + " has unsupported schema " + std::to_string(schema));
  }
  return j;
}

json basis_to_json(const BasisSpec& s) {
  return {{"k_month", s.k_month},
          {"k_year", s.k_year},
          {"penalty_order", s.penalty_order},
          {"first_year", s.first_year},
          {"last_year", s.last_year}};
}

BasisSpec basis_from_json(const json& j) {
  BasisSpec s;
  s.k_month = j.value("k_month", s.k_month);
  s.k_year = j.value("k_year", s.k_year);
  s.penalty_order = j.value("penalty_order", s.penalty_order);
  s.first_year = j.value("first_year", s.first_year);
  s.last_year = j.value("last_year", s.last_year);
  return s;
}

json bounds_to_json(const XiBounds& b) { return {{"lower", b.lower}, {"upper", b.upper}}; }

XiBounds bounds_from_json(const json& j) {
  XiBounds b;
  b.lower = j.value("lower", b.lower);
  b.upper = j.value("upper", b.upper);
  if (!(b.lower < 0.0 && b.upper > 0.0)) throw DomainError("xi bounds must bracket 0");
  return b;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(rows, rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j.at(static_cast<std::size_t>(i));
    if (static_cast<Eigen::Index>(row.size()) != rows) throw DomainError("model matrix is not square");
    for (Eigen::Index k = 0; k < rows; ++k) m(i, k) = row.at(static_cast<std::size_t>(k)).get<double>();
  }
  return m;
}

json stationary_to_json(const StationaryFit& f) {
  return {{"mu", f.params.mu},
          {"sigma", f.params.sigma},
          {"xi", f.params.xi},
          {"cov", matrix_to_json(f.cov)},
          {"loglik", f.loglik},
          {"n", f.n},
          {"converged", f.converged},
          {"iterations", f.iterations},
          {"data_fingerprint", csv::hex64(f.data_fingerprint)},
          {"xi_bounds", bounds_to_json(f.xi_bounds)}};
}

std::uint64_t parse_hex(const std::string& s) {
  try {
    return std::stoull(s, nullptr, 16);
  } catch (const std::exception&) {
    throw DomainError("bad hexadecimal digest '" + s + "'");
  }
}

StationaryFit stationary_from_json(const json& j) {
  StationaryFit f;
  f.params = {j.at("mu").get<double>(), j.at("sigma").get<double>(), j.at("xi").get<double>()};
  validate(f.params);
  const Eigen::MatrixXd cov = matrix_from_json(j.at("cov"));
  if (cov.rows() != 3) throw DomainError("stationary covariance must be 3 x 3");
  f.cov = cov;
  f.loglik = j.at("loglik").get<double>();
  f.n = j.at("n").get<std::size_t>();
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.value("iterations", 0);
  f.data_fingerprint = parse_hex(j.value("data_fingerprint", "0"));
  f.xi_bounds = bounds_from_json(j.value("xi_bounds", json::object()));
  return f;
}

json fitted_to_json(const FittedModel& f) {
  json points = json::array();
  for (const auto& p : f.design_points) points.push_back({p.year, p.month});
  return {{"spec", basis_to_json(f.spec)},
          {"xi_bounds", bounds_to_json(f.xi_bounds)},
          {"beta_mu", f.beta_mu},
          {"beta_logsigma", f.beta_logsigma},
          {"xi", f.xi},
          {"lambda_month", f.lambdas.month},
          {"lambda_year", f.lambdas.year},
          {"penalized_hessian", matrix_to_json(f.penalized_hessian)},
          {"loglik", f.loglik},
          {"penalized_loglik", f.penalized_loglik},
          {"edf", f.edf},
          {"edf_year", f.edf_year},
          {"n", f.n},
          {"converged", f.converged},
          {"iterations", f.iterations},
          {"data_fingerprint", csv::hex64(f.data_fingerprint)},
          {"design_points", points}};
}

FittedModel fitted_from_json(const json& j, ModelKind kind) {
  FittedModel f;
  f.kind = kind;
  f.spec = basis_from_json(j.at("spec"));
  f.xi_bounds = bounds_from_json(j.value("xi_bounds", json::object()));
  f.beta_mu = j.at("beta_mu").get<std::vector<double>>();
  f.beta_logsigma = j.at("beta_logsigma").get<std::vector<double>>();
  f.xi = j.at("xi").get<double>();
  f.lambdas = {j.at("lambda_month").get<double>(), j.at("lambda_year").get<double>()};
  f.penalized_hessian = matrix_from_json(j.at("penalized_hessian"));
  f.loglik = j.at("loglik").get<double>();
  f.penalized_loglik = j.value("penalized_loglik", f.loglik);
  f.edf = j.at("edf").get<double>();
  f.edf_year = j.value("edf_year", 0.0);
  f.n = j.at("n").get<std::size_t>();
  f.converged = j.at("converged").get<bool>();
  f.iterations = j.value("iterations", 0);
  f.data_fingerprint = parse_hex(j.value("data_fingerprint", "0"));
  for (const auto& p : j.at("design_points")) f.design_points.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
  attach_basis(f);
  const std::size_t p = f.basis->size();
  if (f.beta_mu.size() != p || f.beta_logsigma.size() != p) {
    throw DomainError("coefficient count does not match the basis (" + std::to_string(p) + ")");
  }
  if (f.penalized_hessian.rows() != static_cast<Eigen::Index>(2 * p + 1)) {
    throw DomainError("penalized Hessian does not match the basis");
  }
  return f;
}

}  // namespace

Config config_from_json(const std::string& text) {
  const json j = parse_document(text, "config");
  Config c;
  try {
    if (j.contains("basis")) c.basis = basis_from_json(j["basis"]);
    if (j.contains("lambda_grid")) c.lambda_grid = j["lambda_grid"].get<std::vector<double>>();
    c.bootstrap_replicates = j.value("bootstrap_replicates", c.bootstrap_replicates);
    c.min_coverage = j.value("min_coverage", c.min_coverage);
    if (j.contains("xi_bounds")) c.xi_bounds = bounds_from_json(j["xi_bounds"]);
  } catch (const json::exception& e) {
    throw DomainError(std::string("config: ") + e.what());
  }
  validate(c.basis, false);
  if (c.lambda_grid.empty()) throw DomainError("config: lambda_grid is empty");
  for (double l : c.lambda_grid) {
    if (!(l >= 0.0) || !std::isfinite(l)) throw DomainError("config: lambda values must be finite and >= 0");
  }
  if (!(c.min_coverage >= 0.0 && c.min_coverage <= 1.0)) throw DomainError("config: min_coverage must lie in [0, 1]");
  return c;
}

Config load_config(const std::string& path) { return config_from_json(read_file(path)); }

std::string config_to_json(const Config& c) {
  const json j = {{"schema", kSchemaVersion},
                  {"basis", basis_to_json(c.basis)},
                  {"lambda_grid", c.lambda_grid},
                  {"bootstrap_replicates", c.bootstrap_replicates},
                  {"min_coverage", c.min_coverage},
                  {"xi_bounds", bounds_to_json(c.xi_bounds)}};
  return j.dump(2) + "\n";
}

std::uint64_t config_hash(const Config& c) { return csv::fnv1a(json::parse(config_to_json(c)).dump()); }

std::string model_to_json(const ModelFile& file) {
  json j = {{"schema", kSchemaVersion},
            {"tool_version", file.tool_version},
            {"config_hash", csv::hex64(file.config_hash)},
            {"seed", file.seed},
            {"model_kind", to_string(kind_of(file.model))},
            {"first_year", file.first_year},
            {"last_year", file.last_year},
            {"block_kind", file.block_kind},
            {"scenario", file.scenario}};
  if (const auto* s = std::get_if<StationaryFit>(&file.model)) {
    j["fit"] = stationary_to_json(*s);
  } else {
    j["fit"] = fitted_to_json(std::get<FittedModel>(file.model));
  }
  return j.dump(2) + "\n";
}

ModelFile model_from_json(const std::string& text) {
  const json j = parse_document(text, "model file");
  try {
    ModelFile f;
    const ModelKind kind = model_kind_from_string(j.at("model_kind").get<std::string>());
    if (kind == ModelKind::stationary) {
      f.model = stationary_from_json(j.at("fit"));
    } else {
      f.model = fitted_from_json(j.at("fit"), kind);
    }
    f.first_year = j.at("first_year").get<int>();
    f.last_year = j.at("last_year").get<int>();
    f.block_kind = j.value("block_kind", "");
    f.scenario = j.value("scenario", "");
    f.config_hash = parse_hex(j.value("config_hash", "0"));
    f.seed = j.value("seed", std::uint64_t{0});
    f.tool_version = j.value("tool_version", "");
    return f;
  } catch (const json::exception& e) {
    throw DomainError(std::string("model file: ") + e.what());
  }
}

ModelFile load_model(const std::string& path) { return model_from_json(read_file(path)); }

}  // namespace nsgev
