#include "fraclimit/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "fraclimit/constants.hpp"
#include "fraclimit/diagrams.hpp"
#include "fraclimit/error.hpp"
#include "fraclimit/fracproc.hpp"
#include "fraclimit/hermite.hpp"
#include "fraclimit/mclab.hpp"
#include "fraclimit/stats.hpp"
#include "fraclimit/unitroot.hpp"

#ifndef FRACLIMIT_VERSION
#define FRACLIMIT_VERSION "0.0.0"
#endif

namespace fraclimit::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr const char* kSchemaPrefix = "fraclimit.";
constexpr int kSchemaVersion = 1;

// Bad user input: maps to exit code 2.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

bool is_validation_kind(ErrorKind k) {
  switch (k) {
    case ErrorKind::Precondition:
    case ErrorKind::MeanNotZero:
    case ErrorKind::RankUndetected:
    case ErrorKind::DivergentIntegral:
    case ErrorKind::TooLarge:
    case ErrorKind::NotPSD:
    case ErrorKind::DomainError:
    case ErrorKind::WrongRegime:
    case ErrorKind::GridTooShort:
    case ErrorKind::EmptySample:
      return true;
    default:
      return false;
  }
}

// Flag names as typed on the command line (without dashes) and in config files.
const std::vector<std::string> kKeys = {"h",  "gamma", "q",    "t",   "t-ladder", "n",      "p",
                                        "reps", "dt",  "seed", "out", "output",   "kind", "sigma"};

std::string normalize_key(std::string k) {
  for (auto& c : k) {
    if (c == '_') c = '-';
  }
  return k;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = normalize_key(trim(s.substr(0, eq)));
    if (std::find(kKeys.begin(), kKeys.end(), key) == kKeys.end()) {
      throw ValidationError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    kv[key] = trim(s.substr(eq + 1));
  }
  return kv;
}

// Raw option strings after merging flags over the config file; typed access
// records every resolved value for the provenance block.
class Settings {
 public:
  explicit Settings(std::map<std::string, std::string> raw) : raw_(std::move(raw)) {}

  bool has(const std::string& k) const { return raw_.count(k) > 0; }

  double real(const std::string& k, std::optional<double> fallback = std::nullopt) {
    double v = 0.0;
    if (has(k)) {
      v = parse_real(k, raw_.at(k));
    } else if (fallback) {
      v = *fallback;
    } else {
      throw ValidationError("missing required option --" + k);
    }
    resolved_[k] = v;
    return v;
  }

  std::optional<double> optional_real(const std::string& k) {
    if (!has(k)) return std::nullopt;
    return real(k);
  }

  std::int64_t integer(const std::string& k, std::optional<std::int64_t> fallback = std::nullopt) {
    std::int64_t v = 0;
    if (has(k)) {
      const std::string& s = raw_.at(k);
      std::size_t used = 0;
      try {
        v = std::stoll(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty()) throw ValidationError("--" + k + " expects an integer, got '" + s + "'");
    } else if (fallback) {
      v = *fallback;
    } else {
      throw ValidationError("missing required option --" + k);
    }
    resolved_[k] = v;
    return v;
  }

  std::uint64_t seed() {
    std::uint64_t v = mclab::kDefaultSeed;
    if (has("seed")) {
      const std::string& s = raw_.at("seed");
      std::size_t used = 0;
      try {
        if (!s.empty() && s[0] != '-') v = std::stoull(s, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != s.size() || s.empty()) throw ValidationError("--seed expects a nonnegative integer");
    }
    resolved_["seed"] = v;
    return v;
  }

  std::string text(const std::string& k, const std::string& fallback) {
    const std::string v = has(k) ? raw_.at(k) : fallback;
    resolved_[k] = v;
    return v;
  }

  std::vector<double> real_list(const std::string& k, const std::vector<double>& fallback) {
    std::vector<double> v;
    if (has(k)) {
      std::stringstream ss(raw_.at(k));
      std::string item;
      while (std::getline(ss, item, ',')) v.push_back(parse_real(k, trim(item)));
      if (v.empty()) throw ValidationError("--" + k + " expects a comma-separated list");
    } else {
      v = fallback;
    }
    resolved_[k] = v;
    return v;
  }

  Json resolved() const {
    Json j = Json::object();
    for (const auto& [k, v] : resolved_) j[k] = v;
    return j;
  }

 private:
  static double parse_real(const std::string& k, const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty() || !std::isfinite(v)) {
      throw ValidationError("--" + k + " expects a finite number, got '" + s + "'");
    }
    return v;
  }

  std::map<std::string, std::string> raw_;
  std::map<std::string, Json> resolved_;
};

Json summary_json(const stats::EmpiricalSummary& s) {
  Json q = Json::object();
  for (std::size_t i = 0; i < stats::kQuantileLevels.size(); ++i) {
    std::ostringstream key;
    key << "q" << std::setw(2) << std::setfill('0')
        << static_cast<int>(std::lround(stats::kQuantileLevels[i] * 100));
    q[key.str()] = s.quantiles[i];
  }
  return Json{{"n", s.n},
              {"mean", s.mean},
              {"mean_se", s.mean_se},
              {"variance", s.variance},
              {"variance_se", s.variance_se},
              {"skewness", s.skewness},
              {"skewness_se", s.skewness_se},
              {"excess_kurtosis", s.excess_kurtosis},
              {"excess_kurtosis_se", s.excess_kurtosis_se},
              {"quantiles", q},
              {"ks_normal", s.ks_normal},
              {"ks_critical_1pct", stats::ks_critical_1pct(s.n)},
              {"degenerate", s.degenerate}};
}

Json optional_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

template <class Derived>
Json matrix_json(const Eigen::MatrixBase<Derived>& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

// Table output: header plus rows; rendered as CSV or embedded in JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct Outcome {
  std::string schema;
  Json result;
  std::optional<Table> table;  ///< CSV payload; summaries fall back to flattened key,value
};

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "." + std::to_string(i), out);
  } else if (j.is_number_float()) {
    out.emplace_back(prefix, format_number(j.get<double>()));
  } else if (j.is_string()) {
    out.emplace_back(prefix, j.get<std::string>());
  } else {
    out.emplace_back(prefix, j.dump());
  }
}

// ---------------------------------------------------------------------------
// subcommands

Outcome cmd_constants(Settings& s) {
  const double H = s.real("h", 0.75);
  const int q = static_cast<int>(s.integer("q", 2));
  const auto gamma = s.optional_real("gamma");
  const auto t = s.optional_real("t");
  const auto b = constants::bundle(H, q, gamma);
  Json r{{"H", b.H},
         {"q", b.q},
         {"gamma", optional_json(b.gamma)},
         {"regime", std::string(constants::to_string(b.regime.tag))},
         {"mu", b.mu},
         {"sigma", b.sigma},
         {"kappa", b.kappa},
         {"h", optional_json(b.h)},
         {"D", b.D ? Json(matrix_json(b.D->diagonal().transpose())[0]) : Json(nullptr)},
         {"Sigma_mat", matrix_json(b.Sigma_mat)},
         {"b", b.b ? Json(matrix_json(b.b->transpose())[0]) : Json(nullptr)},
         {"I_qH", optional_json(b.I_qH)},
         {"xi_integral", optional_json(b.xi_integral)},
         {"limit_coeff", optional_json(b.limit_coeff)}};
  if (t) r["g"] = Json{{"t", *t}, {"value", b.g(*t)}};
  return {"constants", r, std::nullopt};
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::string payload = text;
  if (trim(text).rfind('[', 0) != 0) {
    std::ifstream in(text);
    if (!in) throw ValidationError("cannot read correlation matrix file " + text);
    std::stringstream ss;
    ss << in.rdbuf();
    payload = ss.str();
  }
  Json j;
  try {
    j = Json::parse(payload);
  } catch (const std::exception& e) {
    throw ValidationError(std::string("correlation matrix is not valid JSON: ") + e.what());
  }
  if (!j.is_array() || j.empty()) throw ValidationError("correlation matrix must be a nonempty array of rows");
  const auto p = static_cast<Eigen::Index>(j.size());
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != p) {
      throw ValidationError("correlation matrix must be square");
    }
    for (Eigen::Index k = 0; k < p; ++k) {
      if (!j[i][k].is_number()) throw ValidationError("correlation entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Outcome cmd_diagram(Settings& s) {
  const int q = static_cast<int>(s.integer("q", 2));
  Json r = Json::object();
  if (s.has("sigma")) {
    const Eigen::MatrixXd sigma = parse_matrix(s.text("sigma", ""));
    const int p = static_cast<int>(s.integer("p", sigma.rows()));
    if (p != sigma.rows()) throw ValidationError("--p does not match the size of --sigma");
    diagrams::validate_correlation(sigma);
    r["p"] = p;
    r["q"] = q;
    r["count"] = diagrams::count_diagrams(p, q);
    r["moment"] = diagrams::diagram_moment(q, sigma);
  } else {
    const int p = static_cast<int>(s.integer("p", 2));
    r["p"] = p;
    r["q"] = q;
    r["count"] = diagrams::count_diagrams(p, q);
  }
  return {"diagram", r, std::nullopt};
}

Outcome cmd_sample(Settings& s) {
  const std::string kind = s.text("kind", "fbm");
  const double horizon = s.real("t", 1.0);
  const double dt = s.real("dt", 0.01);
  const std::uint64_t seed = s.seed();
  const auto grid = fracproc::TimeGrid::with_step(horizon, dt);
  Json r = Json::object();
  fracproc::GaussPath path{grid, {}, fracproc::PathKind::fbm};
  if (kind == "fbm" || kind == "brownian") {
    const double H = s.real("h", 0.5);
    if (kind == "brownian" && H != 0.5) throw ValidationError("brownian paths have H = 1/2");
    path = fracproc::fbm_sample(fracproc::HurstIndex(H), grid, seed);
  } else if (kind == "foup") {
    const double H = s.real("h", 0.5);
    const double gamma = s.real("gamma", 1.0);
    path = fracproc::foup_from_fbm(gamma, fracproc::fbm_sample(fracproc::HurstIndex(H), grid, seed));
  } else if (kind == "stationary_foup") {
    const double H = s.real("h", 0.5);
    const double gamma = s.real("gamma", 1.0);
    const auto st = fracproc::foup_stationary_sample(
        fracproc::FoupSpec::with_default_burn_in(H, gamma), grid, seed);
    path = st.path;
    r["initial_condition_bound"] = st.initial_condition_bound;
    r["burn_in_too_short"] = st.burn_in_too_short;
  } else {
    throw ValidationError("--kind must be one of fbm, brownian, foup, stationary_foup");
  }
  r["kind"] = std::string(fracproc::to_string(path.kind));
  r["steps"] = grid.steps();
  r["step"] = grid.step();
  Table table{{"t", "value"}, {}};
  Json ts = Json::array();
  Json vs = Json::array();
  for (std::int64_t i = 0; i <= grid.steps(); ++i) {
    table.rows.push_back({grid.time(i), path.values[i]});
    ts.push_back(grid.time(i));
    vs.push_back(path.values[i]);
  }
  r["t"] = ts;
  r["value"] = vs;
  return {"sample", r, table};
}

mclab::McConfig mc_config(Settings& s, double default_dt) {
  mclab::McConfig mc;
  mc.dt = s.real("dt", default_dt);
  mc.reps = s.integer("reps", mclab::kDefaultReps);
  mc.seed = s.seed();
  return mc;
}

Table sample_table(const std::vector<double>& sample, const std::string& name) {
  Table t{{"replicate", name}, {}};
  for (std::size_t i = 0; i < sample.size(); ++i) t.rows.push_back({static_cast<double>(i), sample[i]});
  return t;
}

Json experiment_json(const mclab::ExperimentResult& r) {
  return Json{{"summary", summary_json(r.summary)},
              {"target_variance", r.target_variance},
              {"norming", r.norming},
              {"degenerate_limit", r.degenerate_limit}};
}

Outcome cmd_verify(const std::string& which, Settings& s) {
  if (which == "clt") {
    const double H = s.real("h", 0.5);
    const int q = static_cast<int>(s.integer("q", 2));
    const double gamma = s.real("gamma", 1.0);
    const double t = s.real("t", 200.0);
    const auto mc = mc_config(s, mclab::kDefaultStep);
    if (q < 1 || q > 12) throw ValidationError("--q must lie in 1..12");
    const auto e = hermite::expand(hermite::Functional([q](double x) { return hermite::eval(q, x); }),
                                   hermite::kDefaultTruncation);
    const auto r = mclab::clt_experiment(e, H, gamma, t, mc);
    Json j = experiment_json(r);
    j["rank"] = r.rank;
    j["sigma_sq"] = r.weak.value;
    j["sigma_sq_tail_estimate"] = r.weak.tail_estimate;
    j["sigma_sq_closed_form"] = r.closed_form;
    return {"verify.clt", j, sample_table(r.sample, "statistic")};
  }
  if (which == "boundary") {
    const int q = static_cast<int>(s.integer("q", 2));
    if (s.has("h") && s.real("h") != 1.0 - 1.0 / (2.0 * q)) {
      throw ValidationError("the boundary regime fixes H = 1 - 1/(2q)");
    }
    const double gamma = s.real("gamma", 1.0);
    const double t = s.real("t", 1600.0);
    const auto mc = mc_config(s, mclab::kDefaultStep);
    const auto r = mclab::boundary_experiment(q, gamma, t, mc);
    Json j = experiment_json(r);
    j["H"] = 1.0 - 1.0 / (2.0 * q);
    return {"verify.boundary", j, sample_table(r.sample, "statistic")};
  }
  if (which == "nclt") {
    const int q = static_cast<int>(s.integer("q", 2));
    const double H = s.real("h", 0.85);
    const double gamma = s.real("gamma", 1.0);
    const double t = s.real("t", 800.0);
    const auto mc = mc_config(s, mclab::kDefaultStep);
    const auto r = mclab::nclt_experiment(q, H, gamma, t, mc);
    return {"verify.nclt", experiment_json(r), sample_table(r.sample, "statistic")};
  }
  if (which == "variance-scaling") {
    const int q = static_cast<int>(s.integer("q", 2));
    const double H = s.real("h", 0.5);
    const double gamma = s.real("gamma", 1.0);
    const auto ladder = s.real_list("t-ladder", {100.0, 400.0, 1600.0});
    const auto mc = mc_config(s, mclab::kDefaultStep);
    const auto study = mclab::variance_scaling(q, H, gamma, ladder, mc);
    Json rows = Json::array();
    Table table{{"t", "variance", "variance_se", "L", "L_abs", "target", "ratio", "ratio_se", "exact_ratio"},
                {}};
    for (const auto& row : study.rows) {
      rows.push_back(Json{{"t", row.t},
                          {"variance", row.variance},
                          {"variance_se", row.variance_se},
                          {"L", row.L},
                          {"L_abs", row.L_abs},
                          {"target", row.target},
                          {"ratio", row.ratio},
                          {"ratio_se", row.ratio_se},
                          {"exact_ratio", row.exact_ratio}});
      table.rows.push_back({row.t, row.variance, row.variance_se, row.L, row.L_abs, row.target,
                            row.ratio, row.ratio_se, row.exact_ratio});
    }
    Json j{{"rows", rows}, {"log_ratio_slope", study.log_ratio_slope}, {"burn_in", study.burn_in}};
    return {"verify.variance-scaling", j, table};
  }
  if (which == "smoothing") {
    const double H = s.real("h", 0.6);
    const double gamma = s.real("gamma", 1.0);
    const auto ladder = s.real_list("t-ladder", {10.0, 100.0});
    const double t = s.real("t", 400.0);
    const auto mc = mc_config(s, mclab::kDefaultStep);
    const auto det = mclab::smoothing_deterministic([](double x) { return x; }, gamma, ladder);
    const auto sto = mclab::smoothing_stochastic(H, gamma, t, mc);
    Json rows = Json::array();
    for (const auto& row : det.rows) {
      rows.push_back(Json{{"t", row.t},
                          {"sup_error", row.sup_error},
                          {"v_at_sup", row.v_at_sup},
                          {"bound", row.bound},
                          {"below_bound", row.sup_error < row.bound}});
    }
    Json j{{"deterministic", Json{{"psi", "identity"}, {"C_T", det.C_T}, {"beta", det.beta}, {"rows", rows}}},
           {"stochastic", Json{{"summary", summary_json(sto.result.summary)},
                               {"variance_ratio", sto.ratio},
                               {"variance_ratio_se", sto.ratio_se}}}};
    return {"verify.smoothing", j, sample_table(sto.result.sample, "statistic")};
  }
  throw ValidationError("unknown verify target '" + which + "'");
}

std::vector<double> col(const Eigen::MatrixXd& m, Eigen::Index c) {
  std::vector<double> v(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) v[i] = m(i, c);
  return v;
}

Table matrix_table(const Eigen::MatrixXd& m) {
  Table t{{"replicate", "c1", "c2", "c3", "c4"}, {}};
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    t.rows.push_back({static_cast<double>(i), m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  }
  return t;
}

Outcome cmd_unitroot(const std::string& which, Settings& s) {
  if (which == "taubar") {
    const double gamma = s.real("gamma", 50.0);
    const auto reps = s.integer("reps", mclab::kDefaultReps);
    const double dt = s.real("dt", unitroot::kDefaultStep);
    const auto seed = s.seed();
    const auto sample = unitroot::tau_bar_sample(gamma, reps, dt, seed);
    Json j{{"summary", summary_json(stats::empirical_summary(sample))}};
    return {"unitroot.taubar", j, sample_table(sample, "tau_bar")};
  }
  if (which == "thm31" || which == "thm32") {
    const bool pos = which == "thm31";
    const double H = s.real("h", 0.5);
    const double gamma = s.real("gamma", pos ? 50.0 : -8.0);
    const auto reps = s.integer("reps", mclab::kDefaultReps);
    const double dt = s.real("dt", unitroot::kDefaultStep);
    const auto seed = s.seed();
    const Eigen::MatrixXd m = pos ? unitroot::thm31_sample(H, gamma, reps, dt, seed)
                                  : unitroot::thm32_sample(H, gamma, reps, dt, seed);
    Json comps = Json::array();
    for (int c = 0; c < 4; ++c) comps.push_back(summary_json(stats::empirical_summary(col(m, c))));
    Json j{{"components", comps}};
    if (pos) {
      j["corr_c1_c3"] = stats::pearson_correlation(col(m, 0), col(m, 2));
      j["Sigma_mat"] = matrix_json(constants::sigma_matrix_31(H));
    } else {
      const auto scale = unitroot::thm32_limit_scale(H);
      j["limit_scale"] = Json::array({scale[0], scale[1], scale[2], scale[3]});
    }
    return {"unitroot." + which, j, matrix_table(m)};
  }
  if (which == "discrete") {
    const double gamma = s.real("gamma", 5.0);
    const auto n = s.integer("n", 1000);
    const auto reps = s.integer("reps", mclab::kDefaultReps);
    const double dt = s.real("dt", unitroot::kDefaultStep);
    const auto seed = s.seed();
    const auto r = unitroot::discrete_check(gamma, n, reps, dt, seed);
    Json j{{"discrete", summary_json(r.discrete)},
           {"continuous", summary_json(r.continuous)},
           {"ks_two_sample", r.ks_two_sample},
           {"ks_critical_1pct", r.ks_critical_1pct}};
    return {"unitroot.discrete", j, std::nullopt};
  }
  throw ValidationError("unknown unitroot target '" + which + "'");
}

void write_output(const Outcome& o, const std::string& command, const Json& config,
                  const std::string& format, std::ostream& os) {
  const std::string schema = kSchemaPrefix + o.schema + "/" + std::to_string(kSchemaVersion);
  if (format == "json") {
    Json doc{{"schema", schema},
             {"version", FRACLIMIT_VERSION},
             {"command", command},
             {"config", config},
             {"result", o.result}};
    os << doc.dump(2) << "\n";
    return;
  }
  os << "# schema=" << schema << "\n";
  os << "# version=" << FRACLIMIT_VERSION << "\n";
  os << "# command=" << command << "\n";
  os << "# config=" << config.dump() << "\n";
  if (o.table) {
    for (std::size_t c = 0; c < o.table->columns.size(); ++c) {
      os << (c ? "," : "") << o.table->columns[c];
    }
    os << "\n";
    for (const auto& row : o.table->rows) {
      for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
      os << "\n";
    }
    return;
  }
  std::vector<std::pair<std::string, std::string>> flat;
  flatten(o.result, "", flat);
  os << "key,value\n";
  for (const auto& [k, v] : flat) os << k << "," << v << "\n";
}

void diagnose(std::ostream& err, const std::string& kind, const std::string& message) {
  err << Json{{"error", kind}, {"message", message}}.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Limit theorems for integrated functionals of fractional processes", "fraclimit"};
  app.set_help_flag("--help", "print this help message and exit");
  app.set_version_flag("--version", FRACLIMIT_VERSION);
  app.require_subcommand(1);

  std::map<std::string, std::string> flags;
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value file; flags take precedence");
  const std::map<std::string, std::string> help = {
      {"h", "Hurst index H"},
      {"gamma", "FOU rate gamma"},
      {"q", "Hermite rank / row length"},
      {"t", "time horizon"},
      {"t-ladder", "comma-separated increasing horizons"},
      {"n", "AR(1) sample size"},
      {"p", "diagram levels"},
      {"reps", "Monte Carlo replicates"},
      {"dt", "grid step"},
      {"seed", "root seed"},
      {"out", "json or csv"},
      {"output", "write to this file instead of stdout"},
      {"kind", "path kind for sample: fbm, brownian, foup, stationary_foup"},
      {"sigma", "correlation matrix as JSON text or a file path"}};
  for (const auto& k : kKeys) app.add_option("--" + k, flags[k], help.at(k));

  auto* constants_cmd = app.add_subcommand("constants", "print every norming constant for (H, q, gamma)");
  auto* diagram_cmd = app.add_subcommand("diagram", "count diagrams and evaluate the diagram formula");
  auto* sample_cmd = app.add_subcommand("sample", "write one sampled path");
  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo checks of the limit theorems");
  auto* unitroot_cmd = app.add_subcommand("unitroot", "near-unit-root functionals");
  for (auto* c : {constants_cmd, diagram_cmd, sample_cmd, verify_cmd, unitroot_cmd}) c->fallthrough();
  verify_cmd->require_subcommand(1);
  unitroot_cmd->require_subcommand(1);
  for (const char* name : {"clt", "boundary", "nclt", "variance-scaling", "smoothing"}) {
    verify_cmd->add_subcommand(name)->fallthrough();
  }
  for (const char* name : {"taubar", "thm31", "thm32", "discrete"}) {
    unitroot_cmd->add_subcommand(name)->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << FRACLIMIT_VERSION << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    diagnose(err, "UsageError", e.what());
    return kExitValidation;
  }

  try {
    std::map<std::string, std::string> raw;
    if (!config_path.empty()) raw = read_config_file(config_path);
    for (const auto& k : kKeys) {
      if (app.count("--" + k) > 0) raw[k] = flags[k];
    }
    Settings settings(raw);

    CLI::App* top = app.get_subcommands().front();
    std::string command = top->get_name();
    std::string which;
    if (!top->get_subcommands().empty()) {
      which = top->get_subcommands().front()->get_name();
      command += " " + which;
    }
    const std::string format = settings.text("out", "json");
    if (format != "json" && format != "csv") throw ValidationError("--out must be json or csv");
    const std::string output = settings.text("output", "");

    Outcome outcome;
    if (top == constants_cmd) outcome = cmd_constants(settings);
    else if (top == diagram_cmd) outcome = cmd_diagram(settings);
    else if (top == sample_cmd) outcome = cmd_sample(settings);
    else if (top == verify_cmd) outcome = cmd_verify(which, settings);
    else outcome = cmd_unitroot(which, settings);

    Json config = settings.resolved();
    config.erase("output");
    if (!config_path.empty()) config["config"] = config_path;
    std::ostringstream buffer;
    write_output(outcome, command, config, format, buffer);
    if (output.empty()) {
      out << buffer.str();
    } else {
      std::ofstream file(output, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file " + output);
      file << buffer.str();
      if (!file) throw std::runtime_error("failed writing output file " + output);
    }
    return kExitOk;
  } catch (const ValidationError& e) {
    diagnose(err, "ValidationError", e.what());
    return kExitValidation;
  } catch (const Error& e) {
    diagnose(err, std::string(to_string(e.kind())), e.what());
    return is_validation_kind(e.kind()) ? kExitValidation : kExitRuntime;
  } catch (const std::exception& e) {
    diagnose(err, "RuntimeError", e.what());
    return kExitRuntime;
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, out, err);
}

}  // namespace fraclimit::cli
