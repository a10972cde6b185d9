#include "parisian/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "parisian/asymptotics.hpp"
#include "parisian/closed_form.hpp"
#include "parisian/constants_mc.hpp"
#include "parisian/errors.hpp"
#include "parisian/process_sim.hpp"
#include "parisian/risk_model.hpp"
#include "parisian/ruin_mc.hpp"

namespace parisian::cli {
namespace {

using json = nlohmann::ordered_json;

constexpr const char* kClosedForm = "closed_form";
constexpr const char* kAsymptotic = "asymptotic";
constexpr const char* kMonteCarlo = "monte_carlo";

std::string num(double x) { return fmt::format("{:.17g}", x); }

// Output table: computed columns carry a provenance, input columns do not.
using Cell = std::variant<std::monostate, double, std::uint64_t, bool, std::string>;

struct Column {
  std::string name;
  const char* provenance = nullptr;
};

struct Table {
  std::vector<Column> columns;
  std::vector<std::vector<Cell>> rows;
};

std::string csv_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, std::monostate>)
          return "";
        else if constexpr (std::is_same_v<V, double>)
          return num(v);
        else if constexpr (std::is_same_v<V, std::uint64_t>)
          return std::to_string(v);
        else if constexpr (std::is_same_v<V, bool>)
          return v ? "true" : "false";
        else
          return v;
      },
      c);
}

json json_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> json {
        if constexpr (std::is_same_v<std::decay_t<decltype(v)>, std::monostate>)
          return nullptr;
        else
          return v;
      },
      c);
}

// A single shared provenance becomes one trailing column; mixed provenances
// get a companion column after each computed value.
void write_csv(const Table& t, std::ostream& out) {
  const char* shared = nullptr;
  bool mixed = false;
  for (const auto& col : t.columns) {
    if (!col.provenance) continue;
    if (shared && std::string_view(shared) != col.provenance) mixed = true;
    shared = col.provenance;
  }
  std::vector<std::string> header;
  for (const auto& col : t.columns) {
    header.push_back(col.name);
    if (mixed && col.provenance) header.push_back(col.name + "_provenance");
  }
  if (shared && !mixed) header.push_back("provenance");
  out << fmt::format("{}\n", fmt::join(header, ","));
  for (const auto& row : t.rows) {
    std::vector<std::string> cells;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      cells.push_back(csv_cell(row[i]));
      if (mixed && t.columns[i].provenance) cells.emplace_back(t.columns[i].provenance);
    }
    if (shared && !mixed) cells.emplace_back(shared);
    out << fmt::format("{}\n", fmt::join(cells, ","));
  }
}

json json_row(const Table& t, const std::vector<Cell>& row) {
  json obj = json::object();
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    const auto& col = t.columns[i];
    if (col.provenance)
      obj[col.name] = {{"value", json_cell(row[i])}, {"provenance", col.provenance}};
    else
      obj[col.name] = json_cell(row[i]);
  }
  return obj;
}

// Parsed option text turned back into JSON scalars where it reads as one.
json config_scalar(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  const char* end = s.data() + s.size();
  std::int64_t i = 0;
  if (auto r = std::from_chars(s.data(), end, i); r.ec == std::errc{} && r.ptr == end) return i;
  std::uint64_t ui = 0;
  if (auto r = std::from_chars(s.data(), end, ui); r.ec == std::errc{} && r.ptr == end) return ui;
  double d = 0.0;
  if (auto r = std::from_chars(s.data(), end, d); r.ec == std::errc{} && r.ptr == end &&
                                                 std::isfinite(d))
    return d;
  return s;
}

json config_json(const CLI::App& sub) {
  json cfg = json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    if (!opt->get_configurable() || opt->get_lnames().empty()) continue;
    std::vector<std::string> values = opt->results();
    if (values.empty()) {
      if (opt->get_default_str().empty()) continue;
      values = {opt->get_default_str()};
    }
    const std::string& key = opt->get_lnames().front();
    if (opt->get_expected_max() > 1) {
      json arr = json::array();
      for (const auto& v : values) arr.push_back(config_scalar(v));
      cfg[key] = arr;
    } else {
      cfg[key] = config_scalar(values.back());
    }
  }
  return cfg;
}

enum class Format { Json, Csv };

struct Emitter {
  const CLI::App* sub = nullptr;
  Format format = Format::Json;

  void emit(const Table& t, std::ostream& out) const {
    if (format == Format::Csv) {
      write_csv(t, out);
      return;
    }
    json doc = json::object();
    doc["command"] = sub->get_name();
    doc["config"] = config_json(*sub);
    if (t.rows.size() == 1) {
      const json row = json_row(t, t.rows.front());
      for (const auto& [k, v] : row.items()) doc[k] = v;
    } else {
      json rows = json::array();
      for (const auto& row : t.rows) rows.push_back(json_row(t, row));
      doc["rows"] = rows;
    }
    out << doc.dump(2) << "\n";
  }
};

// Options shared by every subcommand.
struct Common {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string format;
  bool dump_config = false;
};

void add_format(CLI::App* sub, Common& c, const char* fallback) {
  c.format = fallback;
  sub->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_flag("--dump-config", c.dump_config, "Print this command's configuration and exit")
      ->configurable(false);
}

void add_seed_jobs(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "Master seed")->envname("PARISIAN_SEED")->capture_default_str();
  sub->add_option("--jobs", c.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

// Double options keep a round-trippable default text.
CLI::Option* add_real(CLI::App* sub, const std::string& name, double& ref, const std::string& desc) {
  return sub->add_option(name, ref, desc)->default_str(fmt::format("{}", ref));
}

WindowSpec parse_window(const std::string& text) {
  auto to_double = [&](std::string_view s) {
    double d = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), d);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
      throw ParameterError("cannot parse window '" + text + "' (expected T or exp:rate)");
    return d;
  };
  if (text.rfind("exp:", 0) == 0) return WindowSpec::exponential(to_double(text.substr(4)));
  return WindowSpec::deterministic(to_double(text));
}

CovarianceModel make_model(const std::string& kind, double hurst) {
  if (kind == "fbm") return CovarianceModel::fbm(hurst);
  return CovarianceModel::custom([hurst](double s, double t) { return fbm_covariance(hurst, s, t); },
                                 hurst);
}

void warn_precision(std::ostream& err, const std::string& what, double p, double se) {
  if (p <= 0.0)
    err << fmt::format("warning: {}: no hits, estimate is 0\n", what);
  else if (se / p > 0.2)
    err << fmt::format("warning: {}: relative standard error {:.3g} exceeds 0.2\n", what, se / p);
}

// Subcommand state. Each command keeps its own option storage.
struct ConstantsCmd {
  Common common;
  double hurst = 0.5, beta = 1.0, c = 1.0, u = 1.0;
};
struct ExactCmd {
  Common common;
  double u = 1.0, c = 1.0, T = 0.0;
};
struct AsymptoticCmd {
  Common common;
  double hurst = 0.5, beta = 1.0, c = 1.0, u = 1.0, T = 0.0;
  std::optional<double> alpha, halpha, galpha;
};
struct PickandsCmd {
  Common common;
  double alpha = 1.0, T = 0.0, S = 50.0, delta = 0.01;
  std::size_t n = 10000;
  std::string sweep, estimator = "tilted";
  std::optional<double> lambda1, lambda2;
};
struct RuinCmd {
  Common common;
  std::string model = "fbm";
  double hurst = 0.5, beta = 1.0, c = 1.0, G = 0.0, dt = 0.01;
  std::vector<double> u;
  std::vector<std::string> windows{"0"};
  std::size_t n = 10000;
  bool common_rng = false;
  std::string which = "both";
  std::optional<std::size_t> dump_path;
};
struct RuinTimesCmd {
  Common common;
  std::string model = "fbm";
  double hurst = 0.5, beta = 1.0, c = 1.0, u = 1.0, G = 0.0, dt = 0.01;
  std::string window = "0";
  std::size_t n_ruined = 500, max_replications = 10000000;
};
struct CompareCmd {
  Common common;
  std::string model = "fbm";
  double hurst = 0.5, beta = 1.0, c = 1.0, u = 1.0, T = 0.0, G = 0.0, dt = 0.005;
  std::size_t n = 100000;
  std::optional<double> halpha, galpha;
};

void add_model(CLI::App* sub, std::string& model, double& hurst, double& beta, double& c) {
  sub->add_option("--model", model, "fbm (spectral sampler) or fbm-factor (generic factorization)")
      ->check(CLI::IsMember({"fbm", "fbm-factor"}))
      ->capture_default_str();
  add_real(sub, "--H", hurst, "Hurst index");
  add_real(sub, "--beta", beta, "Premium exponent");
  add_real(sub, "--c", c, "Premium rate");
}

RiskParams risk_params(double u, double c, double beta, const CovarianceModel& model) {
  RiskParams p{u, c, beta, model};
  p.validate();
  return p;
}

DerivedConstants fbm_constants(double u, double c, double beta, double hurst) {
  const RiskParams p = risk_params(u, c, beta, CovarianceModel::fbm(hurst));
  return derived_constants(p, LocalStationarity::fbm(p));
}

int run_constants(const ConstantsCmd& cmd, const Emitter& em, std::ostream& out) {
  const DerivedConstants dc = fbm_constants(cmd.u, cmd.c, cmd.beta, cmd.hurst);
  const double v = dc.v(cmd.u);
  Table t{{{"t0", kClosedForm},
           {"A", kClosedForm},
           {"B", kClosedForm},
           {"D0", kClosedForm},
           {"alpha", kClosedForm},
           {"Q", kClosedForm},
           {"v", kClosedForm},
           {"q", kClosedForm}},
          {{dc.t0, dc.A, dc.B, dc.D0, dc.alpha, dc.Q, v, dc.q(v)}}};
  em.emit(t, out);
  return kOk;
}

int run_exact(const ExactCmd& cmd, const Emitter& em, std::ostream& out) {
  Table t{{{"probability", kClosedForm}, {"prefactor", kClosedForm}},
          {{bm_parisian_exact(cmd.u, cmd.c, cmd.T), bm_parisian_prefactor(cmd.c, cmd.T)}}};
  em.emit(t, out);
  return kOk;
}

// Pickands values: supplied ones win; alpha = 1 has exact values.
struct Injected {
  std::optional<double> h, g;
};

Injected injected_constants(const DerivedConstants& dc, double limit_T, std::optional<double> h,
                            std::optional<double> g) {
  const bool exact = std::abs(dc.alpha - 1.0) < 1e-12;
  if (!h && exact) h = 1.0;
  if (!g && exact) g = g1_closed_form(dc.D0 * limit_T);
  if (!g && limit_T == 0.0) g = h;
  return {h, g};
}

int run_asymptotic(const AsymptoticCmd& cmd, const Emitter& em, std::ostream& out) {
  const RiskParams p = risk_params(cmd.u, cmd.c, cmd.beta, CovarianceModel::fbm(cmd.hurst));
  const DerivedConstants dc = derived_constants(p, LocalStationarity::fbm(p));
  if (cmd.alpha && std::abs(*cmd.alpha - dc.alpha) > 1e-12)
    throw ParameterError(fmt::format("--alpha {} does not match 2H = {} for the fBm model",
                                     *cmd.alpha, dc.alpha));
  detail::require(cmd.T >= 0.0, "T must be >= 0");
  const Injected k = injected_constants(dc, cmd.T, cmd.halpha, cmd.galpha);
  const double classical = classical_ruin_asymptotic(p, dc, cmd.u, k.h);
  const double parisian =
      parisian_ruin_asymptotic(p, dc, WindowRegime{cmd.T, {}}, cmd.u, k.g, k.h);
  Table t{{{"classical", kAsymptotic}, {"parisian", kAsymptotic}, {"ratio", kAsymptotic}},
          {{classical, parisian, parisian / classical}}};
  em.emit(t, out);
  return kOk;
}

std::vector<double> parse_sweep(const std::string& text) {
  if (text.rfind("T=", 0) != 0) throw ParameterError("--sweep expects T=t1,t2,...");
  std::vector<double> Ts;
  std::string_view rest(text);
  rest.remove_prefix(2);
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    double d = 0.0;
    auto r = std::from_chars(item.data(), item.data() + item.size(), d);
    if (r.ec != std::errc{} || r.ptr != item.data() + item.size())
      throw ParameterError("cannot parse --sweep value '" + std::string(item) + "'");
    Ts.push_back(d);
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (Ts.empty()) throw ParameterError("--sweep needs at least one T");
  return Ts;
}

int run_pickands(const PickandsCmd& cmd, const Emitter& em, std::ostream& out, std::ostream& err) {
  PickandsOptions opts;
  opts.estimator = cmd.estimator == "direct" ? PickandsEstimator::Direct : PickandsEstimator::Tilted;
  opts.jobs = cmd.common.jobs;
  if (cmd.lambda1 || cmd.lambda2) {
    if (!cmd.lambda1 || !cmd.lambda2)
      throw ParameterError("--lambda1 and --lambda2 must be given together");
    const ConstantEstimate e = estimate_pickands_2p(cmd.alpha, *cmd.lambda1, *cmd.lambda2,
                                                    cmd.delta, cmd.n, cmd.common.seed, opts);
    Table t{{{"alpha"},
             {"lambda1"},
             {"lambda2"},
             {"delta"},
             {"n"},
             {"estimate", kMonteCarlo},
             {"stderr", kMonteCarlo},
             {"flagged", kMonteCarlo}},
            {{e.alpha, e.lambda1, e.lambda2, e.delta, std::uint64_t{e.n}, e.value, e.stderr,
              std::uint64_t{e.flagged}}}};
    em.emit(t, out);
    return kOk;
  }
  const std::vector<double> Ts = cmd.sweep.empty() ? std::vector<double>{cmd.T} : parse_sweep(cmd.sweep);
  const auto estimates = estimate_generalized_pickands_sweep(cmd.alpha, Ts, cmd.S, cmd.delta, cmd.n,
                                                             cmd.common.seed, opts);
  Table t{{{"alpha"},
           {"T"},
           {"S"},
           {"delta"},
           {"n"},
           {"estimate", kMonteCarlo},
           {"stderr", kMonteCarlo},
           {"converged", kMonteCarlo},
           {"at_S", kMonteCarlo},
           {"at_S_stderr", kMonteCarlo},
           {"at_half_S", kMonteCarlo},
           {"at_half_S_stderr", kMonteCarlo},
           {"flagged", kMonteCarlo}},
          {}};
  for (const auto& e : estimates) {
    t.rows.push_back({e.alpha, e.T, e.S, e.delta, std::uint64_t{e.n}, e.value, e.stderr,
                      e.converged, e.at_S, e.at_S_stderr, e.at_half_S, e.at_half_S_stderr,
                      std::uint64_t{e.flagged}});
    if (!e.converged)
      err << fmt::format("warning: T={}: estimates at S and S/2 disagree; not converged\n", e.T);
    if (e.flagged > 0)
      err << fmt::format("warning: T={}: {} replications overflowed and were dropped\n", e.T,
                         e.flagged);
  }
  em.emit(t, out);
  return kOk;
}

int dump_path(const RuinCmd& cmd, const CovarianceModel& model, std::ostream& out) {
  const RiskParams p = risk_params(cmd.u.front(), cmd.c, cmd.beta, model);
  const double G = cmd.G > 0.0 ? cmd.G : default_horizon(p);
  const PathSampler sampler(model, steps_for(G, cmd.dt), cmd.dt);
  const PathGrid path = sampler.sample(SeedSpec{cmd.common.seed, *cmd.dump_path});
  out << "t,x\n";
  for (std::size_t i = 0; i < path.size(); ++i)
    out << fmt::format("{},{}\n", num(path.time(i)), num(path.values[i]));
  return kOk;
}

int run_ruin(const RuinCmd& cmd, const Emitter& em, std::ostream& out, std::ostream& err) {
  const CovarianceModel model = make_model(cmd.model, cmd.hurst);
  if (cmd.dump_path) return dump_path(cmd, model, out);
  std::vector<WindowSpec> windows;
  for (const auto& w : cmd.windows) windows.push_back(parse_window(w));
  const bool want_classical = cmd.which != "parisian";
  const bool want_parisian = cmd.which != "classical";

  Table t{{{"u"},
           {"window"},
           {"kind"},
           {"G"},
           {"dt"},
           {"n"},
           {"hits", kMonteCarlo},
           {"p_hat", kMonteCarlo},
           {"stderr", kMonteCarlo}},
          {}};
  auto add_row = [&](double u, const std::string& window, const char* kind, double G,
                     std::size_t n, std::size_t hits, double p, double se) {
    t.rows.push_back({u, window, std::string(kind), G, cmd.dt, std::uint64_t{n},
                      std::uint64_t{hits}, p, se});
    warn_precision(err, fmt::format("u={} window={} {}", u, window, kind), p, se);
  };
  auto se_of = [](double p, std::size_t n) { return std::sqrt(p * (1.0 - p) / static_cast<double>(n)); };

  if (cmd.common_rng) {
    SweepConfig sc;
    sc.c = cmd.c;
    sc.beta = cmd.beta;
    sc.model = model;
    sc.reserves = cmd.u;
    sc.windows = windows;
    sc.horizon = cmd.G;
    if (sc.horizon <= 0.0)
      for (double u : cmd.u)
        sc.horizon = std::max(sc.horizon, default_horizon(risk_params(u, cmd.c, cmd.beta, model)));
    sc.step = cmd.dt;
    sc.n = cmd.n;
    sc.seed = cmd.common.seed;
    sc.jobs = cmd.common.jobs;
    const SweepResult r = run_ruin_sweep(sc);
    for (std::size_t iu = 0; iu < cmd.u.size(); ++iu) {
      if (want_classical) {
        const double p = r.classical_p(iu);
        add_row(cmd.u[iu], "-", "classical", sc.horizon, r.n, r.classical_hits[iu], p, se_of(p, r.n));
      }
      if (want_parisian)
        for (std::size_t iw = 0; iw < windows.size(); ++iw) {
          const double p = r.parisian_p(iw, iu);
          add_row(cmd.u[iu], cmd.windows[iw], "parisian", sc.horizon, r.n, r.parisian_hits[iw][iu],
                  p, se_of(p, r.n));
        }
    }
  } else {
    for (double u : cmd.u) {
      RuinConfig rc;
      rc.params = risk_params(u, cmd.c, cmd.beta, model);
      rc.horizon = cmd.G > 0.0 ? cmd.G : default_horizon(rc.params);
      rc.step = cmd.dt;
      rc.n = cmd.n;
      rc.seed = cmd.common.seed;
      rc.jobs = cmd.common.jobs;
      for (std::size_t iw = 0; iw < windows.size(); ++iw) {
        rc.window = windows[iw];
        if (!want_parisian) {
          const MCEstimate m = estimate_ruin_prob(rc, RuinKind::Classical);
          add_row(u, "-", "classical", rc.horizon, m.n, m.hits, m.p_hat, m.stderr);
          break;
        }
        const RuinEstimates e = estimate_ruin_probs(rc);
        if (want_classical && iw == 0)
          add_row(u, "-", "classical", rc.horizon, e.classical.n, e.classical.hits,
                  e.classical.p_hat, e.classical.stderr);
        add_row(u, cmd.windows[iw], "parisian", rc.horizon, e.parisian.n, e.parisian.hits,
                e.parisian.p_hat, e.parisian.stderr);
      }
    }
  }
  em.emit(t, out);
  return kOk;
}

int run_ruin_times(const RuinTimesCmd& cmd, const Emitter& em, std::ostream& out,
                   std::ostream& err) {
  RuinConfig rc;
  rc.params = risk_params(cmd.u, cmd.c, cmd.beta, make_model(cmd.model, cmd.hurst));
  rc.window = parse_window(cmd.window);
  rc.horizon = cmd.G > 0.0 ? cmd.G : default_horizon(rc.params);
  rc.step = cmd.dt;
  rc.seed = cmd.common.seed;
  rc.jobs = cmd.common.jobs;
  const DerivedConstants dc = fbm_constants(cmd.u, cmd.c, cmd.beta, cmd.hurst);
  const ConditionalRuinTimes r =
      sample_conditional_ruin_times(rc, cmd.n_ruined, cmd.max_replications);

  Table t{{{"replication"},
           {"tau", kMonteCarlo},
           {"tau_star", kMonteCarlo},
           {"normalized_tau_star", kMonteCarlo},
           {"normalized_gap", kMonteCarlo}},
          {}};
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const RuinSample& s = r.samples[i];
    t.rows.push_back({std::uint64_t{r.replications[i]}, *s.tau, *s.tau_star,
                      parisian_time_normalizer(dc, cmd.u, *s.tau_star),
                      time_gap_normalizer(dc, cmd.u, *s.tau, *s.tau_star)});
  }
  em.emit(t, out);
  if (!r.complete) {
    err << fmt::format("warning: replication cap {} reached with {} of {} ruined paths\n",
                       cmd.max_replications, r.samples.size(), cmd.n_ruined);
    return kPartial;
  }
  return kOk;
}

int run_compare(const CompareCmd& cmd, const Emitter& em, std::ostream& out, std::ostream& err) {
  RuinConfig rc;
  rc.params = risk_params(cmd.u, cmd.c, cmd.beta, make_model(cmd.model, cmd.hurst));
  detail::require(cmd.u > 0.0, "u must be > 0");
  detail::require(cmd.T >= 0.0, "T must be >= 0");
  rc.window = WindowSpec::deterministic(cmd.T);
  rc.horizon = cmd.G > 0.0 ? cmd.G : default_horizon(rc.params);
  rc.step = cmd.dt;
  rc.n = cmd.n;
  rc.seed = cmd.common.seed;
  rc.jobs = cmd.common.jobs;

  const RiskParams fbm_params = risk_params(cmd.u, cmd.c, cmd.beta, CovarianceModel::fbm(cmd.hurst));
  const DerivedConstants dc = derived_constants(fbm_params, LocalStationarity::fbm(fbm_params));
  const double limit_T = scaled_window(dc, cmd.u, cmd.T);
  const Injected k = injected_constants(dc, limit_T, cmd.halpha, cmd.galpha);
  const double asym = parisian_ruin_asymptotic(fbm_params, dc, WindowRegime::constant(cmd.T, limit_T),
                                               cmd.u, k.g, k.h);
  const bool brownian = cmd.hurst == 0.5 && cmd.beta == 1.0;
  const MCEstimate mc = estimate_ruin_prob(rc, RuinKind::Parisian);
  warn_precision(err, "monte carlo", mc.p_hat, mc.stderr);

  Cell exact, mc_over_exact, asym_over_exact;
  if (brownian) {
    const double e = bm_parisian_exact(cmd.u, cmd.c, cmd.T);
    exact = e;
    mc_over_exact = mc.p_hat / e;
    asym_over_exact = asym / e;
  }
  Table t{{{"u"},
           {"c"},
           {"T"},
           {"H"},
           {"beta"},
           {"G"},
           {"dt"},
           {"n"},
           {"exact", kClosedForm},
           {"asymptotic", kAsymptotic},
           {"mc", kMonteCarlo},
           {"mc_stderr", kMonteCarlo},
           {"mc_over_exact", kMonteCarlo},
           {"asymptotic_over_exact", kAsymptotic},
           {"mc_over_asymptotic", kMonteCarlo}},
          {{cmd.u, cmd.c, cmd.T, cmd.hurst, cmd.beta, rc.horizon, cmd.dt, std::uint64_t{mc.n}, exact,
            asym, mc.p_hat, mc.stderr, mc_over_exact, asym_over_exact, mc.p_hat / asym}}};
  em.emit(t, out);
  return kOk;
}

int fail(std::ostream& err, int code, const std::exception& e) {
  err << "error: " << e.what() << "\n";
  return code;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and Parisian ruin for self-similar Gaussian risk processes", "parisian"};
  app.set_config("--config", "", "Read options from a key=value config file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.require_subcommand(1);

  ConstantsCmd constants;
  auto* s_constants = app.add_subcommand("constants", "Derived model constants (fBm)");
  add_format(s_constants, constants.common, "json");
  add_real(s_constants, "--H", constants.hurst, "Hurst index");
  add_real(s_constants, "--beta", constants.beta, "Premium exponent");
  add_real(s_constants, "--c", constants.c, "Premium rate");
  add_real(s_constants, "--u", constants.u, "Initial reserve");

  ExactCmd exact;
  auto* s_exact = app.add_subcommand("exact-bm", "Exact Parisian ruin probability for Brownian motion");
  add_format(s_exact, exact.common, "json");
  add_real(s_exact, "--u", exact.u, "Initial reserve");
  add_real(s_exact, "--c", exact.c, "Premium rate");
  add_real(s_exact, "--T", exact.T, "Window length");

  AsymptoticCmd asym;
  auto* s_asym = app.add_subcommand("asymptotic", "Large-reserve ruin approximations (fBm)");
  add_format(s_asym, asym.common, "json");
  add_real(s_asym, "--H", asym.hurst, "Hurst index");
  add_real(s_asym, "--beta", asym.beta, "Premium exponent");
  add_real(s_asym, "--c", asym.c, "Premium rate");
  add_real(s_asym, "--u", asym.u, "Initial reserve");
  add_real(s_asym, "--T", asym.T, "Scaled window limit");
  s_asym->add_option("--alpha", asym.alpha, "Local stationarity index (must equal 2H)");
  s_asym->add_option("--halpha", asym.halpha, "Pickands constant (default 1 when alpha = 1)");
  s_asym->add_option("--galpha", asym.galpha,
                     "Generalized Pickands constant at D0*T (closed form when alpha = 1)");

  PickandsCmd pick;
  auto* s_pick = app.add_subcommand("pickands", "Monte Carlo Pickands-type constants");
  add_format(s_pick, pick.common, "csv");
  add_seed_jobs(s_pick, pick.common);
  add_real(s_pick, "--alpha", pick.alpha, "Index in (0, 2]");
  add_real(s_pick, "--T", pick.T, "Inner window");
  add_real(s_pick, "--S", pick.S, "Horizon");
  add_real(s_pick, "--delta", pick.delta, "Grid step");
  s_pick->add_option("--n", pick.n, "Replications")->capture_default_str();
  s_pick->add_option("--sweep", pick.sweep, "Inner windows on common random numbers: T=t1,t2,...");
  s_pick->add_option("--estimator", pick.estimator, "tilted or direct")
      ->check(CLI::IsMember({"tilted", "direct"}))
      ->capture_default_str();
  s_pick->add_option("--lambda1", pick.lambda1, "Two-parameter constant: outer length");
  s_pick->add_option("--lambda2", pick.lambda2, "Two-parameter constant: inner length");

  RuinCmd ruin;
  auto* s_ruin = app.add_subcommand("ruin", "Monte Carlo ruin probabilities");
  add_format(s_ruin, ruin.common, "json");
  add_seed_jobs(s_ruin, ruin.common);
  add_model(s_ruin, ruin.model, ruin.hurst, ruin.beta, ruin.c);
  s_ruin->add_option("--u", ruin.u, "Initial reserve(s), comma separated")
      ->delimiter(',')
      ->required();
  s_ruin->add_option("--window", ruin.windows, "Window(s): T or exp:rate, comma separated")
      ->delimiter(',')
      ->capture_default_str();
  add_real(s_ruin, "--G", ruin.G, "Horizon (0 selects 5 t0 u^(1/beta))");
  add_real(s_ruin, "--dt", ruin.dt, "Grid step");
  s_ruin->add_option("--n", ruin.n, "Replications")->capture_default_str();
  s_ruin->add_flag("--common-rng", ruin.common_rng,
                   "Evaluate every u and window on the same paths and a shared horizon");
  s_ruin->add_option("--which", ruin.which, "classical, parisian or both")
      ->check(CLI::IsMember({"classical", "parisian", "both"}))
      ->capture_default_str();
  s_ruin->add_option("--dump-path", ruin.dump_path,
                     "Print the sampled path of this replication as CSV (t, x) and exit");

  RuinTimesCmd times;
  auto* s_times = app.add_subcommand("ruin-times", "Conditional Parisian ruin times");
  add_format(s_times, times.common, "csv");
  add_seed_jobs(s_times, times.common);
  add_model(s_times, times.model, times.hurst, times.beta, times.c);
  add_real(s_times, "--u", times.u, "Initial reserve");
  s_times->add_option("--window", times.window, "Window: T or exp:rate")->capture_default_str();
  add_real(s_times, "--G", times.G, "Horizon (0 selects 5 t0 u^(1/beta))");
  add_real(s_times, "--dt", times.dt, "Grid step");
  s_times->add_option("--n-ruined", times.n_ruined, "Ruined paths to collect")->capture_default_str();
  s_times->add_option("--max-replications", times.max_replications, "Replication cap")
      ->capture_default_str();

  CompareCmd cmp;
  auto* s_cmp = app.add_subcommand("compare", "Exact, asymptotic and Monte Carlo Parisian ruin side by side");
  add_format(s_cmp, cmp.common, "csv");
  add_seed_jobs(s_cmp, cmp.common);
  add_model(s_cmp, cmp.model, cmp.hurst, cmp.beta, cmp.c);
  add_real(s_cmp, "--u", cmp.u, "Initial reserve");
  add_real(s_cmp, "--T", cmp.T, "Window length");
  add_real(s_cmp, "--G", cmp.G, "Horizon (0 selects 5 t0 u^(1/beta))");
  add_real(s_cmp, "--dt", cmp.dt, "Grid step");
  s_cmp->add_option("--n", cmp.n, "Replications")->capture_default_str();
  s_cmp->add_option("--halpha", cmp.halpha, "Pickands constant (default 1 when alpha = 1)");
  s_cmp->add_option("--galpha", cmp.galpha, "Generalized Pickands constant");

  for (CLI::App* sub : app.get_subcommands({})) sub->configurable();

  try {
    // CLI11 consumes arguments from the back; drop the program name.
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  CLI::App* sub = app.get_subcommands().front();
  const std::vector<std::pair<CLI::App*, Common*>> commons = {
      {s_constants, &constants.common}, {s_exact, &exact.common}, {s_asym, &asym.common},
      {s_pick, &pick.common},           {s_ruin, &ruin.common},   {s_times, &times.common},
      {s_cmp, &cmp.common}};
  const Common& common =
      *std::find_if(commons.begin(), commons.end(), [&](const auto& p) { return p.first == sub; })
           ->second;
  if (common.dump_config) {
    out << "[" << sub->get_name() << "]\n" << sub->config_to_str(true, false);
    return kOk;
  }
  const Emitter em{sub, common.format == "csv" ? Format::Csv : Format::Json};

  try {
    if (sub == s_constants) return run_constants(constants, em, out);
    if (sub == s_exact) return run_exact(exact, em, out);
    if (sub == s_asym) return run_asymptotic(asym, em, out);
    if (sub == s_pick) return run_pickands(pick, em, out, err);
    if (sub == s_ruin) return run_ruin(ruin, em, out, err);
    if (sub == s_times) return run_ruin_times(times, em, out, err);
    return run_compare(cmp, em, out, err);
  } catch (const PartialResultError& e) {
    return fail(err, kPartial, e);
  } catch (const CovarianceError& e) {
    return fail(err, kNumerical, e);
  } catch (const OrderingError& e) {
    return fail(err, kNumerical, e);
  } catch (const std::invalid_argument& e) {
    return fail(err, kUsage, e);
  } catch (const std::exception& e) {
    return fail(err, kNumerical, e);
  }
}

}  // namespace parisian::cli
