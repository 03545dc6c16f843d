#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "noon/channels.hpp"
#include "noon/coherence.hpp"
#include "noon/dynamics.hpp"
#include "noon/interferometry.hpp"
#include "noon/parallel.hpp"
#include "noon/squeezing.hpp"
#include "noon/states.hpp"

namespace noon::cli {
namespace {

using io::Json;
using io::Table;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_number(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValidationError("not a number: '" + std::string(s) + "'");
  return v;
}

double parse_real(std::string_view s) {
  const std::size_t slash = s.find('/');
  if (slash == std::string_view::npos) return parse_number(s);
  const double num = parse_number(trim(s.substr(0, slash)));
  const double den = parse_number(trim(s.substr(slash + 1)));
  if (den == 0.0) throw ValidationError("zero denominator in '" + std::string(s) + "'");
  return num / den;
}

int parse_int(std::string_view s) {
  int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw ValidationError("not an integer: '" + std::string(s) + "'");
  return v;
}

}  // namespace

std::vector<double> parse_real_list(std::string_view spec) {
  std::vector<double> out;
  for (std::string_view item : split(spec, ',')) {
    if (item.empty()) throw ValidationError("empty item in list '" + std::string(spec) + "'");
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_real(item));
    } else if (parts.size() == 3) {
      const double a = parse_real(parts[0]), b = parse_real(parts[1]);
      const int count = parse_int(parts[2]);
      if (count < 1) throw ValidationError("range count must be positive in '" + std::string(item) + "'");
      if (count == 1) {
        out.push_back(a);
        continue;
      }
      for (int i = 0; i < count; ++i) out.push_back(i + 1 == count ? b : a + (b - a) * i / (count - 1));
    } else {
      throw ValidationError("expected start:stop:count, got '" + std::string(item) + "'");
    }
  }
  return out;
}

std::vector<int> parse_int_list(std::string_view spec) {
  std::vector<int> out;
  for (std::string_view item : split(spec, ',')) {
    if (item.empty()) throw ValidationError("empty item in list '" + std::string(spec) + "'");
    const auto parts = split(item, ':');
    if (parts.size() == 1) {
      out.push_back(parse_int(item));
    } else if (parts.size() == 2) {
      const int a = parse_int(parts[0]), b = parse_int(parts[1]);
      if (b < a) throw ValidationError("empty range '" + std::string(item) + "'");
      for (int i = a; i <= b; ++i) out.push_back(i);
    } else {
      throw ValidationError("expected a or a:b, got '" + std::string(item) + "'");
    }
  }
  return out;
}

namespace {

enum class Format { csv, json };

struct Common {
  std::string out;
  std::string format;
  int precision = io::kDefaultPrecision;
  std::string config;
};

std::vector<int> resolve_orders(const std::string& spec, int total) {
  std::vector<int> orders;
  if (spec.empty()) {
    for (int n = 1; n <= total; ++n) orders.push_back(n);
    return orders;
  }
  orders = parse_int_list(spec);
  for (int n : orders)
    if (n < 1) throw ValidationError("orders must be positive");
  return orders;
}

std::vector<double> resolve_etas(const std::string& spec) {
  const auto etas = parse_real_list(spec);
  for (double eta : etas) channels::validate(channels::LossSetting::uniform(eta));
  return etas;
}

void require_positive_n(int n) {
  if (n < 1) throw ValidationError("--n must be at least 1");
}

Json int_array(const std::vector<int>& v) {
  Json j = Json::array();
  for (int x : v) j.push_back(x);
  return j;
}

Json real_array(const std::vector<double>& v, int precision) {
  Json j = Json::array();
  for (double x : v) j.push_back(io::json_number(x, precision));
  return j;
}

// Coherence rows for one η, from either the pure state or its loss output.
void add_coherence_rows(Table& t, double eta, const coherence::CoherenceReport& rep) {
  const double nan = std::nan("");
  for (const auto& o : rep.orders)
    t.add_row({eta, static_cast<long long>(o.order), o.total.value_or(nan), o.measurable, o.norm.value_or(nan),
               o.s.value_or(nan), std::abs(o.moment)});
}

Table coherence_table_for(const char* name) {
  return Table{name, {"eta", "n", "C_n", "c_n", "norm", "S", "moment_abs"}, {}};
}

coherence::CoherenceReport lossy_report(const fock::FixedNState& state, double eta, const std::vector<int>& orders) {
  coherence::ReportOptions opts;
  opts.include_elements = false;
  if (eta == 1.0) return coherence::coherence_report(state, orders, opts);
  opts.support.threshold = 0.0;
  const auto rho = channels::apply_loss(state, channels::LossSetting::uniform(eta));
  return coherence::coherence_report(rho, orders, opts);
}

// ---------------------------------------------------------------------------

struct AttenuateArgs {
  int n = 0;
  std::string eta;
  std::string orders;
  double phase = 0.0;
};

Output cmd_attenuate(const AttenuateArgs& a, int precision) {
  require_positive_n(a.n);
  const auto etas = resolve_etas(a.eta);
  const auto orders = resolve_orders(a.orders, a.n);
  const auto state = states::make_noon(a.n, a.phase);

  Output out;
  out.command = "attenuate";
  out.parameters = Json{{"n", a.n}, {"eta", real_array(etas, precision)}, {"orders", int_array(orders)},
                        {"phase", io::json_number(a.phase, precision)}};
  Table dist{"distribution", {"eta", "two_jz", "probability"}, {}};
  Table coh = coherence_table_for("coherence");

  struct Point {
    std::map<int, double> distribution;
    coherence::CoherenceReport report;
  };
  const auto points = parallel_map<Point>(etas.size(), [&](std::size_t i) {
    const auto rho = channels::apply_loss(state, channels::LossSetting::uniform(etas[i]));
    coherence::ReportOptions opts;
    opts.include_elements = false;
    opts.support.threshold = 0.0;
    return Point{fock::number_distribution(rho), coherence::coherence_report(rho, orders, opts)};
  });
  for (std::size_t i = 0; i < etas.size(); ++i) {
    for (const auto& [k, p] : points[i].distribution) dist.add_row({etas[i], static_cast<long long>(k), p});
    add_coherence_rows(coh, etas[i], points[i].report);
  }
  out.metadata = Json{{"support_threshold", 0.0}, {"support_rule", "joint_pair"}};
  out.tables = {std::move(dist), std::move(coh)};
  return out;
}

struct SplitterArgs {
  int n = 0;
  std::string eta = "1";
  std::string orders;
};

Output cmd_splitter(const SplitterArgs& a, int precision) {
  require_positive_n(a.n);
  const auto etas = resolve_etas(a.eta);
  const auto orders = resolve_orders(a.orders, a.n);
  const auto state = states::make_binomial_splitter(a.n);

  Output out;
  out.command = "splitter";
  out.parameters = Json{{"n", a.n}, {"eta", real_array(etas, precision)}, {"orders", int_array(orders)}};
  const auto reports = parallel_map<coherence::CoherenceReport>(
      etas.size(), [&](std::size_t i) { return lossy_report(state, etas[i], orders); });
  Table coh = coherence_table_for("coherence");
  for (std::size_t i = 0; i < etas.size(); ++i) add_coherence_rows(coh, etas[i], reports[i]);
  out.metadata = Json{{"spread", coherence::spread(state)},
                      {"support_threshold_lossless", kDefaultSupportThreshold},
                      {"support_threshold_lossy", 0.0}};
  out.tables = {std::move(coh)};
  return out;
}

struct DynamicsArgs {
  int n = 0;
  double g = 0.0;
  double kappa = 1.0;
  int nl = 0;
  std::string orders;
  std::string times;
  bool period_units = false;
  int scan_samples = 4096;
};

Json period_json(const dynamics::PeriodEstimate& p, int precision) {
  return Json{{"T_N", io::json_number(p.spectral, precision)},
              {"T_N_scanned", io::json_number(p.scanned, precision)},
              {"relative_difference", io::json_number(p.relative_difference, precision)},
              {"splitting", io::json_number(p.splitting, precision)},
              {"levels", Json::array({p.level_low, p.level_high})}};
}

Output cmd_dynamics(const DynamicsArgs& a, int precision) {
  require_positive_n(a.n);
  if (a.nl < 0 || a.nl > a.n) throw ValidationError("--nl must lie in [0, N]");
  if (a.scan_samples < 16) throw ValidationError("--scan-samples must be at least 16");
  const auto orders = resolve_orders(a.orders, a.n);
  auto times = parse_real_list(a.times);
  for (double t : times)
    if (t < 0.0) throw ValidationError("times must be non-negative");

  const dynamics::JosephsonSystem system(a.n, a.g, a.kappa);
  const auto initial = states::make_number_pair(a.nl, a.n);

  Output out;
  out.command = "dynamics";
  std::optional<dynamics::PeriodEstimate> period;
  std::string period_error;
  try {
    period = dynamics::tunnelling_period(system, initial, {10.0, a.scan_samples});
  } catch (const NumericalError& e) {
    if (a.period_units) throw;
    period_error = e.what();
  }
  if (a.period_units)
    for (double& t : times) t *= period->spectral;

  const auto trace = dynamics::evolve(system, initial, times, orders);
  std::vector<std::string> cols = {"t"};
  for (int m = 0; m <= a.n; ++m) cols.push_back("P_" + std::to_string(m));
  for (int n : orders) cols.push_back("c_" + std::to_string(n));
  Table tr{"trace", cols, {}};
  Table summary{"summary", {"t", "jz", "energy", "dominant_order"}, {}};
  for (std::size_t i = 0; i < trace.times.size(); ++i) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < orders.size(); ++k)
      if (trace.cn[i][k] > trace.cn[i][best]) best = k;
    std::vector<io::Cell> row = {trace.times[i]};
    for (double p : trace.pm[i]) row.emplace_back(p);
    for (double c : trace.cn[i]) row.emplace_back(c);
    tr.add_row(std::move(row));
    // 0 when no order carries coherence (number states).
    const long long dominant = trace.cn[i][best] > kCoherenceFloor ? orders[best] : 0;
    summary.add_row({trace.times[i], trace.jz_mean[i], trace.energy[i], dominant});
  }
  out.parameters = Json{{"n", a.n},
                        {"g", io::json_number(a.g, precision)},
                        {"kappa", io::json_number(a.kappa, precision)},
                        {"nl", a.nl},
                        {"orders", int_array(orders)},
                        {"times", real_array(times, precision)},
                        {"period_units", a.period_units}};
  out.metadata = Json{{"period", period ? period_json(*period, precision) : Json(nullptr)}};
  if (!period_error.empty()) out.metadata["period_error"] = period_error;
  if (period) out.messages.push_back("T_N " + io::format_double(period->spectral, precision));
  out.tables = {std::move(tr), std::move(summary)};
  return out;
}

struct FringesArgs {
  std::string state;
  std::string kind;
  int n = 0;
  double phase = 0.0;
  int nl = 0;
  int m = 0;
  int k = 256;
};

states::StateRecipe fringe_recipe(const FringesArgs& a) {
  if (!a.state.empty() && !a.kind.empty()) throw ValidationError("give either --state or --kind, not both");
  if (!a.state.empty()) {
    const std::string text = trim(a.state).substr(0, 1) == "{" ? a.state : io::read_file(a.state);
    Json j;
    try {
      j = Json::parse(text);
    } catch (const Json::parse_error& e) {
      throw ValidationError(std::string("state recipe is not valid JSON: ") + e.what());
    }
    return io::recipe_from_json(j);
  }
  if (a.kind.empty()) throw ValidationError("a state is required (--state or --kind)");
  states::StateRecipe r;
  r.kind = states::parse_recipe_kind(a.kind);
  r.total_number = a.n;
  r.phase = a.phase;
  r.left_occupation = a.nl;
  states::validate(r);
  return r;
}

Output cmd_fringes(const FringesArgs& a, int precision) {
  const auto recipe = fringe_recipe(a);
  const auto state = states::build(recipe);
  const auto scan = interferometry::binned_probability_scan(state, a.m, a.k);

  Output out;
  out.command = "fringes";
  out.parameters = Json{{"state", io::to_json(recipe)}, {"m", a.m}, {"k", a.k}};
  Table s{"scan", {"phi", "p_geq_M"}, {}};
  for (std::size_t i = 0; i < scan.phases.size(); ++i) s.add_row({scan.phases[i], scan.probabilities[i]});
  Table f{"spectrum", {"omega", "magnitude"}, {}};
  for (std::size_t w = 0; w < scan.spectrum.size(); ++w) f.add_row({static_cast<long long>(w), scan.spectrum[w]});
  out.metadata = Json{{"dominant_omega", scan.peak},
                      {"visibility", io::json_number(interferometry::fringe_visibility(scan.probabilities), precision)}};
  out.messages.push_back("dominant omega " + std::to_string(scan.peak));
  out.tables = {std::move(s), std::move(f)};
  return out;
}

struct InferArgs {
  std::string data;
  double mean_tolerance = 0.05;
};

Output cmd_infer(const InferArgs& a, int precision) {
  if (!(a.mean_tolerance >= 0.0)) throw ValidationError("--mean-tolerance must be non-negative");
  std::istringstream in(io::read_file(a.data));
  const auto rows = squeezing::read_squeeze_csv(in);
  squeezing::InferenceOptions opts;
  opts.mean_tolerance = a.mean_tolerance;

  Output out;
  out.command = "infer";
  out.parameters = Json{{"data", a.data}, {"mean_tolerance", io::json_number(a.mean_tolerance, precision)}};
  Table t{"summary", {"row", "N", "xi", "xi_jx", "min_order", "certified", "inference", "rotated_moment_bound"}, {}};
  Json reports = Json::array();
  const double nan = std::nan("");
  int certified = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = squeezing::analyze(rows[i], opts);
    const bool cert = r.bound && r.bound->certified;
    certified += cert;
    t.add_row({static_cast<long long>(i + 1), r.data.mean_n, r.xi_n ? r.xi_n->value : nan,
               r.xi_jx ? r.xi_jx->value : nan, r.bound ? r.bound->min_order : nan, static_cast<long long>(cert),
               std::string(squeezing::to_string(r.inference.status)), r.inference.rotated_moment_bound});
    reports.push_back(io::to_json(r, precision));
  }
  out.metadata = Json{{"rows", rows.size()}, {"squeezing_certified", certified}};
  out.extra = Json{{"rows", std::move(reports)}};
  out.tables = {std::move(t)};
  return out;
}

// ---------------------------------------------------------------------------

std::string json_document(const Output& o, bool with_tables, int precision) {
  Json doc{{"command", o.command}, {"parameters", o.parameters}, {"metadata", o.metadata}};
  for (const auto& item : o.extra.items()) doc[item.key()] = item.value();
  if (with_tables) {
    Json tables = Json::object();
    for (const auto& t : o.tables) tables[t.name] = io::to_json(t, precision);
    doc["tables"] = std::move(tables);
  }
  return doc.dump(2) + "\n";
}

void emit(const Output& o, const Common& c, Format format, std::ostream& out, std::ostream& err) {
  std::vector<std::pair<std::string, std::string>> files;
  if (format == Format::json) {
    const std::string doc = json_document(o, true, c.precision);
    if (c.out.empty()) out << doc;
    else files.emplace_back(c.out + ".json", doc);
  } else if (c.out.empty()) {
    for (std::size_t i = 0; i < o.tables.size(); ++i) {
      if (o.tables.size() > 1) out << (i ? "\n" : "") << "# " << o.tables[i].name << "\n";
      io::write_csv(out, o.tables[i], c.precision);
    }
  } else {
    for (const auto& t : o.tables) files.emplace_back(c.out + "." + t.name + ".csv", io::to_csv(t, c.precision));
    files.emplace_back(c.out + ".meta.json", json_document(o, false, c.precision));
  }
  for (const auto& [path, content] : files) io::write_atomic(path, content);
  for (const auto& m : o.messages) err << m << "\n";
}

// Turns a JSON config object into --key=value tokens for the subcommand.
std::vector<std::string> config_tokens(const CLI::App& sub, const std::string& path) {
  Json j;
  try {
    j = Json::parse(io::read_file(path));
  } catch (const Json::parse_error& e) {
    throw ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw ValidationError("config must be a JSON object");
  std::vector<std::string> tokens;
  for (const auto& item : j.items()) {
    const std::string& key = item.key();
    const CLI::Option* opt = sub.get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config" || key == "help")
      throw ValidationError("config: unknown key '" + key + "' for " + sub.get_name());
    const Json& v = item.value();
    const bool is_flag = opt->get_expected_max() == 0;
    if (is_flag != v.is_boolean()) throw ValidationError("config: '" + key + "' has the wrong type");
    auto scalar = [&](const Json& x) -> std::string {
      if (x.is_string()) return x.get<std::string>();
      if (x.is_number_integer()) return std::to_string(x.get<long long>());
      if (x.is_number()) return io::format_double(x.get<double>(), 17);
      throw ValidationError("config: '" + key + "' has the wrong type");
    };
    if (v.is_boolean()) {
      if (v.get<bool>()) tokens.push_back("--" + key);
    } else if (v.is_array()) {
      std::string joined;
      for (const Json& x : v) joined += (joined.empty() ? "" : ",") + scalar(x);
      tokens.push_back("--" + key + "=" + joined);
    } else if (v.is_object()) {
      tokens.push_back("--" + key + "=" + v.dump());
    } else {
      tokens.push_back("--" + key + "=" + scalar(v));
    }
  }
  return tokens;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Coherence-order analysis of two-mode bosonic states", "noon-coherence"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);

  Common common;
  std::function<Output()> action;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "Output path prefix (stdout when omitted)");
    sub->add_option("--format", common.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--precision", common.precision, "Significant digits")->check(CLI::Range(1, 17));
    sub->add_option("--config", common.config, "JSON file of option values; flags override it");
  };

  AttenuateArgs att;
  auto* s_att = app.add_subcommand("attenuate", "Lossy NOON state: P(2j_z) and coherence versus eta");
  s_att->add_option("--n", att.n, "Total number N")->required();
  s_att->add_option("--eta", att.eta, "Detection efficiencies (list or start:stop:count)")->required();
  s_att->add_option("--orders", att.orders, "Coherence orders (default 1..N)");
  s_att->add_option("--phase", att.phase, "NOON phase");
  add_common(s_att);
  s_att->callback([&] { action = [&] { return cmd_attenuate(att, common.precision); }; });

  SplitterArgs spl;
  auto* s_spl = app.add_subcommand("splitter", "Beam-splitter output: C_n and c_n versus n");
  s_spl->add_option("--n", spl.n, "Total number N")->required();
  s_spl->add_option("--eta", spl.eta, "Detection efficiencies (default 1)");
  s_spl->add_option("--orders", spl.orders, "Coherence orders (default 1..N)");
  add_common(s_spl);
  s_spl->callback([&] { action = [&] { return cmd_splitter(spl, common.precision); }; });

  DynamicsArgs dyn;
  auto* s_dyn = app.add_subcommand("dynamics", "Josephson evolution of |N-n_L, n_L>");
  s_dyn->add_option("--n", dyn.n, "Total number N")->required();
  s_dyn->add_option("--g", dyn.g, "Nonlinearity g")->required();
  s_dyn->add_option("--kappa", dyn.kappa, "Tunnelling rate (default 1)");
  s_dyn->add_option("--nl", dyn.nl, "Initial b-mode occupation n_L");
  s_dyn->add_option("--orders", dyn.orders, "Coherence orders (default 1..N)");
  s_dyn->add_option("--times", dyn.times, "Times: list, fractions, start:stop:count")->required();
  s_dyn->add_flag("--period-units", dyn.period_units, "Times are multiples of T_N");
  s_dyn->add_option("--scan-samples", dyn.scan_samples, "Samples in the period scan");
  add_common(s_dyn);
  s_dyn->callback([&] { action = [&] { return cmd_dynamics(dyn, common.precision); }; });

  FringesArgs fr;
  auto* s_fr = app.add_subcommand("fringes", "Binned fringe scan P(n_c >= M) and its spectrum");
  s_fr->add_option("--state", fr.state, "State recipe: JSON text or file");
  s_fr->add_option("--kind", fr.kind, "noon, binomial_splitter, embedded_initial, number_pair");
  s_fr->add_option("--n", fr.n, "Total number N (with --kind)");
  s_fr->add_option("--phase", fr.phase, "Phase (with --kind)");
  s_fr->add_option("--nl", fr.nl, "n_L (with --kind)");
  s_fr->add_option("--m", fr.m, "Bin threshold M")->required();
  s_fr->add_option("--k", fr.k, "Phase samples, a power of two above 2N (default 256)");
  add_common(s_fr);
  s_fr->callback([&] { action = [&] { return cmd_fringes(fr, common.precision); }; });

  InferArgs inf;
  auto* s_inf = app.add_subcommand("infer", "Squeezing bound and two-quantum inference from moment data");
  s_inf->add_option("--data", inf.data, "CSV with header N,jx,jy,jz,jy2,jz2")->required();
  s_inf->add_option("--mean-tolerance", inf.mean_tolerance, "Zero-mean tolerance in units of sqrt(N)");
  add_common(s_inf);
  s_inf->callback([&] { action = [&] { return cmd_infer(inf, common.precision); }; });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    // Splice config values in front of the explicit flags so the flags win.
    if (!args.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(args.front())) {
        std::string path;
        for (std::size_t i = 1; i < args.size(); ++i) {
          if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
          else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
        }
        if (!path.empty()) {
          auto tokens = config_tokens(*sub, path);
          args.insert(args.begin() + 1, tokens.begin(), tokens.end());
        }
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);

    const Format format = common.format.empty() ? (app.got_subcommand("infer") ? Format::json : Format::csv)
                          : common.format == "json" ? Format::json
                                                    : Format::csv;
    const Output result = action();
    emit(result, common, format, out, err);
    return 0;
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numerical error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace noon::cli
