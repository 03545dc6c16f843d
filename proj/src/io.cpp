#include "noon/io.hpp"

#include <unistd.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace noon::io {
namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

int integer_field(const Json& j, const char* key, const std::string& where) {
  require(j.contains(key), where + ": missing '" + key + "'");
  const Json& v = j.at(key);
  require(v.is_number_integer(), where + ": '" + key + "' must be an integer");
  const auto value = v.get<long long>();
  require(value >= INT32_MIN && value <= INT32_MAX, where + ": '" + key + "' out of range");
  return static_cast<int>(value);
}

double number_field(const Json& v, const std::string& what) {
  require(v.is_number(), what + " must be a number");
  const double x = v.get<double>();
  require(std::isfinite(x), what + " must be finite");
  return x;
}

std::vector<double> number_array(const Json& j, const char* key, const std::string& where) {
  require(j.contains(key), where + ": missing '" + key + "'");
  const Json& v = j.at(key);
  require(v.is_array(), where + ": '" + key + "' must be an array");
  std::vector<double> out;
  for (const Json& x : v) out.push_back(number_field(x, where + ": '" + key + "' entry"));
  return out;
}

Json optional_number(const std::optional<double>& v, int precision) {
  return v ? json_number(*v, precision) : Json(nullptr);
}

}  // namespace

std::string format_double(double value, int precision) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  if (precision < 1 || precision > 17) throw ValidationError("precision must lie in [1, 17]");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, precision);
  return std::string(buf, res.ptr);
}

Json json_number(double value, int precision) {
  if (!std::isfinite(value)) return nullptr;
  const std::string text = format_double(value, precision);
  double parsed = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), parsed);
  return parsed;
}

void Table::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw ValidationError("row width does not match table '" + name + "'");
  rows.push_back(std::move(row));
}

namespace {

std::string cell_text(const Cell& c, int precision) {
  if (const auto* d = std::get_if<double>(&c)) return format_double(*d, precision);
  if (const auto* i = std::get_if<long long>(&c)) return std::to_string(*i);
  return std::get<std::string>(c);
}

}  // namespace

void write_csv(std::ostream& out, const Table& table, int precision) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << cell_text(row[i], precision);
    out << '\n';
  }
}

std::string to_csv(const Table& table, int precision) {
  std::ostringstream os;
  write_csv(os, table, precision);
  return os.str();
}

Json to_json(const Table& table, int precision) {
  Json rows = Json::array();
  for (const auto& row : table.rows) {
    Json r = Json::array();
    for (const Cell& c : row) {
      if (const auto* d = std::get_if<double>(&c)) r.push_back(json_number(*d, precision));
      else if (const auto* i = std::get_if<long long>(&c)) r.push_back(*i);
      else r.push_back(std::get<std::string>(c));
    }
    rows.push_back(std::move(r));
  }
  return Json{{"columns", table.columns}, {"rows", std::move(rows)}};
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ValidationError("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw ValidationError("failed writing '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw ValidationError("cannot move output into '" + path.string() + "'");
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void reject_unknown_keys(const Json& j, const std::vector<std::string>& allowed, const std::string& where) {
  require(j.is_object(), where + " must be a JSON object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& item : j.items())
    require(ok.count(item.key()) > 0, where + ": unknown key '" + item.key() + "'");
}

// ---------------------------------------------------------------------------

Json to_json(const fock::FixedNState& state, int precision) {
  Json re = Json::array(), im = Json::array();
  for (const complex& d : state.amplitudes()) {
    re.push_back(json_number(d.real(), precision));
    im.push_back(json_number(d.imag(), precision));
  }
  return Json{{"total_number", state.total_number()}, {"amplitudes_re", re}, {"amplitudes_im", im}};
}

Json to_json(const fock::TwoModeDensityMatrix& rho, int precision) {
  Json re = Json::array(), im = Json::array();
  const Eigen::MatrixXcd& e = rho.entries();
  for (Eigen::Index i = 0; i < e.rows(); ++i) {
    Json rr = Json::array(), ri = Json::array();
    for (Eigen::Index k = 0; k < e.cols(); ++k) {
      rr.push_back(json_number(e(i, k).real(), precision));
      ri.push_back(json_number(e(i, k).imag(), precision));
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ri));
  }
  return Json{{"cutoff", rho.cutoff()}, {"entries_re", re}, {"entries_im", im}};
}

fock::FixedNState fixed_state_from_json(const Json& j) {
  const std::string where = "state";
  reject_unknown_keys(j, {"total_number", "amplitudes_re", "amplitudes_im"}, where);
  const int n = integer_field(j, "total_number", where);
  const auto re = number_array(j, "amplitudes_re", where);
  const auto im = number_array(j, "amplitudes_im", where);
  require(re.size() == im.size(), where + ": amplitude arrays differ in length");
  std::vector<complex> d;
  for (std::size_t i = 0; i < re.size(); ++i) d.emplace_back(re[i], im[i]);
  return fock::FixedNState(n, std::move(d));
}

fock::TwoModeDensityMatrix density_matrix_from_json(const Json& j) {
  const std::string where = "density matrix";
  reject_unknown_keys(j, {"cutoff", "entries_re", "entries_im"}, where);
  const int c = integer_field(j, "cutoff", where);
  require(c >= 0 && c <= 60, where + ": cutoff must lie in [0, 60]");
  const long dim = static_cast<long>(c + 1) * (c + 1);
  auto grid = [&](const char* key) {
    require(j.contains(key) && j.at(key).is_array(), where + ": '" + key + "' must be an array of rows");
    const Json& rows = j.at(key);
    require(static_cast<long>(rows.size()) == dim, where + ": '" + key + "' has the wrong number of rows");
    Eigen::MatrixXd m(dim, dim);
    for (long r = 0; r < dim; ++r) {
      const Json& row = rows.at(static_cast<std::size_t>(r));
      require(row.is_array() && static_cast<long>(row.size()) == dim, where + ": '" + key + "' row has the wrong length");
      for (long k = 0; k < dim; ++k) m(r, k) = number_field(row.at(static_cast<std::size_t>(k)), where + " entry");
    }
    return m;
  };
  const Eigen::MatrixXd re = grid("entries_re");
  const Eigen::MatrixXd im = grid("entries_im");
  Eigen::MatrixXcd e(dim, dim);
  e.real() = re;
  e.imag() = im;
  return fock::TwoModeDensityMatrix(c, std::move(e));
}

states::StateRecipe recipe_from_json(const Json& j) {
  const std::string where = "state recipe";
  reject_unknown_keys(j, {"kind", "n", "phase", "left_occupation"}, where);
  require(j.contains("kind") && j.at("kind").is_string(), where + ": 'kind' must be a string");
  states::StateRecipe r;
  r.kind = states::parse_recipe_kind(j.at("kind").get<std::string>());
  r.total_number = integer_field(j, "n", where);
  if (j.contains("phase")) {
    require(r.kind == states::RecipeKind::noon || r.kind == states::RecipeKind::embedded_initial,
            where + ": 'phase' applies to noon and embedded_initial only");
    r.phase = number_field(j.at("phase"), where + ": 'phase'");
  }
  if (j.contains("left_occupation")) {
    require(r.kind == states::RecipeKind::embedded_initial || r.kind == states::RecipeKind::number_pair,
            where + ": 'left_occupation' applies to embedded_initial and number_pair only");
    r.left_occupation = integer_field(j, "left_occupation", where);
  }
  states::validate(r);
  return r;
}

Json to_json(const states::StateRecipe& recipe) {
  Json j{{"kind", std::string(states::to_string(recipe.kind))}, {"n", recipe.total_number}};
  if (recipe.kind == states::RecipeKind::noon || recipe.kind == states::RecipeKind::embedded_initial)
    j["phase"] = recipe.phase;
  if (recipe.kind == states::RecipeKind::embedded_initial || recipe.kind == states::RecipeKind::number_pair)
    j["left_occupation"] = recipe.left_occupation;
  return j;
}

// ---------------------------------------------------------------------------

Json to_json(const coherence::CoherenceReport& rep, int precision) {
  Json orders = Json::array();
  for (const auto& o : rep.orders) {
    Json els = Json::array();
    for (const auto& e : o.elements)
      els.push_back(Json{{"left_index", e.left_index},
                         {"right_index", e.right_index},
                         {"offset", e.offset},
                         {"magnitude", json_number(e.magnitude, precision)}});
    Json argmax = Json::array();
    for (const auto& [np, mp] : o.s_argmax) argmax.push_back(Json::array({np, mp}));
    Json b = Json::array();
    for (double x : o.b_factors) b.push_back(json_number(x, precision));
    orders.push_back(Json{{"n", o.order},
                          {"C_n", optional_number(o.total, precision)},
                          {"c_n", json_number(o.measurable, precision)},
                          {"norm", optional_number(o.norm, precision)},
                          {"S", optional_number(o.s, precision)},
                          {"S_argmax", std::move(argmax)},
                          {"moment_re", json_number(o.moment.real(), precision)},
                          {"moment_im", json_number(o.moment.imag(), precision)},
                          {"B", std::move(b)},
                          {"elements", std::move(els)}});
  }
  return Json{{"max_total", rep.max_total},
              {"spread", rep.spread},
              {"support_rule", rep.support_rule},
              {"support_threshold", json_number(rep.support_threshold, precision)},
              {"orders", std::move(orders)}};
}

Table coherence_table(const coherence::CoherenceReport& rep) {
  Table t{"coherence", {"n", "C_n", "c_n", "norm", "S", "delta"}, {}};
  const double nan = std::nan("");
  for (const auto& o : rep.orders)
    t.add_row({static_cast<long long>(o.order), o.total.value_or(nan), o.measurable, o.norm.value_or(nan),
               o.s.value_or(nan), static_cast<long long>(rep.spread)});
  return t;
}

Json to_json(const squeezing::RowAnalysis& row, int precision) {
  const auto& d = row.data;
  Json chain = Json::array();
  for (const auto& s : row.inference.chain)
    chain.push_back(Json{{"step", s.name},
                         {"lhs", json_number(s.lhs, precision)},
                         {"rhs", json_number(s.rhs, precision)},
                         {"margin", json_number(s.margin, precision)},
                         {"holds", s.holds}});
  Json notes = Json::array();
  for (const auto& n : row.notes) notes.push_back(n);
  return Json{{"N", json_number(d.mean_n, precision)},
              {"jx", json_number(d.jx_mean, precision)},
              {"jy", json_number(d.jy_mean, precision)},
              {"jz", json_number(d.jz_mean, precision)},
              {"jy_var", json_number(d.jy_var, precision)},
              {"jz_var", json_number(d.jz_var, precision)},
              {"xi", row.xi_n ? json_number(row.xi_n->value, precision) : Json(nullptr)},
              {"xi_mode", std::string(squeezing::to_string(squeezing::XiMode::n_normalized))},
              {"xi_jx", row.xi_jx ? json_number(row.xi_jx->value, precision) : Json(nullptr)},
              {"min_order", row.bound ? json_number(row.bound->min_order, precision) : Json(nullptr)},
              {"certified", row.bound ? row.bound->certified : false},
              {"inference", std::string(squeezing::to_string(row.inference.status))},
              {"rotated_moment_bound", json_number(row.inference.rotated_moment_bound, precision)},
              {"chain", std::move(chain)},
              {"notes", std::move(notes)}};
}

}  // namespace noon::io
