#include "tpcorr/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "detail/format.hpp"
#include "tpcorr/error.hpp"

namespace tpcorr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_field(std::string_view field, std::size_t line, const char* name) {
  field = trim(field);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (field.empty() || ec != std::errc() || ptr != field.data() + field.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": cannot parse " + name + " value '" +
                                           std::string(field) + "'");
  }
  return value;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void dump(const nlohmann::json& v, std::string& out, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (v.type()) {
    case nlohmann::json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += inner + nlohmann::json(it.key()).dump() + ": ";
        dump(it.value(), out, indent + 1);
      }
      out += "\n" + pad + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (v.empty()) {
        out += "[]";
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",\n";
        out += inner;
        dump(v[i], out, indent + 1);
      }
      out += "\n" + pad + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double d = v.get<double>();
      out += std::isfinite(d) ? detail::format_double(d == 0.0 ? 0.0 : d, 12) : "null";
      return;
    }
    default:
      out += v.dump();
  }
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

nlohmann::json design_json(const DesignSpec& d) { return {{"N", d.N}, {"n1", d.n1}, {"n", d.n}}; }

}  // namespace

PopulationFrame parse_population_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> y, x, z;

  if (!std::getline(in, line)) throw Error(ErrorCode::ParseError, "line 1: empty input");
  ++line_no;
  std::string_view header = line;
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  header = trim(header);
  {
    std::vector<std::string_view> cols;
    std::size_t start = 0;
    while (true) {
      const auto comma = header.find(',', start);
      cols.push_back(trim(header.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (cols.size() != 3 || cols[0] != "y" || cols[1] != "x" || cols[2] != "z")
      throw Error(ErrorCode::HeaderMismatch, "line 1: expected header 'y,x,z', got '" + std::string(header) + "'");
  }

  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = trim(line);
    if (row.empty()) continue;
    const auto c1 = row.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
    if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos)
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected 3 fields");
    y.push_back(parse_field(row.substr(0, c1), line_no, "y"));
    x.push_back(parse_field(row.substr(c1 + 1, c2 - c1 - 1), line_no, "x"));
    z.push_back(parse_field(row.substr(c2 + 1), line_no, "z"));
  }
  return PopulationFrame(std::move(y), std::move(x), std::move(z));
}

PopulationFrame load_population_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  return parse_population_csv(in);
}

ParamDocument parse_params_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  if (doc.is_object() && doc.contains("parameters") && doc["parameters"].is_object()) doc = doc["parameters"];
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "parameter document must be a JSON object");
  ParamDocument out;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!it.value().is_number())
      throw Error(ErrorCode::ParseError, "parameter " + it.key() + " is not a number");
    out[it.key()] = it.value().get<double>();
  }
  return out;
}

ParamDocument load_params_json(const std::filesystem::path& path) { return parse_params_json(read_file(path)); }

nlohmann::json to_json(const MomentSet& moments) {
  nlohmann::json params = nlohmann::json::object();
  for (const auto& [key, value] : moments_to_params(moments)) {
    if (key == "N") {
      params[key] = *moments.N;
    } else {
      params[key] = value;
    }
  }
  return {{"schema", kReportSchema}, {"kind", "moments"}, {"parameters", params}, {"notes", moments.notes}};
}

nlohmann::json to_json(const VarianceReport& report) {
  const auto& c = report.constants;
  nlohmann::json j = {
      {"schema", kReportSchema},
      {"kind", "efficiency"},
      {"inputs", {{"n", report.n}, {"n1", report.n1}}},
      {"var_r", report.var_r},
      {"var_hd_min", report.var_hd_min},
      {"var_td_min", report.var_td_min},
      {"gap", report.gap},
      {"pre_r", 100.0},
      {"pre_hd", report.pre_hd},
      {"pre_td", report.pre_td},
      {"constants",
       {{"A", c.A}, {"B", c.B}, {"D", c.D}, {"F", c.F}, {"alpha", c.alpha}, {"beta", c.beta},
        {"gamma", c.gamma}, {"delta", c.delta}}},
      {"notes", report.interpretation_notes},
  };
  if (report.published) {
    const auto& p = *report.published;
    j["published"] = {{"pre_r", p.pre_r},
                      {"pre_hd", p.pre_hd},
                      {"pre_td", p.pre_td},
                      {"computed_minus_published_hd", report.pre_hd - p.pre_hd},
                      {"computed_minus_published_td", report.pre_td - p.pre_td}};
  }
  return j;
}

nlohmann::json to_json(const SimulationResult& r) {
  return {
      {"schema", kReportSchema},
      {"kind", "simulation"},
      {"estimator", to_string(r.estimator)},
      {"design", design_json(r.design)},
      {"seed", r.seed},
      {"clamped", r.clamped},
      {"reps_requested", r.reps_requested},
      {"reps_used", r.reps_used},
      {"reps_skipped", r.reps_skipped},
      {"skip_reasons", r.skip_reasons},
      {"rho_population", r.rho_population},
      {"mean_estimate", r.mean_estimate},
      {"bias", r.bias},
      {"empirical_mse", r.empirical_mse},
      {"mc_standard_error_of_mse", r.mc_standard_error_of_mse},
      {"mc_standard_error_of_mean", r.mc_standard_error_of_mean},
      {"analytic_variance", optional_number(r.analytic_variance)},
  };
}

nlohmann::json to_json(const ExactResult& r) {
  return {
      {"schema", kReportSchema},
      {"kind", "enumeration"},
      {"estimator", to_string(r.estimator)},
      {"design", design_json(r.design)},
      {"pairs_total", r.pairs_total},
      {"pairs_used", r.pairs_used},
      {"pairs_skipped", r.pairs_skipped},
      {"skip_reasons", r.skip_reasons},
      {"rho_population", r.rho_population},
      {"mean", r.mean},
      {"bias", r.bias},
      {"mse", r.mse},
      {"variance", r.variance},
  };
}

std::string dump_canonical(const nlohmann::json& value) {
  std::string out;
  dump(value, out, 0);
  out += '\n';
  return out;
}

}  // namespace tpcorr
