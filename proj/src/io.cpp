#include "rtdd/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rtdd::io {

using nlohmann::json;

namespace {

int parse_int(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  int value = 0;
  try {
    value = std::stoi(token, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + token + "' is not an integer");
  }
  if (used != token.size()) throw ConfigError(what + ": '" + token + "' is not an integer");
  return value;
}

double parse_number(const std::string& token, const std::string& what) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ConfigError(what + ": '" + token + "' is not a number");
  }
  if (used != token.size()) throw ConfigError(what + ": '" + token + "' is not a number");
  return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) out.push_back(item);
  if (!text.empty() && text.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<int> parse_int_list(const std::string& text, const std::string& what) {
  std::vector<int> out;
  for (const auto& tok : split(text, ',')) out.push_back(parse_int(trim(tok), what));
  return out;
}

// Round to 9 significant digits so the serializer's shortest round-trip form
// matches the CSV text.
json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return std::strtod(format_double(v).c_str(), nullptr);
}

json numbers(const std::vector<double>& values) {
  json out = json::array();
  for (double v : values) out.push_back(number(v));
  return out;
}

std::vector<int> int_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing \"") + key + "\"");
  const auto& v = j.at(key);
  if (!v.is_array()) throw ConfigError(std::string("config: \"") + key + "\" must be an array of integers");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError(std::string("config: \"") + key + "\" must be an array of integers");
    out.push_back(e.get<int>());
  }
  return out;
}

int scalar_field(const json& j, const char* key) {
  if (!j.contains(key)) throw ConfigError(std::string("config: missing \"") + key + "\"");
  if (!j.at(key).is_number_integer()) throw ConfigError(std::string("config: \"") + key + "\" must be an integer");
  return j.at(key).get<int>();
}

}  // namespace

NetworkConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& k = it.key();
    if (k != "M_alpha" && k != "N_alpha" && k != "M_beta" && k != "N_beta")
      throw ConfigError("config: unknown key \"" + k + "\"");
  }
  NetworkConfig c;
  c.m_alpha = scalar_field(j, "M_alpha");
  c.n_alpha = int_field(j, "N_alpha");
  c.m_beta = scalar_field(j, "M_beta");
  c.n_beta = int_field(j, "N_beta");
  validate_config(c);
  return c;
}

NetworkConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

json config_to_json(const NetworkConfig& c) {
  return json{{"M_alpha", c.m_alpha}, {"N_alpha", c.n_alpha}, {"M_beta", c.m_beta}, {"N_beta", c.n_beta}};
}

DofAllocation parse_dof(const std::string& text, const NetworkConfig& config) {
  const auto halves = split(text, ';');
  if (halves.size() != 2)
    throw ConfigError("dof: expected 'a1,a2,...;b1,b2,...' with exactly one ';', got '" + text + "'");
  DofAllocation dof{parse_int_list(halves[0], "dof"), parse_int_list(halves[1], "dof")};
  validate_config(config, dof);
  return dof;
}

std::string format_dof(const DofAllocation& dof) {
  std::string out;
  for (std::size_t i = 0; i < dof.d_alpha.size(); ++i) out += (i ? "," : "") + std::to_string(dof.d_alpha[i]);
  out += ";";
  for (std::size_t i = 0; i < dof.d_beta.size(); ++i) out += (i ? "," : "") + std::to_string(dof.d_beta[i]);
  return out;
}

std::pair<int, int> parse_symmetric_dof(const std::string& text) {
  const auto halves = split(text, ';');
  if (halves.size() != 2) throw ConfigError("dof: symmetric form is 'd_alpha;d_beta', got '" + text + "'");
  return {parse_int(trim(halves[0]), "dof"), parse_int(trim(halves[1]), "dof")};
}

std::vector<double> parse_snr_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_number(trim(parts[0]), "snr")};
  if (parts.size() != 3) throw ConfigError("snr: expected START:STEP:STOP, got '" + text + "'");
  const double start = parse_number(trim(parts[0]), "snr");
  const double step = parse_number(trim(parts[1]), "snr");
  const double stop = parse_number(trim(parts[2]), "snr");
  if (!(step > 0)) throw ConfigError("snr: STEP must be positive");
  if (stop < start) throw ConfigError("snr: STOP must not be below START");
  std::vector<double> grid;
  // Index-based so accumulated rounding cannot drop the last point.
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) throw ConfigError("snr: grid has more than 100000 points");
  for (long i = 0; i < count; ++i) grid.push_back(start + static_cast<double>(i) * step);
  return grid;
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

json to_json(const FeasibilityReport& report) {
  json conditions = json::array();
  for (const auto& c : report.conditions) {
    json entry{{"id", c.id}, {"pass", c.pass}};
    if (c.subsets) entry["witness"] = json{{"I_alpha", c.subsets->i_alpha}, {"I_beta", c.subsets->i_beta}};
    if (c.rank) {
      entry["witness"] = json{{"rows", c.rank->rows},
                              {"cols", c.rank->cols},
                              {"ranks", c.rank->ranks},
                              {"structurally_impossible", c.rank->structurally_impossible}};
    }
    if (!c.detail.empty()) entry["detail"] = c.detail;
    conditions.push_back(std::move(entry));
  }
  json out{{"verdict", report.verdict}, {"conditions", std::move(conditions)}};
  if (report.necessary_verdict) out["necessary_verdict"] = *report.necessary_verdict;
  if (report.exact) out["exact"] = *report.exact;
  return out;
}

json to_json(const SearchResult& r) {
  const auto alloc = [](const DofAllocation& d) { return json{{"d_alpha", d.d_alpha}, {"d_beta", d.d_beta}}; };
  return json{{"mode", r.mode == SearchMode::necessary_bound ? "necessary" : "sufficient"},
              {"d_sum", r.d_sum},
              {"allocation", alloc(r.allocation)},
              {"necessary_bound", r.necessary_bound},
              {"necessary_allocation", alloc(r.necessary_allocation)},
              {"sufficient_certified", r.sufficient_certified},
              {"sufficient_allocation", alloc(r.sufficient_allocation)},
              {"gap", r.gap()},
              {"optimal", r.optimal},
              {"report", to_json(r.report)}};
}

json to_json(const ResidualReport& r) {
  return json{{"intercell_alpha", number(r.intercell_alpha)},
              {"intercell_beta", number(r.intercell_beta)},
              {"intracell_alpha", number(r.intracell_alpha)},
              {"intracell_beta", number(r.intracell_beta)},
              {"margin_alpha", numbers(r.margin_alpha)},
              {"margin_beta", numbers(r.margin_beta)},
              {"min_margin", number(r.min_margin())}};
}

json to_json(const SweepResult& result) {
  json rows = json::array();
  for (const auto& row : result.rows) {
    rows.push_back(json{{"snr_db", number(row.snr_db)},
                        {"mean_sum_rate", number(row.mean_sum_rate)},
                        {"mean_rate_alpha", numbers(row.mean_rate_alpha)},
                        {"mean_rate_beta", numbers(row.mean_rate_beta)},
                        {"baseline_single_cell", number(row.baseline_single_cell)},
                        {"baseline_p2p", number(row.baseline_p2p)},
                        {"trials_ok", row.trials_ok},
                        {"trials_failed", row.trials_failed}});
  }
  return json{{"trials", result.trials}, {"seed", result.seed}, {"rows", std::move(rows)}};
}

std::string trace_csv(const LeakageTrace& trace) {
  std::ostringstream out;
  const std::size_t users = trace.per_user.empty() ? 0 : trace.per_user.front().size();
  out << "iteration,total_leakage";
  for (std::size_t k = 0; k < users; ++k) out << ",leakage_alpha_" << k + 1;
  out << '\n';
  for (std::size_t i = 0; i < trace.total.size(); ++i) {
    out << i + 1 << ',' << format_double(trace.total[i]);
    for (std::size_t k = 0; k < users; ++k) out << ',' << format_double(trace.per_user[i][k]);
    out << '\n';
  }
  return out.str();
}

std::string sweep_csv(const SweepResult& result) {
  std::ostringstream out;
  const std::size_t K = result.rows.empty() ? 0 : result.rows.front().mean_rate_alpha.size();
  const std::size_t L = result.rows.empty() ? 0 : result.rows.front().mean_rate_beta.size();
  out << "snr_db,mean_sum_rate";
  for (std::size_t k = 0; k < K; ++k) out << ",mean_rate_alpha_" << k + 1;
  for (std::size_t l = 0; l < L; ++l) out << ",mean_rate_beta_" << l + 1;
  out << ",baseline_single_cell,baseline_p2p,trials_ok,trials_failed\n";
  for (const auto& row : result.rows) {
    out << format_double(row.snr_db) << ',' << format_double(row.mean_sum_rate);
    for (double v : row.mean_rate_alpha) out << ',' << format_double(v);
    for (double v : row.mean_rate_beta) out << ',' << format_double(v);
    out << ',' << format_double(row.baseline_single_cell) << ',' << format_double(row.baseline_p2p) << ','
        << row.trials_ok << ',' << row.trials_failed << '\n';
  }
  return out.str();
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace rtdd::io
