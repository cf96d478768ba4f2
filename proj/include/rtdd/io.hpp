#ifndef RTDD_IO_HPP
#define RTDD_IO_HPP

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rtdd/beamform.hpp"
#include "rtdd/evaluate.hpp"
#include "rtdd/feasibility.hpp"

namespace rtdd::io {

/// {"M_alpha": int, "N_alpha": [int...], "M_beta": int, "N_beta": [int...]}
NetworkConfig parse_config(const std::string& json_text);
NetworkConfig load_config(const std::string& path);
nlohmann::json config_to_json(const NetworkConfig& config);

/// "3,3,3,3;2,2,2". Validated against `config`.
DofAllocation parse_dof(const std::string& text, const NetworkConfig& config);
std::string format_dof(const DofAllocation& dof);

/// "d_alpha;d_beta" for the symmetric check, e.g. "4;2".
std::pair<int, int> parse_symmetric_dof(const std::string& text);

/// "start:step:stop", stop included when reachable; a bare number is a
/// one-point grid.
std::vector<double> parse_snr_grid(const std::string& text);

/// %.9g
std::string format_double(double value);

nlohmann::json to_json(const FeasibilityReport& report);
nlohmann::json to_json(const SearchResult& result);
nlohmann::json to_json(const ResidualReport& report);
nlohmann::json to_json(const SweepResult& result);

std::string trace_csv(const LeakageTrace& trace);
std::string sweep_csv(const SweepResult& result);

/// Pretty-printed with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace rtdd::io

#endif  // RTDD_IO_HPP
