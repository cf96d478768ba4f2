#include <doctest.h>

#include <cmath>
#include <sstream>

#include "rtdd/io.hpp"

using namespace rtdd;

namespace {

std::string error_of(auto&& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("config round trip") {
  const auto c = io::parse_config(R"({"M_alpha":10,"N_alpha":[4,6,6],"M_beta":13,"N_beta":[3,6]})");
  CHECK(c.m_alpha == 10);
  CHECK(c.n_alpha == std::vector<int>{4, 6, 6});
  CHECK(c.m_beta == 13);
  CHECK(c.n_beta == std::vector<int>{3, 6});
  CHECK(io::parse_config(io::config_to_json(c).dump()).n_beta == c.n_beta);
}

TEST_CASE("config errors name the offending field") {
  CHECK(error_of([] { io::parse_config("{"); }).find("malformed JSON") != std::string::npos);
  CHECK(error_of([] { io::parse_config("[1]"); }) == "config: expected a JSON object");
  CHECK(error_of([] { io::parse_config(R"({"N_alpha":[1],"M_beta":1,"N_beta":[1]})"); }) ==
        "config: missing \"M_alpha\"");
  CHECK(error_of([] { io::parse_config(R"({"M_alpha":1,"N_alpha":[1.5],"M_beta":1,"N_beta":[1]})"); }) ==
        "config: \"N_alpha\" must be an array of integers");
  CHECK(error_of([] { io::parse_config(R"({"M_alpha":1,"N_alpha":[1],"M_beta":1,"N_beta":[1],"K":2})"); }) ==
        "config: unknown key \"K\"");
  CHECK(error_of([] { io::parse_config(R"({"M_alpha":0,"N_alpha":[1],"M_beta":1,"N_beta":[1]})"); }) != "");
  CHECK(error_of([] { io::load_config("/nonexistent/cfg.json"); }).find("cannot open") != std::string::npos);
}

TEST_CASE("dof strings parse, validate and format") {
  const NetworkConfig c{10, {4, 6, 6}, 13, {3, 6}};
  const auto d = io::parse_dof("2, 4,4 ;1,2", c);
  CHECK(d.d_alpha == std::vector<int>{2, 4, 4});
  CHECK(d.d_beta == std::vector<int>{1, 2});
  CHECK(io::format_dof(d) == "2,4,4;1,2");

  CHECK(error_of([&] { io::parse_dof("2,4,4", c); }).find("exactly one ';'") != std::string::npos);
  CHECK(error_of([&] { io::parse_dof("2,x,4;1,2", c); }).find("'x' is not an integer") != std::string::npos);
  CHECK(error_of([&] { io::parse_dof("5,4,4;1,2", c); }) != "");
  CHECK(error_of([&] { io::parse_dof("2,4;1,2", c); }) != "");

  CHECK(io::parse_symmetric_dof("4;2") == std::pair{4, 2});
  CHECK(error_of([] { io::parse_symmetric_dof("4"); }) != "");
}

TEST_CASE("snr grids include the stop value") {
  const auto g = io::parse_snr_grid("0:5:50");
  REQUIRE(g.size() == 11);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 50.0);
  CHECK(io::parse_snr_grid("0:0.1:1").size() == 11);
  CHECK(io::parse_snr_grid("0:10:55").back() == 50.0);
  CHECK(io::parse_snr_grid("17.5") == std::vector<double>{17.5});
  CHECK(error_of([] { io::parse_snr_grid("0:0:10"); }) == "snr: STEP must be positive");
  CHECK(error_of([] { io::parse_snr_grid("10:1:0"); }) == "snr: STOP must not be below START");
  CHECK(error_of([] { io::parse_snr_grid("0:1e-6:10"); }).find("100000") != std::string::npos);
  CHECK(error_of([] { io::parse_snr_grid("0:5"); }) != "");
}

TEST_CASE("doubles print with nine significant digits") {
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(1.0 / 3.0) == "0.333333333");
  CHECK(io::format_double(123456789012.0) == "1.23456789e+11");
  CHECK(io::format_double(-2.5) == "-2.5");
}

TEST_CASE("feasibility report json carries witnesses") {
  const NetworkConfig c{10, {4, 6, 6}, 13, {3, 6}};
  const auto j = io::to_json(check_necessary(c, {{4, 6, 6}, {3, 6}}));
  CHECK(j["verdict"] == false);
  REQUIRE(j["conditions"].is_array());
  bool any_witness = false;
  for (const auto& cond : j["conditions"]) {
    CHECK(cond.contains("id"));
    CHECK(cond.contains("pass"));
    // base-station bounds have no subset witness
    if (!cond["pass"].get<bool>() && (cond["id"] == "8d" || cond["id"] == "8e")) {
      REQUIRE(cond.contains("witness"));
      CHECK(cond["witness"]["I_alpha"].is_array());
      any_witness = true;
    }
  }
  CHECK(any_witness);

  const auto s = io::to_json(check_sufficient(c, {{2, 4, 4}, {1, 2}}, 3, RngStream(1)));
  bool saw_rank = false;
  for (const auto& cond : s["conditions"])
    if (cond["id"] == "rank") {
      CHECK(cond["witness"]["ranks"].size() == 3);
      saw_rank = true;
    }
  CHECK(saw_rank);
}

TEST_CASE("non-finite residuals serialize as null") {
  ResidualReport r;
  r.intercell_alpha = NAN;
  r.margin_alpha = {0.5, INFINITY};
  const auto j = io::to_json(r);
  CHECK(j["intercell_alpha"].is_null());
  CHECK(j["margin_alpha"][0] == 0.5);
  CHECK(j["margin_alpha"][1].is_null());
  CHECK(io::dump(j).back() == '\n');
}

TEST_CASE("csv headers follow the user counts") {
  SweepResult s;
  s.trials = 2;
  SweepRow row;
  row.snr_db = 10;
  row.mean_rate_alpha = {1, 2, 3};
  row.mean_rate_beta = {4, 5};
  row.trials_ok = 2;
  s.rows.push_back(row);
  const auto sweep = lines(io::sweep_csv(s));
  REQUIRE(sweep.size() == 2);
  CHECK(sweep[0] ==
        "snr_db,mean_sum_rate,mean_rate_alpha_1,mean_rate_alpha_2,mean_rate_alpha_3,mean_rate_beta_1,"
        "mean_rate_beta_2,baseline_single_cell,baseline_p2p,trials_ok,trials_failed");
  CHECK(sweep[1] == "10,0,1,2,3,4,5,0,0,2,0");

  LeakageTrace t;
  t.total = {2.0, 1.0};
  t.per_user = {{1.5, 0.5}, {0.75, 0.25}};
  const auto trace = lines(io::trace_csv(t));
  REQUIRE(trace.size() == 3);
  CHECK(trace[0] == "iteration,total_leakage,leakage_alpha_1,leakage_alpha_2");
  CHECK(trace[2] == "2,1,0.75,0.25");
}
