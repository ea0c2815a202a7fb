// SPDX-License-Identifier: MIT
#include "ricciforge/report.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ricciforge {

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary);
    require(os.good(), "atomic_write: cannot open " + tmp);
    os << content;
    require(os.good(), "atomic_write: write failed for " + tmp);
  }
  require(std::rename(tmp.c_str(), path.c_str()) == 0, "atomic_write: rename failed for " + path);
}

nlohmann::ordered_json identity_rows_to_json(const std::vector<IdentityRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["identity"] = r.name;
    j["anchor"] = r.anchor;
    j["n"] = r.dim;
    j["seeds"] = r.seeds;
    j["max_residual"] = r.max_residual;
    j["tolerance"] = r.tolerance;
    j["expected"] = r.expect_failure ? "residual_above_tolerance" : "residual_below_tolerance";
    j["pass"] = r.pass;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::string identity_rows_to_csv(const std::vector<IdentityRow>& rows) {
  std::ostringstream os;
  os.precision(17);
  os << "identity,anchor,n,seeds,max_residual,tolerance,expected,pass\n";
  for (const auto& r : rows) {
    std::string anchor = r.anchor;
    for (auto& c : anchor)
      if (c == ',') c = ';';
    os << r.name << "," << anchor << "," << r.dim << "," << r.seeds << "," << r.max_residual
       << "," << r.tolerance << ","
       << (r.expect_failure ? "residual_above_tolerance" : "residual_below_tolerance") << ","
       << (r.pass ? "true" : "false") << "\n";
  }
  return os.str();
}

nlohmann::ordered_json report_envelope(const std::string& command,
                                       const nlohmann::ordered_json& config_echo) {
  nlohmann::ordered_json j;
  j["schema"] = 1;
  j["command"] = command;
  const auto now = std::chrono::system_clock::now();
  j["generated_at"] =
      std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
  j["config"] = config_echo;
  return j;
}

}  // namespace ricciforge
