#include "ellikorn/report.hpp"

#include "ellikorn/errors.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>

namespace ellikorn {

using json = nlohmann::ordered_json;

std::string format_g17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void Report::add_check(const std::string& name, bool pass, double value,
                       double tolerance, const std::string& provenance) {
  checks.push_back({name, pass, value, tolerance, provenance});
}

void Report::add_metric(const std::string& name, double value) {
  metrics[name] = value;
}

bool Report::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

std::string Report::to_json() const {
  json j;
  j["tool_version"] = tool_version;
  j["subcommand"] = subcommand;
  j["inputs"] = json::object();
  for (const auto& [k, v] : inputs) j["inputs"][k] = v;
  j["checks"] = json::array();
  for (const auto& c : checks) {
    json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["value"] = format_g17(c.value);
    jc["tolerance"] = format_g17(c.tolerance);
    jc["provenance"] = c.provenance;
    j["checks"].push_back(jc);
  }
  j["metrics"] = json::object();
  for (const auto& [k, v] : metrics) j["metrics"][k] = format_g17(v);
  return j.dump(2) + "\n";
}

void Report::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FileError("cannot write report to " + path);
  out << to_json();
}

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileError("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ellikorn
