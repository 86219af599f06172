#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace ellikorn {

// Machine-readable run report. Identical inputs and seeds must reproduce the
// file byte-for-byte, so every float is serialized with 17 significant digits
// and all containers iterate in a fixed order.
struct Check {
  std::string name;           // names a module invariant
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
  std::string provenance;     // paper | derived | trivial | exploratory
};

struct Report {
  std::string tool_version = "ellikorn 1.0.0";
  std::string subcommand;
  std::map<std::string, std::string> inputs;  // echo: op hash, domain, seeds
  std::vector<Check> checks;
  std::map<std::string, double> metrics;

  void add_check(const std::string& name, bool pass, double value,
                 double tolerance, const std::string& provenance);
  void add_metric(const std::string& name, double value);
  bool all_pass() const;
  std::string to_json() const;
  void write(const std::string& path) const;
};

std::string format_g17(double x);
// FNV-1a over the file bytes; echoed in reports for reproducibility.
std::string file_hash_hex(const std::string& path);

}  // namespace ellikorn
