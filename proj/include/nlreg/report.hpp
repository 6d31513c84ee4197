#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nlreg/check.hpp"
#include "nlreg/grid_function.hpp"
#include "nlreg/probe.hpp"

namespace nlreg {

// Doubles print with 17 significant digits so every report value round-trips
// bit-exactly; output is byte-stable for fixed inputs.
std::string format_g17(double v);

std::string json_escape(const std::string& s);

// One JSON object per line with the fixed schema
// {"check": ..., "inputs": ..., "lhs": ..., "rhs": ..., "margin": ..., "pass": ...}.
std::string to_json_line(const CheckRecord& rec);
void write_json_records(const std::string& path, std::span<const CheckRecord> records);

struct RunManifest {
  std::string command;
  std::uint64_t config_hash = 0;
  double wall_seconds = 0.0;
  int checks_total = 0;
  int checks_passed = 0;
  std::vector<std::string> outputs;
  std::vector<std::pair<std::string, std::string>> extra;  // free-form key/value
};

void write_manifest(const std::string& path, const RunManifest& m);

// CSV: header "k,radius,osc" then one row per profile level.
void write_profile_csv(const std::string& path, const OscillationProfile& profile);

// CSV: grid metadata in '#' header lines, then "x[,y],value" rows.
void write_solution_csv(const std::string& path, const GridFunction& u);
GridFunction read_solution_csv(const std::string& path);

std::uint64_t fnv1a_hash(const std::string& bytes);

}  // namespace nlreg
