#pragma once

#include <string>
#include <vector>

namespace nlreg {

// One verified inequality: lhs <= rhs with margin = (rhs - lhs) / scale.
// Serialized as a JSON line {check, inputs, lhs, rhs, margin, pass}.
struct CheckRecord {
  std::string check;
  std::string inputs;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  bool pass = false;
};

struct CheckReport {
  std::vector<CheckRecord> records;
  bool pass = true;
  double worst_margin = 0.0;

  void add(CheckRecord rec) {
    if (records.empty() || rec.margin < worst_margin) worst_margin = rec.margin;
    pass = pass && rec.pass;
    records.push_back(std::move(rec));
  }
  void merge(const CheckReport& other) {
    for (const auto& r : other.records) add(r);
  }
};

}  // namespace nlreg
