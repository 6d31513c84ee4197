#pragma once

#include <map>
#include <optional>
#include <string>

#include "nlreg/kernel.hpp"
#include "nlreg/quadrature.hpp"
#include "nlreg/solver.hpp"

namespace nlreg {

// Flat sectioned text config: [section] headers, key = value lines,
// '#' comments. Section and key names are case-sensitive.
struct ConfigFile {
  std::map<std::string, std::map<std::string, std::string>> sections;

  static ConfigFile parse(const std::string& text);
  static ConfigFile parse_file(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         const std::string& fallback) const;
  double get_double(const std::string& section, const std::string& key, double fallback) const;
  int get_int(const std::string& section, const std::string& key, int fallback) const;
  bool get_bool(const std::string& section, const std::string& key, bool fallback) const;

  // Throwing accessors for required keys.
  std::string require_string(const std::string& section, const std::string& key) const;
  double require_double(const std::string& section, const std::string& key) const;
};

// [kernel] section -> scaling + tail + dimension; throws std::runtime_error
// on malformed content.
KernelSpec kernel_from_config(const ConfigFile& cfg);

// [class] section on top of the kernel (lambda, Lambda, symmetric, multiplier).
ExtremalClass class_from_config(const ConfigFile& cfg);

// Serializes kernel + class back to a config block; parseable by the above.
std::string kernel_to_config(const KernelSpec& k, const ExtremalClass& cls);

QuadratureConfig quadrature_from_config(const ConfigFile& cfg, double tolerance_scale = 1.0);

// Named exterior-data closures: "constant:c", "indicator:a:b", "sine:amp:freq",
// "gauss:center:width", "ramp:slope" (tanh-saturated affine data).
std::function<double(const Point&)> exterior_from_spec(const std::string& spec);

// [grid] + [solve] sections -> a full problem (kernel family per equation).
ProblemSpec problem_from_config(const ConfigFile& cfg);

}  // namespace nlreg
