#include "nlreg/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlreg {

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 8);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string to_json_line(const CheckRecord& rec) {
  std::ostringstream os;
  os << "{\"check\": \"" << json_escape(rec.check) << "\", \"inputs\": \""
     << json_escape(rec.inputs) << "\", \"lhs\": " << format_g17(rec.lhs)
     << ", \"rhs\": " << format_g17(rec.rhs) << ", \"margin\": " << format_g17(rec.margin)
     << ", \"pass\": " << (rec.pass ? "true" : "false") << "}";
  return os.str();
}

void write_json_records(const std::string& path, std::span<const CheckRecord> records) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path);
  for (const auto& rec : records) out << to_json_line(rec) << "\n";
}

void write_manifest(const std::string& path, const RunManifest& m) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path);
  out << "{\n";
  out << "  \"command\": \"" << json_escape(m.command) << "\",\n";
  out << "  \"config_hash\": \"" << std::hex << m.config_hash << std::dec << "\",\n";
  out << "  \"wall_seconds\": " << format_g17(m.wall_seconds) << ",\n";
  out << "  \"checks_total\": " << m.checks_total << ",\n";
  out << "  \"checks_passed\": " << m.checks_passed << ",\n";
  out << "  \"outputs\": [";
  for (std::size_t i = 0; i < m.outputs.size(); ++i)
    out << (i ? ", " : "") << "\"" << json_escape(m.outputs[i]) << "\"";
  out << "]";
  for (const auto& [k, v] : m.extra)
    out << ",\n  \"" << json_escape(k) << "\": \"" << json_escape(v) << "\"";
  out << "\n}\n";
}

void write_profile_csv(const std::string& path, const OscillationProfile& profile) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path);
  out << "k,radius,osc\n";
  for (std::size_t k = 0; k < profile.osc.size(); ++k)
    out << k << "," << format_g17(profile.radii[k]) << "," << format_g17(profile.osc[k]) << "\n";
}

void write_solution_csv(const std::string& path, const GridFunction& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("report: cannot write " + path);
  out << "# dim " << u.dim << "\n";
  out << "# box " << format_g17(u.box.lo[0]) << " " << format_g17(u.box.hi[0]) << " "
      << format_g17(u.box.lo[1]) << " " << format_g17(u.box.hi[1]) << "\n";
  out << "# h " << format_g17(u.h) << "\n";
  out << "# bound " << format_g17(u.bound) << "\n";
  out << (u.dim == 1 ? "x,value\n" : "x,y,value\n");
  for (int iy = 0; iy < u.n[1]; ++iy)
    for (int ix = 0; ix < u.n[0]; ++ix) {
      const Point p = u.node(ix, iy);
      out << format_g17(p[0]);
      if (u.dim > 1) out << "," << format_g17(p[1]);
      out << "," << format_g17(u.values[u.index(ix, iy)]) << "\n";
    }
}

GridFunction read_solution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("report: cannot read " + path);
  GridFunction u;
  std::string line;
  std::vector<double> vals;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream ss(line.substr(1));
      std::string key;
      ss >> key;
      if (key == "dim") ss >> u.dim;
      else if (key == "box") ss >> u.box.lo[0] >> u.box.hi[0] >> u.box.lo[1] >> u.box.hi[1];
      else if (key == "h") ss >> u.h;
      else if (key == "bound") ss >> u.bound;
      continue;
    }
    if (line[0] == 'x') continue;  // header
    std::istringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    vals.push_back(row.back());
  }
  u.box.dim = u.dim;
  u.n[0] = static_cast<int>(std::lround(u.box.width(0) / u.h)) + 1;
  u.n[1] = u.dim > 1 ? static_cast<int>(std::lround(u.box.width(1) / u.h)) + 1 : 1;
  if (static_cast<int>(vals.size()) != u.n[0] * u.n[1])
    throw std::runtime_error("report: solution CSV node count mismatch");
  u.values = std::move(vals);
  u.exterior = [](const Point&) { return 0.0; };
  return u;
}

std::uint64_t fnv1a_hash(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace nlreg
