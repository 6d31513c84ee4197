#include "nlreg/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlreg {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::runtime_error("config: malformed section at line " + std::to_string(lineno));
      section = trim(line.substr(1, line.size() - 2));
      cfg.sections[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw std::runtime_error("config: empty key at line " + std::to_string(lineno));
    cfg.sections[section][key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  const auto it = sections.find(section);
  return it != sections.end() && it->second.count(key) > 0;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   const std::string& fallback) const {
  const auto it = sections.find(section);
  if (it == sections.end()) return fallback;
  const auto kv = it->second.find(key);
  return kv == it->second.end() ? fallback : kv->second;
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              double fallback) const {
  if (!has(section, key)) return fallback;
  const std::string v = get_string(section, key, "");
  std::size_t pos = 0;
  const double x = std::stod(v, &pos);
  if (pos != v.size())
    throw std::runtime_error("config: bad number for " + section + "." + key + ": " + v);
  return x;
}

int ConfigFile::get_int(const std::string& section, const std::string& key, int fallback) const {
  if (!has(section, key)) return fallback;
  return static_cast<int>(std::lround(get_double(section, key, 0.0)));
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          bool fallback) const {
  if (!has(section, key)) return fallback;
  std::string v = get_string(section, key, "");
  std::transform(v.begin(), v.end(), v.begin(), ::tolower);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw std::runtime_error("config: bad boolean for " + section + "." + key + ": " + v);
}

std::string ConfigFile::require_string(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw std::runtime_error("config: missing required key " + section + "." + key);
  return get_string(section, key, "");
}

double ConfigFile::require_double(const std::string& section, const std::string& key) const {
  if (!has(section, key))
    throw std::runtime_error("config: missing required key " + section + "." + key);
  return get_double(section, key, 0.0);
}

KernelSpec kernel_from_config(const ConfigFile& cfg) {
  const std::string family = cfg.require_string("kernel", "family");
  const double r0 = cfg.get_double("kernel", "r0", 1.0);
  const int d = cfg.get_int("kernel", "d", 1);

  ScalingFunction f;
  if (family == "power") {
    f = make_power_scaling(cfg.require_double("kernel", "alpha"), r0);
  } else if (family == "log_perturbed") {
    f = make_log_perturbed_scaling(cfg.require_double("kernel", "alpha"),
                                   cfg.get_double("kernel", "p", 1.0), r0);
  } else if (family == "mixed") {
    f = make_mixed_scaling(cfg.require_double("kernel", "alpha"),
                           cfg.require_double("kernel", "beta"), r0);
  } else if (family == "bernstein_induced") {
    const std::string bf = cfg.require_string("kernel", "bernstein_family");
    BernsteinSpec spec;
    if (bf == "stable")
      spec = make_stable(cfg.require_double("kernel", "alpha"));
    else if (bf == "relativistic")
      spec = make_relativistic(cfg.require_double("kernel", "alpha"),
                               cfg.get_double("kernel", "m", 1.0));
    else if (bf == "mixed")
      spec = make_mixed_bernstein(cfg.require_double("kernel", "alpha"),
                                  cfg.require_double("kernel", "beta"));
    else if (bf == "log_perturbed")
      spec = make_log_perturbed_bernstein(cfg.require_double("kernel", "alpha"),
                                          cfg.get_double("kernel", "p", 0.0));
    else
      throw std::runtime_error("config: unknown bernstein_family " + bf);
    f = make_bernstein_scaling(spec, r0);
  } else {
    throw std::runtime_error("config: unknown kernel family " + family);
  }

  // declared certificate overrides the constructor defaults when present
  f.a1 = cfg.get_double("kernel", "a1", f.a1);
  f.a2 = cfg.get_double("kernel", "a2", f.a2);
  f.delta1 = cfg.get_double("kernel", "delta1", f.delta1);
  f.delta2 = cfg.get_double("kernel", "delta2", f.delta2);
  f.validate();

  TailModel tail;
  const std::string tail_name = cfg.get_string("kernel", "tail", "power_continuation");
  if (tail_name == "truncate") {
    tail.kind = TailKind::truncate;
    tail.r_inf = cfg.require_double("kernel", "r_inf");
  } else if (tail_name == "power_continuation") {
    tail.kind = TailKind::power_continuation;
    if (cfg.has("kernel", "tail_decay")) tail.decay_override = cfg.get_double("kernel", "tail_decay", 0.0);
  } else if (tail_name == "exponential_damping") {
    tail.kind = TailKind::exponential_damping;
    tail.rate = cfg.get_double("kernel", "rate", 1.0);
  } else {
    throw std::runtime_error("config: unknown tail model " + tail_name);
  }

  Multiplier mult;
  const std::string mname = cfg.get_string("class", "multiplier", "none");
  if (mname == "sine") {
    mult = sine_multiplier(cfg.get_double("class", "lambda", 1.0),
                           cfg.get_double("class", "Lambda", 1.0));
  } else if (mname != "none") {
    throw std::runtime_error("config: unknown multiplier " + mname);
  }

  return make_kernel(d, f, tail, std::move(mult));
}

ExtremalClass class_from_config(const ConfigFile& cfg) {
  KernelSpec k = kernel_from_config(cfg);
  k.multiplier = {};  // the class envelope is over the bare J
  return make_class(cfg.get_double("class", "lambda", 1.0),
                    cfg.get_double("class", "Lambda", 1.0),
                    cfg.get_bool("class", "symmetric", true), std::move(k));
}

std::string kernel_to_config(const KernelSpec& k, const ExtremalClass& cls) {
  std::ostringstream os;
  char buf[64];
  const auto num = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  os << "[kernel]\n";
  os << "family = " << k.scaling.family_name() << "\n";
  os << "d = " << k.dim << "\n";
  os << "alpha = " << num(k.scaling.alpha) << "\n";
  if (k.scaling.family == ScalingFamily::mixed) os << "beta = " << num(k.scaling.beta) << "\n";
  if (k.scaling.family == ScalingFamily::log_perturbed) os << "p = " << num(k.scaling.p) << "\n";
  os << "r0 = " << num(k.scaling.r0) << "\n";
  os << "a1 = " << num(k.scaling.a1) << "\n";
  os << "a2 = " << num(k.scaling.a2) << "\n";
  os << "delta1 = " << num(k.scaling.delta1) << "\n";
  os << "delta2 = " << num(k.scaling.delta2) << "\n";
  os << "tail = " << k.tail.name() << "\n";
  if (k.tail.kind == TailKind::truncate) os << "r_inf = " << num(k.tail.r_inf) << "\n";
  if (k.tail.kind == TailKind::exponential_damping) os << "rate = " << num(k.tail.rate) << "\n";
  if (k.tail.kind == TailKind::power_continuation && k.tail.decay_override)
    os << "tail_decay = " << num(*k.tail.decay_override) << "\n";
  os << "\n[class]\n";
  os << "lambda = " << num(cls.lambda) << "\n";
  os << "Lambda = " << num(cls.Lambda) << "\n";
  os << "symmetric = " << (cls.symmetric ? "true" : "false") << "\n";
  os << "multiplier = " << (k.multiplier ? "sine" : "none") << "\n";
  return os.str();
}

QuadratureConfig quadrature_from_config(const ConfigFile& cfg, double tolerance_scale) {
  QuadratureConfig q;
  q.abs_tol = cfg.get_double("quadrature", "abs_tol", q.abs_tol) * tolerance_scale;
  q.rel_tol = cfg.get_double("quadrature", "rel_tol", q.rel_tol) * tolerance_scale;
  q.max_panels = cfg.get_int("quadrature", "max_panels", q.max_panels);
  return q;
}

std::function<double(const Point&)> exterior_from_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::istringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(trim(tok));
  if (parts.empty()) throw std::runtime_error("config: empty exterior spec");
  const auto arg = [&](std::size_t i, double fallback) {
    return i < parts.size() ? std::stod(parts[i]) : fallback;
  };
  const std::string& name = parts[0];
  if (name == "constant") {
    const double c = arg(1, 0.0);
    return [c](const Point&) { return c; };
  }
  if (name == "indicator") {
    const double a = arg(1, 1.0), b = arg(2, 2.0);
    return [a, b](const Point& p) { return (p[0] >= a && p[0] <= b) ? 1.0 : 0.0; };
  }
  if (name == "sine") {
    const double amp = arg(1, 1.0), freq = arg(2, 1.0);
    return [amp, freq](const Point& p) { return amp * std::sin(freq * (p[0] + p[1])); };
  }
  if (name == "gauss") {
    const double c = arg(1, 0.0), w = arg(2, 1.0), amp = arg(3, 1.0);
    return [c, w, amp](const Point& p) {
      const double dx = p[0] - c;
      return amp * std::exp(-0.5 * (dx * dx + p[1] * p[1]) / (w * w));
    };
  }
  if (name == "ramp") {
    const double slope = arg(1, 1.0);
    return [slope](const Point& p) { return std::tanh(slope * (p[0] + p[1])); };
  }
  throw std::runtime_error("config: unknown exterior spec " + spec);
}

ProblemSpec problem_from_config(const ConfigFile& cfg) {
  ProblemSpec p;
  const std::string domain = cfg.get_string("grid", "domain", "box");
  p.h = cfg.require_double("grid", "h");
  if (domain == "box") {
    p.domain = DomainKind::box;
    p.box.lo[0] = cfg.require_double("grid", "xmin");
    p.box.hi[0] = cfg.require_double("grid", "xmax");
    const int d = cfg.get_int("kernel", "d", 1);
    p.box.dim = d;
    if (d > 1) {
      p.box.lo[1] = cfg.require_double("grid", "ymin");
      p.box.hi[1] = cfg.require_double("grid", "ymax");
    }
  } else if (domain == "ball") {
    p.domain = DomainKind::ball;
    p.center[0] = cfg.get_double("grid", "cx", 0.0);
    p.center[1] = cfg.get_double("grid", "cy", 0.0);
    p.radius = cfg.require_double("grid", "radius");
    const int d = cfg.get_int("kernel", "d", 1);
    p.box.dim = d;
    for (int a = 0; a < d; ++a) {
      p.box.lo[a] = p.center[a] - p.radius;
      p.box.hi[a] = p.center[a] + p.radius;
    }
  } else {
    throw std::runtime_error("config: unknown domain " + domain);
  }

  p.exterior_data = exterior_from_spec(cfg.get_string("solve", "exterior", "constant:0"));
  p.tolerance = cfg.get_double("solve", "tolerance", 1e-8);
  p.max_iterations = cfg.get_int("solve", "max_iterations", 60);

  const std::string eq = cfg.get_string("solve", "equation", "linear");
  const KernelSpec base = kernel_from_config(cfg);
  if (eq == "linear") {
    p.equation.kind = EquationKind::linear;
    p.equation.kernels = {base};
  } else if (eq == "bellman") {
    // two-profile family: the config kernel plus a second power profile
    p.equation.kind = EquationKind::bellman;
    p.equation.sign = cfg.get_int("solve", "sign", +1);
    p.equation.kernels = {base};
    if (cfg.has("solve", "alpha_b")) {
      const double ab = cfg.get_double("solve", "alpha_b", 1.0);
      p.equation.kernels.push_back(
          make_kernel(base.dim, make_power_scaling(ab, base.r0()), base.tail));
    }
  } else if (eq == "midpoint") {
    // symmetric Isaacs midpoint over the class envelope: both players pick
    // from {lambda J, Lambda J}, whose half-sum is the averaged kernel
    p.equation.kind = EquationKind::isaacs;
    const double lam = cfg.get_double("class", "lambda", 1.0);
    const double Lam = cfg.get_double("class", "Lambda", 1.0);
    p.equation.kernels = {scale_kernel(base, lam), scale_kernel(base, Lam)};
    p.equation.kernels_b = p.equation.kernels;
  } else {
    throw std::runtime_error("config: unknown equation " + eq);
  }
  return p;
}

}  // namespace nlreg
