#include "latembed/config.hpp"

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

#include "latembed/error.hpp"

namespace latembed {

ManifoldSpec ManifoldConfig::build() const {
  switch (kind) {
    case ManifoldKind::Plane: return ManifoldSpec::plane(extent);
    case ManifoldKind::Sphere: return ManifoldSpec::sphere(radius);
    case ManifoldKind::Torus: return ManifoldSpec::torus(major_radius, radius);
    case ManifoldKind::Parametric: return ManifoldSpec::parametric(chart, lower, upper, periodic);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown manifold kind");
}

namespace {

bool same(const Vec& a, const Vec& b) { return a.size() == b.size() && (a.array() == b.array()).all(); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

[[noreturn]] void type_mismatch(const std::string& key, const std::string& expected, const std::string& value) {
  throw Error(ErrorCode::TypeMismatch, key + ": expected " + expected + ", got \"" + value + "\"");
}

double to_number(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  errno = 0;
  const double out = std::strtod(v.c_str(), &end);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) type_mismatch(key, "a number", value);
  return out;
}

long long to_integer(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  errno = 0;
  const long long out = std::strtoll(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) type_mismatch(key, "an integer", value);
  return out;
}

std::uint64_t to_unsigned(const std::string& key, const std::string& value) {
  const std::string v = trim(value);
  char* end = nullptr;
  errno = 0;
  if (!v.empty() && v[0] == '-') type_mismatch(key, "a non-negative integer", value);
  const unsigned long long out = std::strtoull(v.c_str(), &end, 10);
  if (v.empty() || end != v.c_str() + v.size() || errno == ERANGE) type_mismatch(key, "a non-negative integer", value);
  return out;
}

Vec to_numbers(const std::string& key, const std::string& value) {
  const auto parts = split(value, ',');
  Vec out(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = to_number(key, parts[i]);
  }
  if (parts.empty()) type_mismatch(key, "a comma-separated list of numbers", value);
  return out;
}

std::vector<bool> to_flags(const std::string& key, const std::string& value) {
  std::vector<bool> out;
  for (const auto& p : split(value, ',')) {
    if (p == "1" || p == "true") {
      out.push_back(true);
    } else if (p == "0" || p == "false") {
      out.push_back(false);
    } else {
      type_mismatch(key, "a comma-separated list of 0/1 flags", value);
    }
  }
  return out;
}

std::string join_numbers(const Vec& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) out += (i ? ", " : "") + format_number(v[i]);
  return out;
}

ManifoldKind to_kind(const std::string& value) {
  if (value == "plane") return ManifoldKind::Plane;
  if (value == "sphere") return ManifoldKind::Sphere;
  if (value == "torus") return ManifoldKind::Torus;
  if (value == "parametric") return ManifoldKind::Parametric;
  type_mismatch("manifold.kind", "one of plane, sphere, torus, parametric", value);
}

CurvatureMethod to_method(const std::string& value) {
  if (value == "auto") return CurvatureMethod::Auto;
  if (value == "numeric") return CurvatureMethod::FiniteDifference;
  if (value == "analytic") return CurvatureMethod::Analytic;
  type_mismatch("manifold.curvature", "one of auto, numeric, analytic", value);
}

std::set<std::string> manifold_keys(ManifoldKind kind) {
  std::set<std::string> keys{"manifold.kind", "manifold.curvature", "manifold.fd_fraction"};
  switch (kind) {
    case ManifoldKind::Plane: keys.insert("manifold.extent"); break;
    case ManifoldKind::Sphere: keys.insert("manifold.r"); break;
    case ManifoldKind::Torus: keys.insert({"manifold.R", "manifold.r"}); break;
    case ManifoldKind::Parametric:
      keys.insert({"manifold.chart", "manifold.lower", "manifold.upper", "manifold.periodic"});
      break;
  }
  return keys;
}

const std::set<std::string>& other_keys() {
  static const std::set<std::string> keys{
      "lattice.bounds",     "lattice.spacing",        "energy.alpha",     "energy.beta",
      "energy.gamma",       "energy.lambda",          "energy.fd_step",   "field.tube_radius",
      "field.fd_step",      "field.mu",               "quadrature.resolution", "quadrature.seed",
      "quadrature.eps_parallel", "solver.step",       "solver.max_iters", "solver.grad_tol",
      "solver.seed",        "solver.backtrack",       "solver.armijo_c",  "output.directory",
      "output.formats",     "output.grid"};
  return keys;
}

struct Entry {
  std::string value;
  int line = 0;
};

std::map<std::string, Entry> tokenize(const std::string& text) {
  std::map<std::string, Entry> out;
  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) {
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected `key = value`");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": empty key");
    if (key.find('.') == std::string::npos) {
      if (section.empty()) {
        throw Error(ErrorCode::UnknownKey, key + " (line " + std::to_string(line_no) + ") is outside any section");
      }
      key = section + "." + key;
    }
    if (out.count(key)) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": duplicate key " + key);
    }
    out[key] = Entry{value, line_no};
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  for (int precision = 15; precision <= 17; ++precision) {
    std::snprintf(buf, sizeof buf, "%.*g", precision, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  const auto& ma = a.manifold;
  const auto& mb = b.manifold;
  const auto& ea = a.energy;
  const auto& eb = b.energy;
  const auto& sa = a.solver;
  const auto& sb = b.solver;
  return ma.kind == mb.kind && ma.radius == mb.radius && ma.major_radius == mb.major_radius &&
         ma.extent == mb.extent && ma.chart == mb.chart && same(ma.lower, mb.lower) && same(ma.upper, mb.upper) &&
         ma.periodic == mb.periodic && same(a.lattice.lower, b.lattice.lower) &&
         same(a.lattice.upper, b.lattice.upper) && a.lattice.spacing == b.lattice.spacing &&
         ea.alpha == eb.alpha && ea.beta == eb.beta && ea.gamma == eb.gamma && ea.lambda == eb.lambda &&
         ea.fd_step == eb.fd_step && ea.curvature_method == eb.curvature_method &&
         ea.geometry_step_fraction == eb.geometry_step_fraction &&
         ea.quadrature.resolution == eb.quadrature.resolution && ea.quadrature.seed == eb.quadrature.seed &&
         ea.quadrature.eps_parallel == eb.quadrature.eps_parallel &&
         ea.field.tube_radius == eb.field.tube_radius && ea.field.fd_step == eb.field.fd_step &&
         ea.field.mu == eb.field.mu && sa.initial_step == sb.initial_step &&
         sa.backtrack_factor == sb.backtrack_factor && sa.armijo_c == sb.armijo_c && sa.max_iters == sb.max_iters &&
         sa.grad_tol == sb.grad_tol && sa.seed == sb.seed && a.output.directory == b.output.directory &&
         a.output.formats == b.output.formats && a.output.grid == b.output.grid;
}

RunConfig parse_config(const std::string& text) {
  const auto entries = tokenize(text);
  const auto kind_it = entries.find("manifold.kind");
  if (kind_it == entries.end()) throw Error(ErrorCode::MissingRequired, "manifold.kind is required");

  RunConfig cfg;
  cfg.manifold.kind = to_kind(kind_it->second.value);
  if (cfg.manifold.kind == ManifoldKind::Torus) cfg.manifold.radius = 0.5;

  const auto allowed_manifold = manifold_keys(cfg.manifold.kind);
  for (const auto& [key, entry] : entries) {
    if (!allowed_manifold.count(key) && !other_keys().count(key)) {
      const auto dot = key.find('.');
      throw Error(ErrorCode::UnknownKey, "key '" + key.substr(dot + 1) + "' in section [" + key.substr(0, dot) +
                                             "] (line " + std::to_string(entry.line) + ")");
    }
  }

  auto get = [&](const char* key) -> const std::string* {
    const auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second.value;
  };

  // manifold
  ManifoldConfig& m = cfg.manifold;
  if (auto v = get("manifold.r")) m.radius = to_number("manifold.r", *v);
  if (auto v = get("manifold.R")) m.major_radius = to_number("manifold.R", *v);
  if (auto v = get("manifold.extent")) m.extent = to_number("manifold.extent", *v);
  if (auto v = get("manifold.curvature")) cfg.energy.curvature_method = to_method(*v);
  if (auto v = get("manifold.fd_fraction")) {
    cfg.energy.geometry_step_fraction = to_number("manifold.fd_fraction", *v);
  }
  if (m.kind == ManifoldKind::Parametric) {
    const std::string* chart = get("manifold.chart");
    const std::string* lower = get("manifold.lower");
    const std::string* upper = get("manifold.upper");
    if (!chart) throw Error(ErrorCode::MissingRequired, "manifold.chart is required for parametric manifolds");
    if (!lower || !upper) {
      throw Error(ErrorCode::MissingRequired, "manifold.lower and manifold.upper are required for parametric manifolds");
    }
    m.chart = split(*chart, ',');
    m.lower = to_numbers("manifold.lower", *lower);
    m.upper = to_numbers("manifold.upper", *upper);
    if (m.upper.size() != m.lower.size()) {
      type_mismatch("manifold.upper", std::to_string(m.lower.size()) + " numbers", *upper);
    }
    if (auto v = get("manifold.periodic")) {
      m.periodic = to_flags("manifold.periodic", *v);
      if (m.periodic.size() != static_cast<std::size_t>(m.lower.size())) {
        type_mismatch("manifold.periodic", std::to_string(m.lower.size()) + " flags", *v);
      }
    } else {
      m.periodic.assign(static_cast<std::size_t>(m.lower.size()), false);
    }
  }
  int ambient = 3;
  try {
    ambient = m.build().ambient_dim();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw Error(ErrorCode::ParseError, std::string("manifold.chart: ") + e.what());
    throw Error(ErrorCode::TypeMismatch, std::string("manifold: ") + e.what());
  }

  // lattice
  cfg.lattice.lower = Vec::Constant(ambient, -1.0);
  cfg.lattice.upper = Vec::Constant(ambient, 1.0);
  cfg.lattice.spacing = 0.5;
  if (auto v = get("lattice.bounds")) {
    const auto axes = split(*v, ',');
    if (static_cast<int>(axes.size()) != ambient) {
      type_mismatch("lattice.bounds", std::to_string(ambient) + " axes of the form lo:hi", *v);
    }
    for (int a = 0; a < ambient; ++a) {
      const auto ends = split(axes[static_cast<std::size_t>(a)], ':');
      if (ends.size() != 2) type_mismatch("lattice.bounds", "axes of the form lo:hi", *v);
      cfg.lattice.lower[a] = to_number("lattice.bounds", ends[0]);
      cfg.lattice.upper[a] = to_number("lattice.bounds", ends[1]);
      if (cfg.lattice.lower[a] > cfg.lattice.upper[a]) type_mismatch("lattice.bounds", "lo <= hi on every axis", *v);
    }
  }
  if (auto v = get("lattice.spacing")) cfg.lattice.spacing = to_number("lattice.spacing", *v);
  if (!(cfg.lattice.spacing > 0.0)) type_mismatch("lattice.spacing", "a number > 0", *get("lattice.spacing"));

  // energy, field, quadrature
  EnergyParams& e = cfg.energy;
  if (auto v = get("energy.alpha")) e.alpha = to_number("energy.alpha", *v);
  if (auto v = get("energy.beta")) e.beta = to_number("energy.beta", *v);
  if (auto v = get("energy.gamma")) e.gamma = to_number("energy.gamma", *v);
  if (auto v = get("energy.lambda")) e.lambda = to_number("energy.lambda", *v);
  if (auto v = get("energy.fd_step")) e.fd_step = to_number("energy.fd_step", *v);
  if (auto v = get("field.tube_radius")) e.field.tube_radius = to_number("field.tube_radius", *v);
  if (auto v = get("field.fd_step")) e.field.fd_step = to_number("field.fd_step", *v);
  if (auto v = get("field.mu")) e.field.mu = to_number("field.mu", *v);
  if (auto v = get("quadrature.resolution")) {
    const long long r = to_integer("quadrature.resolution", *v);
    if (r < 4 || r > 1000000) type_mismatch("quadrature.resolution", "an integer in [4, 1000000]", *v);
    e.quadrature.resolution = static_cast<int>(r);
  }
  if (auto v = get("quadrature.seed")) e.quadrature.seed = to_unsigned("quadrature.seed", *v);
  if (auto v = get("quadrature.eps_parallel")) e.quadrature.eps_parallel = to_number("quadrature.eps_parallel", *v);
  try {
    e.validate();
  } catch (const Error& err) {
    throw Error(ErrorCode::TypeMismatch, err.what());
  }

  // solver
  SolverConfig& s = cfg.solver;
  if (auto v = get("solver.step")) s.initial_step = to_number("solver.step", *v);
  if (auto v = get("solver.backtrack")) s.backtrack_factor = to_number("solver.backtrack", *v);
  if (auto v = get("solver.armijo_c")) s.armijo_c = to_number("solver.armijo_c", *v);
  if (auto v = get("solver.max_iters")) {
    const long long it = to_integer("solver.max_iters", *v);
    if (it < 1 || it > 100000000) type_mismatch("solver.max_iters", "an integer >= 1", *v);
    s.max_iters = static_cast<int>(it);
  }
  if (auto v = get("solver.grad_tol")) s.grad_tol = to_number("solver.grad_tol", *v);
  if (auto v = get("solver.seed")) s.seed = to_unsigned("solver.seed", *v);
  try {
    s.validate();
  } catch (const Error& err) {
    throw Error(ErrorCode::TypeMismatch, err.what());
  }

  // output
  if (auto v = get("output.directory")) {
    if (v->empty()) type_mismatch("output.directory", "a non-empty path", *v);
    cfg.output.directory = *v;
  }
  if (auto v = get("output.formats")) {
    cfg.output.formats.clear();
    for (const auto& f : split(*v, ',')) {
      if (f != "csv" && f != "jsonl") type_mismatch("output.formats", "a list drawn from csv, jsonl", *v);
      cfg.output.formats.push_back(f);
    }
  }
  if (auto v = get("output.grid")) {
    const long long g = to_integer("output.grid", *v);
    if (g < 1 || g > 10000) type_mismatch("output.grid", "an integer in [1, 10000]", *v);
    cfg.output.grid = static_cast<int>(g);
  }
  return cfg;
}

std::string serialize_config(const RunConfig& c) {
  std::ostringstream out;
  const auto& m = c.manifold;
  out << "[manifold]\n";
  out << "kind = " << to_string(m.kind) << "\n";
  switch (m.kind) {
    case ManifoldKind::Plane: out << "extent = " << format_number(m.extent) << "\n"; break;
    case ManifoldKind::Sphere: out << "r = " << format_number(m.radius) << "\n"; break;
    case ManifoldKind::Torus:
      out << "R = " << format_number(m.major_radius) << "\n";
      out << "r = " << format_number(m.radius) << "\n";
      break;
    case ManifoldKind::Parametric: {
      out << "chart = ";
      for (std::size_t i = 0; i < m.chart.size(); ++i) out << (i ? ", " : "") << m.chart[i];
      out << "\nlower = " << join_numbers(m.lower) << "\n";
      out << "upper = " << join_numbers(m.upper) << "\n";
      out << "periodic = ";
      for (std::size_t i = 0; i < m.periodic.size(); ++i) out << (i ? ", " : "") << (m.periodic[i] ? 1 : 0);
      out << "\n";
      break;
    }
  }
  out << "curvature = " << to_string(c.energy.curvature_method) << "\n";
  out << "fd_fraction = " << format_number(c.energy.geometry_step_fraction) << "\n";

  out << "\n[lattice]\nbounds = ";
  for (Eigen::Index a = 0; a < c.lattice.lower.size(); ++a) {
    out << (a ? ", " : "") << format_number(c.lattice.lower[a]) << ":" << format_number(c.lattice.upper[a]);
  }
  out << "\nspacing = " << format_number(c.lattice.spacing) << "\n";

  const auto& e = c.energy;
  out << "\n[energy]\n";
  out << "alpha = " << format_number(e.alpha) << "\n";
  out << "beta = " << format_number(e.beta) << "\n";
  out << "gamma = " << format_number(e.gamma) << "\n";
  out << "lambda = " << format_number(e.lambda) << "\n";
  out << "fd_step = " << format_number(e.fd_step) << "\n";

  out << "\n[field]\n";
  out << "tube_radius = " << format_number(e.field.tube_radius) << "\n";
  out << "fd_step = " << format_number(e.field.fd_step) << "\n";
  out << "mu = " << format_number(e.field.mu) << "\n";

  out << "\n[quadrature]\n";
  out << "resolution = " << e.quadrature.resolution << "\n";
  out << "seed = " << e.quadrature.seed << "\n";
  out << "eps_parallel = " << format_number(e.quadrature.eps_parallel) << "\n";

  const auto& s = c.solver;
  out << "\n[solver]\n";
  out << "step = " << format_number(s.initial_step) << "\n";
  out << "backtrack = " << format_number(s.backtrack_factor) << "\n";
  out << "armijo_c = " << format_number(s.armijo_c) << "\n";
  out << "max_iters = " << s.max_iters << "\n";
  out << "grad_tol = " << format_number(s.grad_tol) << "\n";
  out << "seed = " << s.seed << "\n";

  out << "\n[output]\n";
  out << "directory = " << c.output.directory << "\n";
  out << "formats = ";
  for (std::size_t i = 0; i < c.output.formats.size(); ++i) out << (i ? ", " : "") << c.output.formats[i];
  out << "\ngrid = " << c.output.grid << "\n";
  return out.str();
}

std::string config_digest(const RunConfig& config) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char ch : serialize_config(config)) {
    hash ^= ch;
    hash *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, hash);
  return buf;
}

}  // namespace latembed
