#include "bssn/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "bssn/pde_solvers.hpp"

namespace bssn {

namespace {

std::string join_lines(const std::vector<std::string>& lines) {
  std::string out;
  for (const auto& l : lines) {
    if (!out.empty()) out += '\n';
    out += l;
  }
  return out;
}

struct Entry {
  std::string value;
  std::size_t line = 0;
  /// 1-based column of the first character of `value`.
  std::size_t column = 0;
};

using Section = std::map<std::string, Entry>;

const std::map<std::string, std::vector<std::string>>& known_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"problem",
       {"kind", "tracking", "nu", "alpha", "beta", "a0", "a", "da_dy", "d2a_dy2", "L", "dL_dy", "d2L_dy2", "g",
        "diffusion"}},
      {"mesh", {"levels"}},
      {"solver", {"outer_tol", "inner_tol", "max_outer", "max_cg", "max_newton", "u0"}},
      {"output", {"directory", "formats", "tol_sigma"}},
      {"verify",
       {"enabled", "level", "directions", "seed", "gradient_steps", "hessian_steps", "min_order", "symmetry_tol"}},
  };
  return keys;
}

std::string_view trim(std::string_view s, std::size_t* lead = nullptr) {
  std::size_t b = 0;
  while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  std::size_t e = s.size();
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (lead) *lead = b;
  return s.substr(b, e - b);
}

/// One list element with its column offset inside the value string.
struct Token {
  std::string_view text;
  std::size_t offset;
};

/// Splits "a, b, c" (optionally wrapped in brackets) on commas and whitespace.
std::vector<Token> split_list(std::string_view value) {
  std::size_t begin = 0;
  std::size_t end = value.size();
  if (end > begin && value[begin] == '[') ++begin;
  if (end > begin && value[end - 1] == ']') --end;
  std::vector<Token> out;
  std::size_t i = begin;
  while (i < end) {
    while (i < end && (value[i] == ',' || std::isspace(static_cast<unsigned char>(value[i])))) ++i;
    const std::size_t start = i;
    while (i < end && value[i] != ',' && !std::isspace(static_cast<unsigned char>(value[i]))) ++i;
    if (i > start) out.push_back({value.substr(start, i - start), start});
  }
  return out;
}

class Reader {
 public:
  Reader(std::string name, std::vector<std::string>& diags) : name_(std::move(name)), diags_(diags) {}

  void error(const Entry& e, std::size_t offset, const std::string& msg) {
    diags_.push_back(name_ + ":" + std::to_string(e.line) + ":" + std::to_string(e.column + offset) + ": " + msg);
  }
  void error(const std::string& msg) { diags_.push_back(name_ + ": " + msg); }

  void parse(const std::string& text) {
    std::istringstream in(text);
    std::string raw;
    std::size_t line_no = 0;
    std::string current;
    bool skipping = false;  // inside an unknown section
    while (std::getline(in, raw)) {
      ++line_no;
      if (!raw.empty() && raw.back() == '\r') raw.pop_back();
      std::string_view line = raw;
      if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
      std::size_t lead = 0;
      const std::string_view body = trim(line, &lead);
      if (body.empty()) continue;
      const Entry here{std::string(body), line_no, lead + 1};

      if (body.front() == '[') {
        if (body.back() != ']') {
          error(here, body.size() - 1, "expected ']' to close the section header");
          current.clear();
          skipping = true;
          continue;
        }
        current = std::string(trim(body.substr(1, body.size() - 2)));
        skipping = !known_keys().count(current);
        if (skipping) {
          error(here, 1, "unknown section [" + current + "]");
        } else if (seen_sections_.count(current)) {
          error(here, 1, "section [" + current + "] appears twice");
        }
        seen_sections_.insert(current);
        continue;
      }

      const auto eq = body.find('=');
      if (eq == std::string_view::npos) {
        error(here, 0, "expected 'key = value'");
        continue;
      }
      const std::string key(trim(body.substr(0, eq)));
      std::size_t vlead = 0;
      const std::string_view value = trim(body.substr(eq + 1), &vlead);
      const Entry entry{std::string(value), line_no, lead + 1 + eq + 1 + vlead};

      if (key.empty()) {
        error(here, 0, "missing key before '='");
        continue;
      }
      if (skipping) continue;
      if (current.empty()) {
        error(here, 0, "key '" + key + "' appears before any section header");
        continue;
      }
      const auto& allowed = known_keys().at(current);
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        error(here, 0, "unknown key '" + key + "' in section [" + current + "]");
        continue;
      }
      auto& sec = sections_[current];
      if (const auto it = sec.find(key); it != sec.end()) {
        error(here, 0, "duplicate key '" + key + "' (first set on line " + std::to_string(it->second.line) + ")");
        continue;
      }
      sec.emplace(key, entry);
    }
  }

  const Entry* find(const std::string& section, const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return nullptr;
    const auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second;
  }

  std::optional<double> number(const Entry& e, std::string_view text, std::size_t offset, bool allow_inf) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (!text.empty() && text.front() == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || std::isnan(v)) {
      error(e, offset, "expected a number, got '" + std::string(text) + "'");
      return std::nullopt;
    }
    if (!allow_inf && !std::isfinite(v)) {
      error(e, offset, "value must be finite");
      return std::nullopt;
    }
    return v;
  }

  void real(const std::string& section, const std::string& key, double& out, bool allow_inf = false) {
    if (const Entry* e = find(section, key)) {
      if (auto v = number(*e, e->value, 0, allow_inf)) out = *v;
    }
  }

  void positive(const std::string& section, const std::string& key, double& out) {
    if (const Entry* e = find(section, key)) {
      if (auto v = number(*e, e->value, 0, false)) {
        if (*v > 0.0) {
          out = *v;
        } else {
          error(*e, 0, key + " must be positive");
        }
      }
    }
  }

  std::optional<long long> integer(const Entry& e, std::string_view text, std::size_t offset) {
    long long v = 0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
      error(e, offset, "expected an integer, got '" + std::string(text) + "'");
      return std::nullopt;
    }
    return v;
  }

  void integer_at_least(const std::string& section, const std::string& key, int& out, long long min) {
    if (const Entry* e = find(section, key)) {
      if (auto v = integer(*e, e->value, 0)) {
        if (*v < min || *v > std::numeric_limits<int>::max()) {
          error(*e, 0, key + " must be an integer >= " + std::to_string(min));
        } else {
          out = static_cast<int>(*v);
        }
      }
    }
  }

  void boolean(const std::string& section, const std::string& key, bool& out) {
    if (const Entry* e = find(section, key)) {
      const std::string& v = e->value;
      if (v == "on" || v == "true" || v == "yes" || v == "1") {
        out = true;
      } else if (v == "off" || v == "false" || v == "no" || v == "0") {
        out = false;
      } else {
        error(*e, 0, "expected on/off, got '" + v + "'");
      }
    }
  }

  void step_list(const std::string& section, const std::string& key, std::vector<double>& out) {
    const Entry* e = find(section, key);
    if (!e) return;
    std::vector<double> steps;
    bool ok = true;
    for (const Token& t : split_list(e->value)) {
      auto v = number(*e, t.text, t.offset, false);
      if (!v) {
        ok = false;
      } else if (!(*v > 0.0)) {
        error(*e, t.offset, "step sizes must be positive");
        ok = false;
      } else {
        steps.push_back(*v);
      }
    }
    if (ok && steps.size() < 2) {
      error(*e, 0, key + " needs at least two step sizes");
      ok = false;
    }
    if (ok) out = std::move(steps);
  }

  std::optional<Expression> expression(const Entry& e, Expression::Variables vars) {
    try {
      return Expression::parse(e.value, vars);
    } catch (const ExpressionError& err) {
      error(e, err.column() - 1, err.what());
      return std::nullopt;
    }
  }

 private:
  std::string name_;
  std::vector<std::string>& diags_;
  std::map<std::string, Section> sections_;
  std::set<std::string> seen_sections_;
};

PointwiseFn state_function(Expression e) {
  return [e = std::move(e)](const Point& x, double y) { return e(x.x1, x.x2, y); };
}

}  // namespace

ConfigDiagnostics::ConfigDiagnostics(std::vector<std::string> messages)
    : ConfigError(join_lines(messages)), messages_(std::move(messages)) {}

RunConfig parse_config_text(const std::string& text, const std::string& name,
                            const std::filesystem::path& base_dir) {
  std::vector<std::string> diags;
  Reader rd(name, diags);
  rd.parse(text);

  RunConfig cfg;
  cfg.source = name;

  // [problem]
  if (const Entry* e = rd.find("problem", "kind")) {
    if (e->value == "benchmark") {
      cfg.kind = ProblemKind::Benchmark;
    } else if (e->value == "custom") {
      cfg.kind = ProblemKind::Custom;
    } else {
      rd.error(*e, 0, "kind must be 'benchmark' or 'custom', got '" + e->value + "'");
    }
  }
  if (const Entry* e = rd.find("problem", "tracking")) {
    if (cfg.kind == ProblemKind::Custom) {
      rd.error(*e, 0, "tracking applies only to kind = benchmark; give L, dL_dy and d2L_dy2 instead");
    } else if (e->value == "quadratic") {
      cfg.tracking = TrackingForm::Quadratic;
    } else if (e->value == "linear") {
      cfg.tracking = TrackingForm::Linear;
    } else {
      rd.error(*e, 0, "tracking must be 'quadratic' or 'linear', got '" + e->value + "'");
    }
  }

  cfg.problem = benchmark_instance(cfg.tracking);
  bool functions_ok = true;
  const char* const state_keys[] = {"a", "da_dy", "d2a_dy2", "L", "dL_dy", "d2L_dy2"};
  if (cfg.kind == ProblemKind::Custom) {
    // Expressions are evaluated in double only.
    cfg.problem.wide.reset();
    PointwiseFn* targets[] = {&cfg.problem.a,  &cfg.problem.da_dy, &cfg.problem.d2a_dy2,
                              &cfg.problem.L, &cfg.problem.dL_dy, &cfg.problem.d2L_dy2};
    for (std::size_t i = 0; i < std::size(state_keys); ++i) {
      const Entry* e = rd.find("problem", state_keys[i]);
      if (!e) {
        rd.error(std::string("[problem] kind = custom requires key '") + state_keys[i] + "'");
        functions_ok = false;
        continue;
      }
      if (auto ex = rd.expression(*e, Expression::Variables::SpaceAndState)) {
        *targets[i] = state_function(std::move(*ex));
      } else {
        functions_ok = false;
      }
    }
    cfg.problem.g = [](const Point&) { return 0.0; };
    if (const Entry* e = rd.find("problem", "g")) {
      if (auto ex = rd.expression(*e, Expression::Variables::Space)) {
        cfg.problem.g = [ex = std::move(*ex)](const Point& x) { return ex(x.x1, x.x2); };
      } else {
        functions_ok = false;
      }
    }
  } else {
    for (const char* key : {"a", "da_dy", "d2a_dy2", "L", "dL_dy", "d2L_dy2", "g"}) {
      if (const Entry* e = rd.find("problem", key)) {
        rd.error(*e, 0, std::string("key '") + key + "' requires kind = custom");
      }
    }
  }

  rd.real("problem", "nu", cfg.problem.nu);
  rd.real("problem", "alpha", cfg.problem.bounds.alpha);
  rd.real("problem", "beta", cfg.problem.bounds.beta, /*allow_inf=*/true);
  rd.real("problem", "a0", cfg.problem.a0);
  if (const Entry* e = rd.find("problem", "diffusion")) {
    const auto tokens = split_list(e->value);
    if (tokens.size() != 4) {
      rd.error(*e, 0, "diffusion needs four entries d11, d12, d21, d22");
    } else {
      double d[4];
      bool ok = true;
      for (int i = 0; i < 4; ++i) {
        auto v = rd.number(*e, tokens[i].text, tokens[i].offset, false);
        ok = ok && v.has_value();
        d[i] = v.value_or(0.0);
      }
      if (ok) cfg.problem.diffusion << d[0], d[1], d[2], d[3];
    }
  }

  // [mesh]
  const Entry* levels = rd.find("mesh", "levels");
  if (levels) {
    for (const Token& t : split_list(levels->value)) {
      if (auto v = rd.integer(*levels, t.text, t.offset)) {
        if (*v < 1 || *v > 12) {
          rd.error(*levels, t.offset, "mesh level " + std::string(t.text) + " is outside [1, 12]");
        } else {
          cfg.levels.push_back(static_cast<int>(*v));
        }
      }
    }
  }
  if (cfg.levels.empty() && (!levels || split_list(levels->value).empty())) {
    if (levels) {
      rd.error(*levels, 0, "at least one mesh level is required");
    } else {
      rd.error("[mesh] levels: at least one mesh level is required");
    }
  }

  // [solver]
  rd.positive("solver", "outer_tol", cfg.solver.outer_tol);
  rd.positive("solver", "inner_tol", cfg.solver.inner_tol);
  rd.integer_at_least("solver", "max_outer", cfg.solver.max_outer, 1);
  rd.integer_at_least("solver", "max_cg", cfg.solver.max_cg, 0);
  rd.integer_at_least("solver", "max_newton", cfg.solver.max_newton, 1);
  if (const Entry* e = rd.find("solver", "u0")) {
    cfg.initial_control = rd.expression(*e, Expression::Variables::Space);
  }

  // [output]
  if (const Entry* e = rd.find("output", "directory")) {
    if (e->value.empty()) {
      rd.error(*e, 0, "directory must not be empty");
    } else {
      cfg.output.directory = e->value;
    }
  }
  if (cfg.output.directory.is_relative() && !base_dir.empty()) {
    cfg.output.directory = base_dir / cfg.output.directory;
  }
  if (const Entry* e = rd.find("output", "formats")) {
    cfg.output.csv = cfg.output.vtk = cfg.output.report = false;
    for (const Token& t : split_list(e->value)) {
      if (t.text == "csv") {
        cfg.output.csv = true;
      } else if (t.text == "vtk") {
        cfg.output.vtk = true;
      } else if (t.text == "report") {
        cfg.output.report = true;
      } else if (t.text != "none") {
        rd.error(*e, t.offset, "unknown output format '" + std::string(t.text) + "' (use csv, vtk, report or none)");
      }
    }
  }
  rd.positive("output", "tol_sigma", cfg.output.tol_sigma);

  // [verify]
  rd.boolean("verify", "enabled", cfg.verify.enabled);
  rd.integer_at_least("verify", "level", cfg.verify.level, 1);
  if (cfg.verify.level > 12) {
    rd.error("[verify] level must be within [1, 12]");
  }
  rd.integer_at_least("verify", "directions", cfg.verify.directions, 1);
  if (const Entry* e = rd.find("verify", "seed")) {
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
    if (ec != std::errc() || ptr != e->value.data() + e->value.size()) {
      rd.error(*e, 0, "seed must be a nonnegative integer");
    } else {
      cfg.verify.seed = v;
    }
  }
  rd.step_list("verify", "gradient_steps", cfg.verify.gradient_steps);
  rd.step_list("verify", "hessian_steps", cfg.verify.hessian_steps);
  rd.positive("verify", "min_order", cfg.verify.min_order);
  rd.positive("verify", "symmetry_tol", cfg.verify.symmetry_tol);

  // Problem assumptions, once the functions themselves are usable.
  if (functions_ok) {
    for (const std::string& v : validate(cfg.problem)) rd.error("[problem] " + v);
  }

  if (!diags.empty()) throw ConfigDiagnostics(std::move(diags));
  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string(), path.parent_path());
}

NodalField initial_control(const RunConfig& cfg, const TriMesh& mesh) {
  if (!cfg.initial_control) return NodalField::Zero(static_cast<Eigen::Index>(mesh.num_nodes()));
  const Expression& e = *cfg.initial_control;
  return sample_nodal(mesh, [&e](const Point& x) { return e(x.x1, x.x2); });
}

}  // namespace bssn
