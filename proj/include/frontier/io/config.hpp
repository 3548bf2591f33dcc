#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "frontier/gradient.hpp"
#include "frontier/io/csv.hpp"
#include "frontier/model.hpp"

namespace frontier::io {

/// Parse or validation failure; line/column are 1-based, 0 when not tied to a position.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(line ? "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + what
                                : what),
        line_(line),
        column_(column) {}
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_, column_;
};

struct GradientConfig {
  std::string family;  // linear | exponential | tabulated
  double intercept = 0, slope = 0;
  double scale = 0, rate = 0;
  std::vector<double> knots, values;
  std::optional<Direction> direction;  // inferred when absent
  double floor = 1e-6;

  GradientSpec build() const {
    GradientFamily fam;
    if (family == "linear") fam = LinearFamily{intercept, slope};
    else if (family == "exponential") fam = ExponentialFamily{scale, rate};
    else fam = TabulatedFamily{knots, values};
    if (direction) return GradientSpec(fam, *direction, floor);
    if (family == "linear") return GradientSpec::linear(intercept, slope, floor);
    if (family == "exponential") return GradientSpec::exponential(scale, rate, floor);
    return GradientSpec::tabulated(knots, values, floor);
  }
  friend bool operator==(const GradientConfig&, const GradientConfig&) = default;
};

struct ModelConfig {
  GradientConfig F_A, F_B;
  double s_A = 0, s_B = 0, d_A = 1, d_B = 1;

  CompetitionModel build() const { return {F_A.build(), F_B.build(), s_A, s_B, d_A, d_B}; }
  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

struct SolverConfig {
  std::optional<double> eps;
  std::vector<double> eps_list;
  std::optional<std::size_t> n;  // nullopt = auto
  double tol = 1e-8;
  std::string init = "paper_corner";
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> seed_2;  // second figure seed; default seed + 1
  std::size_t max_steps = 4'000'000;
  std::optional<double> dt;  // initial step; nullopt = reaction cap
  bool strict = true;
  bool large_grid = false;
  unsigned threads = 1;
  friend bool operator==(const SolverConfig&, const SolverConfig&) = default;
};

struct WaveConfig {
  std::optional<double> L;       // nullopt = automatic
  std::optional<std::size_t> m;  // nullopt = from dy = 0.02
  double tol_x = 1e-6;
  std::vector<double> xs;        // empty = 9 points spread over the bistable interval
  double oracle_horizon = 60.0;
  friend bool operator==(const WaveConfig&, const WaveConfig&) = default;
};

struct OutputConfig {
  std::string dir = "out";
  std::vector<std::string> formats{"csv", "svg"};
  friend bool operator==(const OutputConfig&, const OutputConfig&) = default;
};

struct RunConfig {
  ModelConfig model;
  SolverConfig solver;
  WaveConfig wave;
  OutputConfig output;
  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

namespace detail {

inline std::string trim(const std::string& s, std::size_t& offset) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  offset = b;
  return s.substr(b, e - b);
}

struct Entry {
  std::string value;
  std::size_t line, key_col, value_col;
};

class Reader {
 public:
  Reader(std::map<std::string, Entry> entries, std::string section)
      : entries_(std::move(entries)), section_(std::move(section)) {}

  bool has(const std::string& k) const { return entries_.count(k) > 0; }
  const Entry& entry(const std::string& k) const { return entries_.at(k); }

  [[noreturn]] void fail(const std::string& k, const std::string& why) const {
    const auto& e = entries_.at(k);
    throw ConfigError("[" + section_ + "] " + k + ": " + why, e.line, e.value_col);
  }

  double number(const std::string& k) const {
    const auto& s = entries_.at(k).value;
    return parse_double(k, s);
  }
  std::optional<double> number_or_auto(const std::string& k) const {
    if (!has(k) || entry(k).value == "auto") return std::nullopt;
    return number(k);
  }
  std::uint64_t integer(const std::string& k) const {
    const auto& s = entries_.at(k).value;
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail(k, "expected a non-negative integer");
    return v;
  }
  bool boolean(const std::string& k) const {
    const auto& s = entries_.at(k).value;
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    fail(k, "expected true or false");
  }
  std::vector<std::string> words(const std::string& k) const {
    std::vector<std::string> out;
    std::stringstream ss(entries_.at(k).value);
    std::string item;
    while (std::getline(ss, item, ',')) {
      std::size_t off;
      item = trim(item, off);
      if (item.empty()) fail(k, "empty list item");
      out.push_back(item);
    }
    if (out.empty()) fail(k, "empty list");
    return out;
  }
  std::vector<double> numbers(const std::string& k) const {
    std::vector<double> out;
    for (const auto& w : words(k)) out.push_back(parse_double(k, w));
    return out;
  }

 private:
  double parse_double(const std::string& k, const std::string& s) const {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) fail(k, "expected a number, got '" + s + "'");
    return v;
  }

  std::map<std::string, Entry> entries_;
  std::string section_;
};

inline const std::map<std::string, std::vector<std::string>>& allowed_keys() {
  static const std::map<std::string, std::vector<std::string>> keys{
      {"model",
       {"F_A", "F_A.intercept", "F_A.slope", "F_A.scale", "F_A.rate", "F_A.knots", "F_A.values",
        "F_A.direction", "F_A.floor", "F_B", "F_B.intercept", "F_B.slope", "F_B.scale",
        "F_B.rate", "F_B.knots", "F_B.values", "F_B.direction", "F_B.floor", "s_A", "s_B", "d_A",
        "d_B"}},
      {"solver",
       {"eps", "eps_list", "n", "tol", "init", "seed", "seed_2", "max_steps", "dt", "strict",
        "large_grid", "threads"}},
      {"wave", {"L", "m", "tol_x", "xs", "oracle_horizon"}},
      {"output", {"dir", "formats"}}};
  return keys;
}

inline GradientConfig read_gradient(const Reader& r, const std::string& name,
                                    std::size_t section_line) {
  if (!r.has(name)) throw ConfigError("[model] missing key " + name, section_line, 1);
  GradientConfig g;
  g.family = r.entry(name).value;
  std::vector<std::string> used;
  if (g.family == "linear") used = {"intercept", "slope"};
  else if (g.family == "exponential") used = {"scale", "rate"};
  else if (g.family == "tabulated") used = {"knots", "values"};
  else r.fail(name, "unknown gradient family '" + g.family + "' (linear, exponential, tabulated)");

  for (const char* p : {"intercept", "slope", "scale", "rate", "knots", "values"}) {
    const std::string k = name + "." + p;
    const bool wanted = std::find(used.begin(), used.end(), p) != used.end();
    if (wanted && !r.has(k))
      throw ConfigError("[model] missing key " + k + " for family " + g.family,
                        r.entry(name).line, r.entry(name).value_col);
    if (!wanted && r.has(k)) r.fail(k, "not a parameter of family " + g.family);
  }
  if (g.family == "linear") {
    g.intercept = r.number(name + ".intercept");
    g.slope = r.number(name + ".slope");
  } else if (g.family == "exponential") {
    g.scale = r.number(name + ".scale");
    g.rate = r.number(name + ".rate");
  } else {
    g.knots = r.numbers(name + ".knots");
    g.values = r.numbers(name + ".values");
  }
  if (r.has(name + ".direction")) {
    const auto& v = r.entry(name + ".direction").value;
    if (v == "decreasing") g.direction = Direction::decreasing;
    else if (v == "increasing") g.direction = Direction::increasing;
    else r.fail(name + ".direction", "expected decreasing or increasing");
  }
  if (r.has(name + ".floor")) g.floor = r.number(name + ".floor");
  try {
    (void)g.build();
  } catch (const DomainError& e) {
    r.fail(name, e.what());
  }
  return g;
}

}  // namespace detail

/**
 * Flat sectioned text:
 *   [section]
 *   key = value      # comment
 * Sections: model, solver, wave, output. Unknown sections or keys, duplicate
 * keys and malformed values are errors carrying the line and column.
 */
inline RunConfig parse_config(const std::string& text) {
  std::map<std::string, std::map<std::string, detail::Entry>> sections;
  std::map<std::string, std::size_t> section_line;
  std::string current;
  std::istringstream in(text);
  std::string raw;
  std::size_t lineno = 0;
  const auto& allowed = detail::allowed_keys();
  while (std::getline(in, raw)) {
    ++lineno;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto hash = raw.find('#');
    std::string line = hash == std::string::npos ? raw : raw.substr(0, hash);
    std::size_t off;
    const std::string body = detail::trim(line, off);
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']')
        throw ConfigError("unterminated section header", lineno, off + body.size() + 1);
      std::size_t o2;
      current = detail::trim(body.substr(1, body.size() - 2), o2);
      if (!allowed.count(current))
        throw ConfigError("unknown section [" + current + "]", lineno, off + 2 + o2);
      if (section_line.count(current))
        throw ConfigError("duplicate section [" + current + "]", lineno, off + 1);
      section_line[current] = lineno;
      sections[current];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", lineno, off + 1);
    if (current.empty()) throw ConfigError("key outside any section", lineno, off + 1);
    std::size_t koff, voff;
    const std::string key = detail::trim(line.substr(0, eq), koff);
    const std::string value = detail::trim(line.substr(eq + 1), voff);
    if (key.empty()) throw ConfigError("empty key", lineno, eq + 1);
    const auto& keys = allowed.at(current);
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw ConfigError("unknown key '" + key + "' in [" + current + "]", lineno, koff + 1);
    if (value.empty()) throw ConfigError("empty value for " + key, lineno, eq + 2);
    if (sections[current].count(key))
      throw ConfigError("duplicate key '" + key + "'", lineno, koff + 1);
    sections[current][key] = {value, lineno, koff + 1, eq + 2 + voff};
  }

  if (!sections.count("model")) throw ConfigError("missing [model] section", 0, 0);
  RunConfig cfg;
  {
    const detail::Reader r(sections["model"], "model");
    const std::size_t sl = section_line["model"];
    cfg.model.F_A = detail::read_gradient(r, "F_A", sl);
    cfg.model.F_B = detail::read_gradient(r, "F_B", sl);
    for (const char* k : {"s_A", "s_B"})
      if (!r.has(k)) throw ConfigError(std::string("[model] missing key ") + k, sl, 1);
    cfg.model.s_A = r.number("s_A");
    cfg.model.s_B = r.number("s_B");
    if (r.has("d_A")) cfg.model.d_A = r.number("d_A");
    if (r.has("d_B")) cfg.model.d_B = r.number("d_B");
    for (const char* k : {"s_A", "s_B"})
      if (!(r.number(k) >= 0.0)) r.fail(k, "must be non-negative");
    for (const char* k : {"d_A", "d_B"})
      if (r.has(k) && !(r.number(k) > 0.0)) r.fail(k, "must be positive");
  }
  if (sections.count("solver")) {
    const detail::Reader r(sections["solver"], "solver");
    auto& s = cfg.solver;
    if (r.has("eps")) {
      s.eps = r.number("eps");
      if (!(*s.eps >= 0.0)) r.fail("eps", "must be non-negative");
    }
    if (r.has("eps_list")) {
      s.eps_list = r.numbers("eps_list");
      for (std::size_t i = 0; i < s.eps_list.size(); ++i)
        if (!(s.eps_list[i] > 0.0) || (i && !(s.eps_list[i] < s.eps_list[i - 1])))
          r.fail("eps_list", "must be positive and strictly decreasing");
    }
    if (r.has("n") && r.entry("n").value != "auto") {
      s.n = r.integer("n");
      if (*s.n < 3) r.fail("n", "need at least 3 nodes");
    }
    if (r.has("tol")) {
      s.tol = r.number("tol");
      if (!(s.tol > 0.0)) r.fail("tol", "must be positive");
    }
    if (r.has("init")) {
      s.init = r.entry("init").value;
      if (s.init != "paper_corner" && s.init != "monotone_ramp")
        r.fail("init", "expected paper_corner or monotone_ramp");
    }
    if (r.has("seed")) s.seed = r.integer("seed");
    if (r.has("seed_2")) s.seed_2 = r.integer("seed_2");
    if (r.has("max_steps")) s.max_steps = r.integer("max_steps");
    if (r.has("dt")) {
      s.dt = r.number_or_auto("dt");
      if (s.dt && !(*s.dt > 0.0)) r.fail("dt", "must be positive or auto");
    }
    if (r.has("strict")) s.strict = r.boolean("strict");
    if (r.has("large_grid")) s.large_grid = r.boolean("large_grid");
    if (r.has("threads")) {
      s.threads = static_cast<unsigned>(r.integer("threads"));
      if (s.threads == 0) r.fail("threads", "must be at least 1");
    }
  }
  if (sections.count("wave")) {
    const detail::Reader r(sections["wave"], "wave");
    auto& w = cfg.wave;
    if (r.has("L")) {
      w.L = r.number_or_auto("L");
      if (w.L && !(*w.L > 0.0)) r.fail("L", "must be positive or auto");
    }
    if (r.has("m") && r.entry("m").value != "auto") {
      w.m = r.integer("m");
      if (*w.m < 5) r.fail("m", "need at least 5 nodes");
    }
    if (r.has("tol_x")) {
      w.tol_x = r.number("tol_x");
      if (!(w.tol_x > 0.0)) r.fail("tol_x", "must be positive");
    }
    if (r.has("xs") && r.entry("xs").value != "auto") w.xs = r.numbers("xs");
    if (r.has("oracle_horizon")) {
      w.oracle_horizon = r.number("oracle_horizon");
      if (!(w.oracle_horizon > 0.0)) r.fail("oracle_horizon", "must be positive");
    }
  }
  if (sections.count("output")) {
    const detail::Reader r(sections["output"], "output");
    if (r.has("dir")) cfg.output.dir = r.entry("dir").value;
    if (r.has("formats")) {
      cfg.output.formats = r.words("formats");
      for (const auto& f : cfg.output.formats)
        if (f != "csv" && f != "svg") r.fail("formats", "unknown format '" + f + "'");
    }
  }
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path, 0, 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

namespace detail {

inline std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + format_double(v[i]);
  return s;
}

inline void write_gradient(std::string& o, const std::string& name, const GradientConfig& g) {
  o += name + " = " + g.family + "\n";
  if (g.family == "linear") {
    o += name + ".intercept = " + format_double(g.intercept) + "\n";
    o += name + ".slope = " + format_double(g.slope) + "\n";
  } else if (g.family == "exponential") {
    o += name + ".scale = " + format_double(g.scale) + "\n";
    o += name + ".rate = " + format_double(g.rate) + "\n";
  } else {
    o += name + ".knots = " + join(g.knots) + "\n";
    o += name + ".values = " + join(g.values) + "\n";
  }
  if (g.direction) o += name + ".direction = " + to_string(*g.direction) + "\n";
  o += name + ".floor = " + format_double(g.floor) + "\n";
}

}  // namespace detail

/// Canonical text form; parse_config(serialize_config(c)) == c.
inline std::string serialize_config(const RunConfig& c) {
  std::string o = "[model]\n";
  detail::write_gradient(o, "F_A", c.model.F_A);
  detail::write_gradient(o, "F_B", c.model.F_B);
  o += "s_A = " + format_double(c.model.s_A) + "\n";
  o += "s_B = " + format_double(c.model.s_B) + "\n";
  o += "d_A = " + format_double(c.model.d_A) + "\n";
  o += "d_B = " + format_double(c.model.d_B) + "\n";

  const auto& s = c.solver;
  o += "\n[solver]\n";
  if (s.eps) o += "eps = " + format_double(*s.eps) + "\n";
  if (!s.eps_list.empty()) o += "eps_list = " + detail::join(s.eps_list) + "\n";
  o += "n = " + (s.n ? std::to_string(*s.n) : std::string("auto")) + "\n";
  o += "tol = " + format_double(s.tol) + "\n";
  o += "init = " + s.init + "\n";
  o += "seed = " + std::to_string(s.seed) + "\n";
  if (s.seed_2) o += "seed_2 = " + std::to_string(*s.seed_2) + "\n";
  o += "max_steps = " + std::to_string(s.max_steps) + "\n";
  o += "dt = " + (s.dt ? format_double(*s.dt) : std::string("auto")) + "\n";
  o += std::string("strict = ") + (s.strict ? "true" : "false") + "\n";
  o += std::string("large_grid = ") + (s.large_grid ? "true" : "false") + "\n";
  o += "threads = " + std::to_string(s.threads) + "\n";

  const auto& w = c.wave;
  o += "\n[wave]\n";
  o += "L = " + (w.L ? format_double(*w.L) : std::string("auto")) + "\n";
  o += "m = " + (w.m ? std::to_string(*w.m) : std::string("auto")) + "\n";
  o += "tol_x = " + format_double(w.tol_x) + "\n";
  o += "xs = " + (w.xs.empty() ? std::string("auto") : detail::join(w.xs)) + "\n";
  o += "oracle_horizon = " + format_double(w.oracle_horizon) + "\n";

  o += "\n[output]\n";
  o += "dir = " + c.output.dir + "\n";
  o += "formats = ";
  for (std::size_t i = 0; i < c.output.formats.size(); ++i)
    o += (i ? ", " : "") + c.output.formats[i];
  o += "\n";
  return o;
}

}  // namespace frontier::io
