#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>

#include "grenier/dynamics.hpp"
#include "grenier/errors.hpp"
#include "grenier/experiments.hpp"

namespace grenier {

enum class Emit { fields, series, sweep };

inline std::string_view to_string(Emit e) {
  switch (e) {
    case Emit::fields: return "fields";
    case Emit::series: return "series";
    case Emit::sweep: return "sweep";
  }
  return "?";
}

inline std::string_view to_string(MomentumScaling m) {
  return m == MomentumScaling::exact ? "exact" : "ratio";
}

/// Everything a run needs. Defaults reproduce the near-zero-current case.
struct RunConfig {
  CaseId case_id = CaseId::near_zero_current;
  double eps = 0.01;
  std::optional<double> alpha;  // empty: the case default
  double L = 0.5;
  std::size_t n = 50;
  double cfl_const = 0.25;
  double T = 0.1;
  std::size_t stride = 10;
  bool project_mass = true;
  bool project_momentum = true;
  double momentum_guard = 1e-8;
  MomentumScaling momentum_scaling = MomentumScaling::exact;
  std::optional<double> sign_change_offset;  // empty: L/8
  std::string output_dir = "out";
  std::set<Emit> emit{Emit::fields, Emit::series};

  friend bool operator==(const RunConfig&, const RunConfig&) = default;

  ExperimentCase experiment() const {
    ExperimentCase c = ExperimentCase::defaults(case_id);
    if (alpha) c.alpha = *alpha;
    c.L = L;
    c.n = n;
    c.sign_change_offset = sign_change_offset;
    return c;
  }

  StepControl control() const {
    StepControl s;
    s.cfl_const = cfl_const;
    s.momentum_guard = momentum_guard;
    s.project_mass = project_mass;
    s.project_momentum = project_momentum;
    s.momentum_scaling = momentum_scaling;
    return s;
  }
};

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("cannot format double");
  return std::string(buf, end);
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

class ConfigLine {
 public:
  ConfigLine(std::size_t line, std::string_view key, std::string_view value)
      : line_(line), key_(key), value_(value) {}

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("config line " + std::to_string(line_) + ": key '" + std::string(key_) +
                      "': " + why);
  }

  double real() const {
    double x = 0;
    const auto* first = value_.data();
    const auto* last = first + value_.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last || !std::isfinite(x))
      fail("expected a finite number, got '" + std::string(value_) + "'");
    return x;
  }

  std::size_t count() const {
    std::size_t x = 0;
    const auto* first = value_.data();
    const auto* last = first + value_.size();
    auto [ptr, ec] = std::from_chars(first, last, x);
    if (ec != std::errc{} || ptr != last)
      fail("expected a non-negative integer, got '" + std::string(value_) + "'");
    return x;
  }

  bool flag() const {
    if (value_ == "true" || value_ == "on" || value_ == "1") return true;
    if (value_ == "false" || value_ == "off" || value_ == "0") return false;
    fail("expected true/false, got '" + std::string(value_) + "'");
  }

  std::string_view text() const { return value_; }

 private:
  std::size_t line_;
  std::string_view key_;
  std::string_view value_;
};

}  // namespace detail

/// Parses `key = value` lines; `#` starts a comment. Unknown or repeated
/// keys, bad values and out-of-range numbers raise ConfigError naming the
/// key and line.
inline RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::optional<std::size_t> offset_line;

  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    const detail::ConfigLine at(line_no, key, value);

    if (!seen.insert(std::string(key)).second) at.fail("duplicate key");

    if (key == "case") {
      try {
        cfg.case_id = case_from_string(value);
      } catch (const ConfigError&) {
        at.fail("unknown case '" + std::string(value) + "'");
      }
    } else if (key == "eps") {
      cfg.eps = at.real();
      if (cfg.eps < 0) at.fail("must be >= 0");
    } else if (key == "alpha") {
      cfg.alpha = at.real();
    } else if (key == "L") {
      cfg.L = at.real();
      if (!(cfg.L > 0)) at.fail("must be > 0");
    } else if (key == "n") {
      cfg.n = at.count();
      if (cfg.n < 4) at.fail("must be >= 4");
    } else if (key == "cfl_const") {
      cfg.cfl_const = at.real();
      if (!(cfg.cfl_const > 0)) at.fail("must be > 0");
    } else if (key == "T") {
      cfg.T = at.real();
      if (cfg.T < 0) at.fail("must be >= 0");
    } else if (key == "stride") {
      cfg.stride = at.count();
      if (cfg.stride < 1) at.fail("must be >= 1");
    } else if (key == "project_mass") {
      cfg.project_mass = at.flag();
    } else if (key == "project_momentum") {
      cfg.project_momentum = at.flag();
    } else if (key == "momentum_guard") {
      cfg.momentum_guard = at.real();
      if (cfg.momentum_guard < 0) at.fail("must be >= 0");
    } else if (key == "momentum_scaling") {
      if (value == "exact") cfg.momentum_scaling = MomentumScaling::exact;
      else if (value == "ratio") cfg.momentum_scaling = MomentumScaling::ratio;
      else at.fail("expected exact or ratio");
    } else if (key == "sign_change_offset") {
      cfg.sign_change_offset = at.real();
      if (*cfg.sign_change_offset <= 0) at.fail("must be > 0");
      offset_line = line_no;
    } else if (key == "output_dir") {
      if (value.empty()) at.fail("must not be empty");
      cfg.output_dir = std::string(value);
    } else if (key == "emit") {
      cfg.emit.clear();
      std::string_view rest = value;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        const auto item = detail::trim(rest.substr(0, comma));
        rest = comma == std::string_view::npos ? std::string_view{} : rest.substr(comma + 1);
        if (item == "fields") cfg.emit.insert(Emit::fields);
        else if (item == "series") cfg.emit.insert(Emit::series);
        else if (item == "sweep") cfg.emit.insert(Emit::sweep);
        else at.fail("unknown output kind '" + std::string(item) + "'");
      }
      if (cfg.emit.empty()) at.fail("must name at least one of fields, series, sweep");
    } else {
      at.fail("unknown key");
    }
  }

  if (cfg.sign_change_offset && *cfg.sign_change_offset >= cfg.L / 2)
    throw ConfigError("config line " + std::to_string(*offset_line) +
                      ": key 'sign_change_offset': must be < L/2");
  return cfg;
}

/// Inverse of parse_config: parse_config(render_config(c)) == c.
inline std::string render_config(const RunConfig& cfg) {
  std::ostringstream out;
  out << "case = " << to_string(cfg.case_id) << '\n';
  out << "eps = " << format_double(cfg.eps) << '\n';
  if (cfg.alpha) out << "alpha = " << format_double(*cfg.alpha) << '\n';
  out << "L = " << format_double(cfg.L) << '\n';
  out << "n = " << cfg.n << '\n';
  out << "cfl_const = " << format_double(cfg.cfl_const) << '\n';
  out << "T = " << format_double(cfg.T) << '\n';
  out << "stride = " << cfg.stride << '\n';
  out << "project_mass = " << (cfg.project_mass ? "true" : "false") << '\n';
  out << "project_momentum = " << (cfg.project_momentum ? "true" : "false") << '\n';
  out << "momentum_guard = " << format_double(cfg.momentum_guard) << '\n';
  out << "momentum_scaling = " << to_string(cfg.momentum_scaling) << '\n';
  if (cfg.sign_change_offset)
    out << "sign_change_offset = " << format_double(*cfg.sign_change_offset) << '\n';
  out << "output_dir = " << cfg.output_dir << '\n';
  out << "emit = ";
  bool first = true;
  for (auto e : cfg.emit) {
    out << (first ? "" : ",") << to_string(e);
    first = false;
  }
  out << '\n';
  return out.str();
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace grenier
