#include "sslab/app/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fmt/format.h>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include "sslab/app/output.hpp"
#include "sslab/errors.hpp"
#include "sslab/exponents.hpp"

namespace sslab::app {

namespace {

enum class Type { integer, real, boolean, choice };

using Partial = std::map<std::string, Value>;

struct Entry {
  std::string key;
  Type type;
  std::vector<std::string> choices;
  /// Default as text; may depend on keys earlier in the schema.
  std::function<std::string(const Partial&)> fallback;
  /// Empty when the value is admissible, otherwise the reason.
  std::function<std::string(const Value&, const Partial&)> check;
  std::string help;
};

std::string fmt_real(double x) { return fmt::format("{:.17g}", x); }

std::function<std::string(const Partial&)> fixed(std::string text) {
  return [text = std::move(text)](const Partial&) { return text; };
}

double as_real(const Value& v) { return std::get<double>(v); }
std::int64_t as_int(const Value& v) { return std::get<std::int64_t>(v); }

std::function<std::string(const Value&, const Partial&)> positive() {
  return [](const Value& v, const Partial&) { return as_real(v) > 0.0 ? "" : std::string("must be positive"); };
}

std::function<std::string(const Value&, const Partial&)> at_least(std::int64_t lo) {
  return [lo](const Value& v, const Partial&) {
    return as_int(v) >= lo ? std::string() : fmt::format("must be at least {}", lo);
  };
}

std::function<std::string(const Value&, const Partial&)> greater_than(double lo) {
  return [lo](const Value& v, const Partial&) {
    return as_real(v) > lo ? std::string() : fmt::format("must exceed {}", lo);
  };
}

std::function<std::string(const Value&, const Partial&)> any() {
  return [](const Value&, const Partial&) { return std::string(); };
}

int dim_of(const Partial& c) { return static_cast<int>(as_int(c.at("n"))); }
double p_of(const Partial& c) { return as_real(c.at("p")); }

const std::vector<Entry>& schema() {
  static const std::vector<Entry> entries = [] {
    std::vector<Entry> s;
    auto add = [&](std::string key, Type type, auto fallback, auto check, std::string help,
                   std::vector<std::string> choices = {}) {
      Entry e;
      e.key = std::move(key);
      e.type = type;
      e.choices = std::move(choices);
      if constexpr (std::is_convertible_v<decltype(fallback), std::string>) {
        e.fallback = fixed(std::string(fallback));
      } else {
        e.fallback = fallback;
      }
      e.check = check;
      e.help = std::move(help);
      s.push_back(std::move(e));
    };

    add("kind", Type::choice, "exponents", any(), "experiment",
        {"exponents", "verify-identities", "spectrum", "shoot", "scan", "evolve-rescaled", "blowup", "theorem13"});
    add("n", Type::integer, "1", at_least(1), "spatial dimension");
    add("p", Type::real, "2", greater_than(1.0), "nonlinearity exponent");
    add("seed", Type::integer, "1", at_least(0), "seed of the randomized suites");

    add("degree", Type::integer,
        [](const Partial& c) { return std::to_string(dim_of(c) == 1 ? 64 : dim_of(c) == 2 ? 32 : 16); },
        at_least(1), "Gauss points per axis");
    add("random_cases", Type::integer, "200", at_least(1), "randomized identity cases");

    add("basis_kind", Type::choice, [](const Partial& c) { return std::string(dim_of(c) <= 3 ? "tensor" : "radial"); },
        [](const Value& v, const Partial& c) {
          return std::get<std::string>(v) == "tensor" && dim_of(c) > 3 ? std::string("tensor bases need n <= 3")
                                                                       : std::string();
        },
        "Hermite tensor or radial Laguerre basis", {"tensor", "radial"});
    add("basis", Type::integer,
        [](const Partial& c) {
          if (std::get<std::string>(c.at("basis_kind")) == "radial") return std::string("32");
          const int n = dim_of(c);
          const int m = n == 1 ? 32 : n == 2 ? 12 : 8;
          return std::to_string(static_cast<std::int64_t>(std::llround(std::pow(m, n))));
        },
        [](const Value& v, const Partial& c) {
          const auto N = as_int(v);
          if (N < 1) return std::string("must be at least 1");
          if (std::get<std::string>(c.at("basis_kind")) == "tensor") {
            const int n = dim_of(c);
            const auto m = std::llround(std::pow(static_cast<double>(N), 1.0 / n));
            if (std::llround(std::pow(static_cast<double>(m), n)) != N) return std::string("must be an n-th power");
          }
          return std::string();
        },
        "basis size N");
    add("profile", Type::choice, "kappa", any(), "profile w for the spectrum", {"kappa", "zero", "shoot"});
    add("eigen_count", Type::integer, "8",
        [](const Value& v, const Partial& c) {
          if (as_int(v) < 1) return std::string("must be at least 1");
          return as_int(v) <= as_int(c.at("basis")) ? std::string() : std::string("must not exceed basis");
        },
        "eigenvalues reported");
    add("span_tol", Type::real, "1e-4", positive(), "re-centering span tolerance");
    add("theorem58_tol", Type::real, "1e-4", positive(), "slack in lambda_1 < -1");

    add("alpha", Type::real, [](const Partial& c) { return fmt_real(kappa(p_of(c))); }, positive(),
        "shooting parameter w(0)");
    add("r_max", Type::real, "20", positive(), "shooting interval end");
    add("rel_tol", Type::real, "1e-10", positive(), "integrator relative tolerance");
    add("abs_tol", Type::real, "1e-12", positive(), "integrator absolute tolerance");
    add("blowup_cap", Type::real, "1e6", positive(), "blow-up event level");
    add("series_radius", Type::real, "1e-3", positive(), "Taylor start radius");
    add("output_spacing", Type::real, "1e-3", positive(), "stored mesh spacing");
    add("tail_tol", Type::real, "1e-2", positive(), "decaying-tail tolerance");
    add("residual_tol", Type::real, "1e-6", positive(), "shoot verdict threshold");

    add("alpha_lo", Type::real, "0",
        [](const Value& v, const Partial&) { return as_real(v) >= 0.0 ? std::string() : std::string("must be >= 0"); },
        "scan interval start (excluded)");
    add("alpha_hi", Type::real, [](const Partial& c) { return fmt_real(3.0 * kappa(p_of(c))); },
        [](const Value& v, const Partial& c) {
          return as_real(v) > as_real(c.at("alpha_lo")) ? std::string() : std::string("must exceed alpha_lo");
        },
        "scan interval end");
    add("count", Type::integer, "64", at_least(1), "scan points");
    add("bisect_tol", Type::real, "1e-10", positive(), "bracket width target");
    add("max_bisections", Type::integer, "200", at_least(1), "bisection limit");
    add("threads", Type::integer, "0", at_least(0), "scan workers (0: hardware); results do not depend on it");

    add("L", Type::real, "8", positive(), "rescaled ball radius");
    add("y_cells", Type::integer, "1600", at_least(4), "rescaled mesh cells");
    add("ds", Type::real, "1e-3", positive(), "rescaled time step");
    add("s_end", Type::real, "5", positive(), "rescaled final time");
    add("record_every", Type::integer, "10", at_least(1), "steps between stored snapshots");
    add("initial_w", Type::choice, "kappa-bump", any(), "rescaled initial data",
        {"kappa-bump", "kappa", "zero", "gaussian"});
    add("amplitude", Type::real, "0.1", any(), "relative bump amplitude");
    add("bump_width", Type::real, "2", positive(), "bump width");
    add("escape_factor", Type::real, "10", greater_than(1.0), "halt once max|w| exceeds this times max(kappa, max|w0|)");

    add("R", Type::real, "2", positive(), "physical half-width or ball radius");
    add("x_cells", Type::integer, "4000", at_least(4), "physical mesh cells");
    add("initial_u", Type::choice, "cos", any(), "physical initial data", {"cos", "constant", "gaussian"});
    add("u_amplitude", Type::real, "3", positive(), "initial data amplitude");
    add("dt_factor", Type::real, "0.05", positive(), "dt <= dt_factor (max u)^{1-p} min(1, 1/(p-1))");
    add("dt_max", Type::real, "1e-2", positive(), "largest time step");
    add("u_cap", Type::real, "1e8", positive(), "blow-up level");
    add("t_max", Type::real, "10", positive(), "final time without blow-up");
    add("diffusion", Type::boolean, "true", any(), "false: pointwise ODE (oracle mode)");
    add("snapshot_ratio", Type::real, "1.1", greater_than(1.0), "max-u growth between snapshots");

    add("K", Type::real, "1", positive(), "compact set |y| <= K");
    add("y_points", Type::integer, "201", at_least(2), "samples on |y| <= K");
    add("conv_tol", Type::real, "0.05", positive(), "convergence threshold");
    add("max_y_spacing", Type::real, "0.05", positive(), "snapshot resolution filter");
    add("min_snapshots", Type::integer, "3", at_least(1), "decreasing run length");
    add("h_tol", Type::real, "1e-6", positive(), "H >= -h_tol counts as nonnegative");
    return s;
  }();
  return entries;
}

const Entry* find_entry(std::string_view key) {
  for (const auto& e : schema())
    if (e.key == key) return &e;
  return nullptr;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Value parse_value(const Entry& e, const std::string& raw) {
  auto fail = [&](const std::string& why) {
    return UsageError(fmt::format("config key '{}': {} (got '{}')", e.key, why, raw));
  };
  switch (e.type) {
    case Type::integer: {
      std::int64_t v = 0;
      const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || ptr != raw.data() + raw.size()) throw fail("expected an integer");
      return v;
    }
    case Type::real: {
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), v);
      if (ec != std::errc() || ptr != raw.data() + raw.size() || !std::isfinite(v))
        throw fail("expected a finite real number");
      return v;
    }
    case Type::boolean: {
      if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
      if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
      throw fail("expected true or false");
    }
    case Type::choice: {
      if (std::find(e.choices.begin(), e.choices.end(), raw) == e.choices.end()) {
        std::string list;
        for (const auto& c : e.choices) list += (list.empty() ? "" : ", ") + c;
        throw fail("expected one of " + list);
      }
      return raw;
    }
  }
  throw fail("unsupported type");
}

std::string render(const Value& v) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, double>) {
          return fmt_real(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::string>) {
          return x;
        } else {
          return std::to_string(x);
        }
      },
      v);
}

std::pair<std::string, std::string> split_assignment(std::string_view line, const std::string& origin) {
  const auto eq = line.find('=');
  if (eq == std::string_view::npos) throw UsageError(fmt::format("{}: expected key = value, got '{}'", origin, line));
  auto key = trim(line.substr(0, eq));
  auto value = trim(line.substr(eq + 1));
  if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);
  if (key.empty()) throw UsageError(fmt::format("{}: empty key", origin));
  if (!find_entry(key)) throw UsageError(fmt::format("{}: unknown config key '{}'", origin, key));
  return {key, value};
}

template <class T>
const T& typed(const std::map<std::string, Value>& values, const std::string& key) {
  const auto it = values.find(key);
  if (it == values.end()) throw UsageError(fmt::format("config key '{}' is not defined", key));
  if (const auto* v = std::get_if<T>(&it->second)) return *v;
  throw UsageError(fmt::format("config key '{}' has a different type", key));
}

}  // namespace

std::string to_string(Kind kind) {
  switch (kind) {
    case Kind::exponents: return "exponents";
    case Kind::verify_identities: return "verify-identities";
    case Kind::spectrum: return "spectrum";
    case Kind::shoot: return "shoot";
    case Kind::scan: return "scan";
    case Kind::evolve_rescaled: return "evolve-rescaled";
    case Kind::blowup: return "blowup";
    case Kind::theorem13: return "theorem13";
  }
  return "unknown";
}

Kind parse_kind(std::string_view text) {
  for (Kind k : {Kind::exponents, Kind::verify_identities, Kind::spectrum, Kind::shoot, Kind::scan,
                 Kind::evolve_rescaled, Kind::blowup, Kind::theorem13})
    if (to_string(k) == text) return k;
  throw UsageError(fmt::format("unknown experiment kind '{}'", text));
}

Kind RunConfig::kind() const { return parse_kind(text("kind")); }
std::int64_t RunConfig::integer(const std::string& key) const { return typed<std::int64_t>(values_, key); }
double RunConfig::real(const std::string& key) const { return typed<double>(values_, key); }
bool RunConfig::flag(const std::string& key) const { return typed<bool>(values_, key); }
const std::string& RunConfig::text(const std::string& key) const { return typed<std::string>(values_, key); }

std::string RunConfig::serialize() const {
  std::string out;
  for (const auto& e : schema()) {
    const auto it = values_.find(e.key);
    if (it != values_.end()) out += e.key + " = " + render(it->second) + "\n";
  }
  return out;
}

std::string RunConfig::hash() const { return sha256_hex(serialize()); }

void ConfigBuilder::add_text(const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  std::map<std::string, std::string> seen;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto where = fmt::format("{}:{}", origin, number);
    auto [key, value] = split_assignment(line, where);
    if (!seen.emplace(key, value).second) throw UsageError(fmt::format("{}: config key '{}' repeated", where, key));
    file_[key] = value;
  }
}

void ConfigBuilder::add_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream buf;
  buf << in.rdbuf();
  add_text(buf.str(), path);
}

void ConfigBuilder::add_flag(const std::string& assignment) {
  auto [key, value] = split_assignment(assignment, "--set");
  set_flag(key, value);
}

void ConfigBuilder::set_flag(const std::string& key, const std::string& value) {
  if (!find_entry(key)) throw UsageError(fmt::format("unknown config key '{}'", key));
  flags_[key] = value;
  std::erase_if(overrides_, [&](const Override& o) { return o.key == key; });
  if (const auto it = file_.find(key); it != file_.end()) overrides_.push_back({key, it->second, value});
}

RunConfig ConfigBuilder::build() const {
  RunConfig config;
  auto& values = config.values_;
  for (const auto& e : schema()) {
    std::string raw;
    if (const auto f = flags_.find(e.key); f != flags_.end()) {
      raw = f->second;
    } else if (const auto g = file_.find(e.key); g != file_.end()) {
      raw = g->second;
    } else {
      raw = e.fallback(values);
    }
    Value v = parse_value(e, raw);
    if (const auto why = e.check(v, values); !why.empty())
      throw UsageError(fmt::format("config key '{}': {} (got '{}')", e.key, why, raw));
    values.emplace(e.key, std::move(v));
  }
  return config;
}

RunConfig parse_config(const std::string& text) {
  ConfigBuilder b;
  b.add_text(text, "config");
  return b.build();
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& e : schema()) keys.push_back(e.key);
  return keys;
}

std::string schema_description() {
  static const char* names[] = {"integer", "real", "boolean", "choice"};
  std::string out;
  for (const auto& e : schema()) {
    std::string type = names[static_cast<int>(e.type)];
    if (e.type == Type::choice) {
      type += " {";
      for (std::size_t i = 0; i < e.choices.size(); ++i) type += (i ? "|" : "") + e.choices[i];
      type += "}";
    }
    out += fmt::format("{:<16} {:<40} {}\n", e.key, type, e.help);
  }
  return out;
}

}  // namespace sslab::app
