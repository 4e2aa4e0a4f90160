#include "sslab/app/run.hpp"

#include <chrono>
#include <charconv>
#include <cmath>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <limits>

#include "sslab/app/output.hpp"
#include "sslab/errors.hpp"

namespace sslab::app {

namespace {

std::string timestamp() {
  const auto now = std::chrono::floor<std::chrono::milliseconds>(std::chrono::system_clock::now());
  return fmt::format("{:%FT%TZ}", now);
}

Json config_json(const RunConfig& config) {
  Json j = Json::object();
  for (const auto& key : config_keys()) {
    const auto& v = config.values().at(key);
    std::visit([&](const auto& x) { j[key] = x; }, v);
  }
  return j;
}

struct Failure {
  int code;
  std::string type;
  std::string message;
};

/// Runs the experiment, mapping library errors to exit codes.
std::variant<ExperimentResult, Failure> guarded_execute(const RunConfig& config) {
  try {
    return execute(config);
  } catch (const UsageError& e) {
    return Failure{exit_usage, "usage", e.what()};
  } catch (const DomainError& e) {
    return Failure{exit_usage, "domain", e.what()};
  } catch (const PreconditionError& e) {
    return Failure{exit_numeric, "precondition", e.what()};
  } catch (const NumericError& e) {
    return Failure{exit_numeric, "numeric", e.what()};
  } catch (const Error& e) {
    return Failure{exit_numeric, "error", e.what()};
  }
}

bool parse_number(std::string_view s, double& out) {
  if (s == "nan") {
    out = std::numeric_limits<double>::quiet_NaN();
    return true;
  }
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::vector<std::string_view> tokens(const std::string& text) {
  std::vector<std::string_view> out;
  const std::string_view delims = " \t\r\n,:[]{}\"";
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && delims.find(text[i]) != std::string_view::npos) ++i;
    const std::size_t b = i;
    while (i < text.size() && delims.find(text[i]) == std::string_view::npos) ++i;
    if (i > b) out.emplace_back(text.data() + b, i - b);
  }
  return out;
}

}  // namespace

double compare_numeric_text(const std::string& a, const std::string& b) {
  const auto ta = tokens(a);
  const auto tb = tokens(b);
  if (ta.size() != tb.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i] == tb[i]) continue;
    double x = 0.0;
    double y = 0.0;
    if (!parse_number(ta[i], x) || !parse_number(tb[i], y)) return std::numeric_limits<double>::infinity();
    if (std::isnan(x) || std::isnan(y)) return std::numeric_limits<double>::infinity();
    const double scale = std::max({std::abs(x), std::abs(y), std::numeric_limits<double>::min()});
    worst = std::max(worst, std::abs(x - y) / scale);
  }
  return worst;
}

RunOutcome run(const RunConfig& config, const RunOptions& options) {
  Json m;
  m["artifact"] = "sslab";
  m["artifact_version"] = artifact_version;
  m["kind"] = to_string(config.kind());
  m["started"] = timestamp();
  m["config"] = config_json(config);
  m["config_text"] = config.serialize();
  m["config_hash"] = config.hash();
  m["config_file"] = options.config_file.empty() ? Json(nullptr) : Json(options.config_file);
  m["flags"] = options.flags;
  m["overrides"] = Json::array();
  for (const auto& o : options.overrides)
    m["overrides"].push_back(Json{{"key", o.key}, {"file_value", o.file_value}, {"flag_value", o.flag_value}});
  m["seed"] = config.integer("seed");

  RunOutcome outcome;
  auto result = guarded_execute(config);
  m["files"] = Json::array();
  if (auto* r = std::get_if<ExperimentResult>(&result)) {
    for (const auto& f : r->files) {
      atomic_write(options.out_dir / f.name, f.content);
      m["files"].push_back(Json{{"name", f.name}, {"sha256", sha256_hex(f.content)}, {"bytes", f.content.size()}});
    }
    bool pass = true;
    m["verdicts"] = Json::object();
    for (const auto& [name, ok] : r->verdicts) {
      m["verdicts"][name] = ok;
      pass = pass && ok;
    }
    outcome.exit_code = pass ? exit_pass : exit_verdict_failure;
    m["status"] = pass ? "pass" : "verdict-failure";
    m["summary"] = r->summary;
    m["error"] = nullptr;
  } else {
    const auto& f = std::get<Failure>(result);
    outcome.exit_code = f.code;
    m["verdicts"] = Json::object();
    m["status"] = "error";
    m["summary"] = f.message;
    m["error"] = Json{{"type", f.type}, {"message", f.message}};
  }
  m["exit_code"] = outcome.exit_code;
  m["finished"] = timestamp();

  outcome.manifest_path = options.out_dir / "manifest.json";
  atomic_write(outcome.manifest_path, m.dump(2) + "\n");
  outcome.manifest = std::move(m);
  return outcome;
}

ReplayReport replay(const std::filesystem::path& manifest_path, double rel_tol) {
  Json m;
  try {
    m = Json::parse(read_file(manifest_path));
  } catch (const Json::exception& e) {
    throw UsageError(fmt::format("'{}' is not a manifest: {}", manifest_path.string(), e.what()));
  }
  const auto dir = manifest_path.parent_path();

  const RunConfig config = parse_config(m.at("config_text").get<std::string>());
  const auto recorded_hash = m.at("config_hash").get<std::string>();
  if (config.hash() != recorded_hash)
    throw UsageError("config hash mismatch: the manifest's config snapshot was edited");
  if (m.at("config_file").is_string()) {
    const std::filesystem::path file = m.at("config_file").get<std::string>();
    if (std::filesystem::exists(file)) {
      ConfigBuilder b;
      b.add_file(file.string());
      for (const auto& [k, v] : m.at("flags").items()) b.set_flag(k, v.get<std::string>());
      if (b.build().hash() != recorded_hash)
        throw UsageError(fmt::format("config hash mismatch: '{}' changed since the run; refusing to replay", file.string()));
    }
  }

  std::string missing;
  for (const auto& f : m.at("files")) {
    const auto name = f.at("name").get<std::string>();
    if (!std::filesystem::exists(dir / name)) missing += (missing.empty() ? "" : ", ") + name;
  }
  if (!missing.empty()) throw UsageError("replay: missing files: " + missing);

  ReplayReport report;
  report.agrees = true;
  auto rerun = guarded_execute(config);
  const auto* fresh = std::get_if<ExperimentResult>(&rerun);
  if (!fresh) {
    const auto& fail = std::get<Failure>(rerun);
    const bool same = m.at("status") == "error" && m.at("error").at("message") == fail.message;
    report.agrees = same;
    report.note = same ? "the run fails identically: " + fail.message : "re-run failed: " + fail.message;
    return report;
  }

  for (const auto& f : m.at("files")) {
    FileComparison cmp;
    cmp.name = f.at("name").get<std::string>();
    const std::string disk = read_file(dir / cmp.name);
    const auto it = std::find_if(fresh->files.begin(), fresh->files.end(),
                                 [&](const Artifact& a) { return a.name == cmp.name; });
    if (sha256_hex(disk) != f.at("sha256").get<std::string>()) {
      cmp.status = "modified";
    } else if (it == fresh->files.end()) {
      cmp.status = "differ";
      cmp.max_rel_diff = std::numeric_limits<double>::infinity();
    } else if (it->content == disk) {
      cmp.status = "identical";
    } else {
      cmp.max_rel_diff = compare_numeric_text(disk, it->content);
      cmp.status = cmp.max_rel_diff <= rel_tol ? "tolerance" : "differ";
    }
    report.agrees = report.agrees && (cmp.status == "identical" || cmp.status == "tolerance");
    report.files.push_back(std::move(cmp));
  }
  for (const auto& [name, ok] : fresh->verdicts) {
    const auto& recorded = m.at("verdicts");
    if (!recorded.contains(name) || recorded.at(name).get<bool>() != ok) {
      report.agrees = false;
      report.note += fmt::format("verdict '{}' changed; ", name);
    }
  }
  if (report.note.empty()) report.note = report.agrees ? "outputs reproduced" : "outputs differ";
  return report;
}

}  // namespace sslab::app
