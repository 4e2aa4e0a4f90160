#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "sslab/app/config.hpp"

namespace sslab::app {

using Json = nlohmann::ordered_json;

enum ExitCode : int { exit_pass = 0, exit_verdict_failure = 1, exit_usage = 2, exit_numeric = 3 };

inline constexpr const char* artifact_version = "0.3.0";

/// One emitted file, relative to the output directory.
struct Artifact {
  std::string name;
  std::string content;
};

/// What an experiment computed, before anything touches the disk.
struct ExperimentResult {
  std::vector<Artifact> files;
  /// Named pass/fail verdicts; the run passes iff all hold.
  std::map<std::string, bool> verdicts;
  /// One-line summary for the console.
  std::string summary;
};

/// Dispatches to the owning module. Pure function of the config.
ExperimentResult execute(const RunConfig& config);

struct RunOptions {
  std::filesystem::path out_dir = "sslab-out";
  bool quiet = false;
  /// Recorded in the manifest so that replay can detect edits.
  std::string config_file;
  std::map<std::string, std::string> flags;
  std::vector<Override> overrides;
};

struct RunOutcome {
  int exit_code = exit_pass;
  Json manifest;
  std::filesystem::path manifest_path;
};

/// Runs the experiment and writes its files and then manifest.json into
/// out_dir, each by write-then-rename. Library errors are recorded in the
/// manifest and mapped to exit codes (usage 2, numeric 3).
RunOutcome run(const RunConfig& config, const RunOptions& options);

struct FileComparison {
  std::string name;
  /// identical | tolerance | differ | modified (checksum no longer matches the manifest)
  std::string status;
  double max_rel_diff = 0.0;
};

struct ReplayReport {
  bool agrees = false;
  std::vector<FileComparison> files;
  std::string note;
  [[nodiscard]] int exit_code() const { return agrees ? exit_pass : exit_verdict_failure; }
};

/// Re-runs the manifest's config in memory and compares every listed file:
/// byte-identical, or equal numeric fields within rel_tol. Throws UsageError
/// when listed files are missing (naming them) or when the config no longer
/// hashes to the recorded value.
ReplayReport replay(const std::filesystem::path& manifest_path, double rel_tol = 1e-12);

/// Compares two texts token by token; numbers within rel_tol count as equal.
/// Returns the largest relative difference, or +inf when non-numeric tokens differ.
double compare_numeric_text(const std::string& a, const std::string& b);

}  // namespace sslab::app
