#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sslab/app/config.hpp"
#include "sslab/app/run.hpp"
#include "sslab/errors.hpp"

namespace {

using namespace sslab::app;

struct CommonFlags {
  std::string config;
  std::string out = "sslab-out";
  std::optional<long long> seed;
  bool quiet = false;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sub, CommonFlags& f) {
  sub->add_option("--config", f.config, "Config file of key = value lines")->check(CLI::ExistingFile);
  sub->add_option("--out", f.out, "Output directory")->capture_default_str();
  sub->add_option("--seed", f.seed, "Seed of the randomized suites");
  sub->add_flag("--quiet", f.quiet, "Print nothing on success");
  sub->add_option("--set", f.sets, "Override one config key (key=value); repeatable");
}

int run_experiment(const std::string& kind, const CommonFlags& f) {
  ConfigBuilder builder;
  if (!f.config.empty()) builder.add_file(f.config);
  if (const auto it = builder.file_values().find("kind"); it != builder.file_values().end() && it->second != kind)
    throw sslab::UsageError("config key 'kind': file says '" + it->second + "' but the subcommand is '" + kind + "'");
  for (const auto& s : f.sets) builder.add_flag(s);
  if (f.seed) builder.set_flag("seed", std::to_string(*f.seed));
  builder.set_flag("kind", kind);
  const RunConfig config = builder.build();

  RunOptions options;
  options.out_dir = f.out;
  options.quiet = f.quiet;
  options.config_file = f.config;
  options.flags = builder.flag_values();
  options.overrides = builder.overrides();
  const RunOutcome outcome = run(config, options);

  if (!f.quiet || outcome.exit_code != exit_pass) {
    const auto& m = outcome.manifest;
    std::cout << kind << ": " << m.at("status").get<std::string>() << " - " << m.at("summary").get<std::string>()
              << "\n";
    for (const auto& [name, ok] : m.at("verdicts").items())
      std::cout << "  " << (ok.get<bool>() ? "pass " : "FAIL ") << name << "\n";
    std::cout << "manifest: " << outcome.manifest_path.string() << "\n";
  }
  return outcome.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Self-similar blow-up laboratory for u_t = Δu + |u|^{p-1}u"};
  app.require_subcommand(1);
  app.footer("Config keys:\n" + schema_description());

  CommonFlags flags;
  std::string selected;
  for (const char* kind :
       {"exponents", "verify-identities", "spectrum", "shoot", "scan", "evolve-rescaled", "blowup", "theorem13"}) {
    auto* sub = app.add_subcommand(kind, std::string("Run the ") + kind + " experiment");
    add_common(sub, flags);
    sub->callback([&selected, kind] { selected = kind; });
  }

  std::string manifest;
  double rel_tol = 1e-12;
  bool replay_quiet = false;
  auto* rep = app.add_subcommand("replay", "Re-run a manifest and compare its outputs");
  rep->add_option("manifest", manifest, "Path to manifest.json")->required();
  rep->add_option("--rel-tol", rel_tol, "Relative tolerance for numeric fields")->capture_default_str();
  rep->add_flag("--quiet", replay_quiet, "Print nothing when the outputs agree");
  rep->callback([&selected] { selected = "replay"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_pass : exit_usage;
  }

  try {
    if (selected != "replay") return run_experiment(selected, flags);
    const ReplayReport report = replay(manifest, rel_tol);
    if (!replay_quiet || !report.agrees) {
      for (const auto& f : report.files)
        std::cout << "  " << f.status << " " << f.name
                  << (f.status == "tolerance" || f.status == "differ" ? " (max rel diff " + std::to_string(f.max_rel_diff) + ")"
                                                                      : std::string())
                  << "\n";
      std::cout << (report.agrees ? "replay: agrees" : "replay: DIFFERS") << " - " << report.note << "\n";
    }
    return report.exit_code();
  } catch (const sslab::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const sslab::DomainError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return exit_usage;
  } catch (const sslab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  }
}
