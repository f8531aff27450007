#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "lpai_app/config.hpp"

namespace lpai::app {

inline constexpr const char* kSchemaVersion = "lpai-output/1";

/// Revision string baked in at configure time ("unknown" outside a checkout).
const char* git_revision();

struct Artifact {
  std::string name;
  std::string content;
};

struct CommandOutput {
  nlohmann::ordered_json results = nlohmann::ordered_json::object();
  std::vector<Artifact> files;
  std::string text;  // human-readable report for stdout
};

const std::vector<std::string>& subcommands();

/// Runs a subcommand in memory. Throws lpai::Error subclasses on failure and
/// DomainError for an unknown subcommand.
CommandOutput execute(const std::string& subcommand, const ExperimentConfig& cfg);

/// The JSON summary written next to a subcommand's CSV files.
nlohmann::ordered_json make_summary(const std::string& subcommand, const ExperimentConfig& cfg,
                                    const CommandOutput& output);

/// Writes content to path through a sibling temporary file and a rename, so
/// the target is either absent, the previous version, or complete.
void write_atomic(const std::filesystem::path& path, const std::string& content);

/// execute + write every artifact and <subcommand>.summary.json into out_dir.
/// Nothing is written unless the computation succeeds. Returns written paths.
std::vector<std::filesystem::path> run(const std::string& subcommand, const ExperimentConfig& cfg,
                                       const std::filesystem::path& out_dir, bool quiet, std::ostream& out);

/// Full command-line entry point: lpai <subcommand> --config <path> [--out <dir>]
/// [--seed <u64>] [--quiet]. Returns the process exit status.
int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lpai::app
