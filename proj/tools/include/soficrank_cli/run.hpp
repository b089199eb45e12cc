#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "soficrank_cli/job.hpp"

namespace soficrank::cli {

inline constexpr const char* kSchemaVersion = "1";

const std::vector<std::string>& subcommands();

struct RunOptions {
  std::string command;
  std::string job_path;
  std::string out_dir = ".";
  std::size_t threads = 0;  // 0: keep the job's setting
};

/// Runs one subcommand. Writes artifacts under out_dir, a short summary to
/// `out` and diagnostics to `err`; returns the process exit status
/// (0 ok, 1 internal failure, 2 validation error, 3 budget guard).
int run(const RunOptions& options, std::ostream& out, std::ostream& err);

/// The JSON report of a subcommand as text, without writing files.
std::string render_report(const std::string& command, const JobSpec& job);

}  // namespace soficrank::cli
