#pragma once

#include "spinbayes/config.hpp"

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

namespace spinbayes {

std::string tool_version();

struct RunOptions {
  std::filesystem::path out_dir;
  bool svg = true;
};

struct RunReport {
  std::vector<std::filesystem::path> outputs;  ///< relative to out_dir, manifest last
  double seconds = 0.0;
};

/// Runs one subcommand, writes its CSVs, SVGs, resolved.toml and manifest.json into
/// opt.out_dir (created if missing) and prints a short summary to `log`. ConfigError when the
/// config has no seed; scenario and I/O errors propagate.
RunReport run(const RunConfig& cfg, const RunOptions& opt, std::ostream& log);

}  // namespace spinbayes
