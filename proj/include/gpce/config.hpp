#pragma once

#include "gpce/bench.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace gpce {

/// Malformed study configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses an INI study description. Sections: problem, study, grid, solver,
/// seeds, sampling. Unknown sections or keys are rejected.
StudyConfig parse_study_config(const std::string& text);
StudyConfig load_study_config(const std::string& path);

/// INI text of a bundled preset ("ishigami-fig3", ...). Throws ConfigError
/// for unknown names.
std::string preset_text(std::string_view name);
std::vector<std::string> preset_names();

/// Canonical INI rendering of a config (used for the run manifest).
std::string render_study_config(const StudyConfig& config);

}  // namespace gpce
