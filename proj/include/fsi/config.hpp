#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "fsi/stepper.hpp"
#include "fsi/studies.hpp"

namespace fsi {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

struct AppConfig {
  SimulationConfig sim;
  StudyConfig study;
};

/// Parses INI-style `key = value` text with [sections]. Unknown sections or
/// keys, malformed numbers and invalid values raise ConfigError carrying
/// the offending line.
AppConfig parse_config(const std::string& text);
AppConfig load_config(const std::string& path);

/// The configuration as INI text, parseable by parse_config.
std::string format_config(const AppConfig& config);

}  // namespace fsi
