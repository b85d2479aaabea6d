// Run and study configuration: a flat sectioned key-value format with strict
// unknown-key rejection and line-numbered errors. Every run artifact embeds
// its fully resolved configuration so reruns are reproducible byte for byte.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "emopt/run_config.hpp"

namespace emopt {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// What to optimize and how; `seeds` holds one master seed per run.
struct RunSpec {
  std::string problem = "ipm-proxy-v1";
  std::string mode = "wr";  // plain | wr | wr-sa
  std::vector<std::uint64_t> seeds = {1};
  RunConfig config;

  void validate() const;
};

// Parameter study: one varied hyperparameter, several values, shared seeds.
struct StudySpec {
  RunSpec base;
  std::string vary;            // n_infill | k | n_doe
  std::vector<long long> values;

  void validate() const;
};

RunSpec parse_run_spec(const std::string& path);
RunSpec parse_run_spec_text(const std::string& text);
std::string serialize_run_spec(const RunSpec& spec);

StudySpec parse_study_spec(const std::string& path);

}  // namespace emopt
