#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbpsat/experiments.hpp"

namespace sbpsat::cli {

enum ExitCode { kOk = 0, kCheckFailed = 1, kUsage = 2, kNumerical = 3 };

// Configuration problem tied to a field path such as "operator.variant".
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what), field_(field) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct RunConfig {
  std::string preset;
  experiments::PresetOptions params;
  std::vector<int> orders{6};
  std::vector<operators::Variant> variants{operators::Variant::narrow};
  std::vector<penalties::OmegaMode> omega_modes{penalties::OmegaMode{}};
  std::vector<penalties::Flavor> flavors{penalties::Flavor::theorem2};
  std::vector<std::size_t> N{32, 64, 128};
  std::optional<solver::TimeIntegratorConfig> time;
  std::vector<double> omegas;  // sweep only
  std::string csv_path, certificate_path;
  std::size_t threads = 0;
  bool spectrum = true;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Threads from SBPSAT_THREADS, then the config, then hardware.
std::size_t resolve_threads(const RunConfig& cfg);

std::string csv_header();
std::string format_double(double v);

// Returns CSV text; certificates are appended to certs as JSON strings.
std::string run_campaign(const RunConfig& cfg, std::vector<std::string>& certs, std::ostream& warn);
std::string sweep_campaign(const RunConfig& cfg, std::ostream& warn);

void save_operator_set(const operators::SbpOperatorSet& ops, const std::string& dir);
operators::SbpOperatorSet load_operator_set(const std::string& dir);

int exit_code_for(const Error& e);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sbpsat::cli
