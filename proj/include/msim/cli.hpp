#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "msim/audit.hpp"

namespace msim::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfigError = 1,
  kExitIoError = 2,
  kExitAuditFail = 3,
};

enum class OutputFormat { Csv, Json };

struct RunConfig {
  std::string subcommand;
  double c1_mag = 1.0 / std::numbers::sqrt2;
  double c1_phase = 0.0;
  double c2_mag = 1.0 / std::numbers::sqrt2;
  double c2_phase = 0.0;
  double phi_start = 0.0;
  double phi_stop = std::numbers::pi;
  std::size_t points = 25;
  std::uint64_t seed = 1;
  std::uint64_t trials = 0;
  std::vector<double> gamma;
  std::optional<OutputFormat> format;
  std::string out_path;  // empty: standard output

  // chsh
  std::vector<double> angles;
  // nosignal
  Side side = Side::A;
  double local_phase = 0.0;
  std::string fixture_path;
  // schmidt
  std::string state_text;
  std::string state_file;
  std::vector<std::size_t> dims;

  Complex c1() const { return std::polar(c1_mag, c1_phase); }
  Complex c2() const { return std::polar(c2_mag, c2_phase); }
};

/// Runs one subcommand. `args` excludes the program name. Output goes to the
/// configured path, or to `out` when no path is set; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 15 significant digits; magnitudes below 5e-16 print as 0.
std::string format_number(double x);

nlohmann::json to_json(const AuditReport& report);

/// Parses `phi_remote,p11,p12,p21,p22` rows (header required).
std::vector<std::pair<double, JointDistribution>> parse_fixture(std::istream& in);

/// Parses "mag:phase" pairs separated by commas or whitespace.
std::vector<Complex> parse_amplitudes(const std::string& text);

}  // namespace msim::cli
