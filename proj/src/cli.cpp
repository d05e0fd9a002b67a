#include "msim/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"

namespace msim::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommandOutput {
  std::string text;
  int exit_code = kExitOk;
};

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) throw ConfigError(std::string(what) + " must be finite");
}

/// Checks everything that does not depend on the subcommand.
void validate_common(const RunConfig& cfg) {
  for (auto [x, name] : {std::pair{cfg.c1_mag, "--c1-mag"}, {cfg.c1_phase, "--c1-phase"},
                         {cfg.c2_mag, "--c2-mag"}, {cfg.c2_phase, "--c2-phase"},
                         {cfg.phi_start, "--phi-start"}, {cfg.phi_stop, "--phi-stop"},
                         {cfg.local_phase, "--local-phase"}})
    require_finite(x, name);
  if (cfg.c1_mag < 0.0 || cfg.c2_mag < 0.0) throw ConfigError("amplitude magnitudes must be >= 0");
  const double norm2 = cfg.c1_mag * cfg.c1_mag + cfg.c2_mag * cfg.c2_mag;
  if (std::abs(norm2 - 1.0) > kTolNorm) {
    std::ostringstream msg;
    msg << "amplitudes not normalized: |c1|^2 + |c2|^2 = " << format_number(norm2);
    throw ConfigError(msg.str());
  }
  if (cfg.points < 1) throw ConfigError("--points must be at least 1");
  for (double g : cfg.gamma)
    if (!std::isfinite(g) || g < 0.0 || g > 1.0) throw ConfigError("--gamma values must lie in [0, 1]");
}

OutputFormat resolve_format(const RunConfig& cfg, OutputFormat fallback, bool csv_supported) {
  const OutputFormat fmt = cfg.format.value_or(fallback);
  if (fmt == OutputFormat::Csv && !csv_supported)
    throw ConfigError(cfg.subcommand + " only supports --format json");
  return fmt;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CommandOutput cmd_rto_sweep(const RunConfig& cfg) {
  validate_common(cfg);
  const OutputFormat fmt = resolve_format(cfg, OutputFormat::Csv, true);
  const Complex c1 = cfg.c1();
  const Complex c2 = cfg.c2();
  const std::vector<double> grid = linspace(cfg.phi_start, cfg.phi_stop, cfg.points);
  const bool sampled = cfg.trials > 0;

  std::ostringstream csv;
  json rows = json::array();
  csv << "phi_diff,E_exact,p_agree" << (sampled ? ",E_hat,stderr" : "") << "\n";
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const JointDistribution joint = rto_joint({grid[i], 0.0}, c1, c2);
    const double e = CorrelationValue::from(joint).e;
    csv << format_number(grid[i]) << ',' << format_number(e) << ','
        << format_number(joint.agreement());
    json row{{"phi_diff", grid[i]}, {"e_exact", e}, {"p_agree", joint.agreement()}};
    if (sampled) {
      const EventTally tally = sample_events(joint, cfg.trials, derive_stream_seed(cfg.seed, i));
      const EstimatedCorrelation est = estimate_correlation(tally);
      csv << ',' << format_number(est.e_hat) << ',' << format_number(est.stderr_);
      row["e_hat"] = est.e_hat;
      row["stderr"] = est.stderr_;
    }
    csv << "\n";
    rows.push_back(std::move(row));
  }
  if (fmt == OutputFormat::Csv) return {csv.str()};
  json doc{{"rows", std::move(rows)}};
  if (sampled) {
    doc["trials"] = cfg.trials;
    doc["seed"] = cfg.seed;
    doc["prng"] = std::string(kPrngAlgorithm) + " v" + std::to_string(kPrngVersion);
  }
  return {dump(doc)};
}

CommandOutput cmd_chsh(const RunConfig& cfg) {
  validate_common(cfg);
  resolve_format(cfg, OutputFormat::Json, false);
  std::array<double, 4> angles = kChshOptimalAngles;
  if (!cfg.angles.empty()) {
    if (cfg.angles.size() != 4) throw ConfigError("--angles takes exactly four values a,a',b,b'");
    for (std::size_t k = 0; k < 4; ++k) {
      require_finite(cfg.angles[k], "--angles");
      angles[k] = cfg.angles[k];
    }
  }
  const ChshResult r = chsh_terms(angles[0], angles[1], angles[2], angles[3], cfg.c1(), cfg.c2());
  const json doc{
      {"angles", {{"a", angles[0]}, {"a_prime", angles[1]}, {"b", angles[2]}, {"b_prime", angles[3]}}},
      {"e_values",
       {{"e_a_b", r.correlations[0]},
        {"e_a_b_prime", r.correlations[1]},
        {"e_a_prime_b", r.correlations[2]},
        {"e_a_prime_b_prime", r.correlations[3]}}},
      {"s", r.value},
      {"violates", r.violates()}};
  return {dump(doc)};
}

CommandOutput cmd_visibility(const RunConfig& cfg) {
  validate_common(cfg);
  const OutputFormat fmt = resolve_format(cfg, OutputFormat::Csv, true);
  const std::vector<double> gammas =
      cfg.gamma.empty() ? std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0} : cfg.gamma;
  std::ostringstream csv;
  json rows = json::array();
  csv << "gamma,visibility,coherence\n";
  for (double g : gammas) {
    const DetectorOverlap overlap(Complex{g, 0.0});
    const double v = fringe_visibility(overlap, cfg.c1(), cfg.c2());
    const double c = coherence(local_state(make_measurement_state(cfg.c1(), cfg.c2(), overlap), Side::S));
    csv << format_number(g) << ',' << format_number(v) << ',' << format_number(c) << "\n";
    rows.push_back({{"gamma", g}, {"visibility", v}, {"coherence", c}});
  }
  if (fmt == OutputFormat::Csv) return {csv.str()};
  return {dump(json{{"rows", std::move(rows)}})};
}

std::vector<std::pair<double, JointDistribution>> load_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read fixture " + path);
  try {
    return parse_fixture(in);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("fixture " + path + ": " + e.what());
  }
}

CommandOutput cmd_nosignal(const RunConfig& cfg) {
  validate_common(cfg);
  resolve_format(cfg, OutputFormat::Json, false);
  if (cfg.trials > 0 && cfg.trials < kMinAuditTrials)
    throw ConfigError("--trials must be 0 (exact audit) or at least " +
                      std::to_string(kMinAuditTrials));

  std::vector<double> grid;
  JointSource source;
  if (!cfg.fixture_path.empty()) {
    auto rows = load_fixture(cfg.fixture_path);
    std::map<double, JointDistribution> table;
    for (const auto& [phi, d] : rows) {
      grid.push_back(phi);
      table.emplace(phi, d);
    }
    source = [table = std::move(table)](double phi) { return table.at(phi); };
  } else {
    grid = linspace(cfg.phi_start, cfg.phi_stop, cfg.points);
    source = rto_source(cfg.side, cfg.local_phase, cfg.c1(), cfg.c2());
  }

  AuditReport report = cfg.trials > 0 ? audit_sampled(cfg.side, grid, cfg.trials, cfg.seed, source)
                                      : audit_exact(cfg.side, grid, source);
  report.local_phase = cfg.local_phase;
  json doc = to_json(report);
  if (!cfg.fixture_path.empty()) doc["fixture"] = cfg.fixture_path;
  return {dump(doc), report.pass() ? kExitOk : kExitAuditFail};
}

BipartitePureState state_from_config(const RunConfig& cfg) {
  if (!cfg.state_text.empty() && !cfg.state_file.empty())
    throw ConfigError("use either --state or --state-file, not both");
  std::string text = cfg.state_text;
  if (!cfg.state_file.empty()) {
    std::ifstream in(cfg.state_file);
    if (!in) throw IoError("cannot read state file " + cfg.state_file);
    std::ostringstream buf;
    buf << in.rdbuf();
    text = buf.str();
  }
  if (text.empty()) {
    if (cfg.gamma.size() > 1) throw ConfigError("schmidt takes a single --gamma value");
    const double g = cfg.gamma.empty() ? 0.0 : cfg.gamma.front();
    return make_measurement_state(cfg.c1(), cfg.c2(), DetectorOverlap(Complex{g, 0.0}));
  }

  std::vector<Complex> amps;
  try {
    amps = parse_amplitudes(text);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed state: ") + e.what());
  }
  Dims dims{2, 2};
  if (!cfg.dims.empty()) {
    if (cfg.dims.size() != 2 || cfg.dims[0] == 0 || cfg.dims[1] == 0)
      throw ConfigError("--dims takes two positive integers dS,dA");
    dims = {cfg.dims[0], cfg.dims[1]};
  }
  if (amps.size() != dims.total())
    throw ConfigError("malformed state: " + std::to_string(amps.size()) + " amplitudes for dims " +
                      std::to_string(dims.s) + "x" + std::to_string(dims.a));
  if (dims.total() > kMaxDim) throw ConfigError("state dimension exceeds " + std::to_string(kMaxDim));
  CVector v(static_cast<Eigen::Index>(amps.size()));
  for (std::size_t k = 0; k < amps.size(); ++k) v(static_cast<Eigen::Index>(k)) = amps[k];
  try {
    return BipartitePureState(StateVector(std::move(v)), dims);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("malformed state: ") + e.what());
  }
}

CommandOutput cmd_schmidt(const RunConfig& cfg) {
  validate_common(cfg);
  resolve_format(cfg, OutputFormat::Json, false);
  const BipartitePureState psi = state_from_config(cfg);
  const SchmidtForm form = schmidt(psi);
  const double error = (form.reconstruct() - psi.vector().amps()).cwiseAbs().maxCoeff();
  const json doc{{"dims", {psi.dims().s, psi.dims().a}},
                 {"coeffs", form.coeffs},
                 {"rank", form.rank()},
                 {"degenerate", form.degenerate},
                 {"reconstruction_error", error}};
  return {dump(doc)};
}

void write_output(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.out_path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open " + cfg.out_path + " for writing");
  file << text;
  file.flush();
  if (!file) throw IoError("failed writing " + cfg.out_path);
}

void add_common_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--c1-mag", cfg.c1_mag, "Magnitude of c1")->capture_default_str();
  sub->add_option("--c1-phase", cfg.c1_phase, "Phase of c1 (rad)")->capture_default_str();
  sub->add_option("--c2-mag", cfg.c2_mag, "Magnitude of c2")->capture_default_str();
  sub->add_option("--c2-phase", cfg.c2_phase, "Phase of c2 (rad)")->capture_default_str();
  sub->add_option("--phi-start", cfg.phi_start, "First phase of the grid (rad)")->capture_default_str();
  sub->add_option("--phi-stop", cfg.phi_stop, "Last phase of the grid (rad)")->capture_default_str();
  sub->add_option("--points", cfg.points, "Number of grid points")->capture_default_str();
  sub->add_option("--seed", cfg.seed, "PRNG seed")->capture_default_str();
  sub->add_option("--trials", cfg.trials, "Sampled coincidences per point (0: exact only)")
      ->capture_default_str();
  sub->add_option("--gamma", cfg.gamma, "Detector overlap value(s) in [0, 1]")->delimiter(',');
  sub->add_option_function<std::string>(
         "--format",
         [&cfg](const std::string& f) { cfg.format = f == "csv" ? OutputFormat::Csv : OutputFormat::Json; },
         "Output format")
      ->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", cfg.out_path, "Output path (default: stdout)");
}

}  // namespace

std::string format_number(double x) {
  if (std::abs(x) < 5e-16) x = 0.0;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

nlohmann::json to_json(const AuditReport& report) {
  return json{{"side", to_string(report.side)},
              {"mode", to_string(report.mode)},
              {"local_phase", report.local_phase},
              {"grid", report.grid},
              {"local_p1", report.local_p1},
              {"max_deviation", report.max_deviation},
              {"tolerance", report.tolerance},
              {"trials_per_point", report.trials_per_point},
              {"seed", report.seed},
              {"verdict", report.pass() ? "pass" : "fail"}};
}

std::vector<std::pair<double, JointDistribution>> parse_fixture(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty fixture");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "phi_remote,p11,p12,p21,p22")
    throw std::invalid_argument("expected header phi_remote,p11,p12,p21,p22");
  std::vector<std::pair<double, JointDistribution>> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<double, 5> v{};
    std::istringstream fields(line);
    std::string field;
    std::size_t n = 0;
    while (std::getline(fields, field, ',')) {
      if (n >= v.size()) throw std::invalid_argument("too many fields on line " + std::to_string(lineno));
      std::size_t used = 0;
      try {
        v[n] = std::stod(field, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != field.size())
        throw std::invalid_argument("bad number '" + field + "' on line " + std::to_string(lineno));
      ++n;
    }
    if (n != v.size()) throw std::invalid_argument("expected 5 fields on line " + std::to_string(lineno));
    for (const auto& row : rows)
      if (row.first == v[0]) throw std::invalid_argument("duplicate phi_remote on line " + std::to_string(lineno));
    rows.emplace_back(v[0], JointDistribution::make(v[1], v[2], v[3], v[4]));
  }
  if (rows.empty()) throw std::invalid_argument("fixture has no rows");
  return rows;
}

std::vector<Complex> parse_amplitudes(const std::string& text) {
  std::string normalized = text;
  for (char& ch : normalized)
    if (ch == ',' || ch == '\n' || ch == '\r' || ch == '\t') ch = ' ';
  std::istringstream tokens(normalized);
  std::vector<Complex> out;
  std::string tok;
  while (tokens >> tok) {
    const auto colon = tok.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("expected mag:phase, got '" + tok + "'");
    const std::string mag_s = tok.substr(0, colon);
    const std::string phase_s = tok.substr(colon + 1);
    std::size_t used_mag = 0;
    std::size_t used_phase = 0;
    double mag = 0.0;
    double phase = 0.0;
    try {
      mag = std::stod(mag_s, &used_mag);
      phase = std::stod(phase_s, &used_phase);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad amplitude '" + tok + "'");
    }
    if (used_mag != mag_s.size() || used_phase != phase_s.size() || !std::isfinite(mag) ||
        !std::isfinite(phase) || mag < 0.0)
      throw std::invalid_argument("bad amplitude '" + tok + "'");
    out.push_back(std::polar(mag, phase));
  }
  if (out.empty()) throw std::invalid_argument("no amplitudes given");
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"msim: two-photon measurement-state simulator"};
  app.require_subcommand(1);

  struct Entry {
    const char* name;
    const char* help;
    CommandOutput (*fn)(const RunConfig&);
    RunConfig cfg;
  };
  std::array<Entry, 5> entries{{
      {"rto-sweep", "Correlation fringe versus phase difference", cmd_rto_sweep, {}},
      {"chsh", "CHSH value at four analyzer phases", cmd_chsh, {}},
      {"visibility", "Single-photon fringe visibility versus detector overlap", cmd_visibility, {}},
      {"nosignal", "Audit singles for dependence on the remote phase", cmd_nosignal, {}},
      {"schmidt", "Schmidt decomposition of a bipartite pure state", cmd_schmidt, {}},
  }};

  std::vector<CLI::App*> subs;
  for (auto& e : entries) {
    e.cfg.subcommand = e.name;
    if (e.name == std::string_view("nosignal")) e.cfg.phi_stop = kTwoPi;
    CLI::App* sub = app.add_subcommand(e.name, e.help);
    add_common_options(sub, e.cfg);
    subs.push_back(sub);
  }
  subs[1]->add_option("--angles", entries[1].cfg.angles, "a,a',b,b' in radians")->delimiter(',');
  subs[3]
      ->add_option_function<std::string>(
          "--side", [&cfg = entries[3].cfg](const std::string& s) { cfg.side = s == "S" ? Side::S : Side::A; },
          "Audited side (S or A; default A)")
      ->check(CLI::IsMember({"S", "A"}));
  subs[3]->add_option("--local-phase", entries[3].cfg.local_phase, "Audited side's own phase (rad)");
  subs[3]->add_option("--fixture", entries[3].cfg.fixture_path,
                      "CSV of joint distributions per remote phase to audit instead of the circuit");
  subs[4]->add_option("--state", entries[4].cfg.state_text, "Amplitudes as mag:phase,mag:phase,...");
  subs[4]->add_option("--state-file", entries[4].cfg.state_file, "File of mag:phase amplitudes");
  subs[4]->add_option("--dims", entries[4].cfg.dims, "Subsystem dimensions dS,dA")->delimiter(',');

  std::vector<const char*> argv{"msim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfigError;
  }

  for (std::size_t k = 0; k < entries.size(); ++k) {
    if (!subs[k]->parsed()) continue;
    const RunConfig& cfg = entries[k].cfg;
    try {
      const CommandOutput result = entries[k].fn(cfg);
      write_output(cfg, result.text, out);
      return result.exit_code;
    } catch (const IoError& e) {
      err << "error: " << e.what() << "\n";
      return kExitIoError;
    } catch (const ConfigError& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const std::length_error& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfigError;
    }
  }
  return kExitConfigError;
}

}  // namespace msim::cli
