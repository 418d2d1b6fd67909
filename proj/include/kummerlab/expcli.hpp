#pragma once

#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kummerlab::cli {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr int kFormatVersion = 1;  // results.csv, manifest.json and plot layouts

enum ExitCode : int {
  kOk = 0,
  kAssertionFailed = 1,
  kConfigError = 2,
  kTruncated = 3,  // budget reached; partial results written, their assertions passed
  kRuntimeError = 4,
};

struct ConfigError : std::runtime_error {
  ConfigError(std::string field_name, const std::string& message)
      : std::runtime_error(field_name + ": " + message), field(std::move(field_name)) {}
  std::string field;
};

struct RunConfig {
  std::string command;
  std::uint32_t q = 7;
  std::uint32_t p = 0, k = 0;  // derived from q when 0
  std::uint32_t ell = 3;
  int d = 4;                   // family degree
  // -1: the command's default (see README)
  int n_min = -1, n_max = -1;  // vaughan-verify, prime-cancel
  int max_deg = -1;            // gauss-verify (deg c), psi-verify (deg r), sieve-ratio (m, n)
  int poisson_max_deg = 4;     // gauss-verify: moduli f
  int samples = 500;           // gauss-verify random grid
  std::string K = "auto";      // psi-verify series identities: truncation degree or "auto"
  std::string R;               // vaughan-verify, prime-cancel: ';'-separated polynomial texts
  double v = 1.0;              // Fejer support
  std::string route = "auto";  // density: auto | per-character | explicit
  double tol_rh = 1e-8, tol_fe = 1e-10, tol_explicit = 1e-8, tol_psi = 1e-8, tol_sieve = 1e-6;
  double exponent_bound = 1.5;  // prime-cancel: asserted for n >= exponent_from
  int exponent_from = 7;
  int trials = 50;
  bool all_monic_rows = false;
  std::uint64_t refine_budget = 32'000'000;
  std::uint64_t seed = 20240601;
  std::uint64_t budget = std::uint64_t{1} << 30;  // work units, see README
  int threads = 1;
  std::string out = "kummerlab_out";
  std::string cache_dir;  // empty: KUMMERLAB_CACHE or the default location
  bool plot = true;
};

const std::vector<std::string>& subcommands();
// Settable keys in manifest order; "command" is not among them.
const std::vector<std::string>& config_keys();
// key may use '-' or '_'; throws ConfigError naming the key on a bad value or unknown key.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value);
// Flat key=value text; '#' starts a comment, blank lines are skipped.
void load_config_file(RunConfig& cfg, const std::string& path);
// Derives p and k from q and checks every field against the command.
void validate(RunConfig& cfg);
std::string config_value(const RunConfig& cfg, const std::string& key);

// Proportion of nonvanishing central values guaranteed asymptotically for order ell (ell >= 3),
// as a reduced fraction, and the Fourier support limit v(ell) it comes from.
std::pair<std::int64_t, std::int64_t> nonvanishing_reference(int ell);
std::pair<std::int64_t, std::int64_t> support_limit(int ell);

// Runs cfg.command and writes results.csv, manifest.json and, with cfg.plot, plot.svg and
// plot.dat under cfg.out. Progress lines go to log. Returns an ExitCode.
int run(const RunConfig& cfg, std::ostream& log);

// CSV cell helpers (17 significant digits; quoting when the text has a comma or quote).
std::string fmt(double x);
std::string csv_field(const std::string& s);

}  // namespace kummerlab::cli
