#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "doctest.h"
#include "json.hpp"
#include "kummerlab/expcli.hpp"

using namespace kummerlab::cli;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig config(const std::string& cmd, std::initializer_list<std::pair<const char*, const char*>> kv) {
  RunConfig c;
  c.command = cmd;
  for (auto [k, v] : kv) apply_setting(c, k, v);
  validate(c);
  return c;
}

std::string field_of(const std::string& cmd, std::initializer_list<std::pair<const char*, const char*>> kv) {
  try {
    config(cmd, kv);
  } catch (const ConfigError& e) {
    return e.field;
  }
  return "";
}

fs::path scratch(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("kummerlab_cli_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  return d;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("configuration validation names the offending field") {
  try {
    config("density", {{"q", "8"}, {"ell", "3"}});
    FAIL("q = 8 accepted");
  } catch (const ConfigError& e) {
    CHECK(e.field == "q");
    CHECK(std::string(e.what()).find("8 is not 1 mod 6") != std::string::npos);
  }
  CHECK(field_of("density", {{"q", "12"}}) == "q");           // not a prime power
  CHECK(field_of("density", {{"q", "13"}, {"ell", "3"}, {"d", "6"}}) == "d");
  CHECK(field_of("density", {{"budget", "0"}}) == "budget");
  CHECK(field_of("density", {{"route", "fast"}}) == "route");
  CHECK(field_of("density", {{"tol-rh", "-1"}}) == "tol_rh");
  CHECK(field_of("vaughan-verify", {{"R", "1,2"}}) == "R");    // not monic
  CHECK(field_of("density", {{"q", "seven"}}) == "q");
  CHECK(field_of("no-such", {}) == "command");
  RunConfig c;
  CHECK_THROWS_AS(apply_setting(c, "colour", "1"), ConfigError);
  CHECK(field_of("density", {{"q", "13"}, {"d", "4"}}).empty());
  const RunConfig ok = config("density", {{"q", "49"}, {"ell", "4"}, {"d", "3"}});
  CHECK(ok.p == 7);
  CHECK(ok.k == 2);
}

TEST_CASE("command defaults are filled in") {
  const RunConfig v = config("vaughan-verify", {});
  CHECK(v.n_min == 1);
  CHECK(v.n_max == 6);
  CHECK(v.R == "1;0,1");
  const RunConfig s = config("sieve-ratio", {});
  CHECK(s.max_deg == 5);
  const RunConfig p = config("prime-cancel", {});
  CHECK(p.n_max == 9);
  CHECK(p.R == "1");
}

TEST_CASE("config file with command-line override") {
  const fs::path d = scratch("cfg");
  fs::create_directories(d);
  {
    std::ofstream f(d / "run.cfg");
    f << "# comment\ncommand = nonvanish\nq = 13\n\nd=5   # trailing\nthreads=2\n";
  }
  RunConfig c;
  load_config_file(c, (d / "run.cfg").string());
  apply_setting(c, "d", "4");
  validate(c);
  CHECK(c.command == "nonvanish");
  CHECK(c.q == 13);
  CHECK(c.d == 4);
  CHECK(c.threads == 2);
  {
    std::ofstream f(d / "bad.cfg");
    f << "q 13\n";
  }
  RunConfig b;
  CHECK_THROWS_AS(load_config_file(b, (d / "bad.cfg").string()), ConfigError);
  fs::remove_all(d);
}

TEST_CASE("nonvanishing reference fractions follow the support-limit formulas") {
  auto value = [](std::pair<std::int64_t, std::int64_t> f) { return static_cast<double>(f.first) / f.second; };
  CHECK(nonvanishing_reference(3) == std::pair<std::int64_t, std::int64_t>{1, 6});
  CHECK(nonvanishing_reference(4) == std::pair<std::int64_t, std::int64_t>{3, 26});
  for (int l = 5; l <= 40; ++l) {
    CAPTURE(l);
    const double L = l;
    double v;
    if (l <= 8) v = (2 * L * L + L - 2) / (2 * L * L - L + 2);
    else if (l <= 10) v = 1 + 2 * (L - 2) / (3 * L * L - 9 * L + 2);
    else v = 1 + 6 * (L - 2) / (9 * L * L - 31 * L + 6);
    CHECK(value(support_limit(l)) == doctest::Approx(v).epsilon(1e-14));
    CHECK(value(nonvanishing_reference(l)) == doctest::Approx(1 - 1 / v).epsilon(1e-12));
    const auto [a, b] = nonvanishing_reference(l);
    CHECK(std::gcd(a, b) == 1);
  }
  CHECK(nonvanishing_reference(7) == std::pair<std::int64_t, std::int64_t>{10, 103});
}

TEST_CASE("CSV cell formatting") {
  CHECK(fmt(0.1) == "0.10000000000000001");
  CHECK(fmt(1.0) == "1");
  CHECK(csv_field("1,0,1") == "\"1,0,1\"");
  CHECK(csv_field("a\"b") == "\"a\"\"b\"");
  CHECK(csv_field("x,\"y") == "\"x,\"\"y\"");
  CHECK(csv_field("plain") == "plain");
}

TEST_CASE("runs write results, manifest and plot; reruns are byte-identical") {
  const fs::path d = scratch("runs");
  std::ostringstream log;
  for (const std::string& cmd : {"density", "family-scan", "nonvanish"}) {
    CAPTURE(cmd);
    RunConfig a = config(cmd, {{"q", "7"}, {"d", "4"}});
    a.out = (d / (cmd + "_a")).string();
    RunConfig b = a;
    b.out = (d / (cmd + "_b")).string();
    b.threads = 2;
    CHECK(run(a, log) == kOk);
    CHECK(run(b, log) == kOk);
    CHECK(slurp(fs::path(a.out) / "results.csv") == slurp(fs::path(b.out) / "results.csv"));
    CHECK(slurp(fs::path(a.out) / "plot.dat") == slurp(fs::path(b.out) / "plot.dat"));
    const auto m = nlohmann::json::parse(slurp(fs::path(a.out) / "manifest.json"));
    CHECK(m["exit_code"] == 0);
    CHECK(m["format_version"] == kFormatVersion);
    CHECK(m["config"]["q"] == "7");
    CHECK(m["field"]["gen"] == "3");
    CHECK(m["truncated"] == false);
    CHECK(fs::exists(fs::path(a.out) / "plot.svg"));
  }
  const std::string csv = slurp(d / "density_a" / "results.csv");
  CHECK(csv.rfind("c,sigma_zeros,sigma_primes,residual\n", 0) == 0);
  CHECK(csv.find("\nmean,") != std::string::npos);
  fs::remove_all(d);
}

TEST_CASE("budget exhaustion flushes partial results with a marker") {
  const fs::path d = scratch("budget");
  std::ostringstream log;
  RunConfig c = config("density", {{"q", "7"}, {"d", "4"}, {"budget", "500"}, {"route", "per-character"}});
  c.out = d.string();
  CHECK(run(c, log) == kTruncated);
  const std::string csv = slurp(d / "results.csv");
  CHECK(csv.find("# truncated:") != std::string::npos);
  const auto m = nlohmann::json::parse(slurp(d / "manifest.json"));
  CHECK(m["truncated"] == true);
  CHECK(m["exit_code"] == kTruncated);
  fs::remove_all(d);
}

TEST_CASE("explicit route on request writes the summary row only") {
  const fs::path d = scratch("explicit");
  std::ostringstream log;
  RunConfig c = config("density", {{"q", "7"}, {"d", "5"}, {"route", "explicit"}});
  c.out = d.string();
  CHECK(run(c, log) == kOk);
  const std::string csv = slurp(d / "results.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
  fs::remove_all(d);
}

TEST_CASE("failed assertion gives exit code 1") {
  const fs::path d = scratch("fail");
  std::ostringstream log;
  RunConfig c = config("prime-cancel", {{"n-min", "1"}, {"n-max", "3"}, {"exponent-bound", "0.1"}, {"exponent-from", "1"}});
  c.out = d.string();
  CHECK(run(c, log) == kAssertionFailed);
  fs::remove_all(d);
}

}  // TEST_SUITE
