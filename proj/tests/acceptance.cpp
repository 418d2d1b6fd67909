// Acceptance run: one PASS/FAIL line per criterion.
// usage: acceptance <path to kummerlab CLI> <scratch directory>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <sys/wait.h>

#include "kummerlab/expcli.hpp"
#include "kummerlab/onelevel.hpp"
#include "kummerlab/verify.hpp"

using namespace kummerlab;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Tally {
  int passed = 0, failed = 0;
  void report(int id, bool ok, const std::string& what, const std::string& detail) {
    (ok ? passed : failed)++;
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << ": " << what << "  [" << detail << "]" << std::endl;
  }
};

std::string summarize(const CheckLog& log, bool* ok) {
  std::ostringstream o;
  *ok = !log.stats().empty();
  for (const CheckStat& s : log.stats()) {
    *ok = *ok && s.ok();
    if (!s.ok()) {
      o << "FAILED " << s.name << " " << s.passed << "/" << s.total;
      if (!s.failures.empty()) o << " first: " << s.failures[0];
      o << "; ";
    }
  }
  std::uint64_t total = 0;
  for (const CheckStat& s : log.stats()) total += s.total;
  o << log.stats().size() << " identities, " << total << " exact comparisons";
  return o.str();
}

void print_stats(const CheckLog& log) {
  for (const CheckStat& s : log.stats())
    std::cout << "      " << s.name << ": " << s.passed << "/" << s.total
              << (s.worst > 0 ? " (worst " + cli::fmt(s.worst) + ")" : "") << "\n";
}

struct Field {
  Field(std::uint32_t p, std::uint32_t k, std::uint32_t ell) : F(p, k, ell), R(F), C(ell, p), E(R, C) {}
  FieldCtx F;
  PolyRing R;
  CycloCtx C;
  GaussEngine E;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& cli, const std::string& args, const fs::path& out) {
  const std::string cmd = "\"" + cli + "\" " + args + " --out \"" + out.string() + "\" > \"" + out.string() + ".log\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: acceptance <kummerlab CLI> <scratch dir>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const fs::path work = argv[2];
  fs::remove_all(work);
  fs::create_directories(work);
  Tally T;
  Field F7(7, 1, 3);

  {  // 1
    const auto t0 = Clock::now();
    const CheckLog ex = gauss_structure_exhaustive(F7.E, 3);
    Field F11(11, 1, 5);
    const CheckLog rnd = gauss_structure_random(F11.E, 500, 20240601, 3);
    const double secs = seconds_since(t0);
    bool a, b;
    const std::string da = summarize(ex, &a), db = summarize(rnd, &b);
    print_stats(ex);
    print_stats(rnd);
    T.report(1, a && b && secs < 120, "Gauss-sum structure, exhaustive deg <= 3 at q=7 and 500 random at q=11, ell=5",
             "q=7: " + da + "; q=11: " + db + "; " + cli::fmt(secs) + " s");
  }
  {  // 2
    const CheckLog log = poisson_suite(F7.E, 4);
    bool ok;
    const std::string d = summarize(log, &ok);
    print_stats(log);
    const bool both = log.find("odd branch") && log.find("even branch");
    T.report(2, ok && both, "Poisson summation, both branches exact, every modulus of degree <= 4", d);
  }

  PrimeTable P7(F7.R, 10);
  const TestFunction fejer = TestFunction::fejer(1.0);
  std::map<int, DensityReport> scans;
  {  // 3 and 4
    bool rh = true, ex = true;
    std::ostringstream d3, d4;
    for (int d : {2, 4, 5}) {
      const DensityReport r = family_average(P7, F7.C, d, fejer);
      scans[d] = r;
      const bool ok3 = r.max_rh_residual < 1e-8 && r.max_fe_residual < 1e-10 && r.max_omega_dev < 1e-10 && r.all_fe_exact;
      const bool ok4 = r.max_residual < 1e-8 && r.max_frequency_residual < 1e-8;
      rh = rh && ok3;
      ex = ex && ok4;
      d3 << "d=" << d << ": " << r.family_size << " characters, RH " << cli::fmt(r.max_rh_residual) << ", FE "
         << cli::fmt(r.max_fe_residual) << ", |omega|-1 " << cli::fmt(r.max_omega_dev) << "; ";
      d4 << "d=" << d << ": sum " << cli::fmt(r.max_residual) << ", frequencies n <= "
         << std::max(fejer.max_frequency(d), fejer.support_edge(d)) << " " << cli::fmt(r.max_frequency_residual) << "; ";
    }
    T.report(3, rh, "zeros on |u| = q^{-1/2}, functional equation, |omega| = 1 for every character, d in {2,4,5}",
             d3.str());
    T.report(4, ex, "explicit formula per character and per frequency, d in {2,4,5}", d4.str());
  }
  {  // 5
    const double dev4 = scans[4].deviation;
    const ExplicitAverage e8 = family_average_explicit(P7, 8, fejer);
    const double dev8 = std::abs(e8.mean_sigma - fejer.hat_at(0, 8));
    T.report(5, dev8 < dev4, "one-level density deviation at d=8 below d=4 (Fejer v=1)",
             "|<Sigma> - phi_hat(0)|: d=4 " + cli::fmt(dev4) + ", d=8 " + cli::fmt(dev8) + " (family " +
                 std::to_string(e8.family_size) + ")");
  }
  {  // 6
    bool ok = true;
    std::ostringstream d;
    auto one = [&](const Field& Fd, PrimeTable& Pt, int dd, double ref, const char* ref_text) {
      const DensityReport r = (Fd.F.q() == 7 && scans.count(dd)) ? scans[dd] : family_average(Pt, Fd.C, dd, fejer);
      ok = ok && r.p(0) >= ref && r.ambiguous == 0;
      d << "q=" << Fd.F.q() << " d=" << dd << ": p_0 " << cli::fmt(r.p(0)) << " vs " << ref_text << ", ambiguous "
        << r.ambiguous << "; ";
    };
    const auto [n3, d3] = cli::nonvanishing_reference(3);
    const auto [n4, d4] = cli::nonvanishing_reference(4);
    one(F7, P7, 4, double(n3) / d3, "1/6");
    one(F7, P7, 5, double(n3) / d3, "1/6");
    Field F9(3, 2, 4);
    PrimeTable P9(F9.R, 5);
    one(F9, P9, 3, double(n4) / d4, "3/26");
    one(F9, P9, 5, double(n4) / d4, "3/26");
    T.report(6, ok, "nonvanishing proportion above the reference, no ambiguous classification", d.str());
  }
  {  // 7
    GaussCounter G(F7.E);
    PsiLab L(G);
    const CheckLog ex = psi_suite(L, 3);
    Field F11(11, 1, 5);
    GaussCounter G11(F11.E);
    PsiLab L11(G11);
    PsiSuiteOptions opt;
    opt.max_coeff_degree = 7;
    const CheckLog spot = psi_spot(L11, 2, 3, 20240601, opt);
    bool a, b;
    const std::string da = summarize(ex, &a), db = summarize(spot, &b);
    print_stats(ex);
    print_stats(spot);
    T.report(7, a && b, "rational generating series: B independence, series match, functional equations, residue",
             "q=7 deg r <= 3: " + da + "; q=11, ell=5 spot: " + db);
  }
  {  // 8
    GaussCounter G(F7.E);
    PsiLab L(G);
    const CheckLog log = series_identity_suite(L, 8);
    bool ok;
    const std::string d = summarize(log, &ok);
    print_stats(log);
    T.report(8, ok, "coprimality, level-sum and expansion identities exact through u^8", d);
  }
  {  // 9
    const CheckLog log = vaughan_suite(F7.E, 1, 6, {Poly::one(), Poly::t()});
    bool ok;
    const std::string d = summarize(log, &ok);
    print_stats(log);
    T.report(9, ok, "Vaughan decomposition identities exact for n <= 6", d);
  }
  std::string prime_a, prime_b;
  {  // 10
    const int ra = run_cli(cli, "prime-cancel --q 7 --ell 3 --n-min 5 --n-max 9", work / "prime_a");
    const int rb = run_cli(cli, "prime-cancel --q 7 --ell 3 --n-min 5 --n-max 9 --threads 2", work / "prime_b");
    prime_a = slurp(work / "prime_a" / "results.csv");
    prime_b = slurp(work / "prime_b" / "results.csv");
    std::ostringstream d;
    std::istringstream in(prime_a);
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::vector<std::string> f;
      std::stringstream ls(line);
      for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
      if (f.size() > 7) d << "n=" << f[1] << " exponent " << f[7] << "; ";
    }
    const bool ok = ra == 0 && rb == 0 && !prime_a.empty() && prime_a == prime_b;
    T.report(10, ok, "prime Gauss-sum exponent below 3/2 for n >= 7, table deterministic",
             d.str() + "exit codes " + std::to_string(ra) + "/" + std::to_string(rb));
  }
  {  // 11
    const auto t0 = Clock::now();
    const int rc = run_cli(cli, "sieve-ratio --q 7 --ell 3 --max-deg 5 --trials 50", work / "sieve");
    const std::string man = slurp(work / "sieve" / "manifest.json");
    const std::string csv = slurp(work / "sieve" / "results.csv");
    const auto rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    T.report(11, rc == 0 && rows == 36,
             "large-sieve ratios finite over m, n <= 5 with 50 trials; duality of refined cells",
             std::to_string(rows) + " cells, CLI exit " + std::to_string(rc) + ", " + cli::fmt(seconds_since(t0)) +
                 " s; see " + (work / "sieve").string());
  }
  {  // 12
    bool ok = !prime_a.empty() && prime_a == prime_b;
    std::ostringstream d;
    d << "prime-cancel reruns " << (ok ? "identical" : "DIFFER") << "; ";
    for (const std::string& args :
         {std::string("density --q 7 --ell 3 --d 5"), std::string("family-scan --q 9 --ell 4 --d 3"),
          std::string("sieve-ratio --q 7 --ell 3 --max-deg 4 --trials 20"),
          std::string("gauss-verify --q 11 --ell 5 --max-deg 2 --poisson-max-deg 2 --samples 200")}) {
      const std::string tag = args.substr(0, args.find(' '));
      const int ra = run_cli(cli, args + " --threads 1", work / (tag + "_1"));
      const int rb = run_cli(cli, args + " --threads 3", work / (tag + "_2"));
      const bool same = slurp(work / (tag + "_1") / "results.csv") == slurp(work / (tag + "_2") / "results.csv") &&
                        slurp(work / (tag + "_1") / "plot.dat") == slurp(work / (tag + "_2") / "plot.dat");
      ok = ok && same && ra == 0 && rb == 0;
      d << tag << " " << (same ? "identical" : "DIFFER") << " (exit " << ra << "/" << rb << "); ";
    }
    T.report(12, ok, "repeated runs with fixed seeds are byte-identical", d.str());
  }

  std::cout << T.passed << " passed, " << T.failed << " failed" << std::endl;
  return T.failed ? 1 : 0;
}
