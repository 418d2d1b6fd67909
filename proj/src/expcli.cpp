#include "kummerlab/expcli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "kummerlab/cache.hpp"
#include "kummerlab/onelevel.hpp"
#include "kummerlab/simd.hpp"
#include "kummerlab/verify.hpp"

namespace kummerlab::cli {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// ---------------------------------------------------------------- formatting

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

namespace {

std::string fmt_u(std::uint64_t x) { return std::to_string(x); }
std::string fmt_i(std::int64_t x) { return std::to_string(x); }

// ---------------------------------------------------------------- config keys

int parse_int(const std::string& key, const std::string& v) {
  int x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key, "'" + v + "' is not an integer");
  return x;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ConfigError(key, "'" + v + "' is not a nonnegative integer");
  return x;
}

std::uint32_t parse_u32(const std::string& key, const std::string& v) {
  const std::uint64_t x = parse_u64(key, v);
  if (x > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(key, "'" + v + "' is too large");
  return static_cast<std::uint32_t>(x);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || p != v.data() + v.size()) throw ConfigError(key, "'" + v + "' is not a number");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ConfigError(key, "'" + v + "' is not a boolean");
}

struct Key {
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define KL_INT(field) \
  Key{#field, [](RunConfig& c, const std::string& v) { c.field = parse_int(#field, v); }, \
      [](const RunConfig& c) { return fmt_i(c.field); }}
#define KL_U32(field) \
  Key{#field, [](RunConfig& c, const std::string& v) { c.field = parse_u32(#field, v); }, \
      [](const RunConfig& c) { return fmt_u(c.field); }}
#define KL_U64(field) \
  Key{#field, [](RunConfig& c, const std::string& v) { c.field = parse_u64(#field, v); }, \
      [](const RunConfig& c) { return fmt_u(c.field); }}
#define KL_DBL(field) \
  Key{#field, [](RunConfig& c, const std::string& v) { c.field = parse_double(#field, v); }, \
      [](const RunConfig& c) { return fmt(c.field); }}
#define KL_STR(field) \
  Key{#field, [](RunConfig& c, const std::string& v) { c.field = v; }, [](const RunConfig& c) { return c.field; }}
#define KL_BOOL(field) \
  Key{#field, [](RunConfig& c, const std::string& v) { c.field = parse_bool(#field, v); }, \
      [](const RunConfig& c) { return std::string(c.field ? "true" : "false"); }}

const std::vector<Key>& keys() {
  static const std::vector<Key> k = {
      KL_U32(q),           KL_U32(p),          KL_U32(k),          KL_U32(ell),
      KL_INT(d),           KL_INT(n_min),      KL_INT(n_max),      KL_INT(max_deg),
      KL_INT(poisson_max_deg), KL_INT(samples), KL_STR(K),         KL_STR(R),
      KL_DBL(v),           KL_STR(route),      KL_DBL(tol_rh),     KL_DBL(tol_fe),
      KL_DBL(tol_explicit), KL_DBL(tol_psi),   KL_DBL(tol_sieve),  KL_DBL(exponent_bound),
      KL_INT(exponent_from), KL_INT(trials),   KL_BOOL(all_monic_rows), KL_U64(refine_budget),
      KL_U64(seed),        KL_U64(budget),     KL_INT(threads),    KL_STR(out),
      KL_STR(cache_dir),   KL_BOOL(plot),
  };
  return k;
}

#undef KL_INT
#undef KL_U32
#undef KL_U64
#undef KL_DBL
#undef KL_STR
#undef KL_BOOL

const Key* find_key(std::string key) {
  std::replace(key.begin(), key.end(), '-', '_');
  for (const Key& k : keys())
    if (k.name == key) return &k;
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::uint64_t sat_pow(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / b) return std::numeric_limits<std::uint64_t>::max();
    r *= b;
  }
  return r;
}

std::pair<std::int64_t, std::int64_t> reduced(std::int64_t a, std::int64_t b) {
  const std::int64_t g = std::gcd(a, b);
  return {a / g, b / g};
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> s = {"family-scan",    "density",    "nonvanish",   "gauss-verify",
                                             "psi-verify",     "vaughan-verify", "sieve-ratio", "prime-cancel"};
  return s;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const Key& k : keys()) n.push_back(k.name);
    return n;
  }();
  return names;
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  const Key* k = find_key(key);
  if (!k) throw ConfigError(key, "unknown setting");
  k->set(cfg, trim(value));
}

void load_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config", "cannot read " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config", path + ":" + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key == "command") {
      cfg.command = trim(line.substr(eq + 1));
      continue;
    }
    apply_setting(cfg, key, line.substr(eq + 1));
  }
}

std::string config_value(const RunConfig& cfg, const std::string& key) {
  if (key == "command") return cfg.command;
  const Key* k = find_key(key);
  if (!k) throw ConfigError(key, "unknown setting");
  return k->get(cfg);
}

std::pair<std::int64_t, std::int64_t> support_limit(int ell) {
  const std::int64_t l = ell;
  if (l < 3) throw std::invalid_argument("support limit needs ell >= 3");
  if (l == 3) return {6, 5};
  if (l == 4) return {26, 23};
  std::int64_t den;
  if (l <= 8) den = 2 * l * l - l + 2;
  else if (l <= 10) den = 3 * l * l - 9 * l + 2;
  else den = 9 * l * l - 31 * l + 6;
  const std::int64_t num = (l <= 10 ? 2 : 6) * (l - 2);
  return reduced(den + num, den);
}

std::pair<std::int64_t, std::int64_t> nonvanishing_reference(int ell) {
  // 1 - 1/v
  const auto [a, b] = support_limit(ell);
  return reduced(a - b, a);
}

void validate(RunConfig& cfg) {
  const auto& cmds = subcommands();
  if (std::find(cmds.begin(), cmds.end(), cfg.command) == cmds.end())
    throw ConfigError("command", "'" + cfg.command + "' is not a subcommand");

  if (cfg.q < 3) throw ConfigError("q", std::to_string(cfg.q) + " is too small");
  std::uint32_t p = 2;
  while (cfg.q % p) ++p;
  std::uint32_t k = 0;
  for (std::uint64_t x = 1; x < cfg.q; x *= p) ++k;
  if (sat_pow(p, static_cast<int>(k)) != cfg.q) throw ConfigError("q", std::to_string(cfg.q) + " is not a prime power");
  if (cfg.p && cfg.p != p) throw ConfigError("p", std::to_string(cfg.p) + " does not match q = " + std::to_string(cfg.q));
  if (cfg.k && cfg.k != k) throw ConfigError("k", std::to_string(cfg.k) + " does not match q = " + std::to_string(cfg.q));
  cfg.p = p;
  cfg.k = k;
  if (cfg.ell < 2) throw ConfigError("ell", "must be at least 2");
  if (cfg.q % (2 * cfg.ell) != 1)
    throw ConfigError("q", std::to_string(cfg.q) + " is not 1 mod " + std::to_string(2 * cfg.ell) + " (q must be 1 mod 2*ell)");
  if (cfg.budget == 0) throw ConfigError("budget", "must be positive");
  if (cfg.threads < 1) throw ConfigError("threads", "must be at least 1");
  if (cfg.trials < 1) throw ConfigError("trials", "must be at least 1");
  if (cfg.samples < 0) throw ConfigError("samples", "must be nonnegative");
  for (auto [name, tol] : {std::pair{"tol_rh", cfg.tol_rh}, {"tol_fe", cfg.tol_fe}, {"tol_explicit", cfg.tol_explicit},
                           {"tol_psi", cfg.tol_psi}, {"tol_sieve", cfg.tol_sieve}})
    if (!(tol > 0)) throw ConfigError(name, "must be positive");
  if (cfg.out.empty()) throw ConfigError("out", "must not be empty");

  const std::string& c = cfg.command;
  if (c == "family-scan" || c == "density" || c == "nonvanish") {
    if (cfg.d < 2) throw ConfigError("d", "must be at least 2");
    if (cfg.d % static_cast<int>(cfg.ell) == 0)
      throw ConfigError("d", "ell = " + std::to_string(cfg.ell) + " divides d = " + std::to_string(cfg.d) +
                                 "; the family needs ell not dividing d");
    if (!(cfg.v > 0)) throw ConfigError("v", "must be positive");
    if (cfg.route != "auto" && cfg.route != "per-character" && cfg.route != "explicit")
      throw ConfigError("route", "'" + cfg.route + "' is not auto, per-character or explicit");
    if (c == "nonvanish" && cfg.ell < 3) throw ConfigError("ell", "the nonvanishing reference needs ell >= 3");
  }
  if (cfg.max_deg < 0) cfg.max_deg = c == "sieve-ratio" ? 5 : 3;
  if (c == "gauss-verify" && cfg.max_deg < 1) throw ConfigError("max_deg", "must be at least 1");
  if (c == "gauss-verify" && cfg.poisson_max_deg < 0) throw ConfigError("poisson_max_deg", "must be nonnegative");
  if (c == "psi-verify" && cfg.K != "auto") {
    const int K = parse_int("K", cfg.K);
    if (K < 0) throw ConfigError("K", "must be nonnegative");
  }
  if (cfg.n_min < 0) cfg.n_min = c == "prime-cancel" ? 1 : 1;
  if (cfg.n_max < 0) cfg.n_max = c == "prime-cancel" ? 9 : 6;
  if (cfg.n_min < 1) throw ConfigError("n_min", "must be at least 1");
  if (cfg.n_max < cfg.n_min) throw ConfigError("n_max", "must be at least n_min");
  if (cfg.R.empty()) cfg.R = c == "vaughan-verify" ? "1;0,1" : "1";
  if (c == "vaughan-verify" || c == "prime-cancel") {
    const FieldCtx F(cfg.p, cfg.k, cfg.ell);
    const PolyRing Ring(F);
    for (const std::string& t : split(cfg.R, ';')) {
      Poly r;
      try {
        r = Ring.from_text(t);
      } catch (const std::exception& e) {
        throw ConfigError("R", "'" + t + "' is not a polynomial: " + e.what());
      }
      if (!r.is_monic()) throw ConfigError("R", "'" + t + "' is not monic");
    }
  }
  if (c == "sieve-ratio" && cfg.max_deg > 12) throw ConfigError("max_deg", "too large for the sieve grid");
}

// ---------------------------------------------------------------- outputs

namespace {

class Csv {
 public:
  Csv(const fs::path& path, const std::vector<std::string>& header) : f_(path) {
    if (!f_) throw std::runtime_error("cannot write " + path.string());
    row(header);
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) f_ << (i ? "," : "") << csv_field(cells[i]);
    f_ << '\n';
  }
  void comment(const std::string& s) { f_ << "# " << s << '\n'; }
  void flush() { f_.flush(); }

 private:
  std::ofstream f_;
};

struct Series {
  enum Style { Points, Line, Bars };
  std::string label;
  Style style = Points;
  std::vector<std::pair<double, double>> pts;
};

struct Plot {
  std::string title, xlabel, ylabel;
  std::vector<Series> series;
  std::vector<std::pair<std::string, double>> hlines, vlines;
};

std::string px(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string tick(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::string xml(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '<') o += "&lt;";
    else if (c == '>') o += "&gt;";
    else if (c == '&') o += "&amp;";
    else o += c;
  }
  return o;
}

void write_plot(const fs::path& dir, const Plot& P) {
  {
    std::ofstream dat(dir / "plot.dat");
    dat << "# " << P.title << "\n# x: " << P.xlabel << "  y: " << P.ylabel << "\n";
    for (const auto& [l, y] : P.hlines) dat << "# hline " << l << " " << fmt(y) << "\n";
    for (const auto& [l, x] : P.vlines) dat << "# vline " << l << " " << fmt(x) << "\n";
    for (std::size_t s = 0; s < P.series.size(); ++s) {
      if (s) dat << "\n\n";
      dat << "# series " << s << ": " << P.series[s].label << "\n";
      for (const auto& [x, y] : P.series[s].pts) dat << fmt(x) << " " << fmt(y) << "\n";
    }
  }
  const double W = 720, H = 440, X0 = 80, X1 = 690, Y0 = 40, Y1 = 380;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  auto see = [&](double x, double y) {
    if (std::isfinite(x)) xmin = std::min(xmin, x), xmax = std::max(xmax, x);
    if (std::isfinite(y)) ymin = std::min(ymin, y), ymax = std::max(ymax, y);
  };
  for (const auto& s : P.series) {
    for (const auto& [x, y] : s.pts) see(x, y);
    if (s.style == Series::Bars) see(NAN, 0.0);
  }
  for (const auto& h : P.hlines) see(NAN, h.second);
  for (const auto& v : P.vlines) see(v.second, NAN);
  if (!(xmin <= xmax)) xmin = 0, xmax = 1;
  if (!(ymin <= ymax)) ymin = 0, ymax = 1;
  if (xmin == xmax) xmin -= 1, xmax += 1;
  if (ymin == ymax) ymin -= 1, ymax += 1;
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
  xmin -= xpad, xmax += xpad, ymin -= ypad, ymax += ypad;
  auto sx = [&](double x) { return X0 + (x - xmin) / (xmax - xmin) * (X1 - X0); };
  auto sy = [&](double y) { return Y1 - (y - ymin) / (ymax - ymin) * (Y1 - Y0); };
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

  std::ofstream svg(dir / "plot.svg");
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << px(W / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << xml(P.title) << "</text>\n";
  svg << "<rect x=\"" << X0 << "\" y=\"" << Y0 << "\" width=\"" << X1 - X0 << "\" height=\"" << Y1 - Y0
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4, yv = ymin + (ymax - ymin) * i / 4;
    svg << "<line x1=\"" << px(sx(xv)) << "\" y1=\"" << Y1 << "\" x2=\"" << px(sx(xv)) << "\" y2=\"" << Y1 + 5
        << "\" stroke=\"black\"/><text x=\"" << px(sx(xv)) << "\" y=\"" << Y1 + 18 << "\" text-anchor=\"middle\">"
        << tick(xv) << "</text>\n";
    svg << "<line x1=\"" << X0 - 5 << "\" y1=\"" << px(sy(yv)) << "\" x2=\"" << X0 << "\" y2=\"" << px(sy(yv))
        << "\" stroke=\"black\"/><text x=\"" << X0 - 8 << "\" y=\"" << px(sy(yv) + 4) << "\" text-anchor=\"end\">"
        << tick(yv) << "</text>\n";
  }
  svg << "<text x=\"" << px((X0 + X1) / 2) << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << xml(P.xlabel)
      << "</text>\n";
  svg << "<text x=\"16\" y=\"" << px((Y0 + Y1) / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << px((Y0 + Y1) / 2) << ")\">" << xml(P.ylabel) << "</text>\n";
  for (std::size_t s = 0; s < P.series.size(); ++s) {
    const Series& S = P.series[s];
    const char* col = colors[s % 5];
    if (S.style == Series::Line) {
      svg << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
      for (const auto& [x, y] : S.pts)
        if (std::isfinite(x) && std::isfinite(y)) svg << px(sx(x)) << "," << px(sy(y)) << " ";
      svg << "\"/>\n";
    }
    if (S.style == Series::Bars) {
      const double w = 0.8 * (X1 - X0) / std::max<std::size_t>(S.pts.size() + 1, 2);
      for (const auto& [x, y] : S.pts) {
        if (!std::isfinite(y)) continue;
        const double top = sy(std::max(y, 0.0)), base = sy(std::min(y, 0.0));
        svg << "<rect x=\"" << px(sx(x) - w / 2) << "\" y=\"" << px(top) << "\" width=\"" << px(w) << "\" height=\""
            << px(base - top) << "\" fill=\"" << col << "\" fill-opacity=\"0.7\"/>\n";
      }
    }
    if (S.style != Series::Bars)
      for (const auto& [x, y] : S.pts)
        if (std::isfinite(x) && std::isfinite(y))
          svg << "<circle cx=\"" << px(sx(x)) << "\" cy=\"" << px(sy(y)) << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
    svg << "<rect x=\"" << X1 - 200 << "\" y=\"" << Y0 + 8 + 16 * s << "\" width=\"10\" height=\"10\" fill=\"" << col
        << "\"/><text x=\"" << X1 - 185 << "\" y=\"" << Y0 + 17 + 16 * s << "\">" << xml(S.label) << "</text>\n";
  }
  for (const auto& [l, y] : P.hlines) {
    svg << "<line x1=\"" << X0 << "\" y1=\"" << px(sy(y)) << "\" x2=\"" << X1 << "\" y2=\"" << px(sy(y))
        << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/><text x=\"" << X0 + 6 << "\" y=\"" << px(sy(y) - 4)
        << "\" fill=\"gray\">" << xml(l) << "</text>\n";
  }
  for (const auto& [l, x] : P.vlines) {
    svg << "<line x1=\"" << px(sx(x)) << "\" y1=\"" << Y0 << "\" x2=\"" << px(sx(x)) << "\" y2=\"" << Y1
        << "\" stroke=\"gray\" stroke-dasharray=\"5,4\"/><text x=\"" << px(sx(x) + 4) << "\" y=\"" << Y0 + 14
        << "\" fill=\"gray\">" << xml(l) << "</text>\n";
  }
  svg << "</svg>\n";
}

// ---------------------------------------------------------------- run context

struct Ctx {
  explicit Ctx(const RunConfig& c, std::ostream& l)
      : cfg(c), log(l), F(c.p, c.k, c.ell), R(F), C(c.ell, c.p), dir(c.out) {}
  const RunConfig& cfg;
  std::ostream& log;
  FieldCtx F;
  PolyRing R;
  CycloCtx C;
  fs::path dir;
  json summary = json::object();
  json seeds = json::object();
  json assertions = json::array();
  bool failed = false;
  bool truncated = false;
  std::vector<std::string> truncation;
  std::optional<Plot> plot;

  void check(const std::string& name, bool ok, const std::string& detail) {
    assertions.push_back({{"name", name}, {"passed", ok}, {"detail", detail}});
    if (!ok) failed = true;
    log << (ok ? "  ok    " : "  FAIL  ") << name << "  (" << detail << ")\n";
  }
  void truncate(const std::string& why) {
    truncated = true;
    truncation.push_back(why);
    log << "  truncated: " << why << "\n";
  }
  std::vector<Poly> R_list() const {
    std::vector<Poly> out;
    for (const std::string& t : split(cfg.R, ';')) out.push_back(R.from_text(t));
    return out;
  }
};

// family-scan, density and nonvanish share the scan set-up.
struct FamilyRun {
  DensityReport rep;
  bool explicit_route = false;
  ExplicitAverage explicit_avg;
};

FamilyRun scan_family(Ctx& X, const RowSink& sink, bool allow_explicit) {
  const RunConfig& cfg = X.cfg;
  const TestFunction phi = TestFunction::fejer(cfg.v);
  const int N = std::max(phi.max_frequency(cfg.d), phi.support_edge(cfg.d));
  const std::uint64_t fam = sat_pow(cfg.q, cfg.d);
  FamilyRun out;
  bool use_explicit = false;
  if (allow_explicit) {
    if (cfg.route == "explicit") use_explicit = true;
    else if (cfg.route == "auto" && fam > cfg.budget && sat_pow(cfg.q, cfg.d - 1) <= cfg.budget) use_explicit = true;
  }
  PrimeTable T(X.R, std::max(cfg.d, N));
  X.summary["prime_table_max_degree"] = std::max(cfg.d, N);
  if (use_explicit) {
    X.log << "explicit-formula family average at d = " << cfg.d << "\n";
    out.explicit_route = true;
    out.explicit_avg = family_average_explicit(T, cfg.d, phi);
    out.rep.q = cfg.q;
    out.rep.ell = cfg.ell;
    out.rep.d = cfg.d;
    out.rep.v = cfg.v;
    out.rep.family_size = out.explicit_avg.family_size;
    out.rep.mean_sigma = out.explicit_avg.mean_sigma;
    out.rep.mean_sigma_primes = out.explicit_avg.mean_sigma;
    out.rep.mean_sigma_truncated = out.explicit_avg.mean_sigma_truncated;
    out.rep.phi0 = phi.hat_at(0, cfg.d);
    out.rep.deviation = std::abs(out.rep.mean_sigma - out.rep.phi0);
    out.rep.per_character = false;
    return out;
  }
  const std::uint64_t end = fam > cfg.budget ? cfg.budget : UINT64_MAX;
  X.log << "scanning H_" << cfg.d << " over F_" << cfg.q << " (" << fam << " monic, " << cfg.threads << " threads)\n";
  out.rep = family_average(T, X.C, cfg.d, phi, false, end, cfg.threads, sink);
  if (out.rep.truncated)
    X.truncate("scanned the first " + std::to_string(cfg.budget) + " of " + std::to_string(fam) + " monic polynomials");
  return out;
}

void summarize_family(Ctx& X, const FamilyRun& fr) {
  const DensityReport& r = fr.rep;
  json& s = X.summary;
  s["route"] = fr.explicit_route ? "explicit" : "per-character";
  s["family_size"] = r.family_size;
  s["mean_sigma"] = r.mean_sigma;
  s["mean_sigma_primes"] = r.mean_sigma_primes;
  s["mean_sigma_prime_terms_only"] = r.mean_sigma_truncated;
  s["phi_hat_0"] = r.phi0;
  s["deviation"] = r.deviation;
  if (fr.explicit_route) {
    s["orbit_count"] = fr.explicit_avg.orbit_count;
    return;
  }
  s["max_residual"] = r.max_residual;
  s["max_frequency_residual"] = r.max_frequency_residual;
  s["max_rh_residual"] = r.max_rh_residual;
  s["max_fe_residual"] = r.max_fe_residual;
  s["max_omega_dev"] = r.max_omega_dev;
  s["ambiguous"] = r.ambiguous;
  json oc = json::object();
  for (const auto& [m, n] : r.order_counts) oc[std::to_string(m)] = n;
  s["order_counts"] = oc;
}

std::string row_c(const Ctx& X, const Poly& c) { return X.R.to_text(c); }

// ---------------------------------------------------------------- subcommands

void cmd_family_scan(Ctx& X) {
  Csv csv(X.dir / "results.csv", {"c", "rh_residual", "fe_residual", "omega_dev", "fe_exact", "central_re", "central_im",
                                  "vanishing", "order", "sigma_zeros", "sigma_primes", "residual",
                                  "max_frequency_residual"});
  std::vector<std::pair<double, double>> pts;
  std::uint64_t idx = 0;
  const FamilyRun fr = scan_family(
      X,
      [&](const CharacterDensityRow& r) {
        csv.row({row_c(X, r.c), fmt(r.rh_residual), fmt(r.fe_residual), fmt(r.omega_dev), r.fe_exact ? "1" : "0",
                 fmt(r.central.real()), fmt(r.central.imag()), vanishing_name(r.vanishing), fmt_i(r.order),
                 fmt(r.sigma_zeros), fmt(r.sigma_primes), fmt(r.residual), fmt(r.max_frequency_residual)});
        if (pts.size() < 4000) pts.push_back({static_cast<double>(idx), std::abs(r.central)});
        ++idx;
      },
      false);
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
  summarize_family(X, fr);
  const DensityReport& r = fr.rep;
  const RunConfig& cfg = X.cfg;
  X.check("Riemann hypothesis: ||u| sqrt(q) - 1| < tol_rh", r.max_rh_residual < cfg.tol_rh, "max " + fmt(r.max_rh_residual));
  X.check("functional equation residual < tol_fe", r.max_fe_residual < cfg.tol_fe, "max " + fmt(r.max_fe_residual));
  X.check("||omega| - 1| < tol_fe", r.max_omega_dev < cfg.tol_fe, "max " + fmt(r.max_omega_dev));
  X.check("exact coefficient symmetry of the functional equation", r.all_fe_exact, r.all_fe_exact ? "all" : "not all");
  X.check("no ambiguous central-value classification", r.ambiguous == 0, fmt_u(r.ambiguous) + " ambiguous");
  X.check("explicit formula per character < tol_explicit", r.max_residual < cfg.tol_explicit, "max " + fmt(r.max_residual));
  X.check("explicit formula per frequency < tol_explicit", r.max_frequency_residual < cfg.tol_explicit,
          "max " + fmt(r.max_frequency_residual));
  Plot P{"central values over H_" + std::to_string(cfg.d) + ", q = " + std::to_string(cfg.q) + ", ell = " +
             std::to_string(cfg.ell),
         "character index", "|L(1/2, chi_c)|", {{"|L(1/2)|", Series::Points, pts}}, {}, {}};
  X.plot = P;
}

void cmd_density(Ctx& X) {
  Csv csv(X.dir / "results.csv", {"c", "sigma_zeros", "sigma_primes", "residual"});
  std::vector<double> sig;
  const FamilyRun fr = scan_family(
      X,
      [&](const CharacterDensityRow& r) {
        csv.row({row_c(X, r.c), fmt(r.sigma_zeros), fmt(r.sigma_primes), fmt(r.residual)});
        sig.push_back(r.sigma_zeros);
      },
      true);
  const DensityReport& r = fr.rep;
  if (fr.explicit_route) csv.row({"mean", "", fmt(r.mean_sigma), ""});
  else csv.row({"mean", fmt(r.mean_sigma), fmt(r.mean_sigma_primes), fmt(std::abs(r.mean_sigma - r.mean_sigma_primes))});
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
  summarize_family(X, fr);
  const RunConfig& cfg = X.cfg;
  X.log << "  <Sigma> = " << fmt(r.mean_sigma) << ", phi_hat(0) = " << fmt(r.phi0) << ", deviation " << fmt(r.deviation)
        << "\n";
  X.check("family mean is finite", std::isfinite(r.mean_sigma), fmt(r.mean_sigma));
  if (!fr.explicit_route) {
    X.check("explicit formula per character < tol_explicit", r.max_residual < cfg.tol_explicit, "max " + fmt(r.max_residual));
    X.check("explicit formula per frequency < tol_explicit", r.max_frequency_residual < cfg.tol_explicit,
            "max " + fmt(r.max_frequency_residual));
  }
  Plot P{"one-level density, d = " + std::to_string(cfg.d) + ", Fejer v = " + fmt(cfg.v), "Sigma over zeros",
         "characters", {}, {}, {{"phi_hat(0)", r.phi0}, {"mean", r.mean_sigma}}};
  if (!sig.empty()) {
    const auto [lo, hi] = std::minmax_element(sig.begin(), sig.end());
    const int bins = 40;
    const double a = *lo, b = std::max(*hi, *lo + 1e-12);
    std::vector<double> h(bins, 0);
    for (double x : sig) h[std::min(bins - 1, static_cast<int>((x - a) / (b - a) * bins))] += 1;
    Series S{"histogram", Series::Bars, {}};
    for (int i = 0; i < bins; ++i) S.pts.push_back({a + (i + 0.5) * (b - a) / bins, h[i]});
    P.series.push_back(S);
  }
  X.plot = P;
}

void cmd_nonvanish(Ctx& X) {
  const FamilyRun fr = scan_family(X, {}, false);
  const DensityReport& r = fr.rep;
  summarize_family(X, fr);
  const RunConfig& cfg = X.cfg;
  const auto [rn, rd] = nonvanishing_reference(static_cast<int>(cfg.ell));
  const double ref = static_cast<double>(rn) / static_cast<double>(rd);
  const auto [vn, vd] = support_limit(static_cast<int>(cfg.ell));
  const std::string ref_text = std::to_string(rn) + "/" + std::to_string(rd);
  Csv csv(X.dir / "results.csv", {"quantity", "value", "note"});
  csv.row({"family_size", fmt_u(r.family_size), "characters scanned"});
  csv.row({"ambiguous", fmt_u(r.ambiguous), "central values not classified"});
  Series S{"p_m", Series::Bars, {}};
  for (const auto& [m, n] : r.order_counts) {
    csv.row({"p_" + std::to_string(m), fmt(r.p(m)), "proportion vanishing to order " + std::to_string(m)});
    S.pts.push_back({static_cast<double>(m), r.p(m)});
  }
  csv.row({"nonvanishing_proportion", fmt(r.p(0)), "p_0"});
  csv.row({"density_bound", fmt(r.p0_bound()), "1 - <Sigma>, Fejer v = " + fmt(cfg.v)});
  csv.row({"weighted_order_sum", fmt(r.weighted_order_sum()), "sum_m m p_m"});
  csv.row({"reference", fmt(ref), ref_text + " = 1 - 1/v, v = " + std::to_string(vn) + "/" + std::to_string(vd)});
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
  X.summary["p0"] = r.p(0);
  X.summary["reference"] = ref;
  X.summary["reference_fraction"] = ref_text;
  X.log << "  p_0(" << cfg.d << ") = " << fmt(r.p(0)) << ", reference " << ref_text << "\n";
  X.check("no ambiguous central-value classification", r.ambiguous == 0, fmt_u(r.ambiguous) + " ambiguous");
  X.check("p_0 >= reference " + ref_text, r.p(0) >= ref, "p_0 = " + fmt(r.p(0)));
  X.plot = Plot{"order of vanishing at the central point, d = " + std::to_string(cfg.d), "order m", "proportion",
                {S}, {{"reference " + ref_text, ref}}, {}};
}

void write_checks(Ctx& X, Csv& csv, const std::string& suite, const CheckLog& log) {
  for (const CheckStat& s : log.stats()) {
    csv.row({suite, s.name, fmt_u(s.passed), fmt_u(s.total), fmt(s.worst), s.failures.empty() ? "" : s.failures[0]});
    X.check(suite + ": " + s.name, s.ok(), fmt_u(s.passed) + "/" + fmt_u(s.total));
  }
}

const std::vector<std::string> kCheckHeader = {"suite", "check", "passed", "total", "worst", "first_failure"};

void cmd_gauss_verify(Ctx& X) {
  const RunConfig& cfg = X.cfg;
  GaussEngine E(X.R, X.C);
  Csv csv(X.dir / "results.csv", kCheckHeader);
  int exhaustive = cfg.max_deg;
  while (exhaustive > 0 && sat_pow(cfg.q, 3 * exhaustive) > cfg.budget) --exhaustive;
  X.summary["exhaustive_max_deg"] = exhaustive;
  if (exhaustive < cfg.max_deg)
    X.truncate("exhaustive Gauss-sum grid limited to deg c <= " + std::to_string(exhaustive) + " (q^{3 deg c} work)");
  if (exhaustive > 0) {
    X.log << "exhaustive Gauss-sum grid, deg c <= " << exhaustive << "\n";
    write_checks(X, csv, "exhaustive", gauss_structure_exhaustive(E, exhaustive));
  }
  if (cfg.samples > 0) {
    X.log << cfg.samples << " random Gauss-sum samples, deg <= " << cfg.max_deg << "\n";
    X.seeds["gauss_random"] = cfg.seed;
    write_checks(X, csv, "random", gauss_structure_random(E, cfg.samples, cfg.seed, cfg.max_deg));
  }
  int pdeg = cfg.poisson_max_deg;
  while (pdeg > 0 && sat_pow(cfg.q, 2 * pdeg + 2) > cfg.budget) --pdeg;
  X.summary["poisson_max_deg"] = pdeg;
  if (pdeg < cfg.poisson_max_deg)
    X.truncate("Poisson summation limited to deg f <= " + std::to_string(pdeg) + " (q^{2 deg f + 2} work)");
  if (pdeg > 0) {
    X.log << "Poisson summation, deg f <= " << pdeg << "\n";
    write_checks(X, csv, "poisson", poisson_suite(E, pdeg));
  }
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
}

void cmd_psi_verify(Ctx& X) {
  const RunConfig& cfg = X.cfg;
  const int ell = static_cast<int>(cfg.ell);
  GaussEngine E(X.R, X.C);
  GaussCounter G(E);
  PsiLab L(G);
  Csv csv(X.dir / "results.csv", kCheckHeader);
  // Coefficient sums through degree k cost about 16 q^k work units.
  int kmax = 0;
  while (sat_pow(cfg.q, kmax + 1) <= cfg.budget / 16) ++kmax;
  X.summary["max_coefficient_degree"] = kmax;
  PsiSuiteOptions opt;
  opt.tol = cfg.tol_psi;
  opt.max_coeff_degree = kmax;
  if (cfg.max_deg + 2 * ell <= kmax) {
    X.log << "psi suite, every monic r with deg r <= " << cfg.max_deg << "\n";
    X.summary["psi_mode"] = "exhaustive";
    write_checks(X, csv, "psi", psi_suite(L, cfg.max_deg, opt));
  } else {
    X.log << "psi spot checks (coefficient degree <= " << kmax << ")\n";
    X.summary["psi_mode"] = "spot";
    X.seeds["psi_spot"] = cfg.seed;
    write_checks(X, csv, "psi-spot", psi_spot(L, std::min(cfg.max_deg, 2), 3, cfg.seed, opt));
  }
  int K = std::min(8, kmax);
  if (cfg.K != "auto") {
    K = std::stoi(cfg.K);
    if (K > kmax) {
      X.truncate("series identities limited to K = " + std::to_string(kmax));
      K = kmax;
    }
  }
  X.summary["series_K"] = K;
  if (ell == 3) {
    X.log << "series identities through u^" << K << "\n";
    write_checks(X, csv, "series-identities", series_identity_suite(L, K));
  } else {
    X.log << "series identity spot checks through u^" << K << "\n";
    X.seeds["series_spot"] = cfg.seed + 1;
    write_checks(X, csv, "series-identities-spot", series_identity_spot(L, K, cfg.seed + 1));
  }
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
}

void cmd_vaughan_verify(Ctx& X) {
  const RunConfig& cfg = X.cfg;
  GaussEngine E(X.R, X.C);
  Csv csv(X.dir / "results.csv", kCheckHeader);
  int nmax = cfg.n_max;
  while (nmax >= cfg.n_min && sat_pow(cfg.q, nmax + 2) > cfg.budget) --nmax;
  if (nmax < cfg.n_max) X.truncate("Vaughan suite limited to n <= " + std::to_string(nmax));
  X.summary["n_max_run"] = nmax;
  if (nmax >= cfg.n_min) {
    X.log << "Vaughan suite, n = " << cfg.n_min << ".." << nmax << ", R in {" << cfg.R << "}\n";
    write_checks(X, csv, "vaughan", vaughan_suite(E, cfg.n_min, nmax, X.R_list()));
  }
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
}

void cmd_prime_cancel(Ctx& X) {
  const RunConfig& cfg = X.cfg;
  GaussEngine E(X.R, X.C);
  GaussCounter G(E);
  int nmax = cfg.n_max;
  while (nmax >= cfg.n_min && sat_pow(cfg.q, nmax) > cfg.budget) --nmax;
  if (nmax < cfg.n_max) X.truncate("prime sums limited to n <= " + std::to_string(nmax));
  Csv csv(X.dir / "results.csv",
          {"R", "n", "primes", "S", "S_re", "S_im", "abs_S", "exponent", "discrepancy", "angle_hist"});
  if (nmax < cfg.n_min) return;
  PrimeTable T(X.R, nmax);
  Plot P{"prime Gauss-sum cancellation, q = " + std::to_string(cfg.q) + ", ell = " + std::to_string(cfg.ell), "n",
         "log_q |S| / n", {}, {{"trivial 3/2", 1.5}, {"4/3", 4.0 / 3.0}}, {}};
  bool ok = true;
  std::string worst;
  for (const Poly& Rp : X.R_list()) {
    Series S{"R = " + X.R.to_text(Rp), Series::Line, {}};
    for (int n = cfg.n_min; n <= nmax; ++n) {
      const CancellationRow row = prime_cancellation(G, T, Rp, n);
      std::string hist;
      for (std::size_t i = 0; i < row.angle_hist.size(); ++i) hist += (i ? ";" : "") + std::to_string(row.angle_hist[i]);
      csv.row({X.R.to_text(Rp), fmt_i(n), fmt_u(row.primes), row.S.to_text(), fmt(row.value.real()),
               fmt(row.value.imag()), fmt(std::abs(row.value)), fmt(row.exponent), fmt(row.discrepancy), hist});
      X.log << "  R = " << X.R.to_text(Rp) << " n = " << n << " exponent " << fmt(row.exponent) << "\n";
      S.pts.push_back({static_cast<double>(n), row.exponent});
      if (n >= cfg.exponent_from && !(row.exponent < cfg.exponent_bound)) {
        ok = false;
        worst += "n=" + std::to_string(n) + ":" + fmt(row.exponent) + " ";
      }
    }
    P.series.push_back(S);
  }
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
  X.check("exponent < " + fmt(cfg.exponent_bound) + " for n >= " + std::to_string(cfg.exponent_from), ok,
          ok ? "all rows" : worst);
  X.plot = P;
}

void cmd_sieve_ratio(Ctx& X) {
  const RunConfig& cfg = X.cfg;
  int D = cfg.max_deg;
  while (D > 0 && sat_pow(cfg.q, 2 * D) > cfg.budget) --D;
  if (D < cfg.max_deg) X.truncate("sieve grid limited to m, n <= " + std::to_string(D));
  SieveOptions o;
  o.trials = cfg.trials;
  o.seed = cfg.seed;
  o.all_monic_rows = cfg.all_monic_rows;
  o.refine_budget = cfg.refine_budget;
  o.threads = cfg.threads;
  X.log << "large-sieve grid m, n <= " << D << ", " << cfg.trials << " trials per cell\n";
  const SieveGrid g = large_sieve_grid(X.R, D, o);
  Csv csv(X.dir / "results.csv",
          {"m", "n", "rows", "cols", "trials", "seed", "envelope", "best_unimodular", "best_rademacher", "ratio",
           "refined", "krylov_sup", "krylov_ratio", "krylov_residual", "krylov_steps", "adjoint_estimate",
           "duality_gap"});
  bool finite = true, dominated = true, above = true;
  double gap = 0;
  json cell_seeds = json::array();
  Series raw{"best random trial / envelope", Series::Points, {}}, ref{"refined sup / envelope", Series::Points, {}};
  for (const SieveCell& c : g.cells) {
    csv.row({fmt_i(c.m), fmt_i(c.n), fmt_u(c.rows), fmt_u(c.cols), fmt_i(c.trials), fmt_u(c.seed), fmt(c.envelope),
             fmt(c.best_unimodular), fmt(c.best_rademacher), fmt(c.ratio), c.refined ? "1" : "0",
             c.refined ? fmt(c.krylov_sup) : "", c.refined ? fmt(c.krylov_ratio) : "",
             c.refined ? fmt(c.krylov_residual) : "", c.refined ? fmt_i(c.krylov_steps) : "",
             c.adjoint_estimate >= 0 ? fmt(c.adjoint_estimate) : "", c.duality_gap >= 0 ? fmt(c.duality_gap) : ""});
    cell_seeds.push_back(c.seed);
    finite = finite && std::isfinite(c.ratio) && c.ratio >= 0;
    const double x = c.m * (D + 1) + c.n;
    raw.pts.push_back({x, c.ratio});
    if (c.refined) {
      ref.pts.push_back({x, c.krylov_ratio});
      above = above && c.krylov_sup >= std::max(c.best_unimodular, c.best_rademacher) * (1 - 1e-9);
    }
    if (c.duality_gap >= 0) gap = std::max(gap, c.duality_gap);
    if (c.adjoint_estimate >= 0) {
      const SieveCell& t = g.at(c.n, c.m);
      dominated = dominated && c.adjoint_estimate >= std::max(t.best_unimodular, t.best_rademacher) * (1 - 1e-9);
    }
  }
  X.seeds["sieve_run"] = cfg.seed;
  X.seeds["sieve_cells"] = cell_seeds;
  const double asym = g.max_refined_asymmetry();
  X.summary["max_refined_asymmetry"] = asym;
  X.summary["max_duality_gap"] = gap;
  if (X.truncated) csv.comment("truncated: " + X.truncation.back());
  X.check("ratios finite and nonnegative", finite, std::to_string(g.cells.size()) + " cells");
  X.check("refined sups agree under (m, n) <-> (n, m)", asym < cfg.tol_sieve, "max relative difference " + fmt(asym));
  X.check("top vector transfers to the transposed cell", gap < cfg.tol_sieve, "max gap " + fmt(gap));
  X.check("adjoint of a best trial dominates the transposed trial", dominated, "Cauchy-Schwarz");
  X.check("refined sup >= best random trial", above, "Ritz value against trials");
  X.plot = Plot{"large-sieve ratios, q = " + std::to_string(cfg.q) + (cfg.all_monic_rows ? ", rows M_m" : ", rows H_m"),
                "cell m (D+1) + n", "ratio to the envelope", {raw, ref}, {{"1", 1.0}}, {}};
}

json field_json(const Ctx& X) {
  const FieldCtx& F = X.F;
  return {{"p", F.p()},
          {"k", F.k()},
          {"q", F.q()},
          {"ell", F.ell()},
          {"modulus_digits_ascending", F.modulus()},
          {"gen", F.to_text(F.gen())},
          {"zeta", F.to_text(F.zeta())}};
}

json conventions_json() {
  return {{"element_text", "prime field: integer in [0, p); extension: ';'-separated ascending F_p digits"},
          {"polynomial_text", "ascending coefficients, comma separated"},
          {"omega", "Omega(zeta) = exp(2 pi i / ell) for zeta = gen^((q-1)/ell), gen the least generator"},
          {"character_values", "zeta_ell^e stored as the exponent e in 0..ell-1"},
          {"cyclotomic", "Z[zeta_m], m = ell p, power basis reduced mod Phi_m; zeta_ell = zeta_m^p, zeta_p = zeta_m^ell; "
                         "printed as [c0 c1 ...]"},
          {"embedding", "zeta_m -> exp(2 pi i / m)"},
          {"bracket", "[x]_ell in {0..ell-1}"},
          {"chi_ell", "chi_ell(alpha) = Omega(alpha^((q-1)/ell))"},
          {"chi_r_on_constants", "Omega(alpha^(((q-1)/ell) deg r))"},
          {"functional_equation_sign", "omega = c_{d-1} / q^((d-1)/2)"},
          {"complex_values", "re,im columns at 17 significant digits"}};
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& log) {
  const auto t0 = std::chrono::steady_clock::now();
  if (!cfg.cache_dir.empty()) cache::set_directory(cfg.cache_dir);
  cache::reset_stats();
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) {
    log << "out: cannot create " << cfg.out << ": " << ec.message() << "\n";
    return kConfigError;
  }
  Ctx X(cfg, log);
  X.seeds["run"] = cfg.seed;
  std::string error;
  try {
    static const std::map<std::string, void (*)(Ctx&)> table = {
        {"family-scan", cmd_family_scan},   {"density", cmd_density},         {"nonvanish", cmd_nonvanish},
        {"gauss-verify", cmd_gauss_verify}, {"psi-verify", cmd_psi_verify},   {"vaughan-verify", cmd_vaughan_verify},
        {"sieve-ratio", cmd_sieve_ratio},   {"prime-cancel", cmd_prime_cancel}};
    table.at(cfg.command)(X);
    if (cfg.plot && X.plot) write_plot(X.dir, *X.plot);
  } catch (const std::exception& e) {
    error = e.what();
    log << "error: " << error << "\n";
  }
  int code = kOk;
  if (!error.empty()) code = kRuntimeError;
  else if (X.failed) code = kAssertionFailed;
  else if (X.truncated) code = kTruncated;

  json config = json::object();
  config["command"] = cfg.command;
  for (const std::string& k : config_keys()) config[k] = config_value(cfg, k);
  const cache::Stats cs = cache::stats();
  json m = {{"format_version", kFormatVersion},
            {"library_version", kVersion},
            {"config", config},
            {"field", field_json(X)},
            {"conventions", conventions_json()},
            {"seeds", X.seeds},
            {"threads", cfg.threads},
            {"simd", simd::name(simd::active())},
            {"cache", {{"directory", cache::directory()}, {"hits", cs.hits}, {"misses", cs.misses}, {"corrupt", cs.corrupt}}},
            {"summary", X.summary},
            {"assertions", X.assertions},
            {"truncated", X.truncated},
            {"truncation", X.truncation},
            {"outputs", cfg.plot && X.plot ? json{"results.csv", "plot.svg", "plot.dat"} : json{"results.csv"}},
            {"error", error},
            {"exit_code", code},
            {"wall_clock_seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
  std::ofstream(X.dir / "manifest.json") << m.dump(2) << "\n";
  log << "exit " << code << " (" << (code == kOk ? "all assertions passed"
                                    : code == kAssertionFailed ? "assertion failed"
                                    : code == kTruncated ? "truncated by budget"
                                                         : "runtime error")
      << ")\n";
  return code;
}

}  // namespace kummerlab::cli
