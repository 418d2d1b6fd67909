#include "kummerlab/sievelab.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "kummerlab/simd.hpp"

namespace kummerlab {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double qpow(std::uint32_t q, double e) { return std::pow(static_cast<double>(q), e); }

}  // namespace

// ---------------------------------------------------------------- Vaughan

int h_value(const PolyRing& R, const Poly& b) {
  if (b.is_one()) return 0;
  const Factorization f = factor(R, b);
  // a = pi^k needs b / a squarefree
  int h = 0;
  for (std::size_t i = 0; i < f.factors.size(); ++i) {
    const auto& [pi, e] = f.factors[i];
    bool others_sf = true;
    for (std::size_t j = 0; j < f.factors.size(); ++j)
      if (j != i && f.factors[j].second > 1) others_sf = false;
    if (!others_sf) continue;
    const int nother = static_cast<int>(f.factors.size()) - 1;
    for (int k = std::max(1, e - 1); k <= e; ++k) {
      const int rest_pi = e - k;  // 0 or 1
      const int sign = ((nother + rest_pi) % 2) ? -1 : 1;
      h += sign * pi.deg();
    }
  }
  return h;
}

bool h_bound_holds(const PolyRing& R, int maxdeg) {
  for (int d = 0; d <= maxdeg; ++d)
    for (const Poly& b : enumerate(R, SetKind::H, d))
      if (std::abs(h_value(R, b)) > d) return false;
  return true;
}

VaughanLab::VaughanLab(const GaussEngine& E, int n) : E_(&E), n_(n) {
  const PolyRing& R = E.ring();
  const std::uint64_t N = R.count_monic(n);
  fac_.resize(N);
  for (std::uint64_t i = 0; i < N; ++i) fac_[i] = factor(R, R.monic_from_index(n, i));
}

const std::vector<Cyclo>& VaughanLab::gtable(const Poly& Rp) {
  const PolyRing& R = E_->ring();
  const std::string key = R.to_text(Rp);
  auto it = g_.find(key);
  if (it != g_.end()) return it->second;
  std::vector<Cyclo> g(fac_.size(), Cyclo(E_->cyclo()));
  for (std::size_t i = 0; i < fac_.size(); ++i) {
    bool coprime = true;
    for (auto& [pi, e] : fac_[i].factors)
      if (R.divides(pi, Rp)) coprime = false;
    if (!coprime) continue;
    bool sf = true;
    for (auto& [pi, e] : fac_[i].factors) sf = sf && e == 1;
    g[i] = sf ? E_->squarefree_closed(Rp, R.monic_from_index(n_, i), 1) : E_->fast(Rp, fac_[i], 1);
  }
  return g_.emplace(key, std::move(g)).first->second;
}

VaughanCell VaughanLab::sigmas(const Poly& Rp, int U) {
  const PolyRing& R = E_->ring();
  const CycloCtx& C = E_->cyclo();
  const auto& G = gtable(Rp);
  VaughanCell cell;
  cell.n = n_;
  cell.R = Rp;
  cell.U = U;
  cell.s0 = cell.s1 = cell.s2p = cell.s2pp = cell.s3 = cell.s4 = Cyclo(C);
  Cyclo* out[6] = {&cell.s0, &cell.s1, &cell.s2p, &cell.s2pp, &cell.s3, &cell.s4};
  for (std::size_t idx = 0; idx < fac_.size(); ++idx) {
    if (G[idx].is_zero()) continue;
    const auto& fs = fac_[idx].factors;
    bool coprime = true;
    for (auto& [pi, e] : fs)
      if (R.divides(pi, Rp)) coprime = false;
    if (!coprime) continue;
    std::int64_t w[6] = {0, 0, 0, 0, 0, 0};
    const std::size_t s = fs.size();
    for (std::size_t i = 0; i < s; ++i) {
      const int dpi = fs[i].first.deg();
      for (int k = 1; k <= fs[i].second; ++k) {
        const int da = k * dpi;
        // b runs over squarefree divisors of F / a
        for (std::uint32_t mask = 0; mask < (1u << s); ++mask) {
          int db = 0, nb = 0;
          bool ok = true;
          for (std::size_t j = 0; j < s; ++j) {
            if (!(mask >> j & 1)) continue;
            const int left = fs[j].second - (j == i ? k : 0);
            if (left < 1) { ok = false; break; }
            db += fs[j].first.deg();
            ++nb;
          }
          if (!ok) continue;
          const int dc = n_ - da - db;
          const std::int64_t lm = (nb % 2 ? -1 : 1) * static_cast<std::int64_t>(dpi);
          const int dbc = db + dc, dab = da + db;
          if (dbc <= U) w[0] += lm;
          if (db <= U) w[1] += lm;
          if (dab <= U) w[2] += lm;
          if (da <= U && db <= U && dab > U) w[3] += lm;
          if (da > U && dbc > U && db <= U) w[4] += lm;
          if (dbc <= U && da <= U) w[5] += lm;
        }
      }
    }
    for (int j = 0; j < 6; ++j)
      if (w[j]) *out[j] += G[idx].scaled(w[j]);
  }
  return cell;
}

Cyclo VaughanLab::H(const Poly& Rp) {
  const PolyRing& R = E_->ring();
  Cyclo h(E_->cyclo());
  for (const Poly& pi : enumerate(R, SetKind::P, n_)) {
    if (R.divides(pi, Rp)) continue;
    h += E_->fast(Rp, pi, 1).scaled(n_);
  }
  return h;
}

Cyclo VaughanLab::F_count(const Poly& Rp, const Poly& alpha) {
  const PolyRing& R = E_->ring();
  const auto& G = gtable(Rp);
  Cyclo f(E_->cyclo());
  if (alpha.deg() > n_) return f;
  for_each_multiple(R, alpha, n_ - alpha.deg(), [&](std::uint64_t idx) { f += G[idx]; });
  return f;
}

Lemma61Result VaughanLab::lemma61_check(const Poly& Rp, int U) {
  const PolyRing& R = E_->ring();
  const CycloCtx& C = E_->cyclo();
  const VaughanCell cell = sigmas(Rp, U);
  Cyclo s1(C), s2(C);
  Lemma61Result out;
  out.h_bound_ok = true;
  for (int d = 0; d <= std::min(U, n_); ++d) {
    for (const Poly& b : enumerate(R, SetKind::H, d)) {
      const Cyclo F = F_count(Rp, b);
      if (R.gcd(b, Rp).is_one()) s1 += F.scaled(static_cast<std::int64_t>(mobius(R, b)) * (n_ - d));
      const int h = h_value(R, b);
      if (std::abs(h) > d) out.h_bound_ok = false;
      s2 += F.scaled(h);
    }
  }
  out.sigma1_ok = s1 == cell.s1;
  out.sigma2p_ok = s2 == cell.s2p;
  return out;
}

// ---------------------------------------------------------------- prime cancellation

CancellationRow prime_cancellation(GaussCounter& G, const PrimeTable& T, const Poly& Rp, int n, int bins) {
  const GaussEngine& E = G.engine();
  const PolyRing& R = E.ring();
  const CycloCtx& C = E.cyclo();
  const int ell = E.ell();
  if (n > T.max_n()) throw std::out_of_range("prime table too small");
  const auto& wt = G.wtable(n);
  // counts by (w class, twist exponent)
  std::vector<std::int64_t> cnt(static_cast<std::size_t>(2 * ell) * ell, 0);
  CancellationRow row;
  row.n = n;
  for (std::uint64_t idx : T.indices(n)) {
    const int w = wt[idx];
    int e = 0;
    if (!Rp.is_one()) {
      const Poly pi = R.monic_from_index(n, idx);
      e = symbol(R, Rp, pi);
      if (e == kZeroExp) continue;  // pi | R
    }
    cnt[static_cast<std::size_t>(w) * ell + e]++;
    ++row.primes;
  }
  row.S = Cyclo(C);
  row.angle_hist.assign(bins, 0);
  const double scale = qpow(R.q(), n / 2.0);
  struct Pt { double x; std::int64_t c; };
  std::vector<Pt> pts;
  for (int w = 0; w < 2 * ell; ++w) {
    const Cyclo base = E.from_w_class(w, n, 1);
    for (int e = 0; e < ell; ++e) {
      const std::int64_t c = cnt[static_cast<std::size_t>(w) * ell + e];
      if (!c) continue;
      // G(R, pi) = conj((R/pi)) G(1, pi)
      const Cyclo g = base * E.zeta_ell(ell - e);
      row.S += g.scaled(c);
      const std::complex<double> z = g.to_complex() / scale;
      double x = std::arg(z) / (2 * std::numbers::pi);
      if (x < 0) x += 1;
      if (x >= 1) x -= 1;
      pts.push_back({x, c});
      row.angle_hist[std::min(bins - 1, static_cast<int>(x * bins))] += c;
    }
  }
  row.value = row.S.to_complex();
  const double a = std::abs(row.value);
  row.exponent = a > 0 ? std::log(a) / std::log(static_cast<double>(R.q())) / n : -INFINITY;
  // Kolmogorov statistic of the angle sample against the uniform law
  std::sort(pts.begin(), pts.end(), [](const Pt& u, const Pt& v) { return u.x < v.x; });
  const double N = static_cast<double>(row.primes);
  double cum = 0, D = 0;
  for (const Pt& p : pts) {
    D = std::max(D, std::abs(cum / N - p.x));
    cum += static_cast<double>(p.c);
    D = std::max(D, std::abs(cum / N - p.x));
  }
  row.discrepancy = D;
  return row;
}

// ---------------------------------------------------------------- symbol matrix

namespace {

// (x/pi) for every residue x mod pi, indexed by digits.
struct PrimeSymbols {
  int d = 0;
  std::vector<std::int8_t> tab;
  std::vector<std::vector<Fq>> pw;  // t^k mod pi, k <= kmax
};

PrimeSymbols prime_symbols(const PolyRing& R, const Poly& pi, int kmax) {
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q();
  const int ell = static_cast<int>(F.ell());
  const int d = pi.deg();
  PrimeSymbols ps;
  ps.d = d;
  std::uint64_t Q = 1;
  for (int i = 0; i < d; ++i) Q *= q;
  ps.tab.assign(Q, -1);
  std::vector<Fq> negpi(d);
  for (int i = 0; i < d; ++i) negpi[i] = F.neg(pi[i]);
  // multiply x by (t + c) mod pi, in place
  auto step = [&](std::vector<Fq>& x, Fq c) {
    const Fq top = x[d - 1];
    for (int i = d - 1; i > 0; --i) x[i] = F.add(x[i - 1], F.mul(c, x[i]));
    x[0] = F.mul(c, x[0]);
    if (top)
      for (int i = 0; i < d; ++i) x[i] = F.add(x[i], F.mul(top, negpi[i]));
  };
  auto index = [&](const std::vector<Fq>& x) {
    std::uint64_t v = 0;
    for (int i = d - 1; i >= 0; --i) v = v * q + x[i];
    return v;
  };
  bool done = false;
  for (Fq c = 0; c < q && !done; ++c) {
    std::fill(ps.tab.begin(), ps.tab.end(), -1);
    std::vector<Fq> g{c, 1};
    const int s = symbol(R, Poly(g), pi);
    if (s == kZeroExp) continue;
    std::vector<Fq> x(d, 0);
    x[0] = 1;
    std::uint64_t k = 0;
    bool cycled = false;
    for (; k + 1 < Q; ++k) {
      const std::uint64_t id = index(x);
      if (ps.tab[id] >= 0) { cycled = true; break; }
      ps.tab[id] = static_cast<std::int8_t>((k % ell) * s % ell);
      step(x, c);
    }
    done = !cycled && index(x) == 1;
  }
  if (!done) {
    // no linear generator: fall back to the resultant route
    std::vector<Fq> x(d, 0);
    for (std::uint64_t id = 1; id < Q; ++id) {
      std::uint64_t v = id;
      for (int i = 0; i < d; ++i) { x[i] = static_cast<Fq>(v % q); v /= q; }
      ps.tab[id] = static_cast<std::int8_t>(symbol(R, Poly(x), pi));
    }
  }
  ps.tab[0] = -1;
  ps.pw.resize(kmax + 1);
  std::vector<Fq> x(d, 0);
  x[0] = 1;
  for (int k = 0; k <= kmax; ++k) {
    ps.pw[k] = x;
    step(x, 0);
  }
  return ps;
}

}  // namespace

struct SymbolCache::Impl {
  std::map<std::string, PrimeSymbols> tabs;
};
SymbolCache::SymbolCache() : impl_(std::make_unique<Impl>()) {}
SymbolCache::~SymbolCache() = default;

SymbolMatrix symbol_matrix(const PolyRing& R, int m, int n, bool all_monic_rows, SymbolCache* shared) {
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q();
  const int ell = static_cast<int>(F.ell());
  SymbolMatrix A;
  A.m = m;
  A.n = n;
  A.all_monic_rows = all_monic_rows;
  A.rows = enumerate(R, all_monic_rows ? SetKind::M : SetKind::H, m);
  A.cols = enumerate(R, SetKind::H, n);
  const std::size_t nr = A.rows.size(), nc = A.cols.size();
  A.S.assign(nr * nc, 0);
  // row slot of each index in M_m
  const std::uint64_t QM = R.count_monic(m);
  std::vector<std::int64_t> slot(QM, -1);
  for (std::size_t i = 0; i < nr; ++i) slot[R.monic_index(A.rows[i])] = static_cast<std::int64_t>(i);

  SymbolCache local;
  auto& cache = (shared ? shared : &local)->impl().tabs;
  struct Part { const PrimeSymbols* ps; int e; std::vector<Fq> r; std::uint64_t id; };
  for (std::size_t jc = 0; jc < nc; ++jc) {
    const Poly& N = A.cols[jc];
    if (N.deg() == 0) continue;  // (M/1) = 1
    std::vector<Part> parts;
    for (auto& [pi, e] : factor(R, N).factors) {
      const std::string key = std::to_string(R.q()) + "/" + std::to_string(ell) + ":" + R.to_text(pi);
      auto it = cache.find(key);
      if (it == cache.end() || static_cast<int>(it->second.pw.size()) <= m)
        it = cache.insert_or_assign(key, prime_symbols(R, pi, std::max({m, n, 8}))).first;
      parts.push_back({&it->second, e, {}, 0});
    }
    for (Part& p : parts) p.r = p.ps->pw[m];
    auto rindex = [&](const Part& p) {
      std::uint64_t v = 0;
      for (int i = p.ps->d - 1; i >= 0; --i) v = v * q + p.r[i];
      return v;
    };
    auto value = [&]() -> std::int8_t {
      int s = 0;
      for (Part& p : parts) {
        const std::int8_t t = p.ps->tab[rindex(p)];
        if (t < 0) return -1;
        s += t * p.e;
      }
      return static_cast<std::int8_t>(s % ell);
    };
    if (m == 0) {
      A.S[jc] = value();
      continue;
    }
    MonicOdometer od(R, m);
    std::vector<Fq> old(od.coeffs().begin(), od.coeffs().begin() + m);
    for (;;) {
      const std::int64_t sl = slot[od.index()];
      if (sl >= 0) A.S[static_cast<std::size_t>(sl) * nc + jc] = value();
      const int h = od.next();
      if (h < 0) break;
      const auto& c = od.coeffs();
      for (int i = 0; i <= h; ++i) {
        const Fq delta = F.sub(c[i], old[i]);
        old[i] = c[i];
        for (Part& p : parts) {
          const auto& pw = p.ps->pw[i];
          for (int k = 0; k < p.ps->d; ++k) p.r[k] = F.add(p.r[k], F.mul(delta, pw[k]));
        }
      }
    }
  }
  return A;
}

// ---------------------------------------------------------------- bilinear forms

namespace {

struct Roots {
  std::vector<double> re, im;
  explicit Roots(std::uint32_t ell) : re(ell), im(ell) {
    for (std::uint32_t e = 0; e < ell; ++e) {
      re[e] = std::cos(2 * std::numbers::pi * e / ell);
      im[e] = std::sin(2 * std::numbers::pi * e / ell);
    }
  }
};

template <class Fn>
void parallel_rows(std::size_t nr, int threads, Fn fn) {
  if (threads <= 1 || nr < 64) {
    fn(std::size_t{0}, nr);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (nr + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::size_t a = t * chunk, b = std::min(nr, a + chunk);
    if (a < b) pool.emplace_back(fn, a, b);
  }
  for (auto& th : pool) th.join();
}

// per-row |(A x_v)_M|^2, rows x (w/2). The vectors go in chunks narrow enough that
// one chunk of X stays in L2 while the matrix streams past it.
std::vector<double> row_norms(const SymbolMatrix& A, std::uint32_t ell, const double* X, std::size_t w, int threads) {
  const std::size_t nr = A.rows.size(), nc = A.cols.size(), nv = w / 2;
  const Roots z(ell);
  std::vector<double> out(nr * nv, 0.0);
  std::size_t wc = 2;
  while (wc < 16 && wc < w && nc * (wc * 2) * sizeof(double) <= (std::size_t{1} << 21)) wc *= 2;
  wc = std::min(wc, w);
  std::vector<double> Xc(nc * wc);
  for (std::size_t c0 = 0; c0 < w; c0 += wc) {
    const std::size_t cw = std::min(wc, w - c0);
    for (std::size_t j = 0; j < nc; ++j)
      std::copy(X + j * w + c0, X + j * w + c0 + cw, Xc.data() + j * cw);
    parallel_rows(nr, threads, [&](std::size_t a, std::size_t b) {
      std::vector<double> B(ell * cw);
      for (std::size_t i = a; i < b; ++i) {
        std::fill(B.begin(), B.end(), 0.0);
        simd::bucket_rows(A.row(i), nc, Xc.data(), cw, B.data(), ell);
        for (std::size_t v = 0; v < cw / 2; ++v) {
          double yr = 0, yi = 0;
          for (std::uint32_t e = 0; e < ell; ++e) {
            const double br = B[e * cw + 2 * v], bi = B[e * cw + 2 * v + 1];
            yr += z.re[e] * br - z.im[e] * bi;
            yi += z.re[e] * bi + z.im[e] * br;
          }
          out[i * nv + c0 / 2 + v] = yr * yr + yi * yi;
        }
      }
    });
  }
  return out;
}

}  // namespace

std::vector<double> bilinear_norms(const SymbolMatrix& A, std::uint32_t ell, const std::vector<double>& X, std::size_t w) {
  if (X.size() != A.cols.size() * w || w % 2) throw std::invalid_argument("bilinear_norms: shape");
  const auto rn = row_norms(A, ell, X.data(), w, 1);
  const std::size_t nv = w / 2;
  std::vector<double> s(nv, 0.0);
  for (std::size_t i = 0; i < A.rows.size(); ++i)
    for (std::size_t v = 0; v < nv; ++v) s[v] += rn[i * nv + v];
  return s;
}

std::vector<double> apply(const SymbolMatrix& A, std::uint32_t ell, const std::vector<double>& x) {
  const std::size_t nr = A.rows.size(), nc = A.cols.size();
  if (x.size() != 2 * nc) throw std::invalid_argument("apply: shape");
  const Roots z(ell);
  std::vector<double> y(2 * nr), B(2 * ell);
  for (std::size_t i = 0; i < nr; ++i) {
    std::fill(B.begin(), B.end(), 0.0);
    simd::bucket_rows(A.row(i), nc, x.data(), 2, B.data(), ell);
    double yr = 0, yi = 0;
    for (std::uint32_t e = 0; e < ell; ++e) {
      yr += z.re[e] * B[2 * e] - z.im[e] * B[2 * e + 1];
      yi += z.re[e] * B[2 * e + 1] + z.im[e] * B[2 * e];
    }
    y[2 * i] = yr;
    y[2 * i + 1] = yi;
  }
  return y;
}

std::vector<double> apply_adjoint(const SymbolMatrix& A, std::uint32_t ell, const std::vector<double>& y) {
  const std::size_t nr = A.rows.size(), nc = A.cols.size();
  if (y.size() != 2 * nr) throw std::invalid_argument("apply_adjoint: shape");
  const Roots z(ell);
  std::vector<double> B(ell * nc * 2, 0.0);
  for (std::size_t i = 0; i < nr; ++i) simd::bucket_cols(A.row(i), nc, y.data() + 2 * i, 2, B.data());
  std::vector<double> x(2 * nc, 0.0);
  for (std::uint32_t e = 0; e < ell; ++e)
    for (std::size_t j = 0; j < nc; ++j) {
      const double br = B[(e * nc + j) * 2], bi = B[(e * nc + j) * 2 + 1];
      // conj(zeta^e) * b
      x[2 * j] += z.re[e] * br + z.im[e] * bi;
      x[2 * j + 1] += z.re[e] * bi - z.im[e] * br;
    }
  return x;
}

double sieve_envelope(std::uint32_t q, int m, int n, bool all_monic_rows) {
  if (all_monic_rows) return qpow(q, m) + qpow(q, n + m / 3.0) + qpow(q, 2.0 * (m + n) / 3.0);
  return qpow(q, m) + qpow(q, n) + qpow(q, 2.0 * (m + n) / 3.0);
}

namespace {

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return s;
}

using cplx = std::complex<double>;

cplx dot(const std::vector<double>& a, const std::vector<double>& b) {  // <a, b>, conjugate-linear in a
  double re = 0, im = 0;
  for (std::size_t k = 0; k < a.size(); k += 2) {
    re += a[k] * b[k] + a[k + 1] * b[k + 1];
    im += a[k] * b[k + 1] - a[k + 1] * b[k];
  }
  return {re, im};
}

void axpy(std::vector<double>& y, cplx c, const std::vector<double>& x) {  // y += c x
  for (std::size_t k = 0; k < y.size(); k += 2) {
    y[k] += c.real() * x[k] - c.imag() * x[k + 1];
    y[k + 1] += c.real() * x[k + 1] + c.imag() * x[k];
  }
}

struct KrylovResult {
  double sup = 0, residual = 0;
  int steps = 0;
  std::vector<double> x;
};

// Lanczos on A^*A with full reorthogonalisation; the answer is ||A x||^2 for the unit Ritz vector.
KrylovResult lanczos(const SymbolMatrix& A, std::uint32_t ell, std::uint64_t seed, int max_steps, double tol) {
  const std::size_t dim = A.cols.size();
  const int kmax = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(max_steps), dim));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::vector<std::vector<double>> V;
  std::vector<double> v(2 * dim);
  for (double& x : v) x = nd(rng);
  double nv = std::sqrt(norm2(v));
  for (double& x : v) x /= nv;
  std::vector<double> alpha, beta;
  KrylovResult kr;
  Eigen::VectorXd top;
  double prev = -1;
  for (int k = 0; k < kmax; ++k) {
    V.push_back(v);
    std::vector<double> w = apply_adjoint(A, ell, apply(A, ell, v));
    const double a = dot(v, w).real();
    alpha.push_back(a);
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& u : V) axpy(w, -dot(u, w), u);
    const double b = std::sqrt(norm2(w));
    // Ritz values of the tridiagonal section
    const int K = static_cast<int>(alpha.size());
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(K, K);
    for (int i = 0; i < K; ++i) {
      T(i, i) = alpha[i];
      if (i + 1 < K) T(i, i + 1) = T(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    const double theta = es.eigenvalues()(K - 1);
    top = es.eigenvectors().col(K - 1);
    kr.steps = K;
    const double resid = b * std::abs(top(K - 1));
    const bool settled = prev >= 0 && std::abs(theta - prev) <= tol * theta && resid <= std::sqrt(tol) * theta;
    prev = theta;
    if (settled || b <= 1e-12 * std::max(theta, 1.0)) break;
    beta.push_back(b);
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / b;
  }
  std::vector<double> x(2 * dim, 0.0);
  for (int i = 0; i < kr.steps; ++i) axpy(x, top(i), V[i]);
  const double xn = std::sqrt(norm2(x));
  for (double& t : x) t /= xn;
  const auto y = apply(A, ell, x);
  kr.sup = norm2(y);
  auto z = apply_adjoint(A, ell, y);
  axpy(z, -kr.sup, x);
  kr.residual = kr.sup > 0 ? std::sqrt(norm2(z)) / kr.sup : 0;
  kr.x = std::move(x);
  return kr;
}

SieveCell run_cell(const PolyRing& R, const SymbolMatrix& A, const SieveOptions& opt) {
  const std::uint32_t q = R.q(), ell = R.field().ell();
  const int m = A.m, n = A.n;
  const std::size_t nc = A.cols.size();
  SieveCell cell;
  cell.m = m;
  cell.n = n;
  cell.rows = A.rows.size();
  cell.cols = nc;
  cell.trials = opt.trials;
  cell.seed = mix(opt.seed ^ mix(static_cast<std::uint64_t>(m) << 32 | static_cast<std::uint64_t>(n)) ^
                  (A.all_monic_rows ? 0x5a5aULL : 0));
  cell.envelope = sieve_envelope(q, m, n, A.all_monic_rows);

  std::mt19937_64 rng(cell.seed);
  std::uniform_real_distribution<double> ph(0.0, 2 * std::numbers::pi);
  std::bernoulli_distribution coin(0.5);
  const std::size_t T = static_cast<std::size_t>(std::max(0, opt.trials));
  if (T > 0) {
    // vectors 0..T-1 unimodular, T..2T-1 Rademacher
    const std::size_t w = 4 * T;
    std::vector<double> X(nc * w);
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t t = 0; t < T; ++t) {
        const double a = ph(rng);
        X[j * w + 2 * t] = std::cos(a);
        X[j * w + 2 * t + 1] = std::sin(a);
      }
    for (std::size_t j = 0; j < nc; ++j)
      for (std::size_t t = 0; t < T; ++t) {
        X[j * w + 2 * (T + t)] = coin(rng) ? 1.0 : -1.0;
        X[j * w + 2 * (T + t) + 1] = 0.0;
      }
    const auto rn = row_norms(A, ell, X.data(), w, opt.threads);
    const std::size_t nv = 2 * T;
    std::vector<double> s(nv, 0.0);
    for (std::size_t i = 0; i < A.rows.size(); ++i)
      for (std::size_t v = 0; v < nv; ++v) s[v] += rn[i * nv + v];
    const double lam2 = static_cast<double>(nc);  // |lambda(N)| = 1 in both samplers
    std::size_t best = 0;
    for (std::size_t v = 0; v < nv; ++v) {
      double& slot = v < T ? cell.best_unimodular : cell.best_rademacher;
      slot = std::max(slot, s[v] / lam2);
      if (s[v] > s[best]) best = v;
    }
    cell.best_lambda.resize(2 * nc);
    const double inv = 1.0 / std::sqrt(lam2);
    for (std::size_t j = 0; j < nc; ++j) {
      cell.best_lambda[2 * j] = X[j * w + 2 * best] * inv;
      cell.best_lambda[2 * j + 1] = X[j * w + 2 * best + 1] * inv;
    }
  }
  cell.ratio = std::max(cell.best_unimodular, cell.best_rademacher) / cell.envelope;
  if (opt.max_krylov_steps > 0 && static_cast<std::uint64_t>(cell.rows) * cell.cols <= opt.refine_budget) {
    const KrylovResult kr = lanczos(A, ell, mix(cell.seed + 1), opt.max_krylov_steps, opt.krylov_tol);
    cell.refined = true;
    cell.krylov_sup = kr.sup;
    cell.krylov_ratio = kr.sup / cell.envelope;
    cell.krylov_residual = kr.residual;
    cell.krylov_steps = kr.steps;
    cell.top_vector = kr.x;
  }
  return cell;
}

}  // namespace

SieveCell large_sieve_ratio(const PolyRing& R, int m, int n, const SieveOptions& opt, SymbolCache* cache) {
  const SymbolMatrix A = symbol_matrix(R, m, n, opt.all_monic_rows, cache);
  return run_cell(R, A, opt);
}

std::pair<double, double> adjoint_transfer(const SymbolMatrix& A, const SymbolMatrix& At, std::uint32_t ell,
                                           const std::vector<double>& lambda) {
  const auto y = apply(A, ell, lambda);
  const double yn2 = norm2(y);
  if (yn2 == 0) return {0.0, 0.0};
  const double yn = std::sqrt(yn2);
  std::vector<double> lam(y.size());
  for (std::size_t i = 0; i < y.size() / 2; ++i) {
    lam[2 * i] = y[2 * i] / yn;
    lam[2 * i + 1] = -y[2 * i + 1] / yn;
  }
  return {yn2, norm2(apply(At, ell, lam))};
}

double duality_gap(const PolyRing& R, const SieveCell& cell, SymbolCache* cache) {
  if (cell.top_vector.empty()) throw std::invalid_argument("duality_gap: no top vector");
  const std::uint32_t ell = R.field().ell();
  const SymbolMatrix A = symbol_matrix(R, cell.m, cell.n, false, cache);
  const SymbolMatrix D = symbol_matrix(R, cell.n, cell.m, false, cache);
  const auto [here, there] = adjoint_transfer(A, D, ell, cell.top_vector);
  return std::abs(there - here) / std::max(here, 1e-300);
}

SieveGrid large_sieve_grid(const PolyRing& R, int max_deg, const SieveOptions& opt) {
  const std::uint32_t ell = R.field().ell();
  SieveGrid g;
  g.max_deg = max_deg;
  g.all_monic_rows = opt.all_monic_rows;
  g.options = opt;
  g.cells.resize(static_cast<std::size_t>(max_deg + 1) * (max_deg + 1));
  SymbolCache cache;
  for (int m = 0; m <= max_deg; ++m)
    for (int n = m; n <= max_deg; ++n) {
      const SymbolMatrix A = symbol_matrix(R, m, n, opt.all_monic_rows, &cache);
      SieveCell c = run_cell(R, A, opt);
      if (m == n || opt.all_monic_rows) {
        g.cells[m * (max_deg + 1) + n] = std::move(c);
        continue;
      }
      const SymbolMatrix At = symbol_matrix(R, n, m, false, &cache);
      SieveCell ct = run_cell(R, At, opt);
      if (!c.best_lambda.empty()) ct.adjoint_estimate = adjoint_transfer(A, At, ell, c.best_lambda).second;
      if (!ct.best_lambda.empty()) c.adjoint_estimate = adjoint_transfer(At, A, ell, ct.best_lambda).second;
      if (c.refined) {
        const auto [h, t] = adjoint_transfer(A, At, ell, c.top_vector);
        c.duality_gap = std::abs(t - h) / std::max(h, 1e-300);
      }
      if (ct.refined) {
        const auto [h, t] = adjoint_transfer(At, A, ell, ct.top_vector);
        ct.duality_gap = std::abs(t - h) / std::max(h, 1e-300);
      }
      g.cells[m * (max_deg + 1) + n] = std::move(c);
      g.cells[n * (max_deg + 1) + m] = std::move(ct);
    }
  return g;
}

double SieveGrid::max_refined_asymmetry() const {
  double worst = 0;
  for (int m = 0; m <= max_deg; ++m)
    for (int n = m + 1; n <= max_deg; ++n) {
      const SieveCell &a = at(m, n), &b = at(n, m);
      if (!a.refined || !b.refined) continue;
      worst = std::max(worst, std::abs(a.krylov_sup - b.krylov_sup) / std::max(a.krylov_sup, b.krylov_sup));
    }
  return worst;
}

Cyclo orthogonality_sum(const PolyRing& R, const CycloCtx& C, const Poly& N1, const Poly& N2, int m) {
  const int ell = static_cast<int>(R.field().ell());
  std::vector<std::int64_t> cnt(ell, 0);
  for (const Poly& M : enumerate(R, SetKind::M, m)) {
    const int a = symbol(R, M, N1), b = symbol(R, M, N2);
    if (a == kZeroExp || b == kZeroExp) continue;
    cnt[((a - b) % ell + ell) % ell]++;
  }
  Cyclo s(C);
  for (int e = 0; e < ell; ++e) s += Cyclo::ell_root(C, e).scaled(cnt[e]);
  return s;
}

}  // namespace kummerlab
