#include "kummerlab/gausscount.hpp"

#include <algorithm>
#include <stdexcept>

namespace kummerlab {

namespace {

std::int64_t modq(std::int64_t a, std::int64_t m) { return ((a % m) + m) % m; }

// log Res(f, f') or -1, f monic of degree n >= 1 given by coefficients
std::int64_t disc_log(const FieldCtx& F, const Fq* f, int n) {
  Fq der[kMaxKernelDeg + 1];
  for (int i = 1; i <= n; ++i) der[i - 1] = F.mul(f[i], F.from_int(i));
  int dd = n - 1;
  while (dd >= 0 && der[dd] == 0) --dd;
  if (dd < 0) return -1;
  return res_log(F, f, n, der, dd);
}

std::vector<Fq> digits_of(std::uint64_t idx, int len, std::uint32_t q) {
  std::vector<Fq> d(len);
  for (int i = 0; i < len; ++i) {
    d[i] = static_cast<Fq>(idx % q);
    idx /= q;
  }
  return d;
}

std::uint64_t index_of(const std::vector<Fq>& d, std::uint32_t q) {
  std::uint64_t idx = 0;
  for (int i = static_cast<int>(d.size()) - 1; i >= 0; --i) idx = idx * q + d[i];
  return idx;
}

std::string poly_key(const PolyRing& R, const Poly& f) { return R.to_text(f); }

}  // namespace

int w_from_log(std::int64_t L, int n, std::uint32_t q, std::uint32_t ell) {
  const std::int64_t qm1 = q - 1;
  L = modq(L, qm1);
  const std::int64_t disc = (static_cast<std::int64_t>(n) * (n - 1) / 2) % 2 ? L + qm1 / 2 : L;
  return static_cast<int>(disc & 1) * static_cast<int>(ell) + static_cast<int>(L % ell);
}

std::vector<std::uint8_t> build_wtable_direct(const PolyRing& R, int n) {
  const FieldCtx& F = R.field();
  std::vector<std::uint8_t> W(R.count_monic(n));
  if (n == 0) {
    W[0] = 0;
    return W;
  }
  MonicOdometer od(R, n);
  do {
    const int w = w_class(F, od.coeffs().data(), n);
    W[od.index()] = w < 0 ? kNotSquarefree : static_cast<std::uint8_t>(w);
  } while (od.next() >= 0);
  return W;
}

std::vector<std::uint8_t> build_wtable(const PolyRing& R, int n) {
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q(), p = F.p();
  if (n < 4 || n % p == 0) return build_wtable_direct(R, n);
  std::vector<std::uint8_t> W(R.count_monic(n), kNotSquarefree);
  const int free_len = n - 2;  // c_0 .. c_{n-3}
  const std::uint64_t nrep = R.count_monic(free_len);
  const std::int64_t qm1 = q - 1;
  const std::int64_t shift = static_cast<std::int64_t>(n) * (1 - n);
  std::vector<std::int32_t> L(nrep);
  std::vector<Fq> f(n + 1, 0);
  const Fq s_values[3] = {0, 1, F.gen()};  // gen is a non-square
  for (Fq s : s_values) {
    // classify the depressed representatives t^n + s t^{n-2} + lower
    std::fill(f.begin(), f.end(), 0);
    f[n] = 1;
    f[n - 2] = s;
    for (std::uint64_t ri = 0; ri < nrep; ++ri) {
      std::uint64_t x = ri;
      for (int i = 0; i < free_len; ++i) {
        f[i] = static_cast<Fq>(x % q);
        x /= q;
      }
      L[ri] = static_cast<std::int32_t>(disc_log(F, f.data(), n));
    }
    const std::int64_t nlam = s == 0 ? 1 : qm1 / 2;
    for (std::int64_t e = 0; e < nlam; ++e) {
      const Fq lam = F.exp(e);
      const std::int64_t dL = modq(shift * e, qm1);
      for (Fq b = 0; b < q; ++b) {
        // image of the zero representative and the columns lambda^{-n} (lambda t + b)^i
        std::vector<Fq> bc(n + 1, 0);
        bc[n] = 1;
        bc[n - 2] = s;
        const Poly base_rep(bc);
        const Poly img0 = R.affine_act(base_rep, lam, b);
        const Fq lam_inv_n = F.inv(F.pow(lam, n));
        std::vector<std::vector<Fq>> col(free_len);
        Poly lin(std::vector<Fq>{b, lam});
        Poly pw = Poly::one();
        for (int i = 0; i < free_len; ++i) {
          col[i].assign(i + 1, 0);
          for (int d = 0; d <= pw.deg(); ++d) col[i][d] = F.mul(pw[d], lam_inv_n);
          pw = R.mul(pw, lin);
        }
        std::vector<Fq> img(n, 0);
        for (int d = 0; d < n; ++d) img[d] = img0[d];
        std::vector<std::uint64_t> qp(n, 1);
        for (int d = 1; d < n; ++d) qp[d] = qp[d - 1] * q;
        std::uint64_t idx = index_of(img, q);
        std::vector<Fq> digit(free_len, 0);
        for (std::uint64_t ri = 0;; ++ri) {
          const std::int32_t l = L[ri];
          W[idx] = l < 0 ? kNotSquarefree : static_cast<std::uint8_t>(w_from_log(l + dL, n, q, F.ell()));
          if (ri + 1 == nrep) break;
          for (int pos = 0; pos < free_len; ++pos) {
            const Fq old = digit[pos];
            const Fq nw = old + 1 < q ? old + 1 : 0;
            digit[pos] = nw;
            const Fq delta = F.sub(nw, old);
            for (int d = 0; d <= pos; ++d) {
              const Fq od = img[d];
              const Fq nd = F.add(od, F.mul(delta, col[pos][d]));
              img[d] = nd;
              idx = idx + nd * qp[d] - od * qp[d];
            }
            if (nw != 0) break;
          }
        }
      }
    }
  }
  return W;
}

AffineRep affine_canonical(const PolyRing& R, const Poly& r) {
  AffineRep best{r, 1, 0};
  if (r.deg() <= 0) return best;
  if (!r.is_monic()) throw std::invalid_argument("affine_canonical needs a monic polynomial");
  const std::uint32_t q = R.q();
  std::uint64_t bi = R.monic_index(r);
  for (Fq lam = 1; lam < q; ++lam)
    for (Fq b = 0; b < q; ++b) {
      Poly g = R.affine_act(r, lam, b);
      const std::uint64_t gi = R.monic_index(g);
      if (gi < bi) {
        bi = gi;
        best = {std::move(g), lam, b};
      }
    }
  return best;
}

GaussCounter::GaussCounter(const GaussEngine& E) : E_(&E) {}

const std::vector<std::uint8_t>& GaussCounter::wtable(int n) {
  auto it = w_.find(n);
  if (it == w_.end()) it = w_.emplace(n, build_wtable(E_->ring(), n)).first;
  return it->second;
}

void GaussCounter::release_tables() {
  w_.clear();
  counts_.clear();
}

const std::vector<std::int64_t>& GaussCounter::counts(int n, const std::vector<Tracked>& tr, int groups) {
  const PolyRing& R = E_->ring();
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q();
  const int ell = static_cast<int>(F.ell());
  std::string key = std::to_string(n) + "|" + std::to_string(groups);
  for (auto& t : tr) key += "|" + poly_key(R, t.pi) + "@" + std::to_string(t.group);
  auto it = counts_.find(key);
  if (it != counts_.end()) {
    ++hits_;
    return it->second;
  }
  std::int64_t KS = 1;
  for (int g = 0; g < groups; ++g) KS *= ell;
  std::vector<std::int64_t> cnt(2 * ell * KS, 0);
  const auto& W = wtable(n);

  int h = 0;
  std::uint64_t Qh = 1;
  while (h < n && Qh * q <= 2500) {
    ++h;
    Qh *= q;
  }
  struct Prep {
    int D;
    std::uint64_t QD;
    int group;
    std::vector<std::int8_t> sym;         // symbol exponent per residue, -1 for zero
    std::vector<std::uint32_t> low;       // residue of the low block
    std::vector<std::int8_t> addsym;      // sym[x (+) y], or empty
    std::vector<std::vector<Fq>> tpow;    // t^p mod pi, p = 0..n
  };
  std::vector<Prep> P;
  for (auto& t : tr) {
    Prep pr;
    pr.D = t.pi.deg();
    pr.group = t.group;
    pr.QD = R.count_monic(pr.D);
    if (pr.QD > (std::uint64_t{1} << 24)) throw std::invalid_argument("tracked prime too large for the count tables");
    pr.sym.resize(pr.QD);
    for (std::uint64_t x = 0; x < pr.QD; ++x) {
      const Poly a(digits_of(x, pr.D, q));
      const int s = a.is_zero() ? kZeroExp : symbol(R, a, t.pi);
      pr.sym[x] = s == kZeroExp ? -1 : static_cast<std::int8_t>(s);
    }
    pr.tpow.resize(n + 1);
    Poly tp = Poly::one();
    for (int i = 0; i <= n; ++i) {
      const Poly m = R.mod(tp, t.pi);
      pr.tpow[i].assign(pr.D, 0);
      for (int d = 0; d <= m.deg(); ++d) pr.tpow[i][d] = m[d];
      tp = R.mul(tp, Poly::t());
    }
    pr.low.resize(Qh);
    for (std::uint64_t L = 0; L < Qh; ++L) {
      const auto dg = digits_of(L, h, q);
      std::vector<Fq> res(pr.D, 0);
      for (int i = 0; i < h; ++i)
        if (dg[i])
          for (int d = 0; d < pr.D; ++d) res[d] = F.add(res[d], F.mul(dg[i], pr.tpow[i][d]));
      pr.low[L] = static_cast<std::uint32_t>(index_of(res, q));
    }
    if (pr.QD * pr.QD <= (std::uint64_t{1} << 23)) {
      pr.addsym.resize(pr.QD * pr.QD);
      for (std::uint64_t x = 0; x < pr.QD; ++x) {
        const auto dx = digits_of(x, pr.D, q);
        for (std::uint64_t y = 0; y < pr.QD; ++y) {
          auto dy = digits_of(y, pr.D, q);
          for (int d = 0; d < pr.D; ++d) dy[d] = F.add(dx[d], dy[d]);
          pr.addsym[x * pr.QD + y] = pr.sym[index_of(dy, q)];
        }
      }
    }
    P.push_back(std::move(pr));
  }

  // key contribution tables: -1 marks a zero residue
  const int nt = static_cast<int>(P.size());
  std::int64_t comb_mult = 1;
  int comb_group = -1;
  for (auto& pr : P)
    if (pr.group >= 0 && std::count_if(P.begin(), P.end(), [&](const Prep& o) { return o.group == pr.group; }) > 1)
      comb_group = pr.group;
  for (int g = 0; g < comb_group; ++g) comb_mult *= ell;
  std::vector<std::vector<std::int32_t>> contrib(nt);
  std::vector<char> is_comb(nt, 0);
  for (int ti = 0; ti < nt; ++ti) {
    auto& pr = P[ti];
    std::int64_t mult = 1;
    for (int g = 0; g < pr.group; ++g) mult *= ell;
    is_comb[ti] = pr.group >= 0 && pr.group == comb_group;
    auto conv = [&](int s) -> std::int32_t {
      if (s < 0) return -1;
      if (pr.group < 0) return 0;
      return is_comb[ti] ? s : static_cast<std::int32_t>(s * mult);
    };
    if (!pr.addsym.empty()) {
      contrib[ti].resize(pr.addsym.size());
      for (std::size_t x = 0; x < pr.addsym.size(); ++x) contrib[ti][x] = conv(pr.addsym[x]);
    } else {
      contrib[ti].resize(pr.sym.size());
      for (std::size_t x = 0; x < pr.sym.size(); ++x) contrib[ti][x] = conv(pr.sym[x]);
    }
  }
  const std::uint64_t nhi = R.count_monic(n - h);
  std::vector<Fq> hd(n - h, 0);
  std::vector<const std::int32_t*> row(nt);
  std::vector<std::vector<Fq>> based(nt);
  std::vector<const std::uint32_t*> lowp(nt);
  for (int ti = 0; ti < nt; ++ti) lowp[ti] = P[ti].low.data();
  for (std::uint64_t hi = 0; hi < nhi; ++hi) {
    if (hi) {
      for (int pos = 0; pos < n - h; ++pos) {
        if (++hd[pos] < q) break;
        hd[pos] = 0;
      }
    }
    for (int ti = 0; ti < nt; ++ti) {
      auto& pr = P[ti];
      std::vector<Fq> res = pr.tpow[n];
      for (int pos = 0; pos < n - h; ++pos)
        if (hd[pos])
          for (int d = 0; d < pr.D; ++d) res[d] = F.add(res[d], F.mul(hd[pos], pr.tpow[h + pos][d]));
      if (!pr.addsym.empty()) row[ti] = contrib[ti].data() + index_of(res, q) * pr.QD;
      based[ti] = std::move(res);
    }
    const std::uint8_t* Wrow = W.data() + hi * Qh;
    for (std::uint64_t L = 0; L < Qh; ++L) {
      const std::uint8_t w = Wrow[L];
      if (w == kNotSquarefree) continue;
      std::int64_t key = 0;
      int comb = 0;
      bool zero = false;
      for (int ti = 0; ti < nt; ++ti) {
        std::int32_t c;
        if (row[ti]) {
          c = row[ti][lowp[ti][L]];
        } else {
          auto dy = digits_of(lowp[ti][L], P[ti].D, q);
          for (int d = 0; d < P[ti].D; ++d) dy[d] = F.add(based[ti][d], dy[d]);
          c = contrib[ti][index_of(dy, q)];
        }
        if (c < 0) {
          zero = true;
          break;
        }
        if (is_comb[ti])
          comb += c;
        else
          key += c;
      }
      if (zero) continue;
      if (comb_group >= 0) key += (comb % ell) * comb_mult;
      ++cnt[w * KS + key];
    }
  }
  steps_ += R.count_monic(n);
  return counts_.emplace(key, std::move(cnt)).first->second;
}

std::vector<Cyclo> GaussCounter::coefficients(const Poly& r, int K, int j, const Poly& a, const Poly& v) {
  const PolyRing& R = E_->ring();
  const FieldCtx& F = R.field();
  const CycloCtx& C = E_->cyclo();
  const int ell = static_cast<int>(F.ell());
  if (r.is_zero()) throw std::invalid_argument("coefficient sums need r != 0");
  if (!a.is_monic() || !v.is_monic()) throw std::invalid_argument("a and v must be monic");
  std::vector<Cyclo> out(K + 1, Cyclo(C));
  const Fq lead = r.lead();
  const Poly rm = R.monic(r);
  const Factorization fr = factor(R, rm), fv = factor(R, v), fa = factor(R, a);
  for (auto& [pi, e] : fa.factors)
    if (e != 1) throw std::invalid_argument("a must be squarefree");
  auto in = [](const Factorization& f, const Poly& pi) {
    for (auto& [x, e] : f.factors)
      if (x == pi) return e;
    return 0;
  };
  for (auto& [pi, e] : fa.factors)
    if (in(fv, pi)) return out;

  const int s = static_cast<int>(fr.factors.size());
  Poly a3 = Poly::one();
  std::vector<Poly> a3p;
  for (auto& [pi, e] : fa.factors)
    if (!in(fr, pi)) {
      a3 = R.mul(a3, pi);
      a3p.push_back(pi);
    }
  const int groups = s + (a3p.empty() ? 0 : 1);
  std::vector<Tracked> tr;
  for (int i = 0; i < s; ++i) tr.push_back({fr.factors[i].first, i});
  for (auto& pi : a3p) tr.push_back({pi, s});
  for (auto& [pi, e] : fv.factors)
    if (!in(fr, pi) && !in(fa, pi)) tr.push_back({pi, -1});

  // a3 against the primes of r
  std::vector<int> a3sym(s, 0);
  for (int i = 0; i < s; ++i) a3sym[i] = a3.is_one() ? 0 : symbol(R, a3, fr.factors[i].first);
  const Cyclo G1a3 = E_->fast(Poly::one(), a3, j);
  const int da3 = a3.deg();
  if (da3 > K) return out;

  std::vector<int> lo(s), hi(s), ex(s);
  for (int i = 0; i < s; ++i) {
    const Poly& pi = fr.factors[i].first;
    if (in(fv, pi)) {
      lo[i] = hi[i] = 0;
    } else {
      lo[i] = in(fa, pi) ? 1 : 0;
      hi[i] = fr.factors[i].second + 1;
    }
    ex[i] = lo[i];
  }
  std::int64_t KS = 1;
  for (int g = 0; g < groups; ++g) KS *= ell;
  for (;;) {
    int d1 = da3;
    for (int i = 0; i < s; ++i) d1 += ex[i] * fr.factors[i].first.deg();
    if (d1 <= K) {
      Factorization f1;
      for (int i = 0; i < s; ++i)
        if (ex[i]) f1.factors.push_back({fr.factors[i].first, ex[i]});
      const Cyclo G1 = E_->fast(rm, f1, j);
      if (!G1.is_zero()) {
        std::int64_t pe = 0;
        for (int i = 0; i < s; ++i)
          pe += static_cast<std::int64_t>(a3sym[i]) * (2 * j * ex[i] - j * fr.factors[i].second);
        Cyclo pre = G1 * G1a3;
        pe = modq(pe, ell);
        if (pe) pre = pre.mul_root(static_cast<std::int64_t>(C.p()) * pe);
        std::vector<std::int64_t> coef(groups);
        for (int i = 0; i < s; ++i) coef[i] = modq(2LL * j * ex[i] - static_cast<std::int64_t>(j) * fr.factors[i].second, ell);
        if (groups > s) coef[s] = modq(2LL * j, ell);
        for (int n = 0; d1 + n <= K; ++n) {
          const auto& cnt = counts(n, tr, groups);
          std::vector<std::int64_t> gr(ell, 0);
          for (int w = 0; w < 2 * ell; ++w) {
            const int sigma = w / ell, e = w % ell;
            for (std::int64_t key = 0; key < KS; ++key) {
              const std::int64_t c = cnt[w * KS + key];
              if (!c) continue;
              std::int64_t x = static_cast<std::int64_t>(j) * e;
              std::int64_t kk = key;
              for (int g = 0; g < groups; ++g) {
                x += coef[g] * (kk % ell);
                kk /= ell;
              }
              gr[modq(x, ell)] += sigma ? -c : c;
            }
          }
          Cyclo sum(C);
          for (int x = 0; x < ell; ++x)
            if (gr[x]) sum.add_root(static_cast<std::int64_t>(C.p()) * x, gr[x]);
          out[d1 + n] += pre * E_->tau_pow(j, n) * sum;
        }
      }
    }
    int i = 0;
    while (i < s && ex[i] == hi[i]) {
      ex[i] = lo[i];
      ++i;
    }
    if (i == s) break;
    ++ex[i];
  }
  if (lead != 1) {
    const std::int64_t c0 = F.chi0(lead);
    for (int k = 0; k <= K; ++k) {
      const std::int64_t x = modq(-static_cast<std::int64_t>(j) * c0 * k, ell);
      if (x) out[k] = out[k].mul_root(static_cast<std::int64_t>(C.p()) * x);
    }
  }
  return out;
}

std::vector<Cyclo> GaussCounter::plain(const Poly& r, int K, int j) {
  const PolyRing& R = E_->ring();
  const FieldCtx& F = R.field();
  const CycloCtx& C = E_->cyclo();
  const int ell = static_cast<int>(F.ell());
  const Fq lead = r.lead();
  const Poly rm = R.monic(r);
  const AffineRep ar = affine_canonical(R, rm);
  const std::string key = R.to_text(ar.rep) + "#" + std::to_string(j);
  auto it = plain_.find(key);
  if (it == plain_.end() || static_cast<int>(it->second.size()) <= K)
    it = plain_.insert_or_assign(key, coefficients(ar.rep, K, j)).first;
  std::vector<Cyclo> out(it->second.begin(), it->second.begin() + K + 1);
  const std::int64_t m = rm.deg(), ll = F.log(ar.lambda);
  const std::int64_t c0 = lead == 1 ? 0 : F.chi0(lead);
  for (int k = 0; k <= K; ++k) {
    const std::int64_t x = modq(static_cast<std::int64_t>(j) * k * (k - m - 1) % ell * (ll % ell) -
                                    static_cast<std::int64_t>(j) * c0 * k,
                                ell);
    if (x) out[k] = out[k].mul_root(static_cast<std::int64_t>(C.p()) * x);
  }
  return out;
}

std::vector<Cyclo> GaussCounter::coefficients_naive(const Poly& r, int K, int j, const Poly& a, const Poly& v) const {
  const PolyRing& R = E_->ring();
  std::vector<Cyclo> out(K + 1, Cyclo(E_->cyclo()));
  for (int k = 0; k <= K; ++k) {
    MonicOdometer od(R, k);
    do {
      const Poly f = od.poly();
      if (!R.divides(a, f)) continue;
      if (!R.gcd(f, v).is_one()) continue;
      out[k] += E_->fast(r, f, j);
    } while (od.next() >= 0);
  }
  return out;
}

}  // namespace kummerlab
