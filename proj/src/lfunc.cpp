#include "kummerlab/lfunc.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kummerlab {

namespace {

int modl(std::int64_t a, int ell) { return static_cast<int>(((a % ell) + ell) % ell); }

cdouble horner(const std::vector<cdouble>& c, cdouble u) {
  cdouble v = 0;
  for (std::size_t i = c.size(); i-- > 0;) v = v * u + c[i];
  return v;
}

std::int64_t binom(std::int64_t n, std::int64_t k) {
  if (k < 0 || k > n) return 0;
  __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  if (r > INT64_MAX) throw std::overflow_error("binomial overflow");
  return static_cast<std::int64_t>(r);
}

}  // namespace

cdouble embed(const GroupRingElt& g) {
  const double ell = static_cast<double>(g.size());
  cdouble v = 0;
  for (std::size_t e = 0; e < g.size(); ++e)
    if (g[e]) v += static_cast<double>(g[e]) * std::polar(1.0, 2 * std::numbers::pi * static_cast<double>(e) / ell);
  return v;
}

Cyclo LPoly::coeff(const CycloCtx& C, int n) const {
  std::vector<std::int64_t> counts(C.m(), 0);
  const auto& g = coeffs.at(n);
  for (std::size_t e = 0; e < g.size(); ++e) counts[C.root_index(static_cast<std::int64_t>(e), 0)] += g[e];
  return Cyclo::from_root_counts(C, counts);
}

std::vector<cdouble> LPoly::embedded() const {
  std::vector<cdouble> out;
  for (auto& g : coeffs) out.push_back(embed(g));
  return out;
}

LPoly lpoly_sum(const PolyRing& R, const Poly& c, int j, int ncoeffs) {
  const int ell = static_cast<int>(R.field().ell());
  LPoly L;
  L.modulus = c;
  L.j = j;
  L.d = c.deg();
  for (int n = 0; n < ncoeffs; ++n) {
    GroupRingElt g(ell, 0);
    const std::uint64_t total = R.count_monic(n);
    for (std::uint64_t i = 0; i < total; ++i) {
      const int e = symbol(R, R.monic_from_index(n, i), c);
      if (e >= 0) g[modl(static_cast<std::int64_t>(e) * j, ell)]++;
    }
    L.coeffs.push_back(std::move(g));
  }
  return L;
}

LPoly lpoly(const PolyRing& R, const Poly& c, int j) {
  const int ell = static_cast<int>(R.field().ell());
  if (!c.is_monic() || !is_squarefree(R, c)) throw std::invalid_argument("lpoly needs a squarefree monic modulus");
  if (modl(static_cast<std::int64_t>(j) * c.deg(), ell) == 0) throw std::invalid_argument("lpoly needs an odd character");
  return lpoly_sum(R, c, j, c.deg());
}

FunctionalEquation functional_equation(const LPoly& L, const GaussEngine& E) {
  const CycloCtx& C = E.cyclo();
  const std::uint32_t q = E.field().q();
  const int d = L.d;
  FunctionalEquation fe;
  std::vector<Cyclo> c;
  for (int n = 0; n < d; ++n) c.push_back(L.coeff(C, n));
  const Cyclo& top = c[d - 1];
  fe.exact = true;
  for (int n = 0; n < d; ++n)
    if (c[d - 1 - n].scaled(ipow(q, static_cast<std::uint32_t>(n))) != top * c[n].conj()) fe.exact = false;
  const double sq = std::sqrt(static_cast<double>(q));
  const double scale = std::pow(sq, d - 1);
  fe.omega = top.to_complex() / scale;
  fe.omega_dev = std::abs(std::abs(fe.omega) - 1.0);
  fe.printed_odd_dev = std::abs(std::abs(top.to_complex() * scale) - 1.0);
  double res = 0;
  for (int n = 0; n < d; ++n) {
    const cdouble lhs = c[d - 1 - n].to_complex();
    const cdouble rhs = fe.omega * scale * std::pow(static_cast<double>(q), -n) * std::conj(c[n].to_complex());
    res = std::max(res, std::abs(lhs - rhs) / scale);
  }
  fe.residual = res;
  const Cyclo G = E.squarefree_closed(Poly::one(), L.modulus, L.j);
  fe.gauss_form_exact = (top * E.tau(L.j * d)) == G;
  return fe;
}

std::vector<cdouble> poly_roots(const std::vector<cdouble>& coeffs) {
  std::vector<cdouble> c = coeffs;
  while (!c.empty() && std::abs(c.back()) == 0) c.pop_back();
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cdouble> roots;
  if (n <= 0) return roots;
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) M(i, i - 1) = 1;
  for (int i = 0; i < n; ++i) M(i, n - 1) = -c[i] / c[n];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M, false);
  if (es.info() != Eigen::Success) throw std::runtime_error("companion eigenvalue solver did not converge");
  for (int i = 0; i < n; ++i) {
    const cdouble u = es.eigenvalues()[i];
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) throw std::runtime_error("non-finite root");
    roots.push_back(u);
  }
  // Clustered eigenvalues are a multiple root seen through rounding: polish the
  // cluster centre as a simple root of the (m-1)-th derivative, in long double.
  using lcd = std::complex<long double>;
  std::vector<std::vector<lcd>> deriv(1);
  for (auto x : c) deriv[0].push_back(lcd(x.real(), x.imag()));
  auto derivative_of = [&](int k) -> const std::vector<lcd>& {
    while (static_cast<int>(deriv.size()) <= k) {
      const auto& prev = deriv.back();
      std::vector<lcd> nd;
      for (std::size_t i = 1; i < prev.size(); ++i) nd.push_back(prev[i] * static_cast<long double>(i));
      deriv.push_back(std::move(nd));
    }
    return deriv[k];
  };
  auto eval = [](const std::vector<lcd>& p, lcd u) {
    lcd v = 0;
    for (std::size_t i = p.size(); i-- > 0;) v = v * u + p[i];
    return v;
  };
  double scale = 0;
  for (auto u : roots) scale = std::max(scale, std::abs(u));
  const double tol = 1e-5 * std::max(scale, 1e-300);
  std::vector<int> done(n, 0);
  for (int i = 0; i < n; ++i) {
    if (done[i]) continue;
    std::vector<int> cl{i};
    for (int k = i + 1; k < n; ++k)
      if (!done[k] && std::abs(roots[k] - roots[i]) < tol) cl.push_back(k);
    const int m = static_cast<int>(cl.size());
    lcd u = 0;
    for (int k : cl) u += lcd(roots[k].real(), roots[k].imag());
    u /= static_cast<long double>(m);
    derivative_of(m);  // grow first: references below must stay valid
    const auto& p = deriv[m - 1];
    const auto& dp = deriv[m];
    for (int it = 0; it < 8; ++it) {
      const lcd pu = eval(p, u), dpu = eval(dp, u);
      if (std::abs(dpu) == 0) break;
      const lcd v = u - pu / dpu;
      if (!(std::abs(eval(p, v)) < std::abs(pu))) break;
      u = v;
    }
    for (int k : cl) {
      roots[k] = cdouble(static_cast<double>(u.real()), static_cast<double>(u.imag()));
      done[k] = 1;
    }
  }
  return roots;
}

AngleSet angles(const LPoly& L, std::uint32_t q) {
  AngleSet a;
  a.roots = poly_roots(L.embedded());
  if (static_cast<int>(a.roots.size()) != L.d - 1) throw std::runtime_error("root count differs from d - 1");
  const double sq = std::sqrt(static_cast<double>(q));
  for (auto u : a.roots) {
    a.max_rh_residual = std::max(a.max_rh_residual, std::abs(std::abs(u) * sq - 1.0));
    double th = std::arg(u) / (2 * std::numbers::pi);
    th -= std::floor(th);
    if (th >= 1.0) th -= 1.0;
    a.theta.push_back(th);
  }
  std::sort(a.theta.begin(), a.theta.end());
  return a;
}

const char* vanishing_name(Vanishing v) {
  switch (v) {
    case Vanishing::No: return "no";
    case Vanishing::Yes: return "yes";
    default: return "ambiguous";
  }
}

Vanishing half_power_zero(const std::vector<Cyclo>& c, std::uint32_t q) {
  if (c.empty()) return Vanishing::Yes;
  const CycloCtx& C = c[0].ctx();
  const int K = static_cast<int>(c.size()) - 1;
  const int A = K / 2;
  // sum c_n q^{-n/2} times q^A = Ae + Bo / sqrt(q)
  Cyclo Ae(C), Bo(C);
  for (int n = 0; n <= K; ++n) {
    const std::int64_t w = ipow(q, static_cast<std::uint32_t>(A - n / 2));
    (n % 2 ? Bo : Ae) += c[n].scaled(w);
  }
  const bool za = Ae.is_zero(), zb = Bo.is_zero();
  if (za && zb) return Vanishing::Yes;
  if (za || zb) return Vanishing::No;
  const std::int64_t s = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(q))));
  if (s * s == static_cast<std::int64_t>(q)) return (Ae.scaled(s) + Bo).is_zero() ? Vanishing::Yes : Vanishing::No;
  if (Ae * Ae.scaled(q) != Bo * Bo) return Vanishing::No;
  // Bo = +-sqrt(q) Ae inside the field: the value is exactly 0 or 2 Ae
  const cdouble a = Ae.to_complex(), b = Bo.to_complex() / std::sqrt(static_cast<double>(q));
  const double mag = std::max(std::abs(a), std::abs(b));
  const double v = std::abs(a + b);
  if (v < 1e-10 * mag) return Vanishing::Yes;
  if (std::abs(v - 2 * std::abs(a)) < 1e-6 * mag) return Vanishing::No;
  return Vanishing::Ambiguous;
}

CentralValue central_value(const LPoly& L, const CycloCtx& C, std::uint32_t q) {
  CentralValue cv;
  const auto emb = L.embedded();
  cv.value = horner(emb, 1.0 / std::sqrt(static_cast<double>(q)));
  std::vector<Cyclo> c;
  for (int n = 0; n < static_cast<int>(L.coeffs.size()); ++n) c.push_back(L.coeff(C, n));
  cv.vanishing = half_power_zero(c, q);
  if (cv.vanishing != Vanishing::Yes) return cv;
  // order: first derivative index that does not vanish
  for (int k = 1; k < static_cast<int>(c.size()); ++k) {
    std::vector<Cyclo> dk;
    for (int n = k; n < static_cast<int>(c.size()); ++n) {
      std::int64_t f = 1;
      for (int i = 0; i < k; ++i) f *= (n - i);
      dk.push_back(c[n].scaled(f));
    }
    const Vanishing v = half_power_zero(dk, q);
    if (v == Vanishing::Ambiguous) {
      cv.vanishing = Vanishing::Ambiguous;
      return cv;
    }
    if (v == Vanishing::No) {
      cv.order = k;
      return cv;
    }
  }
  cv.order = static_cast<int>(c.size()) - 1;
  return cv;
}

FamilyScanner::FamilyScanner(const PrimeTable& T, int d, int max_prime_deg)
    : T_(&T), d_(d), maxD_(max_prime_deg) {
  if (max_prime_deg > T.max_n()) throw std::invalid_argument("prime table too short for scanner");
  squarefree_ = T.squarefree_flags(d);
}

std::uint64_t FamilyScanner::family_size() const {
  std::uint64_t n = 0;
  for (auto f : squarefree_) n += f;
  return n;
}

void FamilyScanner::run(const std::function<void(const Poly&, std::uint64_t, const Hist&)>& fn, std::uint64_t begin,
                        std::uint64_t end) const {
  const PolyRing& R = T_->ring();
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q();
  const int ell = static_cast<int>(F.ell());
  const std::uint64_t total = R.count_monic(d_);
  end = std::min(end, total);
  if (begin >= end) return;

  struct PrimeState {
    int D;
    std::vector<std::vector<Fq>> tpow;  // t^pos mod P, pos <= d
    std::vector<std::int8_t> sym;       // (x / P) for x mod P
    std::vector<Fq> res;
    std::uint64_t idx;
  };
  std::vector<PrimeState> ps;
  std::vector<std::uint64_t> qp(std::max(d_, maxD_) + 1, 1);
  for (std::size_t i = 1; i < qp.size(); ++i) qp[i] = qp[i - 1] * q;

  Poly c0 = R.monic_from_index(d_, begin);
  for (int D = 1; D <= maxD_; ++D)
    for (auto pidx : T_->indices(D)) {
      PrimeState s;
      s.D = D;
      const Poly P = R.monic_from_index(D, pidx);
      CharTable tab(R, P);
      s.sym.resize(qp[D]);
      for (std::uint64_t x = 0; x < qp[D]; ++x) s.sym[x] = tab.value(x);
      Poly cur = Poly::one();
      for (int pos = 0; pos <= d_; ++pos) {
        std::vector<Fq> v(D, 0);
        for (int i = 0; i < D; ++i) v[i] = cur[i];
        s.tpow.push_back(std::move(v));
        cur = R.mod(R.mul(cur, Poly::t()), P);
      }
      const Poly r0 = R.mod(c0, P);
      s.res.assign(D, 0);
      s.idx = 0;
      for (int i = 0; i < D; ++i) {
        s.res[i] = r0[i];
        s.idx += r0[i] * qp[i];
      }
      ps.push_back(std::move(s));
    }

  std::vector<Fq> cd(c0.c.begin(), c0.c.end());
  Hist hist(maxD_ + 1, std::vector<std::int64_t>(ell, 0));
  for (std::uint64_t ci = begin; ci < end; ++ci) {
    if (squarefree_[ci]) {
      for (auto& h : hist) std::fill(h.begin(), h.end(), 0);
      for (auto& s : ps) {
        const int e = s.sym[s.idx];
        if (e >= 0) hist[s.D][e]++;
      }
      fn(Poly(cd), ci, hist);
    }
    if (ci + 1 == end) break;
    for (int pos = 0; pos < d_; ++pos) {
      const Fq old = cd[pos];
      const Fq nv = old + 1 == q ? 0 : old + 1;
      cd[pos] = nv;
      const Fq delta = F.sub(nv, old);
      for (auto& s : ps) {
        if (pos < s.D) {
          const Fq o = s.res[pos], n2 = F.add(o, delta);
          s.res[pos] = n2;
          s.idx = s.idx - o * qp[pos] + n2 * qp[pos];
        } else {
          const auto& tp = s.tpow[pos];
          for (int i = 0; i < s.D; ++i) {
            if (tp[i] == 0) continue;
            const Fq o = s.res[i], n2 = F.add(o, F.mul(delta, tp[i]));
            s.res[i] = n2;
            s.idx = s.idx - o * qp[i] + n2 * qp[i];
          }
        }
      }
      if (nv != 0) break;
    }
  }
}

LPoly lpoly_from_hist(const Poly& c, int j, int d, int ell, const FamilyScanner::Hist& hist) {
  if (static_cast<int>(hist.size()) - 1 < d - 1) throw std::invalid_argument("histogram misses prime degrees");
  std::vector<GroupRingElt> b(d, GroupRingElt(ell, 0));
  b[0][0] = 1;
  for (int D = 1; D <= d - 1; ++D)
    for (int e = 0; e < ell; ++e) {
      const std::int64_t h = hist[D][e];
      if (!h) continue;
      const int z = modl(static_cast<std::int64_t>(j) * e, ell);
      // times (1 - zeta^z u^D)^{-h} = sum_k C(h+k-1, k) zeta^{zk} u^{Dk}
      for (int n = d - 1; n >= D; --n) {
        GroupRingElt acc(ell, 0);
        for (int k = 1; k * D <= n; ++k) {
          const std::int64_t w = binom(h + k - 1, k);
          const int sh = modl(static_cast<std::int64_t>(z) * k, ell);
          const auto& src = b[n - k * D];
          for (int x = 0; x < ell; ++x)
            if (src[x]) acc[(x + sh) % ell] += w * src[x];
        }
        for (int x = 0; x < ell; ++x) b[n][x] += acc[x];
      }
    }
  LPoly L;
  L.modulus = c;
  L.j = j;
  L.d = d;
  L.coeffs = std::move(b);
  return L;
}

GroupRingElt lambda_sum_conj(int n, int j, int ell, const FamilyScanner::Hist& hist) {
  GroupRingElt g(ell, 0);
  for (int D = 1; D <= n; ++D) {
    if (n % D) continue;
    if (D >= static_cast<int>(hist.size())) throw std::invalid_argument("histogram misses prime degrees");
    for (int e = 0; e < ell; ++e)
      if (hist[D][e]) g[modl(-static_cast<std::int64_t>(j) * e * (n / D), ell)] += D * hist[D][e];
  }
  return g;
}

GroupRingElt lambda_sum_direct(const PolyRing& R, const Poly& c, int j, int n) {
  const int ell = static_cast<int>(R.field().ell());
  GroupRingElt g(ell, 0);
  const std::uint64_t total = R.count_monic(n);
  for (std::uint64_t i = 0; i < total; ++i) {
    const Poly f = R.monic_from_index(n, i);
    const int lam = von_mangoldt(R, f);
    if (!lam) continue;
    const int e = symbol(R, f, c);
    if (e >= 0) g[modl(-static_cast<std::int64_t>(j) * e, ell)] += lam;
  }
  return g;
}

}  // namespace kummerlab
