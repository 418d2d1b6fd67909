#include "kummerlab/genseries.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace kummerlab {

namespace {

int modi(int a, int m) { return ((a % m) + m) % m; }

int floordiv(int a, int b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }

Cyclo qpow(const CycloCtx& C, std::uint32_t q, int e) { return Cyclo::integer(C, ipow(q, static_cast<std::uint32_t>(e))); }

std::vector<Poly> prime_factors(const PolyRing& R, const Poly& f) {
  std::vector<Poly> out;
  if (f.deg() <= 0) return out;
  for (auto& [p, e] : factor(R, f).factors) out.push_back(p);
  return out;
}

// Monic divisors of a squarefree f with their Mobius values.
std::vector<std::pair<Poly, int>> squarefree_divisors(const PolyRing& R, const Poly& f) {
  const auto ps = prime_factors(R, f);
  std::vector<std::pair<Poly, int>> out{{Poly::one(), 1}};
  for (auto& p : ps) {
    const std::size_t n = out.size();
    for (std::size_t k = 0; k < n; ++k) out.push_back({R.mul(out[k].first, p), -out[k].second});
  }
  return out;
}

Poly product(const PolyRing& R, const std::vector<Poly>& xs) {
  Poly p = Poly::one();
  for (auto& x : xs) p = R.mul(p, x);
  return p;
}

double rel_diff(std::complex<double> a, std::complex<double> b, double scale) {
  if (scale == 0) return std::abs(a - b) == 0 ? 0 : INFINITY;
  return std::abs(a - b) / scale;
}

}  // namespace

// ---------------------------------------------------------------- TruncSeries

TruncSeries::TruncSeries(const CycloCtx& C, int K) : C_(&C), K_(K), c_(K + 1, Cyclo(C)) {
  if (K < 0) throw std::invalid_argument("truncation degree must be >= 0");
}

TruncSeries TruncSeries::from_coeffs(const CycloCtx& C, int K, const std::vector<Cyclo>& c) {
  TruncSeries s(C, K);
  for (int k = 0; k <= K && k < static_cast<int>(c.size()); ++k) s.c_[k] = c[k];
  return s;
}

TruncSeries TruncSeries::geometric_inverse(const CycloCtx& C, int K, const Cyclo& c, int step) {
  if (step <= 0) throw std::invalid_argument("geometric step must be positive");
  TruncSeries s(C, K);
  Cyclo p = Cyclo::integer(C, 1);
  for (int k = 0; k <= K; k += step) {
    s.c_[k] = p;
    if (k + step <= K) p = p * c;
  }
  return s;
}

TruncSeries TruncSeries::monomial(const CycloCtx& C, int K, const Cyclo& c, int deg) {
  TruncSeries s(C, K);
  if (deg >= 0 && deg <= K) s.c_[deg] = c;
  return s;
}

TruncSeries TruncSeries::operator+(const TruncSeries& o) const {
  TruncSeries s = *this;
  for (int k = 0; k <= K_; ++k) s.c_[k] += o.c_[k];
  return s;
}

TruncSeries TruncSeries::operator-(const TruncSeries& o) const {
  TruncSeries s = *this;
  for (int k = 0; k <= K_; ++k) s.c_[k] -= o.c_[k];
  return s;
}

TruncSeries TruncSeries::operator*(const TruncSeries& o) const {
  if (K_ != o.K_) throw std::invalid_argument("truncation mismatch");
  TruncSeries s(*C_, K_);
  for (int a = 0; a <= K_; ++a) {
    if (c_[a].is_zero()) continue;
    for (int b = 0; a + b <= K_; ++b)
      if (!o.c_[b].is_zero()) s.c_[a + b] += c_[a] * o.c_[b];
  }
  return s;
}

TruncSeries TruncSeries::scaled(const Cyclo& x) const {
  TruncSeries s = *this;
  for (auto& c : s.c_)
    if (!c.is_zero()) c = c * x;
  return s;
}

TruncSeries TruncSeries::shifted(int sh) const {
  if (sh < 0) throw std::invalid_argument("negative shift");
  TruncSeries s(*C_, K_);
  for (int k = 0; k + sh <= K_; ++k) s.c_[k + sh] = c_[k];
  return s;
}

TruncSeries TruncSeries::inverse() const {
  const Cyclo one = Cyclo::integer(*C_, 1);
  Cyclo b0;
  if (c_[0] == one)
    b0 = one;
  else if (c_[0] == -one)
    b0 = -one;
  else
    throw std::invalid_argument("series inverse needs constant term +-1");
  TruncSeries s(*C_, K_);
  s.c_[0] = b0;
  for (int k = 1; k <= K_; ++k) {
    Cyclo acc(*C_);
    for (int x = 1; x <= k; ++x)
      if (!c_[x].is_zero()) acc += c_[x] * s.c_[k - x];
    s.c_[k] = -(acc * b0);
  }
  return s;
}

TruncSeries TruncSeries::class_part(int i, int ell) const {
  TruncSeries s(*C_, K_);
  for (int k = 0; k <= K_; ++k)
    if (modi(k - i, ell) == 0) s.c_[k] = c_[k];
  return s;
}

int TruncSeries::first_difference(const TruncSeries& o) const {
  const int K = std::min(K_, o.K_);
  for (int k = 0; k <= K; ++k)
    if (c_[k] != o.c_[k]) return k;
  return -1;
}

// ---------------------------------------------------------------- RatSeries

int RatSeries::deg_P() const {
  for (int k = static_cast<int>(P.size()) - 1; k >= 0; --k)
    if (!P[k].is_zero()) return k;
  return -1;
}

TruncSeries RatSeries::expand(int K) const {
  const CycloCtx& C = P.at(0).ctx();
  TruncSeries num(C, K);
  for (std::size_t k = 0; k < P.size(); ++k) {
    const int d = i + ell * static_cast<int>(k);
    if (d <= K) num[d] = P[k];
  }
  return num * TruncSeries::geometric_inverse(C, K, qpow(C, q, ell + 1), ell);
}

std::complex<double> RatSeries::numerator(std::complex<double> u) const {
  const std::complex<double> x = std::pow(u, ell);
  std::complex<double> acc = 0;
  for (int k = static_cast<int>(P.size()) - 1; k >= 0; --k) acc = acc * x + P[k].to_complex();
  return std::pow(u, i) * acc;
}

std::complex<double> RatSeries::eval(std::complex<double> u) const {
  return numerator(u) / (1.0 - std::pow(static_cast<double>(q), ell + 1) * std::pow(u, ell));
}

std::complex<double> RatSeries::pole_value() const {
  const double x = std::pow(static_cast<double>(q), -(ell + 1));
  std::complex<double> acc = 0;
  for (int k = static_cast<int>(P.size()) - 1; k >= 0; --k) acc = acc * x + P[k].to_complex();
  return acc;
}

int bracket(int x, int ell, bool one_based) {
  const int b = modi(x, ell);
  return (one_based && b == 0) ? ell : b;
}

std::string FeConvention::name() const {
  std::string s = one_based ? "bracket{1..l}" : "bracket{0..l-1}";
  s += chi_ell_sign < 0 ? ",chi_l=Omega^-1" : ",chi_l=Omega";
  s += chi_r_sign > 0 ? ",chi_r=Omega" : ",chi_r=Omega^-1";
  return s;
}

std::vector<FeConvention> FeConvention::all() {
  std::vector<FeConvention> out;
  for (bool ob : {false, true})
    for (int a : {-1, 1})
      for (int b : {1, -1}) out.push_back({ob, a, b});
  return out;
}

// ---------------------------------------------------------------- PsiLab

PsiLab::PsiLab(GaussCounter& G) : G_(&G) {}

int PsiLab::min_B(int deg_r, int i, int ell) { return floordiv(1 + deg_r - i, ell) + 1; }

RatSeries PsiLab::build_psi(const Poly& r, int i, int B) {
  const GaussEngine& E = engine();
  const CycloCtx& C = E.cyclo();
  const int l = ell();
  const std::uint32_t q = E.field().q();
  i = modi(i, l);
  const int Bmin = min_B(r.deg(), i, l);
  if (B < 0) B = Bmin;
  if (B < Bmin) throw std::invalid_argument("B below the polynomial bound");
  const auto c = G_->plain(r, i + l * B);
  // N(x) = (1 - q^{l+1} x) sum_{j<B} C_{i+lj} x^j + C_{i+lB} x^B, then N / (1 - q^l x)
  std::vector<Cyclo> N(B + 1, Cyclo(C));
  const Cyclo ql1 = qpow(C, q, l + 1), ql = qpow(C, q, l);
  for (int j = 0; j < B; ++j) {
    N[j] += c[i + l * j];
    N[j + 1] -= ql1 * c[i + l * j];
  }
  N[B] += c[i + l * B];
  std::vector<Cyclo> P(B + 1, Cyclo(C));
  for (int k = 0; k <= B; ++k) P[k] = k ? N[k] + ql * P[k - 1] : N[k];
  if (!P[B].is_zero()) throw std::runtime_error("psi numerator is not a polynomial (coefficient sums inconsistent)");
  P.pop_back();
  if (P.empty()) P.push_back(Cyclo(C));
  RatSeries s;
  s.r = r;
  s.i = i;
  s.ell = l;
  s.q = q;
  s.B = B;
  s.P = std::move(P);
  return s;
}

bool PsiLab::b_independent(const Poly& r, int i) {
  const RatSeries a = build_psi(r, i);
  const RatSeries b = build_psi(r, i, a.B + 1);
  std::vector<Cyclo> pa = a.P, pb = b.P;
  pa.resize(std::max(pa.size(), pb.size()), Cyclo(engine().cyclo()));
  pb.resize(pa.size(), Cyclo(engine().cyclo()));
  return pa == pb;
}

TruncSeries PsiLab::psi_series(const Poly& r, int i, int K) {
  const CycloCtx& C = engine().cyclo();
  const auto c = G_->plain(r, K);
  return TruncSeries::from_coeffs(C, K, c).class_part(i, ell()) *
         TruncSeries::geometric_inverse(C, K, qpow(C, engine().field().q(), ell()), ell());
}

TruncSeries PsiLab::psi_constrained(const Poly& r, const Poly& a, const Poly& v, int i, int K) {
  if (a.is_one() && v.is_one()) return psi_series(r, i, K);
  const CycloCtx& C = engine().cyclo();
  const auto c = G_->coefficients(r, K, 1, a, v);
  return TruncSeries::from_coeffs(C, K, c).class_part(i, ell()) *
         TruncSeries::geometric_inverse(C, K, qpow(C, engine().field().q(), ell()), ell());
}

bool PsiLab::series_oracle(const Poly& r, int i, int K) {
  const CycloCtx& C = engine().cyclo();
  const int l = ell();
  const std::uint32_t q = engine().field().q();
  const RatSeries rs = build_psi(r, i);
  const TruncSeries def = psi_series(r, i, K);
  if (rs.expand(K) != def) return false;
  // (1 - q^{l+1} u^l) psi is u^i P(u^l) exactly
  TruncSeries lin(C, K);
  lin[0] = Cyclo::integer(C, 1);
  if (l <= K) lin[l] = -qpow(C, q, l + 1);
  const TruncSeries num = def * lin;
  for (int k = 0; k <= K; ++k) {
    Cyclo want(C);
    if (k >= rs.i && (k - rs.i) % l == 0) {
      const std::size_t idx = (k - rs.i) / l;
      if (idx < rs.P.size()) want = rs.P[idx];
    }
    if (num[k] != want) return false;
  }
  return true;
}

Cyclo PsiLab::W(const Poly& r, int i, const FeConvention& cv) const {
  const std::int64_t e = static_cast<std::int64_t>(cv.chi_ell_sign) * (2 * i - 1) - static_cast<std::int64_t>(cv.chi_r_sign) * r.deg();
  return tau_scalar(engine().field(), engine().cyclo(), modi(static_cast<int>(e % ell()), ell()));
}

FeResult PsiLab::functional_eq_check(const Poly& r, int i, const FeConvention& cv,
                                     const std::vector<std::complex<double>>& panel) {
  const int l = ell();
  const double q = engine().field().q();
  const int m = r.deg();
  i = modi(i, l);
  const int is = modi(m + 1 - i, l);
  const RatSeries pi = build_psi(r, i), ps = build_psi(r, is);
  const std::complex<double> Wi = W(r, i, cv).to_complex(), Ws = W(r, is, cv).to_complex();
  const int rho_i = bracket(m + 1 - 2 * i, l, cv.one_based), rho_s = bracket(m + 1 - 2 * is, l, cv.one_based);
  auto a1 = [&](std::complex<double> u, int rho) { return -q * q * u * std::pow(q * u, -rho) * (1.0 - 1.0 / q); };
  auto a2 = [&](std::complex<double> u, std::complex<double> w) {
    return -w * std::pow(q * u, 1 - l) * (1.0 - std::pow(q, l) * std::pow(u, l));
  };
  // coefficient matrix of (psi_i, psi_is)(u) against (psi_i, psi_is)(1/(q^2 u))
  auto M = [&](std::complex<double> u) {
    const std::complex<double> pre = std::pow(q * u, m) / (1.0 - std::pow(q, l + 1) * std::pow(u, l));
    std::array<std::complex<double>, 4> mm{};
    if (i == is) {
      mm[0] = pre * (a1(u, rho_i) + a2(u, Wi));
    } else {
      mm[0] = pre * a1(u, rho_i);
      mm[1] = pre * a2(u, Wi);
      mm[2] = pre * a2(u, Ws);
      mm[3] = pre * a1(u, rho_s);
    }
    return mm;
  };
  FeResult res;
  res.i_star = is;
  for (auto u : panel) {
    const std::complex<double> w = 1.0 / (q * q * u);
    const std::complex<double> lhs = pi.numerator(u);
    const std::complex<double> pre = std::pow(q * u, m);
    const std::complex<double> t1 = pre * a1(u, rho_i) * pi.eval(w), t2 = pre * a2(u, Wi) * ps.eval(w);
    const double scale = std::max({std::abs(lhs), std::abs(t1), std::abs(t2)});
    res.residual = std::max(res.residual, rel_diff(lhs, t1 + t2, scale));
    const auto A = M(u), Bm = M(w);
    double inv = 0;
    if (i == is) {
      inv = std::abs(A[0] * Bm[0] - 1.0);
    } else {
      const std::complex<double> p00 = A[0] * Bm[0] + A[1] * Bm[2], p01 = A[0] * Bm[1] + A[1] * Bm[3];
      const std::complex<double> p10 = A[2] * Bm[0] + A[3] * Bm[2], p11 = A[2] * Bm[1] + A[3] * Bm[3];
      inv = std::max({std::abs(p00 - 1.0), std::abs(p01), std::abs(p10), std::abs(p11 - 1.0)});
    }
    res.involution = std::max(res.involution, inv);
  }
  return res;
}

AfeResult PsiLab::afe_check(const Poly& r, int i, int n, const FeConvention& cv,
                            const std::vector<std::complex<double>>& panel) {
  const int l = ell();
  const double q = engine().field().q();
  const int m = r.deg();
  if (n < 0 || n > m) throw std::invalid_argument("split point must satisfy 0 <= n <= deg r");
  i = modi(i, l);
  const int rho = bracket(m + 1 - 2 * i, l, cv.one_based);
  const int jc = modi(m + 1 - i, l);
  const RatSeries ps = build_psi(r, i);
  const auto Cc = G_->plain(r, std::max(m, n) + 1);
  std::vector<std::complex<double>> c(Cc.size());
  for (std::size_t k = 0; k < Cc.size(); ++k) c[k] = Cc[k].to_complex();
  const std::complex<double> Wv = W(r, i, cv).to_complex();
  AfeResult out;
  for (auto u : panel) {
    const std::complex<double> qu = q * u, q2u = q * q * u;
    auto geo = [&](int top, std::complex<double> x) {  // sum_{0 <= k <= top} x^k
      std::complex<double> s = 0, p = 1;
      for (int k = 0; k <= top; ++k, p *= x) s += p;
      return s;
    };
    std::complex<double> Ta = 0, Tb = 0, Tc = 0, Td = 0, Te = 0;
    for (int k = 0; k <= n; ++k)
      if (modi(k - i, l) == 0) Ta += c[k] * std::pow(u, k) * geo((n - k) / l, std::pow(qu, l));
    for (int k = 0; k <= n - l; ++k)
      if (modi(k - i, l) == 0) Tb += c[k] * std::pow(u, k) * geo((n - k - l) / l, std::pow(qu, l));
    Tb *= -std::pow(q, l + 1) * std::pow(u, l);
    for (int k = 0; k <= m - n - rho; ++k)
      if (modi(k - i, l) == 0) Tc += c[k] * std::pow(q2u, -k) * geo((m - n - rho - k) / l, std::pow(qu, -l));
    Tc *= -std::pow(qu, m) * std::pow(q, 2 - rho) * std::pow(u, 1 - rho) * (1.0 - 1.0 / q);
    for (int k = 0; k <= m - n - l; ++k)
      if (modi(k - jc, l) == 0) Td += c[k] * std::pow(q2u, -k);
    Td *= -std::pow(qu, m + 1 - l) * Wv;
    for (int k = 0; k <= m - n; ++k)
      if (modi(k - jc, l) == 0) Te += c[k] * std::pow(q2u, -k);
    Te *= std::pow(qu, m + 1) * Wv;
    const std::complex<double> lhs = ps.numerator(u);
    const double scale = std::max({std::abs(lhs), std::abs(Ta), std::abs(Tb), std::abs(Tc), std::abs(Td), std::abs(Te)});
    out.residual_literal = std::max(out.residual_literal, rel_diff(lhs, Ta + Tb + Tc + Td + Te, scale));
    out.residual_corrected = std::max(out.residual_corrected, rel_diff(lhs, Ta + Tb + Tc + Te, scale));
  }
  return out;
}

ResidueResult PsiLab::residue_at_pole(const Poly& r, int i) {
  const CycloCtx& C = engine().cyclo();
  const int l = ell();
  const std::uint32_t q = engine().field().q();
  i = modi(i, l);
  const RatSeries ps = build_psi(r, i);
  ResidueResult res;
  res.value = ps.pole_value();
  res.i_prime_valid = i + l * ps.B;
  res.i_prime_literal = i;
  while (res.i_prime_literal <= r.deg()) res.i_prime_literal += l;
  const int dp = std::max(ps.deg_P(), 0);
  const auto c = G_->plain(r, std::max(res.i_prime_valid, res.i_prime_literal));
  // sum_j P_j (q-1) q^{(l+1)(S-j)} = q^{1 + (l+1)(S-B)} C(r, i + l B)
  auto matches = [&](int Bx) {
    const int S = std::max(dp, Bx);
    Cyclo lhs(C);
    for (int j = 0; j <= dp && j < static_cast<int>(ps.P.size()); ++j)
      lhs += ps.P[j] * qpow(C, q, (l + 1) * (S - j)).scaled(q - 1);
    return lhs == c[i + l * Bx] * qpow(C, q, 1 + (l + 1) * (S - Bx));
  };
  res.valid_match = matches(ps.B);
  res.literal_match = matches((res.i_prime_literal - i) / l);
  const std::complex<double> formula =
      c[res.i_prime_valid].to_complex() / ((1.0 - 1.0 / q) * std::pow(static_cast<double>(q), (l + 1.0) * ps.B));
  const double scale = std::max(std::abs(formula), std::abs(res.value));
  res.rel_error = rel_diff(res.value, formula, scale);
  const Poly r1 = ell_decompose(engine().ring(), engine().ring().monic(r)).r[1];
  res.r1_ratio = std::abs(res.value) / std::pow(static_cast<double>(q), -r1.deg() / 6.0);
  return res;
}

Cyclo PsiLab::euler_coeff(const Poly& pi, int symbol_power) const {
  const PolyRing& R = engine().ring();
  const CycloCtx& C = engine().cyclo();
  const int l = ell();
  Cyclo c = qpow(C, R.q(), (l - 1) * pi.deg());
  if (symbol_power) {
    const int s = symbol(R, Poly::constant(R.field().neg(1)), pi);
    c = c * Cyclo::ell_root(C, modi(s * symbol_power, l));
  }
  return c;
}

TruncSeries PsiLab::euler_inverse(const Poly& pi, int symbol_power, int K) const {
  return TruncSeries::geometric_inverse(engine().cyclo(), K, euler_coeff(pi, symbol_power), ell() * pi.deg());
}

Poly PsiLab::apply_d_power(const Poly& x, const Poly& d, int e) const {
  const PolyRing& R = engine().ring();
  if (e >= 0) return R.div_exact(x, R.pow(d, static_cast<std::uint32_t>(e)));
  return R.mul(x, R.pow(d, static_cast<std::uint32_t>(-e)));
}

std::vector<IdentityCheck> PsiLab::lemma51_check(const Poly& r, const Poly& r0, const Poly& pi, int i, int K) {
  const PolyRing& R = engine().ring();
  const GaussEngine& E = engine();
  const CycloCtx& C = E.cyclo();
  const int l = ell();
  const int dp = pi.deg();
  if (R.divides(pi, r)) throw std::invalid_argument("pi must not divide r");
  if (!R.divides(r0, r)) throw std::invalid_argument("r0 must divide r");
  const Poly r0pi = R.mul(r0, pi);
  const Poly one = Poly::one();
  const std::string params = "r=" + R.to_text(r) + " r0=" + R.to_text(r0) + " pi=" + R.to_text(pi) +
                             " i=" + std::to_string(i) + " K=" + std::to_string(K);
  std::vector<IdentityCheck> out;
  {
    const TruncSeries lhs = psi_constrained(r, one, r0pi, i, K);
    const TruncSeries rhs = psi_constrained(r, one, r0, i, K) -
                            psi_constrained(R.mul(r, R.pow(pi, l - 2)), one, r0pi, i - dp, K).shifted(dp).scaled(E.fast(r, pi, 1));
    out.push_back({"coprime-split", params, lhs.first_difference(rhs)});
  }
  {
    const Poly rp = R.mul(r, R.pow(pi, l - 1));
    const TruncSeries lhs = psi_constrained(rp, one, r0pi, i, K);
    const TruncSeries rhs = euler_inverse(pi, 0, K) * psi_constrained(rp, one, r0, i, K);
    out.push_back({"full-power", params, lhs.first_difference(rhs)});
  }
  for (int j = 1; j <= l - 2; ++j) {
    const Poly rp = R.mul(r, R.pow(pi, j));
    const TruncSeries lhs = psi_constrained(rp, one, r0pi, i, K);
    const Cyclo coef = qpow(C, R.q(), j * dp) * E.fast(r, pi, j + 1);
    const TruncSeries rhs =
        psi_constrained(rp, one, r0, i, K) -
        psi_constrained(R.mul(r, R.pow(pi, l - j - 2)), one, r0pi, i - (j + 1) * dp, K).shifted((j + 1) * dp).scaled(coef);
    out.push_back({"partial-power j=" + std::to_string(j), params, lhs.first_difference(rhs)});
  }
  return out;
}

IdentityCheck PsiLab::lemma52_check(const std::vector<Poly>& rs, int j, int i, int K) {
  const PolyRing& R = engine().ring();
  const GaussEngine& E = engine();
  const CycloCtx& C = E.cyclo();
  const int l = ell();
  if (static_cast<int>(rs.size()) != l) throw std::invalid_argument("expected r_1..r_{ell-1}");
  if (j < 1 || j > l - 1) throw std::invalid_argument("level out of range");
  Poly rp = Poly::one();
  for (int k = 1; k < l; ++k) rp = R.mul(rp, R.pow(rs[k], k));
  std::vector<Poly> sub(rs.begin() + 1, rs.begin() + j + 1);
  const Poly v = product(R, sub);
  sub.pop_back();
  const Poly vlow = product(R, sub);
  std::string params = "r=";
  for (int k = 1; k < l; ++k) params += (k > 1 ? ";" : "") + R.to_text(rs[k]);
  params += " j=" + std::to_string(j) + " i=" + std::to_string(i) + " K=" + std::to_string(K);
  const TruncSeries lhs = psi_constrained(rp, Poly::one(), v, i, K);
  TruncSeries eul = TruncSeries::monomial(C, K, Cyclo::integer(C, 1), 0);
  for (auto& p : prime_factors(R, rs[j])) eul = eul * euler_inverse(p, j == l - 1 ? 0 : j + 1, K);
  if (j == l - 1) {
    const TruncSeries rhs = eul * psi_constrained(rp, Poly::one(), vlow, i, K);
    return {"r_{l-1} factor", params, lhs.first_difference(rhs)};
  }
  TruncSeries sum(C, K);
  for (auto& [d, mu] : squarefree_divisors(R, rs[j])) {
    const int dd = d.deg();
    if ((j + 1) * dd > K) continue;
    const Cyclo coef = qpow(C, R.q(), j * dd) * E.fast(R.div_exact(rp, R.pow(d, j)), d, j + 1);
    const TruncSeries t = psi_constrained(apply_d_power(rp, d, 2 * j - l + 2), Poly::one(), vlow, i - (j + 1) * dd, K);
    sum += t.shifted((j + 1) * dd).scaled(mu > 0 ? coef : -coef);
  }
  return {"level sum", params, lhs.first_difference(eul * sum)};
}

TruncSeries PsiLab::theorem53_rhs(const Poly& r, const Poly& a, int i, int K) {
  const PolyRing& R = engine().ring();
  const GaussEngine& E = engine();
  const CycloCtx& C = E.cyclo();
  const int l = ell();
  if (!r.is_monic() || !a.is_monic()) throw std::invalid_argument("r and a must be monic");
  if (!is_squarefree(R, a)) throw std::invalid_argument("a must be squarefree");
  if (!R.gcd(r, a).is_one()) throw std::invalid_argument("r and a must be coprime");
  const EllDecomposition dec = ell_decompose(R, r);
  Poly R0 = Poly::one();
  for (int k = 1; k < l; ++k) R0 = R.mul(R0, R.pow(dec.r[k], k));
  const Poly aR0 = R.mul(R.pow(a, l - 2), R0);
  TruncSeries total(C, K);
  for (auto& [Ee, muE] : squarefree_divisors(R, dec.r_ell_star)) {
    if (a.deg() + Ee.deg() > K) continue;
    const Poly aE = R.mul(a, Ee);
    const Poly A = R.mul(R.pow(Ee, l - 2), aR0);
    // Euler factors with the (-1/pi) power of the level each prime sits at
    TruncSeries eul = TruncSeries::monomial(C, K, Cyclo::integer(C, 1), 0);
    for (auto& p : prime_factors(R, aE)) eul = eul * euler_inverse(p, l - 1, K);
    for (int k = 1; k < l; ++k)
      for (auto& p : prime_factors(R, dec.r[k])) eul = eul * euler_inverse(p, k == l - 1 ? 0 : k + 1, K);
    // divisor lists per level: d_k | r_k (k <= l-3), d_{l-2} | aE r_{l-2}
    std::vector<std::vector<std::pair<Poly, int>>> divs(l - 1);
    for (int k = 1; k <= l - 2; ++k) divs[k] = squarefree_divisors(R, k == l - 2 ? R.mul(aE, dec.r[k]) : dec.r[k]);
    TruncSeries dsum(C, K);
    std::vector<int> pick(l - 1, 0);
    for (;;) {
      int mu = 1, qexp = 0, uexp = 0;
      std::vector<Poly> d(l - 1, Poly::one());
      for (int k = 1; k <= l - 2; ++k) {
        d[k] = divs[k][pick[k]].first;
        mu *= divs[k][pick[k]].second;
        qexp += k * d[k].deg();
        uexp += (k + 1) * d[k].deg();
      }
      if (uexp + a.deg() + Ee.deg() <= K) {
        Cyclo coef = qpow(C, R.q(), qexp);
        int pair = 0;
        for (int jj = 1; jj <= l - 2; ++jj)
          for (int k = 1; k < jj; ++k) {
            if (d[jj].is_one() || d[k].is_one()) continue;
            pair -= symbol(R, d[k], d[jj]) * k * (jj + 1);
          }
        coef = coef.mul_root(static_cast<std::int64_t>(C.p()) * modi(pair % l, l));
        Poly Dall = Poly::one();
        for (int k = 1; k <= l - 2; ++k) Dall = R.mul(Dall, R.pow(d[k], k));
        const Poly Ared = R.div_exact(A, Dall);
        for (int jj = 1; jj <= l - 2; ++jj)
          if (!d[jj].is_one()) coef = coef * E.fast(Ared, d[jj], jj + 1);
        Poly arg = A;
        for (int jj = 1; jj <= l - 2; ++jj) arg = apply_d_power(arg, d[jj], 2 * jj + 2 - l);
        const TruncSeries t = psi_series(arg, i - a.deg() - Ee.deg() - uexp, K);
        dsum += t.shifted(uexp).scaled(mu > 0 ? coef : -coef);
      }
      int k = 1;
      while (k <= l - 2 && ++pick[k] == static_cast<int>(divs[k].size())) pick[k++] = 0;
      if (k > l - 2) break;
    }
    const Cyclo gE = Ee.is_one() ? Cyclo::integer(C, 1) : E.fast(aR0, Ee, 1);
    total += (eul * dsum).shifted(Ee.deg()).scaled(muE > 0 ? gE : -gE);
  }
  return total.shifted(a.deg()).scaled(E.fast(r, a, 1));
}

IdentityCheck PsiLab::theorem53_check(const Poly& r, const Poly& a, int i, int K) {
  const PolyRing& R = engine().ring();
  const std::string params =
      "r=" + R.to_text(r) + " a=" + R.to_text(a) + " i=" + std::to_string(i) + " K=" + std::to_string(K);
  const TruncSeries lhs = psi_constrained(r, a, r, i, K);
  return {"expansion", params, lhs.first_difference(theorem53_rhs(r, a, i, K))};
}

std::vector<std::complex<double>> PsiLab::default_panel(std::uint32_t q) {
  const double lq = std::log(static_cast<double>(q));
  const double ex[] = {-0.6, -0.85, -1.1, -1.45, -0.95, -1.2};
  const double th[] = {0.41, 1.37, 2.23, 2.9, -0.77, -1.9};
  std::vector<std::complex<double>> out;
  for (int k = 0; k < 6; ++k) out.push_back(std::polar(std::exp(ex[k] * lq), th[k]));
  return out;
}

}  // namespace kummerlab
