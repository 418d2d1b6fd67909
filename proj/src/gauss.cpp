#include "kummerlab/gauss.hpp"

#include <stdexcept>

namespace kummerlab {

namespace {

// coefficient of t^{n-1} in (V t^i mod f), i < n
std::vector<Fq> pairing_row(const PolyRing& R, const Poly& V, const Poly& f) {
  const int n = f.deg();
  std::vector<Fq> v(n, 0);
  Poly cur = R.mod(V, f);
  for (int i = 0; i < n; ++i) {
    v[i] = cur[static_cast<std::size_t>(n - 1)];
    cur = R.mod(R.mul(cur, Poly::t()), f);
  }
  return v;
}

}  // namespace

CharTable::CharTable(const PolyRing& R, const Character& chi) : R_(&R), f_(chi.modulus()) {
  build([&](const Poly& a) { return chi.eval(a); });
}

CharTable::CharTable(const PolyRing& R, const Poly& c) : R_(&R), f_(c) {
  build([&](const Poly& a) { return symbol(R, a, c); });
}

void CharTable::build(const std::function<int(const Poly&)>& eval) {
  const int n = f_.deg();
  const std::uint64_t total = R_->count_monic(n);
  sym_.resize(total);
  for (std::uint64_t i = 0; i < total; ++i) {
    Poly a = R_->monic_from_index(n, i);
    a.c.pop_back();  // drop the leading 1: residues have degree < n
    a.trim();
    sym_[i] = static_cast<std::int8_t>(eval(a));
  }
}

std::vector<std::int64_t> CharTable::histogram(const Poly& V) const {
  const FieldCtx& F = R_->field();
  const std::uint32_t p = F.p(), q = F.q();
  const int n = f_.deg();
  std::vector<std::int64_t> h(static_cast<std::size_t>(F.ell()) * p, 0);
  if (n == 0) {
    h[0] = 1;
    return h;
  }
  const std::vector<Fq> v = pairing_row(*R_, V, f_);
  std::vector<Fq> a(n, 0);
  Fq s = 0;  // sum a_i v_i
  const std::uint64_t total = sym_.size();
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    const int e = sym_[idx];
    if (e >= 0) h[static_cast<std::size_t>(e) * p + F.trace(s)]++;
    for (int pos = 0; pos < n; ++pos) {
      const Fq old = a[pos];
      const Fq nv = old + 1 == q ? 0 : old + 1;
      a[pos] = nv;
      s = F.add(s, F.mul(F.sub(nv, old), v[pos]));
      if (nv != 0) break;
    }
  }
  return h;
}

Cyclo CharTable::from_histogram(const std::vector<std::int64_t>& h, const FieldCtx& F, const CycloCtx& C, int j) {
  const std::uint32_t p = F.p(), ell = F.ell();
  std::vector<std::int64_t> counts(C.m(), 0);
  for (std::uint32_t e = 0; e < ell; ++e)
    for (std::uint32_t b = 0; b < p; ++b) {
      const std::int64_t c = h[static_cast<std::size_t>(e) * p + b];
      if (c) counts[C.root_index(static_cast<std::int64_t>(e) * j, b)] += c;
    }
  return Cyclo::from_root_counts(C, counts);
}

Cyclo CharTable::gauss(const Poly& V, const CycloCtx& C, int j) const {
  return from_histogram(histogram(V), R_->field(), C, j);
}

GaussEngine::GaussEngine(const PolyRing& R, const CycloCtx& C) : R_(&R), C_(&C) {
  for (int j = 0; j < ell(); ++j) tau_.push_back(tau_scalar(R.field(), C, j));
}

const Cyclo& GaussEngine::tau(int j) const { return tau_[((j % ell()) + ell()) % ell()]; }

const Cyclo& GaussEngine::tau_pow(int j, int n) const {
  j = ((j % ell()) + ell()) % ell();
  auto key = std::make_pair(j, n);
  auto it = tau_pow_.find(key);
  if (it != tau_pow_.end()) return it->second;
  Cyclo v = n == 0 ? Cyclo::integer(*C_, 1) : tau_pow(j, n - 1) * tau(j);
  return tau_pow_.emplace(key, std::move(v)).first->second;
}

Cyclo GaussEngine::q_pow(int e) const { return Cyclo::integer(*C_, ipow(field().q(), static_cast<std::uint32_t>(e))); }

Cyclo GaussEngine::direct(const Poly& r, const Poly& c, int j) const {
  if (!c.is_monic()) throw std::invalid_argument("Gauss sum modulus must be monic");
  if (R_->count_monic(c.deg()) > direct_budget) throw std::length_error("direct Gauss sum over budget");
  return CharTable(*R_, c).gauss(r, *C_, j);
}

int valuation(const PolyRing& R, const Poly& r, const Poly& pi) {
  if (r.is_zero()) return -1;
  int a = 0;
  Poly x = r;
  while (true) {
    auto [qq, rem] = R.divrem(x, pi);
    if (!rem.is_zero()) return a;
    x = std::move(qq);
    ++a;
  }
}

Cyclo GaussEngine::prime_level(const Poly& rt, const Poly& pi, int j) const {
  const int n = pi.deg();
  if (R_->count_monic(n) <= prime_direct_limit) return direct(rt, pi, j);
  const int L = ell();
  const int sym_r = symbol(*R_, rt, pi);
  if (sym_r == kZeroExp) throw std::invalid_argument("prime_level needs pi not dividing r");
  const int sym_d = symbol(*R_, R_->derivative(pi), pi);
  Cyclo v = tau_pow(j, n);
  if (n % 2 == 0) v = -v;  // (-1)^{n+1}
  const std::int64_t e = static_cast<std::int64_t>(j) * (sym_d - sym_r);
  return v.mul_root(static_cast<std::int64_t>(C_->p()) * (((e % L) + L) % L));
}

Cyclo GaussEngine::prime_power(const Poly& r, const Poly& pi, int i, int j) const {
  const int L = ell();
  if (i == 0) return Cyclo::integer(*C_, 1);
  const int alpha = valuation(*R_, r, pi);
  const bool trivial = (static_cast<std::int64_t>(i) * j) % L == 0;
  const int n = pi.deg();
  if (alpha < 0 || i <= alpha) {
    if (!trivial) return Cyclo(*C_);
    const std::int64_t qn = ipow(field().q(), static_cast<std::uint32_t>(n));
    return Cyclo::integer(*C_, checked_mul(ipow(qn, static_cast<std::uint32_t>(i - 1)), qn - 1));
  }
  if (i >= alpha + 2) return Cyclo(*C_);
  const Cyclo scale = q_pow((i - 1) * n);
  if (trivial) return -scale;
  Poly rt = r;
  for (int s = 0; s < alpha; ++s) rt = R_->div_exact(rt, pi);
  return scale * prime_level(rt, pi, i * j);
}

Cyclo GaussEngine::fast(const Poly& r, const Poly& c, int j) const {
  if (!c.is_monic()) throw std::invalid_argument("Gauss sum modulus must be monic");
  if (c.deg() == 0) return Cyclo::integer(*C_, 1);
  return fast(r, factor(*R_, c), j);
}

Cyclo GaussEngine::fast(const Poly& r, const Factorization& fc, int j) const {
  const int L = ell();
  Cyclo v = Cyclo::integer(*C_, 1);
  for (auto& [pi, e] : fc.factors) {
    v = v * prime_power(r, pi, e, j);
    if (v.is_zero()) return v;
  }
  std::int64_t tw = 0;
  for (std::size_t a = 0; a < fc.factors.size(); ++a)
    for (std::size_t b = a + 1; b < fc.factors.size(); ++b) {
      const int s = symbol(*R_, fc.factors[b].first, fc.factors[a].first);
      tw += static_cast<std::int64_t>(s) * fc.factors[a].second * fc.factors[b].second;
    }
  tw = ((2 * j * tw) % L + L) % L;
  return tw ? v.mul_root(static_cast<std::int64_t>(C_->p()) * tw) : v;
}

Cyclo GaussEngine::from_w_class(int w, int n, int j) const {
  const int L = ell();
  const int sigma = w / L, e = w % L;
  Cyclo v = tau_pow(j, n);
  const std::int64_t ex = ((static_cast<std::int64_t>(j) * e) % L + L) % L;
  if (ex) v = v.mul_root(static_cast<std::int64_t>(C_->p()) * ex);
  return sigma ? -v : v;
}

Cyclo GaussEngine::squarefree_closed(const Poly& r, const Poly& F, int j) const {
  if (F.deg() <= 0) return Cyclo::integer(*C_, 1);
  const int w = w_class(field(), F.c.data(), F.deg());
  if (w < 0) throw std::invalid_argument("squarefree_closed needs squarefree F");
  const int s = symbol(*R_, r, F);
  if (s == kZeroExp) return Cyclo(*C_);
  const int L = ell();
  Cyclo v = from_w_class(w, F.deg(), j);
  const std::int64_t ex = ((-static_cast<std::int64_t>(j) * s) % L + L) % L;
  return ex ? v.mul_root(static_cast<std::int64_t>(C_->p()) * ex) : v;
}

Cyclo poisson_charsum(const GaussEngine& E, const Character& chi, int m) {
  const PolyRing& R = E.ring();
  std::vector<std::int64_t> counts(E.cyclo().m(), 0);
  const std::uint64_t total = R.count_monic(m);
  for (std::uint64_t i = 0; i < total; ++i) {
    const int e = chi.eval(R.monic_from_index(m, i));
    if (e >= 0) counts[E.cyclo().root_index(e, 0)]++;
  }
  return Cyclo::from_root_counts(E.cyclo(), counts);
}

PoissonResult poisson_check(const GaussEngine& E, const Character& chi, int m) {
  return poisson_check(E, chi, m, CharTable(E.ring(), chi));
}

namespace {

// sum_{h in M_m} chi(h), reading chi(h mod f) from the table; h mod f = t^m + sum h_i t^i mod f.
Cyclo charsum_from_table(const PolyRing& R, const CycloCtx& C, const CharTable& table, int m) {
  const FieldCtx& F = R.field();
  const std::uint32_t q = R.q();
  const Poly& f = table.modulus();
  const int df = f.deg();
  std::vector<std::int64_t> counts(C.m(), 0);
  if (df == 0) {
    counts[C.root_index(0, 0)] = static_cast<std::int64_t>(R.count_monic(m));
    return Cyclo::from_root_counts(C, counts);
  }
  std::vector<std::vector<Fq>> pw(m + 1, std::vector<Fq>(df, 0));
  for (int i = 0; i <= m; ++i) {
    const Poly x = R.mod(R.pow(Poly::t(), static_cast<std::uint32_t>(i)), f);
    for (int k = 0; k < df; ++k) pw[i][k] = x[k];
  }
  std::vector<Fq> acc(df);
  const std::uint64_t total = R.count_monic(m);
  for (std::uint64_t h = 0; h < total; ++h) {
    acc = pw[m];
    std::uint64_t rest = h;
    for (int i = 0; i < m; ++i) {
      const Fq hi = static_cast<Fq>(rest % q);
      rest /= q;
      if (hi == 0) continue;
      for (int k = 0; k < df; ++k) acc[k] = F.add(acc[k], F.mul(hi, pw[i][k]));
    }
    std::uint64_t idx = 0;
    for (int k = df - 1; k >= 0; --k) idx = idx * q + acc[k];
    const int e = table.value(idx);
    if (e >= 0) counts[C.root_index(e, 0)]++;
  }
  return Cyclo::from_root_counts(C, counts);
}

}  // namespace

PoissonResult poisson_check(const GaussEngine& E, const Character& chi, int m, const CharTable& table) {
  const PolyRing& R = E.ring();
  const CycloCtx& C = E.cyclo();
  const std::uint32_t q = R.q();
  const int df = chi.modulus().deg();
  auto vsum = [&](int deg) {
    Cyclo s(C);
    if (deg < 0) return s;
    const std::uint64_t total = R.count_monic(deg);
    for (std::uint64_t i = 0; i < total; ++i) s += table.gauss(R.monic_from_index(deg, i), C, 1);
    return s;
  };
  PoissonResult res;
  res.lhs = charsum_from_table(R, C, table, m).scaled(ipow(q, static_cast<std::uint32_t>(df)));
  res.odd_branch = chi.odd();
  const Cyclo qm = Cyclo::integer(C, ipow(q, static_cast<std::uint32_t>(m)));
  if (!res.odd_branch) {
    Cyclo inner = table.gauss(Poly(), C, 1);
    Cyclo mid(C);
    for (int d = 0; d <= df - m - 2; ++d) mid += vsum(d);
    inner += mid.scaled(q - 1);
    inner -= vsum(df - m - 1);
    res.rhs = qm * inner;
  } else {
    // q^{1/2} conj(epsilon) = conj(tau(chi restricted to constants))
    const Cyclo tau_bar = tau_scalar(R.field(), C, chi.restriction_exp()).conj();
    res.rhs = qm * tau_bar * vsum(df - m - 1);
  }
  return res;
}

}  // namespace kummerlab
