#include "kummerlab/poly.hpp"

#include <stdexcept>

namespace kummerlab {

bool poly_less(const Poly& a, const Poly& b, std::uint32_t /*q*/) {
  if (a.deg() != b.deg()) return a.deg() < b.deg();
  for (int i = a.deg(); i >= 0; --i)
    if (a.c[i] != b.c[i]) return a.c[i] < b.c[i];
  return false;
}

Poly PolyRing::add(const Poly& a, const Poly& b) const {
  std::vector<Fq> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->add(a[i], b[i]);
  return Poly(std::move(r));
}

Poly PolyRing::sub(const Poly& a, const Poly& b) const {
  std::vector<Fq> r(std::max(a.c.size(), b.c.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->sub(a[i], b[i]);
  return Poly(std::move(r));
}

Poly PolyRing::neg(const Poly& a) const {
  std::vector<Fq> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->neg(a.c[i]);
  return Poly(std::move(r));
}

Poly PolyRing::mul(const Poly& a, const Poly& b) const {
  if (a.is_zero() || b.is_zero()) return Poly();
  std::vector<Fq> r(a.c.size() + b.c.size() - 1, 0);
  for (std::size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] == 0) continue;
    for (std::size_t j = 0; j < b.c.size(); ++j) r[i + j] = F_->add(r[i + j], F_->mul(a.c[i], b.c[j]));
  }
  return Poly(std::move(r));
}

Poly PolyRing::scale(const Poly& a, Fq s) const {
  std::vector<Fq> r(a.c.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = F_->mul(a.c[i], s);
  return Poly(std::move(r));
}

std::pair<Poly, Poly> PolyRing::divrem(const Poly& a, const Poly& b) const {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.deg() < b.deg()) return {Poly(), a};
  std::vector<Fq> r = a.c;
  const int db = b.deg();
  std::vector<Fq> quo(a.deg() - db + 1, 0);
  const Fq inv_lead = F_->inv(b.lead());
  for (int top = a.deg(); top >= db; --top) {
    Fq coef = r[top];
    if (coef == 0) continue;
    coef = F_->mul(coef, inv_lead);
    quo[top - db] = coef;
    for (int i = 0; i <= db; ++i) r[top - db + i] = F_->sub(r[top - db + i], F_->mul(coef, b.c[i]));
  }
  r.resize(db);
  return {Poly(std::move(quo)), Poly(std::move(r))};
}

Poly PolyRing::mod(const Poly& a, const Poly& b) const { return divrem(a, b).second; }

Poly PolyRing::div_exact(const Poly& a, const Poly& b) const {
  auto [qq, rr] = divrem(a, b);
  if (!rr.is_zero()) throw std::domain_error("polynomial division not exact");
  return qq;
}

bool PolyRing::divides(const Poly& d, const Poly& a) const { return mod(a, d).is_zero(); }

Poly PolyRing::gcd(const Poly& a, const Poly& b) const {
  Poly x = a, y = b;
  while (!y.is_zero()) {
    Poly r = mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  return x.is_zero() ? x : monic(x);
}

Poly PolyRing::mulmod(const Poly& a, const Poly& b, const Poly& m) const { return mod(mul(a, b), m); }

Poly PolyRing::powmod(const Poly& a, unsigned __int128 e, const Poly& m) const {
  Poly result = mod(Poly::one(), m), base = mod(a, m);
  while (e) {
    if (e & 1) result = mulmod(result, base, m);
    e >>= 1;
    if (e) base = mulmod(base, base, m);
  }
  return result;
}

Poly PolyRing::pow(const Poly& a, std::uint32_t e) const {
  Poly r = Poly::one();
  for (std::uint32_t i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

Poly PolyRing::derivative(const Poly& a) const {
  if (a.deg() <= 0) return Poly();
  std::vector<Fq> r(a.c.size() - 1);
  for (std::size_t i = 1; i < a.c.size(); ++i) r[i - 1] = F_->mul(a.c[i], F_->from_int(static_cast<std::int64_t>(i)));
  return Poly(std::move(r));
}

Poly PolyRing::monic(const Poly& a) const {
  if (a.is_zero()) return a;
  return scale(a, F_->inv(a.lead()));
}

Fq PolyRing::eval(const Poly& a, Fq x) const {
  Fq r = 0;
  for (int i = a.deg(); i >= 0; --i) r = F_->add(F_->mul(r, x), a.c[i]);
  return r;
}

Poly PolyRing::compose_affine(const Poly& f, Fq lambda, Fq b) const {
  const Poly lin(std::vector<Fq>{b, lambda});
  Poly r;
  for (int i = f.deg(); i >= 0; --i) r = add(mul(r, lin), Poly::constant(f.c[i]));
  return r;
}

Poly PolyRing::affine_act(const Poly& f, Fq lambda, Fq b) const {
  if (f.is_zero()) return f;
  return scale(compose_affine(f, lambda, b), F_->inv(F_->pow(lambda, static_cast<std::uint64_t>(f.deg()))));
}

std::uint64_t PolyRing::count_monic(int n) const {
  std::uint64_t r = 1;
  for (int i = 0; i < n; ++i) {
    if (r > (std::uint64_t{1} << 62) / q()) throw std::overflow_error("q^n exceeds 2^62");
    r *= q();
  }
  return r;
}

Poly PolyRing::monic_from_index(int n, std::uint64_t idx) const {
  std::vector<Fq> c(n + 1);
  for (int i = 0; i < n; ++i) {
    c[i] = static_cast<Fq>(idx % q());
    idx /= q();
  }
  c[n] = 1;
  return Poly(std::move(c));
}

std::uint64_t PolyRing::monic_index(const Poly& f) const {
  if (!f.is_monic()) throw std::invalid_argument("monic_index needs a monic polynomial");
  std::uint64_t idx = 0;
  for (int i = f.deg() - 1; i >= 0; --i) idx = idx * q() + f.c[i];
  return idx;
}

std::string PolyRing::to_text(const Poly& f) const {
  if (f.is_zero()) return "0";
  std::string s;
  for (std::size_t i = 0; i < f.c.size(); ++i) {
    if (i) s += ',';
    s += F_->to_text(f.c[i]);
  }
  return s;
}

Poly PolyRing::from_text(const std::string& s) const {
  std::vector<Fq> c;
  std::size_t start = 0;
  if (s.empty()) throw std::invalid_argument("empty polynomial text");
  while (true) {
    auto pos = s.find(',', start);
    std::string tok = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
    while (!tok.empty() && tok.back() == ' ') tok.pop_back();
    c.push_back(F_->from_text(tok));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return Poly(std::move(c));
}

}  // namespace kummerlab
