#include "kummerlab/field.hpp"

#include <stdexcept>

namespace kummerlab {

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

namespace {

std::vector<std::uint32_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint32_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(static_cast<std::uint32_t>(d));
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(static_cast<std::uint32_t>(n));
  return out;
}

// Does the monic polynomial (ascending digits) over F_p have a factor of degree <= deg/2?
bool fp_poly_irreducible(const std::vector<std::uint32_t>& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  for (std::size_t d = 1; d <= n / 2; ++d) {
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> g(d + 1);
      std::uint64_t t = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      g[d] = 1;
      std::vector<std::uint32_t> r = f;
      for (std::size_t top = n; top >= d; --top) {
        std::uint32_t c = r[top];
        if (c != 0)
          for (std::size_t i = 0; i <= d; ++i)
            r[top - d + i] = static_cast<std::uint32_t>((r[top - d + i] + (p - c) * g[i]) % p);
        if (top == d) break;
      }
      bool zero = true;
      for (std::size_t i = 0; i < d; ++i) zero = zero && r[i] == 0;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

FieldCtx::FieldCtx(std::uint32_t p, std::uint32_t k, std::uint32_t ell) : p_(p), k_(k), ell_(ell) {
  if (!is_prime_u64(p) || p == 2) throw std::invalid_argument("p must be an odd prime");
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  std::uint64_t q = 1;
  for (std::uint32_t i = 0; i < k; ++i) {
    q *= p;
    if (q > (1u << 20)) throw std::invalid_argument("q exceeds 2^20");
  }
  q_ = static_cast<std::uint32_t>(q);
  if (ell < 3) throw std::invalid_argument("ell must be >= 3");
  if ((q_ - 1) % (2 * ell) != 0)
    throw std::invalid_argument("q = " + std::to_string(q_) + " is not 1 mod 2*ell = " +
                                std::to_string(2 * ell));

  if (k == 1) {
    modulus_ = {0, 1};
  } else {
    std::uint64_t count = q_;
    for (std::uint64_t idx = 0; idx < count; ++idx) {
      std::vector<std::uint32_t> f(k + 1);
      std::uint64_t t = idx;
      for (std::uint32_t i = 0; i < k; ++i) {
        f[i] = static_cast<std::uint32_t>(t % p);
        t /= p;
      }
      f[k] = 1;
      if (f[0] != 0 && fp_poly_irreducible(f, p)) {
        modulus_ = f;
        break;
      }
    }
  }

  neg_.resize(q_);
  for (Fq a = 0; a < q_; ++a) {
    auto d = digits(a);
    for (auto& x : d) x = (p_ - x) % p_;
    neg_[a] = from_digits(d);
  }

  // Least generator of F_q^*.
  const auto pf = prime_factors(q_ - 1);
  auto slow_pow = [&](Fq a, std::uint64_t e) {
    Fq r = 1;
    while (e) {
      if (e & 1) r = mul_digits(r, a);
      a = mul_digits(a, a);
      e >>= 1;
    }
    return r;
  };
  for (Fq g = 1; g < q_; ++g) {
    bool ok = true;
    for (auto r : pf) ok = ok && slow_pow(g, (q_ - 1) / r) != 1;
    if (ok) {
      gen_ = g;
      break;
    }
  }
  exp_.resize(2 * static_cast<std::size_t>(q_ - 1));
  log_.assign(q_, 0);
  Fq x = 1;
  for (std::uint32_t i = 0; i < q_ - 1; ++i) {
    exp_[i] = x;
    exp_[i + q_ - 1] = x;
    log_[x] = i;
    x = mul_digits(x, gen_);
  }
  zeta_ = exp_[(q_ - 1) / ell_];

  if (k_ > 1 && q_ <= 1024) {
    add_tab_.resize(static_cast<std::size_t>(q_) * q_);
    for (Fq a = 0; a < q_; ++a)
      for (Fq b = 0; b < q_; ++b) add_tab_[a * q_ + b] = add_digits(a, b);
  }
  if (q_ <= 1024) {
    mul_tab_.resize(static_cast<std::size_t>(q_) * q_);
    for (Fq a = 0; a < q_; ++a)
      for (Fq b = 0; b < q_; ++b)
        mul_tab_[a * q_ + b] = (a == 0 || b == 0) ? 0 : exp_[log_[a] + log_[b]];
  }

  trace_.resize(q_);
  for (Fq a = 0; a < q_; ++a) {
    Fq s = 0, y = a;
    for (std::uint32_t i = 0; i < k_; ++i) {
      s = add(s, y);
      y = pow(y, p_);
    }
    if (s >= p_) throw std::logic_error("trace left the prime field");
    trace_[a] = s;
  }
}

Fq FieldCtx::inv(Fq a) const {
  if (a == 0) throw std::domain_error("inverse of zero in F_q");
  return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

Fq FieldCtx::pow(Fq a, std::uint64_t e) const {
  if (e == 0) return 1;
  if (a == 0) return 0;
  return exp_[(static_cast<std::uint64_t>(log_[a]) * (e % (q_ - 1))) % (q_ - 1)];
}

int FieldCtx::omega(Fq a) const {
  if (a == 0) return kZeroExp;
  const std::uint32_t step = (q_ - 1) / ell_;
  if (log_[a] % step != 0) throw std::domain_error("omega: argument is not an ell-th root of unity");
  return static_cast<int>(log_[a] / step);
}

Fq FieldCtx::from_int(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Fq>(r);
}

Fq FieldCtx::from_digits(const std::vector<std::uint32_t>& d) const {
  Fq v = 0;
  for (std::size_t i = d.size(); i-- > 0;) v = v * p_ + (d[i] % p_);
  return v;
}

std::vector<std::uint32_t> FieldCtx::digits(Fq a) const {
  std::vector<std::uint32_t> d(k_);
  for (std::uint32_t i = 0; i < k_; ++i) {
    d[i] = a % p_;
    a /= p_;
  }
  return d;
}

Fq FieldCtx::add_digits(Fq a, Fq b) const {
  Fq r = 0, scale = 1;
  for (std::uint32_t i = 0; i < k_; ++i) {
    r += ((a % p_ + b % p_) % p_) * scale;
    a /= p_;
    b /= p_;
    scale *= p_;
  }
  return r;
}

Fq FieldCtx::mul_digits(Fq a, Fq b) const {
  auto da = digits(a), db = digits(b);
  std::vector<std::uint64_t> prod(2 * k_, 0);
  for (std::uint32_t i = 0; i < k_; ++i)
    for (std::uint32_t j = 0; j < k_; ++j) prod[i + j] = (prod[i + j] + da[i] * db[j]) % p_;
  for (std::size_t top = 2 * k_ - 1; top >= k_; --top) {
    std::uint64_t c = prod[top];
    if (c != 0) {
      for (std::uint32_t i = 0; i <= k_; ++i)
        prod[top - k_ + i] = (prod[top - k_ + i] + (p_ - c) * modulus_[i]) % p_;
    }
  }
  std::vector<std::uint32_t> out(k_);
  for (std::uint32_t i = 0; i < k_; ++i) out[i] = static_cast<std::uint32_t>(prod[i]);
  return from_digits(out);
}

std::string FieldCtx::to_text(Fq a) const {
  if (k_ == 1) return std::to_string(a);
  std::string s;
  auto d = digits(a);
  for (std::uint32_t i = 0; i < k_; ++i) {
    if (i) s += ';';
    s += std::to_string(d[i]);
  }
  return s;
}

Fq FieldCtx::from_text(const std::string& s) const {
  std::vector<std::uint32_t> d;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(';', start);
    std::string tok = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    std::size_t used = 0;
    long v = std::stol(tok, &used);
    if (used != tok.size() || v < 0 || static_cast<std::uint64_t>(v) >= p_)
      throw std::invalid_argument("bad F_q digit '" + tok + "'");
    d.push_back(static_cast<std::uint32_t>(v));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (k_ == 1 && d.size() == 1) {
    return d[0];
  }
  if (d.size() != k_) throw std::invalid_argument("expected " + std::to_string(k_) + " digits");
  return from_digits(d);
}

}  // namespace kummerlab
