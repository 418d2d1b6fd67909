#include "kummerlab/onelevel.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace kummerlab {

namespace {

int modl(std::int64_t a, int ell) { return static_cast<int>(((a % ell) + ell) % ell); }

GroupRingElt gr_mul(const GroupRingElt& a, const GroupRingElt& b) {
  const int ell = static_cast<int>(a.size());
  GroupRingElt r(ell, 0);
  for (int x = 0; x < ell; ++x)
    if (a[x])
      for (int y = 0; y < ell; ++y)
        if (b[y]) r[(x + y) % ell] = checked_add(r[(x + y) % ell], checked_mul(a[x], b[y]));
  return r;
}

}  // namespace

TestFunction TestFunction::fejer(double v) {
  if (!(v > 0)) throw std::invalid_argument("Fejer support v must be positive");
  TestFunction t;
  t.kind_ = "fejer";
  t.v_ = v;
  return t;
}

TestFunction TestFunction::table(std::vector<double> samples, double v, int d) {
  TestFunction t;
  t.kind_ = "table";
  t.v_ = v;
  t.table_d_ = d;
  t.samples_ = std::move(samples);
  return t;
}

double TestFunction::hat(double y) const {
  if (kind_ != "fejer") throw std::logic_error("closed form only for the Fejer kernel");
  const double a = std::abs(y);
  return a < v_ ? (v_ - a) / (v_ * v_) : 0.0;
}

double TestFunction::hat_at(int n, int d) const {
  if (kind_ == "fejer") return hat(static_cast<double>(n) / (d - 1));
  if (d != table_d_) throw std::invalid_argument("table test function sampled for another d");
  const std::size_t a = static_cast<std::size_t>(std::abs(n));
  return a < samples_.size() ? samples_[a] : 0.0;
}

int TestFunction::max_frequency(int d) const {
  if (kind_ == "table") return static_cast<int>(samples_.size()) - 1;
  int n = 0;
  while (hat_at(n + 1, d) != 0.0) ++n;
  return n;
}

int TestFunction::support_edge(int d) const {
  if (kind_ == "table") return max_frequency(d);
  return static_cast<int>(std::floor(v_ * (d - 1) + 1e-9));
}

double sigma_zeros(const std::vector<double>& theta, const TestFunction& phi, int d) {
  const int N = phi.max_frequency(d);
  double s = (d - 1) * phi.hat_at(0, d);
  for (int n = 1; n <= N; ++n) {
    const double w = phi.hat_at(n, d);
    if (w == 0) continue;
    double c = 0;
    for (double th : theta) c += std::cos(2 * std::numbers::pi * n * th);
    s += 2 * w * c;
  }
  return s / (d - 1);
}

double sigma_primes(const std::vector<cdouble>& prime_sums, const TestFunction& phi, int d, std::uint32_t q) {
  const int N = phi.max_frequency(d);
  if (static_cast<int>(prime_sums.size()) < N) throw std::invalid_argument("prime sums shorter than support");
  double s = 0;
  for (int n = 1; n <= N; ++n)
    s += phi.hat_at(n, d) * 2 * prime_sums[n - 1].real() / std::pow(static_cast<double>(q), n / 2.0);
  return phi.hat_at(0, d) - s / (d - 1);
}

double sigma_primes_truncated(const std::vector<cdouble>& prime_only_sums, const TestFunction& phi, int d,
                              std::uint32_t q) {
  return sigma_primes(prime_only_sums, phi, d, q);
}

double DensityReport::p(int m) const {
  auto it = order_counts.find(m);
  if (it == order_counts.end() || family_size == 0) return 0.0;
  return static_cast<double>(it->second) / static_cast<double>(family_size);
}

double DensityReport::weighted_order_sum() const {
  double s = 0;
  for (auto& [m, cnt] : order_counts) s += m * static_cast<double>(cnt);
  return family_size ? s / static_cast<double>(family_size) : 0.0;
}

namespace {

struct Partial {
  double sum_z = 0, sum_p = 0, sum_t = 0;
  DensityReport rep;  // counters and maxima only
};

void scan_range(const FamilyScanner& S, const GaussEngine& E, const CycloCtx& C, int d, const TestFunction& phi,
                bool keep_rows, std::uint64_t begin, std::uint64_t end, Partial& out) {
  const std::uint32_t q = E.field().q();
  const int ell = E.ell();
  const int N = std::max(phi.max_frequency(d), phi.support_edge(d));
  DensityReport& rep = out.rep;
  S.run([&](const Poly& c, std::uint64_t, const FamilyScanner::Hist& hist) {
    CharacterDensityRow row;
    row.c = c;
    const LPoly L = lpoly_from_hist(c, 1, d, ell, hist);
    const AngleSet A = angles(L, q);
    const FunctionalEquation fe = functional_equation(L, E);
    const CentralValue cv = central_value(L, C, q);
    std::vector<cdouble> P(N), Pt(N);
    double fres = 0;
    for (int n = 1; n <= N; ++n) {
      P[n - 1] = embed(lambda_sum_conj(n, 1, ell, hist));
      GroupRingElt g(ell, 0);
      for (int e = 0; e < ell; ++e) g[modl(-static_cast<std::int64_t>(e), ell)] += n * hist[n][e];
      Pt[n - 1] = embed(g);
      cdouble z = 0;
      for (double th : A.theta) z += std::polar(1.0, 2 * std::numbers::pi * n * th);
      fres = std::max(fres, std::abs(-z - P[n - 1] / std::pow(static_cast<double>(q), n / 2.0)));
    }
    row.sigma_zeros = sigma_zeros(A.theta, phi, d);
    row.sigma_primes = sigma_primes(P, phi, d, q);
    row.residual = std::abs(row.sigma_zeros - row.sigma_primes);
    row.max_frequency_residual = fres;
    row.rh_residual = A.max_rh_residual;
    row.fe_residual = fe.residual;
    row.omega_dev = fe.omega_dev;
    row.fe_exact = fe.exact;
    row.vanishing = cv.vanishing;
    row.order = cv.order;
    row.central = cv.value;
    out.sum_z += row.sigma_zeros;
    out.sum_p += row.sigma_primes;
    out.sum_t += sigma_primes_truncated(Pt, phi, d, q);
    rep.family_size++;
    rep.max_residual = std::max(rep.max_residual, row.residual);
    rep.max_frequency_residual = std::max(rep.max_frequency_residual, fres);
    rep.max_rh_residual = std::max(rep.max_rh_residual, row.rh_residual);
    rep.max_fe_residual = std::max(rep.max_fe_residual, fe.residual);
    rep.max_omega_dev = std::max(rep.max_omega_dev, fe.omega_dev);
    rep.all_fe_exact = rep.all_fe_exact && fe.exact;
    if (cv.vanishing == Vanishing::Ambiguous)
      rep.ambiguous++;
    else
      rep.order_counts[cv.order]++;
    if (keep_rows) rep.rows.push_back(std::move(row));
  }, begin, end);
}

}  // namespace

DensityReport family_average(const PrimeTable& T, const CycloCtx& C, int d, const TestFunction& phi, bool keep_rows,
                             std::uint64_t index_end, int threads, const RowSink& sink) {
  const PolyRing& R = T.ring();
  const FieldCtx& F = R.field();
  const int ell = static_cast<int>(F.ell());
  if (d % ell == 0) throw std::invalid_argument("family needs ell not dividing d");
  const int N = std::max(phi.max_frequency(d), phi.support_edge(d));
  const int maxD = std::max(d - 1, N);
  GaussEngine E(R, C);
  FamilyScanner S(T, d, maxD);
  DensityReport rep;
  rep.q = F.q();
  rep.ell = F.ell();
  rep.d = d;
  rep.v = phi.v();
  rep.phi0 = phi.hat_at(0, d);
  const std::uint64_t total = R.count_monic(d);
  const std::uint64_t end = std::min(total, index_end);
  rep.truncated = end < total;
  // Fixed-size chunks merged in index order: the result does not depend on the thread count.
  const std::uint64_t chunk = kFamilyChunk;
  const std::size_t nchunks = static_cast<std::size_t>((end + chunk - 1) / chunk);
  std::vector<Partial> parts(nchunks);
  std::atomic<std::size_t> next{0};
  // Rows go to the sink chunk by chunk in index order, as soon as every earlier chunk is done.
  std::mutex flush_mu;
  std::vector<char> done(nchunks, 0);
  std::size_t flushed = 0;
  const bool rows = keep_rows || static_cast<bool>(sink);
  auto worker = [&]() {
    for (std::size_t i = next++; i < nchunks; i = next++) {
      scan_range(S, E, C, d, phi, rows, i * chunk, std::min(end, (i + 1) * chunk), parts[i]);
      if (!sink) continue;
      std::lock_guard<std::mutex> lock(flush_mu);
      done[i] = 1;
      while (flushed < nchunks && done[flushed]) {
        auto& rs = parts[flushed].rep.rows;
        for (const auto& row : rs) sink(row);
        if (!keep_rows) std::vector<CharacterDensityRow>().swap(rs);
        ++flushed;
      }
    }
  };
  if (threads <= 1 || nchunks <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  double sum_z = 0, sum_p = 0, sum_t = 0;
  for (Partial& p : parts) {
    const DensityReport& r = p.rep;
    sum_z += p.sum_z;
    sum_p += p.sum_p;
    sum_t += p.sum_t;
    rep.family_size += r.family_size;
    rep.max_residual = std::max(rep.max_residual, r.max_residual);
    rep.max_frequency_residual = std::max(rep.max_frequency_residual, r.max_frequency_residual);
    rep.max_rh_residual = std::max(rep.max_rh_residual, r.max_rh_residual);
    rep.max_fe_residual = std::max(rep.max_fe_residual, r.max_fe_residual);
    rep.max_omega_dev = std::max(rep.max_omega_dev, r.max_omega_dev);
    rep.all_fe_exact = rep.all_fe_exact && r.all_fe_exact;
    rep.ambiguous += r.ambiguous;
    for (auto& [k, v] : r.order_counts) rep.order_counts[k] += v;
    for (auto& row : p.rep.rows) rep.rows.push_back(std::move(row));
  }
  const double n = static_cast<double>(rep.family_size);
  rep.mean_sigma = n > 0 ? sum_z / n : 0;
  rep.mean_sigma_primes = n > 0 ? sum_p / n : 0;
  rep.mean_sigma_truncated = n > 0 ? sum_t / n : 0;
  rep.deviation = std::abs(rep.mean_sigma - rep.phi0);
  return rep;
}

ExplicitAverage family_average_explicit(const PrimeTable& T, int d, const TestFunction& phi) {
  const PolyRing& R = T.ring();
  const FieldCtx& F = R.field();
  const std::uint32_t q = F.q();
  const int ell = static_cast<int>(F.ell());
  const int N = phi.max_frequency(d);
  if (N > T.max_n()) throw std::invalid_argument("prime table too short for the explicit route");
  ExplicitAverage out;
  out.family_size = T.squarefree_flags(d).size();
  {
    std::uint64_t cnt = 0;
    for (auto f : T.squarefree_flags(d)) cnt += f;
    out.family_size = cnt;
  }
  std::vector<GroupRingElt> A(N + 1, GroupRingElt(ell, 0)), At(N + 1, GroupRingElt(ell, 0));
  // orbit representative histograms: hist[m][e] = #{f in M_m : (f/rep) = zeta^e}, m < D
  std::unordered_map<std::uint64_t, std::vector<GroupRingElt>> rep_hist;
  std::vector<std::int64_t> qpow(2 * d + 2, 1);
  for (std::size_t i = 1; i < qpow.size(); ++i) qpow[i] = checked_mul(qpow[i - 1], q);

  for (int D = 1; D <= N; ++D) {
    for (auto pidx : T.indices(D)) {
      const Poly pi = R.monic_from_index(D, pidx);
      std::uint64_t best = UINT64_MAX;
      Fq best_lambda = 1;
      for (Fq lam = 1; lam < q; ++lam)
        for (Fq b = 0; b < q; ++b) {
          const std::uint64_t idx = R.monic_index(R.affine_act(pi, lam, b));
          if (idx < best) {
            best = idx;
            best_lambda = lam;
          }
        }
      const std::uint64_t key = best * 64 + static_cast<std::uint64_t>(D);
      auto it = rep_hist.find(key);
      if (it == rep_hist.end()) {
        const Poly rep = R.monic_from_index(D, best);
        std::vector<GroupRingElt> h(D, GroupRingElt(ell, 0));
        for (int m = 0; m < D; ++m)
          for (std::uint64_t i = 0; i < R.count_monic(m); ++i) {
            const int e = symbol(R, R.monic_from_index(m, i), rep);
            h[m][e]++;  // deg f < deg rep and rep prime: never zero
          }
        it = rep_hist.emplace(key, std::move(h)).first;
      }
      const std::int64_t loglam = F.log(best_lambda);
      std::vector<GroupRingElt> H(D, GroupRingElt(ell, 0));
      for (int m = 0; m < D; ++m)
        for (int e = 0; e < ell; ++e) H[m][e] = it->second[m][modl(e - static_cast<std::int64_t>(m) * D * loglam, ell)];

      // L(u, (./pi)^k) coefficients up to degree d
      auto lseries = [&](int k) {
        std::vector<GroupRingElt> a(d + 1, GroupRingElt(ell, 0));
        if (modl(k, ell) == 0) {
          for (int m = 0; m <= d; ++m) a[m][0] = qpow[m] - (m >= D ? qpow[m - D] : 0);
        } else {
          for (int m = 0; m < D && m <= d; ++m)
            for (int e = 0; e < ell; ++e) a[m][modl(static_cast<std::int64_t>(k) * e, ell)] += H[m][e];
        }
        return a;
      };
      for (int k = 1; k * D <= N; ++k) {
        const auto a1 = lseries(k);
        const auto a2 = lseries(2 * k);
        // inverse of L(u^2, psi^2) as a series in u up to degree d
        std::vector<GroupRingElt> inv(d + 1, GroupRingElt(ell, 0));
        inv[0][0] = 1;
        for (int n = 1; n <= d; ++n)
          for (int i = 2; i <= n; i += 2) {
            const auto t = gr_mul(a2[i / 2], inv[n - i]);
            for (int x = 0; x < ell; ++x) inv[n][x] -= t[x];
          }
        GroupRingElt s(ell, 0);
        for (int i = 0; i <= d; ++i) {
          const auto t = gr_mul(a1[i], inv[d - i]);
          for (int x = 0; x < ell; ++x) s[x] += t[x];
        }
        for (int x = 0; x < ell; ++x) {
          A[k * D][x] += D * s[x];
          if (k == 1) At[D][x] += D * s[x];
        }
      }
    }
  }
  out.orbit_count = static_cast<int>(rep_hist.size());
  const double fam = static_cast<double>(out.family_size);
  std::vector<cdouble> P(N), Pt(N);
  for (int n = 1; n <= N; ++n) {
    P[n - 1] = std::conj(embed(A[n])) / fam;
    Pt[n - 1] = std::conj(embed(At[n])) / fam;
  }
  out.mean_prime_sums = P;
  out.mean_sigma = sigma_primes(P, phi, d, q);
  out.mean_sigma_truncated = sigma_primes(Pt, phi, d, q);
  return out;
}

}  // namespace kummerlab
