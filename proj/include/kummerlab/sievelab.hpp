#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "kummerlab/gausscount.hpp"

namespace kummerlab {

// ---------------------------------------------------------------- Vaughan decomposition

struct VaughanCell {
  int n = 0;
  Poly R;
  int U = 0;
  Cyclo s0, s1, s2p, s2pp, s3, s4;
  // s0 + s2' + s2'' + s3 = s1 + s4
  bool identity_holds() const { return s0 + s2p + s2pp + s3 == s1 + s4; }
};

struct Lemma61Result {
  bool sigma1_ok = false;   // s1 = sum_b mu(b) (n - deg b) F(n, R, b)
  bool sigma2p_ok = false;  // s2' = sum_b mu^2(b) h(b) F(n, R, b)
  bool h_bound_ok = false;  // |h(b)| <= deg b over squarefree b with deg b <= U
};

// h(b) = sum_{a | b} Lambda(a) mu(b / a)
int h_value(const PolyRing& R, const Poly& b);

class VaughanLab {
 public:
  VaughanLab(const GaussEngine& E, int n);
  int n() const { return n_; }

  // All six branch sums, by enumerating every factorisation F = a b c of F in M_n.
  VaughanCell sigmas(const Poly& R, int U);
  // Direct prime loop: sum_{pi in P_n, pi prime to R} G(R, pi) deg pi.
  Cyclo H(const Poly& R);
  // sum_{c in M_n, (c, R) = 1, alpha | c} G(R, c)
  Cyclo F_count(const Poly& R, const Poly& alpha);
  Lemma61Result lemma61_check(const Poly& R, int U);

 private:
  const std::vector<Cyclo>& gtable(const Poly& R);
  const GaussEngine* E_;
  int n_;
  std::vector<Factorization> fac_;  // by monic index
  std::map<std::string, std::vector<Cyclo>> g_;
};

// Every squarefree b of degree <= maxdeg satisfies |h(b)| <= deg b.
bool h_bound_holds(const PolyRing& R, int maxdeg);

// ---------------------------------------------------------------- prime cancellation

struct CancellationRow {
  int n = 0;
  Cyclo S;                     // sum_{pi in P_n} G(R, pi)
  std::complex<double> value;
  double exponent = 0;         // log_q |S| / n
  std::vector<std::int64_t> angle_hist;  // arg(G / q^{n/2}) / 2 pi, binned
  double discrepancy = 0;      // sup |empirical CDF - uniform| on the bin edges
  std::uint64_t primes = 0;
};

CancellationRow prime_cancellation(GaussCounter& G, const PrimeTable& T, const Poly& R, int n, int bins = 24);

// ---------------------------------------------------------------- large sieve

// (M/N) exponents (-1 for a common factor) for M in the row set, N in H_n.
struct SymbolMatrix {
  int m = 0, n = 0;
  bool all_monic_rows = false;
  std::vector<Poly> rows, cols;
  std::vector<std::int8_t> S;  // rows.size() x cols.size()
  const std::int8_t* row(std::size_t i) const { return S.data() + i * cols.size(); }
};
// Residue-symbol tables (x/pi) over all x mod pi, shared between matrices.
class SymbolCache {
 public:
  SymbolCache();
  ~SymbolCache();
  struct Impl;
  Impl& impl() { return *impl_; }

 private:
  std::unique_ptr<Impl> impl_;
};

// Rows are H_m (or M_m with all_monic_rows), columns H_n. Entry (M/N) = sum over pi^e || N of
// e (M/pi), with (M/pi) read from a table of the residue symbol on (F_q[t]/pi)^*.
SymbolMatrix symbol_matrix(const PolyRing& R, int m, int n, bool all_monic_rows = false, SymbolCache* cache = nullptr);

// sum_M |sum_N lambda(N) (M/N)|^2 for each of the w/2 vectors in X (n_cols x w, re/im interleaved)
std::vector<double> bilinear_norms(const SymbolMatrix& A, std::uint32_t ell, const std::vector<double>& X, std::size_t w);
// y = A x and z = A^* y for one complex vector (re/im interleaved)
std::vector<double> apply(const SymbolMatrix& A, std::uint32_t ell, const std::vector<double>& x);
std::vector<double> apply_adjoint(const SymbolMatrix& A, std::uint32_t ell, const std::vector<double>& y);

struct SieveCell {
  int m = 0, n = 0;
  std::uint64_t rows = 0, cols = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double envelope = 0;
  double best_unimodular = 0;   // max over trials of Sigma_1 / sum |lambda|^2
  double best_rademacher = 0;
  double ratio = 0;             // max(best_*) / envelope: the empirical ratio
  // Lanczos refinement on A^*A: the Rayleigh quotient of the Ritz vector, a lower bound for the sup
  bool refined = false;
  double krylov_sup = 0;
  double krylov_ratio = 0;
  double krylov_residual = 0;   // |A^*A x - theta x| / theta
  int krylov_steps = 0;
  std::vector<double> top_vector;  // Ritz vector (re/im interleaved), unit norm
  std::vector<double> best_lambda; // best random trial, unit norm
  // Filled by large_sieve_grid for m != n:
  double adjoint_estimate = -1;    // Sigma_1 here for conj(A' l)/|A' l|, l the (n, m) cell's best trial
  double duality_gap = -1;         // see duality_gap(); only for refined pairs
};

struct SieveOptions {
  int trials = 50;
  std::uint64_t seed = 20240601;
  bool all_monic_rows = false;  // the M_m variant with envelope q^m + q^{n+m/3} + q^{2(m+n)/3}
  std::uint64_t refine_budget = 32'000'000;  // matrix entries; larger cells skip the Lanczos refinement
  int max_krylov_steps = 120;
  double krylov_tol = 1e-10;
  int threads = 1;  // row blocks; results do not depend on it
};

struct SieveGrid {
  int max_deg = 0;
  bool all_monic_rows = false;
  SieveOptions options;
  std::vector<SieveCell> cells;  // (m, n) at index m * (max_deg + 1) + n
  const SieveCell& at(int m, int n) const { return cells[m * (max_deg + 1) + n]; }
  // |krylov(m,n) - krylov(n,m)| / max, over refined pairs
  double max_refined_asymmetry() const;
};

SieveCell large_sieve_ratio(const PolyRing& R, int m, int n, const SieveOptions& opt, SymbolCache* cache = nullptr);
// All cells 0 <= m, n <= max_deg. Pairs (m, n), (n, m) are computed together.
SieveGrid large_sieve_grid(const PolyRing& R, int max_deg, const SieveOptions& opt);
double sieve_envelope(std::uint32_t q, int m, int n, bool all_monic_rows);
// Relative difference between Sigma_1 at (m, n) for the top vector x and Sigma_1 at (n, m) for
// conj(A x)/|A x|. Zero up to rounding when x is a converged top singular vector.
double duality_gap(const PolyRing& R, const SieveCell& cell, SymbolCache* cache = nullptr);
// Same transfer for an arbitrary unit lambda on H_n: returns (Sigma_1(m,n; lambda), Sigma_1(n,m; adjoint)).
std::pair<double, double> adjoint_transfer(const SymbolMatrix& A, const SymbolMatrix& At, std::uint32_t ell,
                                           const std::vector<double>& lambda);

// sum_{M in M_m} (M/N1) conj((M/N2)); zero for distinct squarefree N1, N2 when m >= deg N1 + deg N2
Cyclo orthogonality_sum(const PolyRing& R, const CycloCtx& C, const Poly& N1, const Poly& N2, int m);

}  // namespace kummerlab
