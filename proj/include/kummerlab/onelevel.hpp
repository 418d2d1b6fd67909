#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "kummerlab/lfunc.hpp"

namespace kummerlab {

class TestFunction {
 public:
  static TestFunction fejer(double v);
  // phi_hat sampled at n/(d-1), n = 0..len-1 (even extension; zero beyond the table)
  static TestFunction table(std::vector<double> samples, double v, int d);

  double v() const { return v_; }
  const std::string& kind() const { return kind_; }
  double hat(double y) const;             // Fejer closed form
  double hat_at(int n, int d) const;      // phi_hat(n/(d-1))
  double phi0() const { return hat(0.0); }
  int max_frequency(int d) const;         // largest n with phi_hat(n/(d-1)) possibly nonzero
  // floor(v (d-1)): the per-frequency explicit formula is checked for n <= max(this, max_frequency)
  int support_edge(int d) const;

 private:
  std::string kind_;
  double v_ = 1;
  int table_d_ = 0;
  std::vector<double> samples_;
};

// sum_j Phi(theta_j) through the finite Fourier expansion of Phi.
double sigma_zeros(const std::vector<double>& theta, const TestFunction& phi, int d);
// phi_hat(0) - (1/(d-1)) sum_{1<=n<=N} phi_hat(n/(d-1)) (P_n + conj P_n) / q^{n/2},
// with P_n = sum_{f in M_n} Lambda(f) conj(chi(f)); primes[n-1] holds P_n.
double sigma_primes(const std::vector<cdouble>& prime_sums, const TestFunction& phi, int d, std::uint32_t q);
// Same with only the prime (k = 1) terms of Lambda.
double sigma_primes_truncated(const std::vector<cdouble>& prime_only_sums, const TestFunction& phi, int d,
                              std::uint32_t q);

struct CharacterDensityRow {
  Poly c;
  double sigma_zeros = 0;
  double sigma_primes = 0;
  double residual = 0;
  double max_frequency_residual = 0;  // max_n | -sum_j e(n theta_j) - P_n / q^{n/2} |
  double rh_residual = 0;
  double fe_residual = 0;
  double omega_dev = 0;
  bool fe_exact = false;
  Vanishing vanishing = Vanishing::No;
  int order = 0;
  cdouble central;
};

struct DensityReport {
  std::uint32_t q = 0, ell = 0;
  int d = 0;
  double v = 1;
  std::uint64_t family_size = 0;
  double mean_sigma = 0;        // from zeros (per-character route) or explicit route
  double mean_sigma_primes = 0;
  double mean_sigma_truncated = 0;  // prime terms only
  double phi0 = 0;
  double deviation = 0;  // |<Sigma> - phi_hat(0)|
  double max_residual = 0, max_frequency_residual = 0, max_rh_residual = 0, max_fe_residual = 0, max_omega_dev = 0;
  bool all_fe_exact = true;
  std::map<int, std::uint64_t> order_counts;  // order of vanishing -> count
  std::uint64_t ambiguous = 0;
  bool per_character = true;  // false when averaged through the explicit formula only
  bool truncated = false;     // stopped at the index cap before the end of M_d
  double p(int m) const;
  double p0_bound() const { return 1.0 - mean_sigma; }
  double weighted_order_sum() const;  // sum_m m p_m
  std::vector<CharacterDensityRow> rows;
};

inline constexpr std::uint64_t kFamilyChunk = 4096;  // monic indices per work item

// Scan every c in H_d with the prime-histogram scanner (keeps rows if requested). Only monic
// indices below index_end are visited. Work is split into fixed chunks merged in index order,
// so the report is the same for every thread count.
// A row sink receives every row once, in index order, while the scan runs.
using RowSink = std::function<void(const CharacterDensityRow&)>;
DensityReport family_average(const PrimeTable& T, const CycloCtx& C, int d, const TestFunction& phi,
                             bool keep_rows = false, std::uint64_t index_end = UINT64_MAX, int threads = 1,
                             const RowSink& sink = {});

// Family average without touching individual characters:
// sum_{c in H_d} chi_c(pi^k) = [u^d] L(u, psi) / L(u^2, psi^2), psi = (./pi)^k,
// with prime orbits under t -> lambda t + b sharing one coefficient computation.
struct ExplicitAverage {
  std::vector<cdouble> mean_prime_sums;  // (1/|H_d|) sum_c P_n(chi_c), n = 1..N
  std::uint64_t family_size = 0;
  double mean_sigma = 0;
  double mean_sigma_truncated = 0;
  int orbit_count = 0;
};
ExplicitAverage family_average_explicit(const PrimeTable& T, int d, const TestFunction& phi);

}  // namespace kummerlab
