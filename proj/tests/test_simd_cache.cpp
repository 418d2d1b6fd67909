#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <unistd.h>

#include "doctest.h"
#include "kummerlab/cache.hpp"
#include "kummerlab/sievelab.hpp"
#include "kummerlab/simd.hpp"
#include "oracle.hpp"

using namespace kummerlab;
namespace fs = std::filesystem;

namespace {

struct ForceIsa {
  explicit ForceIsa(simd::Isa i) : saved(simd::active()) { simd::force(i); }
  ~ForceIsa() { simd::force(saved); }
  simd::Isa saved;
};

fs::path fresh_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("kummerlab_test_" + name + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

}  // namespace

TEST_SUITE("simd") {

TEST_CASE("integer kernels: AVX2 equals scalar, overflow reported by both") {
  if (!simd::avx2_available()) return;
  std::mt19937_64 rng(1);
  for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 16u, 33u, 1000u}) {
    std::vector<std::int64_t> a(n), b(n);
    for (auto& x : a) x = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    for (auto& x : b) x = static_cast<std::int64_t>(rng() % 2000001) - 1000000;
    auto s = a, v = a;
    CHECK(simd::scalar::add_i64(s.data(), b.data(), n) == simd::avx2::add_i64(v.data(), b.data(), n));
    CHECK(s == v);
    s = a, v = a;
    CHECK(simd::scalar::axpy_i64_small(s.data(), b.data(), -12345, n) ==
          simd::avx2::axpy_i64_small(v.data(), b.data(), -12345, n));
    CHECK(s == v);
  }
  std::vector<std::int64_t> big(9, std::numeric_limits<std::int64_t>::max() - 1), one(9, 2);
  auto s = big, v = big;
  CHECK_FALSE(simd::scalar::add_i64(s.data(), one.data(), 9));
  CHECK_FALSE(simd::avx2::add_i64(v.data(), one.data(), 9));
}

TEST_CASE("bucket kernels: AVX2 equals scalar bit for bit") {
  if (!simd::avx2_available()) return;
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (auto [n, w, nb] : {std::tuple{std::size_t{50}, std::size_t{2}, std::size_t{3}}, {333, 32, 3}, {1000, 8, 5}, {17, 64, 4}}) {
    std::vector<std::int8_t> sym(n);
    for (auto& s : sym) s = static_cast<std::int8_t>(static_cast<int>(rng() % (nb + 1)) - 1);
    std::vector<double> X(n * w);
    for (auto& x : X) x = g(rng);
    std::vector<double> B1(nb * w, 0), B2(nb * w, 0);
    simd::scalar::bucket_rows(sym.data(), n, X.data(), w, B1.data(), nb);
    simd::avx2::bucket_rows(sym.data(), n, X.data(), w, B2.data(), nb);
    CHECK(B1 == B2);
    std::vector<double> y(w);
    for (auto& x : y) x = g(rng);
    std::vector<double> C1(nb * n * w, 0), C2(nb * n * w, 0);
    simd::scalar::bucket_cols(sym.data(), n, y.data(), w, C1.data());
    simd::avx2::bucket_cols(sym.data(), n, y.data(), w, C2.data());
    CHECK(C1 == C2);
  }
}

TEST_CASE("sieve cell identical under scalar and AVX2 dispatch") {
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  SieveOptions o;
  o.trials = 6;
  SieveCell a, b;
  {
    ForceIsa f(simd::Isa::Scalar);
    a = large_sieve_ratio(R, 2, 3, o);
  }
  {
    ForceIsa f(simd::avx2_available() ? simd::Isa::Avx2 : simd::Isa::Scalar);
    b = large_sieve_ratio(R, 2, 3, o);
  }
  CHECK(a.best_unimodular == b.best_unimodular);
  CHECK(a.best_rademacher == b.best_rademacher);
  CHECK(a.krylov_sup == b.krylov_sup);
}

}  // TEST_SUITE

TEST_SUITE("cache") {

TEST_CASE("store and load round trip; other keys miss") {
  const fs::path d = fresh_dir("roundtrip");
  cache::set_directory(d.string());
  cache::reset_stats();
  const std::vector<std::uint8_t> payload = {1, 2, 3, 250};
  CHECK(cache::store("blob", "key-a", payload));
  CHECK(cache::load("blob", "key-a") == payload);
  CHECK_FALSE(cache::load("blob", "key-b").has_value());
  // An entry written for another key at this key's path is a plain miss.
  fs::copy_file(cache::path_for("blob", "key-a"), cache::path_for("blob", "key-c"));
  CHECK_FALSE(cache::load("blob", "key-c").has_value());
  const auto st = cache::stats();
  CHECK(st.hits == 1);
  CHECK(st.misses == 2);
  CHECK(st.corrupt == 0);
  cache::set_directory("");
  fs::remove_all(d);
}

TEST_CASE("prime tables: cold run writes, warm run hits, corruption recomputes identically") {
  const fs::path d = fresh_dir("primes");
  cache::set_directory(d.string());
  FieldCtx F(7, 1, 3);
  PolyRing R(F);
  const PrimeTable cold(R, 6);
  CHECK(cold.cache_hits() == 0);
  const PrimeTable warm(R, 6);
  CHECK(warm.cache_hits() == 6);
  for (int n = 1; n <= 6; ++n) CHECK(warm.indices(n) == cold.indices(n));

  // flip a payload byte, truncate another entry
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(d)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  REQUIRE(files.size() == 6);
  {
    std::fstream f(files[0], std::ios::in | std::ios::out | std::ios::binary);
    f.seekg(-1, std::ios::end);
    char c;
    f.read(&c, 1);
    c ^= 0x5a;
    f.seekp(-1, std::ios::end);
    f.write(&c, 1);
  }
  fs::resize_file(files[1], fs::file_size(files[1]) / 2);
  cache::reset_stats();
  const PrimeTable again(R, 6);
  CHECK(again.cache_hits() == 4);
  CHECK(cache::stats().corrupt == 2);
  for (int n = 1; n <= 6; ++n) CHECK(again.indices(n) == cold.indices(n));
  // repaired on the way
  const PrimeTable healed(R, 6);
  CHECK(healed.cache_hits() == 6);

  // a different field never reads these entries
  FieldCtx F9(3, 2, 4);
  PolyRing R9(F9);
  cache::reset_stats();
  const PrimeTable other(R9, 2);
  CHECK(other.cache_hits() == 0);
  cache::set_directory("");
  fs::remove_all(d);
}

}  // TEST_SUITE
