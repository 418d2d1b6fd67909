#include "kummerlab/cache.hpp"

#include <zlib.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>

namespace kummerlab::cache {

namespace {
std::mutex g_mu;
std::string g_dir;
std::atomic<int> g_hits{0}, g_misses{0}, g_corrupt{0};
constexpr char kMagic[8] = {'K', 'L', 'C', 'A', 'C', 'H', 'E', '1'};

std::uint32_t crc_of(const std::uint8_t* data, std::size_t n) {
  uLong crc = crc32(0L, Z_NULL, 0);
  while (n > 0) {
    const uInt chunk = static_cast<uInt>(std::min<std::size_t>(n, 1u << 30));
    crc = crc32(crc, data, chunk);
    data += chunk;
    n -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}
}  // namespace

std::string directory() {
  std::lock_guard<std::mutex> lk(g_mu);
  if (!g_dir.empty()) return g_dir;
  if (const char* env = std::getenv("KUMMERLAB_CACHE"); env && *env) return env;
  if (const char* home = std::getenv("HOME"); home && *home) return std::string(home) + "/.cache/kummerlab";
  return ".kummerlab_cache";
}

void set_directory(const std::string& dir) {
  std::lock_guard<std::mutex> lk(g_mu);
  g_dir = dir;
}

std::string path_for(const std::string& kind, const std::string& key) {
  const std::uint32_t h = crc_of(reinterpret_cast<const std::uint8_t*>(key.data()), key.size());
  char buf[16];
  std::snprintf(buf, sizeof buf, "%08x", h);
  return directory() + "/" + kind + "-" + buf + ".bin";
}

bool store(const std::string& kind, const std::string& key, const std::vector<std::uint8_t>& payload) {
  std::error_code ec;
  std::filesystem::create_directories(directory(), ec);
  const std::string path = path_for(kind, key);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) return false;
    const std::uint64_t klen = key.size(), plen = payload.size();
    const std::uint32_t crc = crc_of(payload.data(), payload.size());
    out.write(kMagic, sizeof kMagic);
    out.write(reinterpret_cast<const char*>(&klen), sizeof klen);
    out.write(key.data(), static_cast<std::streamsize>(klen));
    out.write(reinterpret_cast<const char*>(&plen), sizeof plen);
    out.write(reinterpret_cast<const char*>(&crc), sizeof crc);
    out.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(plen));
    if (!out) return false;
  }
  std::filesystem::rename(tmp, path, ec);
  return !ec;
}

std::optional<std::vector<std::uint8_t>> load(const std::string& kind, const std::string& key) {
  const std::string path = path_for(kind, key);
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ++g_misses;
    return std::nullopt;
  }
  auto damaged = [&](const char* why) -> std::optional<std::vector<std::uint8_t>> {
    std::cerr << "warning: cache entry " << path << " ignored (" << why << "), recomputing\n";
    ++g_corrupt;
    ++g_misses;
    return std::nullopt;
  };
  char magic[8];
  std::uint64_t klen = 0, plen = 0;
  std::uint32_t crc = 0;
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof magic) != 0) return damaged("bad header");
  if (!in.read(reinterpret_cast<char*>(&klen), sizeof klen) || klen > (1u << 20)) return damaged("bad header");
  std::string stored(klen, '\0');
  if (!in.read(stored.data(), static_cast<std::streamsize>(klen))) return damaged("truncated");
  if (stored != key) {
    ++g_misses;  // hash collision or different provenance: plain miss
    return std::nullopt;
  }
  if (!in.read(reinterpret_cast<char*>(&plen), sizeof plen) || !in.read(reinterpret_cast<char*>(&crc), sizeof crc))
    return damaged("truncated");
  std::vector<std::uint8_t> payload(plen);
  if (!in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(plen))) return damaged("truncated");
  if (crc_of(payload.data(), payload.size()) != crc) return damaged("checksum mismatch");
  ++g_hits;
  return payload;
}

Stats stats() { return Stats{g_hits.load(), g_misses.load(), g_corrupt.load()}; }

void reset_stats() {
  g_hits = 0;
  g_misses = 0;
  g_corrupt = 0;
}

}  // namespace kummerlab::cache
