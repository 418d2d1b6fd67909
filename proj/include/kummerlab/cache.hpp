#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace kummerlab::cache {

// Directory from KUMMERLAB_CACHE, else $HOME/.cache/kummerlab, else ./.kummerlab_cache.
std::string directory();
void set_directory(const std::string& dir);  // overrides the environment (tests)

// Blobs are stored under a file name derived from the key, with the key text and
// a crc32 of the payload in the header. A load with a different key text, a bad
// checksum or a truncated file is a miss (a warning goes to stderr for damage).
bool store(const std::string& kind, const std::string& key, const std::vector<std::uint8_t>& payload);
std::optional<std::vector<std::uint8_t>> load(const std::string& kind, const std::string& key);
std::string path_for(const std::string& kind, const std::string& key);

struct Stats {
  int hits = 0;
  int misses = 0;
  int corrupt = 0;
};
Stats stats();
void reset_stats();

}  // namespace kummerlab::cache
