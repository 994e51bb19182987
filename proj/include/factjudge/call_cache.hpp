#pragma once

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>

namespace factjudge {

struct CacheRecord {
  std::string key;
  std::string provider;
  std::string model;
  std::string response_text;
  std::string created_at;  // ISO-8601 UTC
};

// Append-only JSONL store of judge completions keyed by cache_key(). The whole
// file is indexed at open; every append writes one complete line under a lock
// and flushes before the index is updated.
class CallCache {
 public:
  // In-memory cache with no backing file.
  CallCache() = default;
  // Opens (creating if needed) a cache file. Throws CacheError(CacheCorrupt)
  // naming the first undecodable line.
  explicit CallCache(const std::filesystem::path& path);

  CallCache(const CallCache&) = delete;
  CallCache& operator=(const CallCache&) = delete;

  std::optional<std::string> lookup(const std::string& key) const;

  // Stores the record unless its key is already present. Returns the text
  // stored under the key, which is the earlier one on a race.
  std::string insert(const CacheRecord& record);

  std::size_t size() const;
  const std::optional<std::filesystem::path>& path() const noexcept { return path_; }

 private:
  std::optional<std::filesystem::path> path_;
  std::ofstream out_;
  std::unordered_map<std::string, std::string> index_;
  mutable std::shared_mutex mutex_;
};

std::string cache_record_to_line(const CacheRecord& record);

}  // namespace factjudge
