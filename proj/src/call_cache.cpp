#include "factjudge/call_cache.hpp"

#include <mutex>

#include <nlohmann/json.hpp>

#include "factjudge/error.hpp"

namespace factjudge {

using json = nlohmann::json;

std::string cache_record_to_line(const CacheRecord& record) {
  json line = {{"key", record.key},
               {"provider", record.provider},
               {"model", record.model},
               {"response_text", record.response_text},
               {"created_at", record.created_at}};
  return line.dump() + "\n";
}

CallCache::CallCache(const std::filesystem::path& path) : path_(path) {
  if (std::ifstream in{path, std::ios::binary}) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      try {
        const json rec = json::parse(line);
        index_.try_emplace(rec.at("key").get<std::string>(), rec.at("response_text").get<std::string>());
      } catch (const json::exception& e) {
        throw CacheError(CacheErrc::CacheCorrupt, line_no,
                         path.string() + ":" + std::to_string(line_no) + ": undecodable cache record (" +
                             e.what() + ")");
      }
    }
  }
  out_.open(path, std::ios::binary | std::ios::app);
  if (!out_) throw CacheError(CacheErrc::Io, 0, "cannot open cache file " + path.string() + " for append");
}

std::optional<std::string> CallCache::lookup(const std::string& key) const {
  std::shared_lock lock(mutex_);
  if (auto it = index_.find(key); it != index_.end()) return it->second;
  return std::nullopt;
}

std::string CallCache::insert(const CacheRecord& record) {
  std::unique_lock lock(mutex_);
  if (auto it = index_.find(record.key); it != index_.end()) return it->second;
  if (out_.is_open()) {
    const std::string line = cache_record_to_line(record);
    out_.write(line.data(), static_cast<std::streamsize>(line.size()));
    out_.flush();
    if (!out_) throw CacheError(CacheErrc::Io, 0, "failed to append to cache file");
  }
  index_.emplace(record.key, record.response_text);
  return record.response_text;
}

std::size_t CallCache::size() const {
  std::shared_lock lock(mutex_);
  return index_.size();
}

}  // namespace factjudge
