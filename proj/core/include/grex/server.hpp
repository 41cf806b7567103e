#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grex/snapshot.hpp"

namespace grex {

struct ServerConfig {
  static constexpr std::size_t kDefaultMaxSnapshotBytes = 16u << 20;

  /// "host:port"; port 0 picks a free port.
  std::string bind_address = "127.0.0.1:8080";
  std::filesystem::path storage_dir = "snapshots";
  std::size_t max_snapshot_bytes = kDefaultMaxSnapshotBytes;
  /// When set, POST requires "Authorization: Bearer <token>".
  std::optional<std::string> write_token;
  std::vector<std::string> cors_allowed_origins{"*"};

  std::string host() const;
  /// Throws InvalidArgument on a malformed bind address.
  int port() const;

  /// GREX_BIND, GREX_STORAGE_DIR, GREX_MAX_SNAPSHOT_BYTES, GREX_WRITE_TOKEN,
  /// GREX_CORS_ORIGINS (comma separated). Unset variables keep defaults.
  static ServerConfig from_env();
  /// JSON object with keys bind, storage_dir, max_snapshot_bytes,
  /// write_token, cors_allowed_origins. Throws Io, InvalidArgument.
  static ServerConfig from_file(const std::filesystem::path& path);
};

/// Immutable snapshot blobs stored as "<uuid>.json" under one directory.
class SnapshotStore {
 public:
  /// Throws Error(Io) unless `dir` exists (or can be created) and is writable.
  explicit SnapshotStore(std::filesystem::path dir);

  /// Writes atomically under a fresh id; never overwrites an existing file.
  SnapshotId put(std::string_view bytes);
  std::optional<std::string> get(const SnapshotId& id) const;
  std::size_t count() const noexcept { return count_.load(); }
  const std::filesystem::path& dir() const noexcept { return dir_; }

 private:
  std::filesystem::path dir_;
  std::atomic<std::size_t> count_{0};
};

/// Decides whether a write is allowed. The default policy compares the
/// bearer token with ServerConfig::write_token.
using WritePolicy = std::function<bool(std::string_view authorization_header)>;

/// HTTP/1.1 JSON API:
///   POST /api/v1/snapshots        -> 201 {"id","url_fragment"} | 400 | 401 | 413
///   GET  /api/v1/snapshots/{id}   -> 200 stored bytes | 400 | 404
///   GET  /api/v1/health           -> 200 {"status":"ok","snapshots":N}
class SharingServer {
 public:
  using Logger = std::function<void(const std::string& line)>;

  explicit SharingServer(ServerConfig config, Logger logger = {});
  ~SharingServer();
  SharingServer(const SharingServer&) = delete;
  SharingServer& operator=(const SharingServer&) = delete;

  void set_write_policy(WritePolicy policy);

  /// Binds the listening socket and returns the bound port. Throws Error(Io)
  /// when the address is unavailable.
  int bind();
  /// Serves until stop(). Requires bind().
  void run();
  /// bind() then run() on a background thread; returns the port.
  int start();
  void stop();

  const SnapshotStore& store() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace grex
