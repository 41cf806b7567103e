#include "grex/server.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstdlib>
#include <fstream>
#include <mutex>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

// Bursts of simultaneous uploads overflow the library default of 5.
#define CPPHTTPLIB_LISTEN_BACKLOG 128
#include "httplib.h"

namespace grex {

namespace fs = std::filesystem;
using Json = nlohmann::json;

std::string ServerConfig::host() const {
  const auto colon = bind_address.rfind(':');
  return colon == std::string::npos ? bind_address : bind_address.substr(0, colon);
}

int ServerConfig::port() const {
  const auto colon = bind_address.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "bind address needs host:port");
  const std::string text = bind_address.substr(colon + 1);
  char* end = nullptr;
  const long port = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || port < 0 || port > 65535) {
    throw Error(ErrorKind::InvalidArgument, "bad port in bind address '" + bind_address + "'");
  }
  return static_cast<int>(port);
}

namespace {

std::size_t parse_size(const std::string& text) {
  char* end = nullptr;
  const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0' || v == 0) {
    throw Error(ErrorKind::InvalidArgument, "max snapshot bytes must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split_origins(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

}  // namespace

ServerConfig ServerConfig::from_env() {
  ServerConfig c;
  if (const char* v = std::getenv("GREX_BIND")) c.bind_address = v;
  if (const char* v = std::getenv("GREX_STORAGE_DIR")) c.storage_dir = v;
  if (const char* v = std::getenv("GREX_MAX_SNAPSHOT_BYTES")) c.max_snapshot_bytes = parse_size(v);
  if (const char* v = std::getenv("GREX_WRITE_TOKEN"); v != nullptr && *v != '\0') c.write_token = v;
  if (const char* v = std::getenv("GREX_CORS_ORIGINS")) c.cors_allowed_origins = split_origins(v);
  return c;
}

ServerConfig ServerConfig::from_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot read " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, path.string() + ": " + e.what());
  }
  ServerConfig c;
  try {
    if (j.contains("bind")) c.bind_address = j.at("bind").get<std::string>();
    if (j.contains("storage_dir")) c.storage_dir = j.at("storage_dir").get<std::string>();
    if (j.contains("max_snapshot_bytes")) c.max_snapshot_bytes = j.at("max_snapshot_bytes").get<std::size_t>();
    if (j.contains("write_token") && !j.at("write_token").is_null()) {
      c.write_token = j.at("write_token").get<std::string>();
    }
    if (j.contains("cors_allowed_origins")) {
      c.cors_allowed_origins = j.at("cors_allowed_origins").get<std::vector<std::string>>();
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, path.string() + ": " + e.what());
  }
  if (c.max_snapshot_bytes == 0) throw Error(ErrorKind::InvalidArgument, "max_snapshot_bytes must be positive");
  return c;
}

SnapshotStore::SnapshotStore(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (!fs::is_directory(dir_)) throw Error(ErrorKind::Io, dir_.string() + " is not a directory");
  if (::access(dir_.c_str(), W_OK | X_OK) != 0) {
    throw Error(ErrorKind::Io, dir_.string() + " is not writable");
  }
  std::size_t existing = 0;
  for (const auto& entry : fs::directory_iterator(dir_)) {
    const auto name = entry.path().filename().string();
    if (name.size() == 41 && name.ends_with(".json") && SnapshotId::parse(name.substr(0, 36))) {
      ++existing;
    }
  }
  count_ = existing;
}

SnapshotId SnapshotStore::put(std::string_view bytes) {
  const fs::path tmp = dir_ / (".incoming-" + SnapshotId::generate().str());
  {
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_EXCL, 0644);
    if (fd < 0) throw Error(ErrorKind::Io, "cannot create " + tmp.string());
    std::size_t done = 0;
    while (done < bytes.size()) {
      const ssize_t n = ::write(fd, bytes.data() + done, bytes.size() - done);
      if (n < 0) {
        ::close(fd);
        ::unlink(tmp.c_str());
        throw Error(ErrorKind::Io, "write failed for " + tmp.string());
      }
      done += static_cast<std::size_t>(n);
    }
    if (::fsync(fd) != 0 || ::close(fd) != 0) {
      ::unlink(tmp.c_str());
      throw Error(ErrorKind::Io, "flush failed for " + tmp.string());
    }
  }
  // link() fails with EEXIST instead of replacing, so an id clash just
  // draws another id.
  for (;;) {
    SnapshotId id = SnapshotId::generate();
    const fs::path target = dir_ / (id.str() + ".json");
    if (::link(tmp.c_str(), target.c_str()) == 0) {
      ::unlink(tmp.c_str());
      ++count_;
      return id;
    }
    if (errno != EEXIST) {
      ::unlink(tmp.c_str());
      throw Error(ErrorKind::Io, "cannot store " + target.string());
    }
  }
}

std::optional<std::string> SnapshotStore::get(const SnapshotId& id) const {
  std::ifstream in(dir_ / (id.str() + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream out;
  out << in.rdbuf();
  return std::move(out).str();
}

struct SharingServer::Impl {
  ServerConfig config;
  Logger logger;
  SnapshotStore store;
  WritePolicy policy;
  httplib::Server http;
  std::thread worker;
  std::mutex log_mutex;

  Impl(ServerConfig c, Logger l) : config(std::move(c)), logger(std::move(l)), store(config.storage_dir) {
    if (config.max_snapshot_bytes == 0) throw Error(ErrorKind::InvalidArgument, "max_snapshot_bytes must be positive");
    policy = [token = config.write_token](std::string_view auth) {
      return !token || auth == "Bearer " + *token;
    };
    routes();
  }

  static void send_json(httplib::Response& res, int status, const Json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
  }

  static Json error_body(std::string_view message) { return Json{{"error", message}}; }

  void cors(const httplib::Request& req, httplib::Response& res) const {
    const auto& allowed = config.cors_allowed_origins;
    if (std::find(allowed.begin(), allowed.end(), "*") != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", "*");
      return;
    }
    const std::string origin = req.get_header_value("Origin");
    if (!origin.empty() && std::find(allowed.begin(), allowed.end(), origin) != allowed.end()) {
      res.set_header("Access-Control-Allow-Origin", origin);
      res.set_header("Vary", "Origin");
    }
  }

  void post_snapshot(const httplib::Request& req, httplib::Response& res) {
    if (!policy(req.get_header_value("Authorization"))) {
      send_json(res, 401, error_body("missing or invalid write token"));
      return;
    }
    if (req.body.size() > config.max_snapshot_bytes) {
      send_json(res, 413, error_body("snapshot exceeds " + std::to_string(config.max_snapshot_bytes) + " bytes"));
      return;
    }
    const auto issues = validate(req.body);
    if (!issues.empty()) {
      Json errors = Json::array();
      for (const auto& i : issues) {
        errors.push_back({{"kind", to_string(i.kind)}, {"path", i.path}, {"reason", i.reason}});
      }
      send_json(res, 400, Json{{"errors", errors}});
      return;
    }
    const SnapshotId id = store.put(req.body);
    res.set_header("Location", "/api/v1/snapshots/" + id.str());
    send_json(res, 201, Json{{"id", id.str()}, {"url_fragment", "#" + id.str()}});
  }

  void get_snapshot(const httplib::Request& req, httplib::Response& res) {
    const auto id = SnapshotId::parse(req.matches[1].str());
    if (!id) {
      send_json(res, 400, error_body("malformed snapshot id"));
      return;
    }
    auto bytes = store.get(*id);
    if (!bytes) {
      send_json(res, 404, error_body("unknown snapshot id"));
      return;
    }
    res.status = 200;
    res.set_header("Cache-Control", "public, max-age=31536000, immutable");
    res.set_header("ETag", "\"" + id->str() + "\"");
    res.set_content(std::move(*bytes), "application/json");
  }

  void routes() {
    // httplib also sets SO_REUSEPORT by default, which would let a second
    // instance share a port that is already serving.
    http.set_socket_options([](socket_t sock) {
      int yes = 1;
      ::setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
    });
    http.set_payload_max_length(config.max_snapshot_bytes);
    http.Post("/api/v1/snapshots", [this](const auto& req, auto& res) { post_snapshot(req, res); });
    http.Get(R"(/api/v1/snapshots/([^/]+))", [this](const auto& req, auto& res) { get_snapshot(req, res); });
    http.Get("/api/v1/health", [this](const auto&, auto& res) {
      send_json(res, 200, Json{{"status", "ok"}, {"snapshots", store.count()}});
    });
    http.Options(R"(/api/v1/.*)", [](const auto&, auto& res) {
      res.status = 204;
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Authorization, Content-Type");
      res.set_header("Access-Control-Max-Age", "86400");
    });
    http.set_error_handler([](const auto&, auto& res) {
      if (res.body.empty()) {
        const char* reason = res.status == 413 ? "payload too large" : httplib::status_message(res.status);
        send_json(res, res.status, error_body(reason));
      }
    });
    http.set_post_routing_handler([this](const auto& req, auto& res) { cors(req, res); });
    http.set_logger([this](const httplib::Request& req, const httplib::Response& res) {
      if (!logger) return;
      std::ostringstream line;
      line << req.remote_addr << ' ' << req.method << ' ' << req.path << ' ' << res.status << ' '
           << res.body.size();
      std::lock_guard lock(log_mutex);
      logger(line.str());
    });
  }
};

SharingServer::SharingServer(ServerConfig config, Logger logger)
    : impl_(std::make_unique<Impl>(std::move(config), std::move(logger))) {}

SharingServer::~SharingServer() { stop(); }

void SharingServer::set_write_policy(WritePolicy policy) { impl_->policy = std::move(policy); }

int SharingServer::bind() {
  const std::string host = impl_->config.host();
  const int port = impl_->config.port();
  if (port == 0) {
    const int bound = impl_->http.bind_to_any_port(host);
    if (bound < 0) throw Error(ErrorKind::Io, "cannot bind " + host);
    return bound;
  }
  if (!impl_->http.bind_to_port(host, port)) {
    throw Error(ErrorKind::Io, "cannot bind " + impl_->config.bind_address);
  }
  return port;
}

void SharingServer::run() { impl_->http.listen_after_bind(); }

int SharingServer::start() {
  const int port = bind();
  impl_->worker = std::thread([this] { run(); });
  impl_->http.wait_until_ready();
  return port;
}

void SharingServer::stop() {
  if (!impl_) return;
  impl_->http.stop();
  if (impl_->worker.joinable()) impl_->worker.join();
}

const SnapshotStore& SharingServer::store() const noexcept { return impl_->store; }

}  // namespace grex
