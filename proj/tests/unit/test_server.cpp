#include <fstream>
#include <regex>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "grex/server.hpp"
#include "httplib.h"
#include "oracles.hpp"
#include "tempdir.hpp"

using namespace grex;
using Json = nlohmann::json;
using grex::testing::TempDir;

namespace {

const SnapshotMetadata kMeta{"server test", "2020-06-01T12:00:00Z", "grex tests"};

std::string small_snapshot() {
  const Graph g = grex::testing::make_graph({"a", "b"}, {{"a", "b"}}, true);
  ViewState v;
  v.visible = {NodeId("a")};
  v.layout.positions[NodeId("a")] = {10.25, 20.0};
  return encode(g, v, kMeta);
}

ServerConfig config_for(const TempDir& dir) {
  ServerConfig c;
  c.bind_address = "127.0.0.1:0";
  c.storage_dir = dir.path();
  return c;
}

const std::regex kUuid("^[0-9a-f]{8}-[0-9a-f]{4}-4[0-9a-f]{3}-[89ab][0-9a-f]{3}-[0-9a-f]{12}$");

}  // namespace

TEST_CASE("post then get returns the same bytes") {
  TempDir dir;
  std::vector<std::string> log;
  SharingServer server(config_for(dir), [&](const std::string& line) { log.push_back(line); });
  const int port = server.start();
  httplib::Client client("127.0.0.1", port);

  const std::string body = small_snapshot();
  auto posted = client.Post("/api/v1/snapshots", body, "application/json");
  REQUIRE(posted);
  CHECK(posted->status == 201);
  const Json reply = Json::parse(posted->body);
  const std::string id = reply.at("id");
  CHECK(std::regex_match(id, kUuid));
  CHECK(reply.at("url_fragment") == "#" + id);
  CHECK(posted->get_header_value("Location") == "/api/v1/snapshots/" + id);
  CHECK(posted->get_header_value("Access-Control-Allow-Origin") == "*");

  auto fetched = client.Get("/api/v1/snapshots/" + id);
  REQUIRE(fetched);
  CHECK(fetched->status == 200);
  CHECK(fetched->body == body);
  CHECK(fetched->get_header_value("Content-Type") == "application/json");
  CHECK(fetched->get_header_value("Cache-Control").find("immutable") != std::string::npos);

  auto health = client.Get("/api/v1/health");
  REQUIRE(health);
  CHECK(Json::parse(health->body) == Json{{"status", "ok"}, {"snapshots", 1}});
  CHECK(std::filesystem::exists(dir.path() / (id + ".json")));

  server.stop();
  CHECK(log.size() == 3);
  CHECK(log[0].find("POST /api/v1/snapshots 201") != std::string::npos);
}

TEST_CASE("error paths") {
  TempDir dir;
  ServerConfig config = config_for(dir);
  config.max_snapshot_bytes = 4096;
  SharingServer server(config);
  httplib::Client client("127.0.0.1", server.start());

  SUBCASE("invalid json") {
    auto r = client.Post("/api/v1/snapshots", "{not json", "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    const Json body = Json::parse(r->body);
    REQUIRE(body.at("errors").size() >= 1);
    CHECK(body["errors"][0]["kind"] == "JsonError");
  }
  SUBCASE("schema violations are listed") {
    Json doc = Json::parse(small_snapshot());
    doc["view"]["visible"].push_back("ghost");
    doc["view"]["global_style"]["shape"] = "blob";
    auto r = client.Post("/api/v1/snapshots", doc.dump(), "application/json");
    REQUIRE(r);
    CHECK(r->status == 400);
    const Json body = Json::parse(r->body);
    std::set<std::string> kinds, paths;
    for (const auto& e : body.at("errors")) {
      kinds.insert(e.at("kind").get<std::string>());
      paths.insert(e.at("path").get<std::string>());
    }
    CHECK(kinds.count("DanglingReference") == 1);
    CHECK(paths.count("view.global_style.shape") == 1);
  }
  SUBCASE("too large") {
    auto r = client.Post("/api/v1/snapshots", std::string(4097, ' '), "application/json");
    REQUIRE(r);
    CHECK(r->status == 413);
    CHECK(Json::parse(r->body).contains("error"));
    std::string exact = small_snapshot();
    exact.append(4096 - exact.size(), ' ');
    auto ok = client.Post("/api/v1/snapshots", exact, "application/json");
    REQUIRE(ok);
    CHECK(ok->status == 201);
  }
  SUBCASE("unknown and malformed ids") {
    auto missing = client.Get("/api/v1/snapshots/" + SnapshotId::generate().str());
    REQUIRE(missing);
    CHECK(missing->status == 404);
    auto malformed = client.Get("/api/v1/snapshots/not-a-uuid");
    REQUIRE(malformed);
    CHECK(malformed->status == 400);
    auto upper = client.Get("/api/v1/snapshots/6C0D8AAA-5320-4C81-9618-11EA5E0524F4");
    REQUIRE(upper);
    CHECK(upper->status == 400);
  }
  SUBCASE("preflight") {
    auto r = client.Options("/api/v1/snapshots");
    REQUIRE(r);
    CHECK(r->status == 204);
    CHECK(r->get_header_value("Access-Control-Allow-Methods").find("POST") != std::string::npos);
    CHECK(r->get_header_value("Access-Control-Allow-Headers").find("Authorization") != std::string::npos);
  }
  CHECK(server.store().count() <= 1);
}

TEST_CASE("write token") {
  TempDir dir;
  ServerConfig config = config_for(dir);
  config.write_token = "s3cret";
  SharingServer server(config);
  httplib::Client client("127.0.0.1", server.start());
  const std::string body = small_snapshot();

  auto none = client.Post("/api/v1/snapshots", body, "application/json");
  REQUIRE(none);
  CHECK(none->status == 401);
  auto wrong = client.Post("/api/v1/snapshots", {{"Authorization", "Bearer nope"}}, body, "application/json");
  REQUIRE(wrong);
  CHECK(wrong->status == 401);
  auto right = client.Post("/api/v1/snapshots", {{"Authorization", "Bearer s3cret"}}, body, "application/json");
  REQUIRE(right);
  CHECK(right->status == 201);
  // Reads stay public.
  auto read = client.Get("/api/v1/snapshots/" + Json::parse(right->body).at("id").get<std::string>());
  REQUIRE(read);
  CHECK(read->status == 200);
}

TEST_CASE("custom write policy") {
  TempDir dir;
  SharingServer server(config_for(dir));
  server.set_write_policy([](std::string_view auth) { return auth == "Team blue"; });
  httplib::Client client("127.0.0.1", server.start());
  auto denied = client.Post("/api/v1/snapshots", small_snapshot(), "application/json");
  REQUIRE(denied);
  CHECK(denied->status == 401);
  auto allowed = client.Post("/api/v1/snapshots", {{"Authorization", "Team blue"}}, small_snapshot(), "application/json");
  REQUIRE(allowed);
  CHECK(allowed->status == 201);
}

TEST_CASE("cors allow list") {
  TempDir dir;
  ServerConfig config = config_for(dir);
  config.cors_allowed_origins = {"https://a.example"};
  SharingServer server(config);
  httplib::Client client("127.0.0.1", server.start());
  auto allowed = client.Get("/api/v1/health", {{"Origin", "https://a.example"}});
  REQUIRE(allowed);
  CHECK(allowed->get_header_value("Access-Control-Allow-Origin") == "https://a.example");
  auto other = client.Get("/api/v1/health", {{"Origin", "https://b.example"}});
  REQUIRE(other);
  CHECK_FALSE(other->has_header("Access-Control-Allow-Origin"));
}

TEST_CASE("snapshots survive a restart") {
  TempDir dir;
  const std::string body = small_snapshot();
  std::string id;
  {
    SharingServer server(config_for(dir));
    httplib::Client client("127.0.0.1", server.start());
    auto r = client.Post("/api/v1/snapshots", body, "application/json");
    REQUIRE(r);
    id = Json::parse(r->body).at("id");
  }
  SharingServer again(config_for(dir));
  CHECK(again.store().count() == 1);
  httplib::Client client("127.0.0.1", again.start());
  auto r = client.Get("/api/v1/snapshots/" + id);
  REQUIRE(r);
  CHECK(r->status == 200);
  CHECK(r->body == body);
}

TEST_CASE("snapshot store") {
  TempDir dir;
  SnapshotStore store(dir.path() / "nested" / "store");
  const SnapshotId a = store.put("one");
  const SnapshotId b = store.put("two");
  CHECK(a != b);
  CHECK(store.get(a) == "one");
  CHECK(store.get(b) == "two");
  CHECK_FALSE(store.get(SnapshotId::generate()));
  CHECK(store.count() == 2);
  // Stray files do not count as snapshots.
  std::ofstream(dir.path() / "nested" / "store" / "README") << "x";
  CHECK(SnapshotStore(dir.path() / "nested" / "store").count() == 2);

  std::ofstream(dir.path() / "file") << "x";
  CHECK_THROWS_AS(SnapshotStore(dir.path() / "file"), Error);
}

TEST_CASE("server config") {
  ServerConfig c;
  CHECK(c.host() == "127.0.0.1");
  CHECK(c.port() == 8080);
  CHECK(c.max_snapshot_bytes == 16u * 1024 * 1024);
  c.bind_address = "0.0.0.0:99999";
  CHECK_THROWS_AS(c.port(), Error);

  ::setenv("GREX_BIND", "0.0.0.0:9000", 1);
  ::setenv("GREX_WRITE_TOKEN", "tok", 1);
  ::setenv("GREX_CORS_ORIGINS", "https://a,https://b", 1);
  ::setenv("GREX_MAX_SNAPSHOT_BYTES", "1234", 1);
  const ServerConfig env = ServerConfig::from_env();
  CHECK(env.port() == 9000);
  CHECK(env.write_token == "tok");
  CHECK(env.cors_allowed_origins == std::vector<std::string>{"https://a", "https://b"});
  CHECK(env.max_snapshot_bytes == 1234);
  ::setenv("GREX_MAX_SNAPSHOT_BYTES", "0", 1);
  CHECK_THROWS_AS(ServerConfig::from_env(), Error);
  for (const char* v : {"GREX_BIND", "GREX_WRITE_TOKEN", "GREX_CORS_ORIGINS", "GREX_MAX_SNAPSHOT_BYTES"}) ::unsetenv(v);

  TempDir dir;
  const auto file = dir.path() / "server.json";
  std::ofstream(file) << R"({"bind": "127.0.0.1:0", "storage_dir": "/tmp/x", "write_token": null, "max_snapshot_bytes": 10})";
  const ServerConfig fromfile = ServerConfig::from_file(file);
  CHECK(fromfile.port() == 0);
  CHECK(fromfile.storage_dir == "/tmp/x");
  CHECK_FALSE(fromfile.write_token);
  CHECK(fromfile.max_snapshot_bytes == 10);
  std::ofstream(file) << R"({"bind": 5})";
  CHECK_THROWS_AS(ServerConfig::from_file(file), Error);
  CHECK_THROWS_AS(ServerConfig::from_file(dir.path() / "missing.json"), Error);
}

TEST_CASE("binding a taken port fails") {
  TempDir dir;
  SharingServer first(config_for(dir));
  const int port = first.start();
  ServerConfig config = config_for(dir);
  config.bind_address = "127.0.0.1:" + std::to_string(port);
  SharingServer second(config);
  CHECK_THROWS_AS(second.bind(), Error);
}
