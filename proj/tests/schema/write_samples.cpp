// Writes engine-produced snapshots, plus documents the engine rejects for
// reasons a JSON Schema can also express, for check_schema.py.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <functional>
#include <random>

#include <nlohmann/json.hpp>

#include "generators.hpp"
#include "grex/snapshot.hpp"

namespace {

void write(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream(path, std::ios::binary) << bytes;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: write_samples <dir>\n";
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::create_directories(dir);
  std::mt19937_64 rng(77);
  const grex::SnapshotMetadata meta{"sample", "2021-03-04T05:06:07Z", "write_samples"};
  std::string base;
  for (int i = 0; i < 50; ++i) {
    const grex::Graph g = grex::testing::random_attributed_graph(rng, 10, 20);
    const std::string bytes = grex::encode(g, grex::testing::random_view(rng, g), meta);
    if (g.node_count() > 0 && base.empty()) base = bytes;
    write(dir / ("valid_" + std::to_string(i) + ".json"), bytes);
  }

  using Json = nlohmann::json;
  const Json doc = Json::parse(base);
  const std::string first = doc["graph"]["nodes"][0]["id"];
  std::vector<std::function<void(Json&)>> mutations = {
      [](Json& d) { d["version"] = 2; },
      [](Json& d) { d["version"] = "1"; },
      [](Json& d) { d.erase("metadata"); },
      [](Json& d) { d["metadata"]["created"] = "yesterday"; },
      [](Json& d) { d["graph"]["directed"] = 1; },
      [](Json& d) { d["graph"]["nodes"][0]["id"] = ""; },
      [](Json& d) { d["graph"]["nodes"][0]["attributes"]["x"] = Json::array(); },
      [&](Json& d) { d["graph"]["edges"].push_back({{"source", first}, {"target", first}, {"weight", 0}}); },
      [&](Json& d) { d["view"]["positions"][first] = {1, 2, 3}; },
      [&](Json& d) { d["view"]["positions"][first] = {1, "2"}; },
      [&](Json& d) { d["view"]["overrides"][first] = {{"color", "red"}}; },
      [&](Json& d) { d["view"]["overrides"][first] = {{"size", -1}}; },
      [](Json& d) { d["view"]["global_style"]["shape"] = "hexagon"; },
      [](Json& d) { d["view"]["global_style"]["size_by"] = "attribute:"; },
      [](Json& d) { d["view"]["global_style"]["color_scale"] = Json::array(); },
      [](Json& d) { d["view"]["global_style"]["label_by"] = 3; },
      [](Json& d) { d["view"].erase("pinned"); },
      [](Json& d) { d = Json::array(); },
  };
  int failures = 0;
  for (std::size_t i = 0; i < mutations.size(); ++i) {
    Json bad = doc;
    mutations[i](bad);
    const std::string bytes = bad.dump();
    if (grex::validate(bytes).empty()) {
      std::cerr << "mutation " << i << " was accepted by the engine\n";
      ++failures;
    }
    write(dir / ("invalid_" + std::to_string(i) + ".json"), bytes);
  }
  return failures == 0 ? 0 : 1;
}
