#pragma once

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>

namespace hyperim::testing {

struct BensonFiles {
  std::filesystem::path nverts, simplices;
};

// Looks under $HYPERIM_DATA_DIR, then <source>/data, for <name>/<name>-{nverts,simplices}.txt.
inline std::optional<BensonFiles> find_benson(const std::string& name) {
  std::vector<std::filesystem::path> roots;
  if (const char* env = std::getenv("HYPERIM_DATA_DIR")) roots.emplace_back(env);
  roots.emplace_back(std::filesystem::path(HYPERIM_SOURCE_DIR) / "data");
  for (const auto& root : roots) {
    BensonFiles f{root / name / (name + "-nverts.txt"), root / name / (name + "-simplices.txt")};
    if (std::filesystem::exists(f.nverts) && std::filesystem::exists(f.simplices)) return f;
  }
  return std::nullopt;
}

}  // namespace hyperim::testing
