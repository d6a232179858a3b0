#pragma once

#include <filesystem>
#include <string>

#include "ued/maze/generate.hpp"
#include "ued/rng.hpp"

namespace ued::test {

/// Random valid level with dimensions drawn from [lo, hi] and any wall count.
inline maze::MazeLevel fuzz_level(RngKey key, int lo = 3, int hi = 13) {
  RngStream rng(key);
  maze::GeneratorParams p;
  p.width = lo + rng.uniform_int(hi - lo + 1);
  p.height = lo + rng.uniform_int(hi - lo + 1);
  p.max_walls = rng.uniform_int(p.width * p.height - 2);
  return maze::generate_random_level(fold_in(key, 1), p);
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("ued_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace ued::test
