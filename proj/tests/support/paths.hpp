#pragma once

#include <fstream>
#include <sstream>
#include <string>

namespace tyche::testing {

inline std::string data_path(const std::string& rel) { return std::string(TYCHE_DATA_DIR) + "/" + rel; }
inline std::string test_path(const std::string& rel) { return std::string(TYCHE_TEST_DIR) + "/" + rel; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace tyche::testing
