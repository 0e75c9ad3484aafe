#ifndef EPINET_TEST_SUPPORT_HPP
#define EPINET_TEST_SUPPORT_HPP

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <string>

namespace testing {

inline std::string data_path(const std::string& name) { return std::string(EPINET_TEST_DIR) + "/data/" + name; }

inline const nlohmann::json& golden() {
  static const nlohmann::json doc = [] {
    std::ifstream in(std::string(EPINET_TEST_DIR) + "/golden/reference.json");
    return nlohmann::json::parse(in);
  }();
  return doc;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testing

#endif
