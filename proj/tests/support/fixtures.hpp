#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "pcalloc/goals.hpp"

namespace pcalloc::testing {

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline std::string data_path(const std::string& name) { return std::string(PCALLOC_DATA_DIR) + "/" + name; }

/// Goals matrix of the 2014 season (11 constructors in championship order).
inline const GoalsMatrix& goals_2014() {
  static const GoalsMatrix goals = load_goals(read_text(data_path("goals_2014.csv")));
  return goals;
}

}  // namespace pcalloc::testing
