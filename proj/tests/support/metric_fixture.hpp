#pragma once

#include <json.hpp>

#include <fstream>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct MetricFixture {
  std::vector<std::string> hyps;
  std::vector<std::string> refs;
  nlohmann::json expected;
};

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

/// The pinned sacreBLEU fixture (tests/scripts/make_metric_fixture.py).
inline MetricFixture metric_fixture() {
  MetricFixture f;
  f.hyps = read_lines(fixture("metrics/hyps.txt"));
  f.refs = read_lines(fixture("metrics/refs.txt"));
  f.expected = nlohmann::json::parse(read_file(fixture("metrics/expected.json")));
  return f;
}

}  // namespace oracle
