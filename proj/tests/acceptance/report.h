// Copyright 2026 The sclrl Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SCLRL_TESTS_ACCEPTANCE_REPORT_H_
#define SCLRL_TESTS_ACCEPTANCE_REPORT_H_

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sclrl::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Runs one criterion and prints a single PASS/FAIL line. Exceptions count as
// failures. Returns whether the criterion passed.
inline bool run_criterion(const char* id, const char* title,
                          const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s [%s] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, title,
              o.detail.c_str(), secs);
  std::fflush(stdout);
  return o.pass;
}

inline double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

// Value of `method,metric,mean,...` in a metrics CSV.
inline double metric_mean(const std::filesystem::path& csv, const std::string& method,
                          const std::string& metric) {
  std::ifstream in(csv);
  const std::string prefix = method + "," + metric + ",";
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) {
      return std::stod(line.substr(prefix.size()));
    }
  }
  throw std::runtime_error("no " + prefix + " row in " + csv.string());
}

// `key = value` from a report file.
inline double report_value(const std::filesystem::path& file, const std::string& key) {
  std::ifstream in(file);
  const std::string prefix = key + " = ";
  for (std::string line; std::getline(in, line);) {
    if (line.rfind(prefix, 0) == 0) return std::stod(line.substr(prefix.size()));
  }
  throw std::runtime_error("no " + key + " in " + file.string());
}

inline std::string fmt(const char* format, double a, double b = 0, double c = 0,
                       double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c, d);
  return buf;
}

}  // namespace sclrl::acceptance

#endif  // SCLRL_TESTS_ACCEPTANCE_REPORT_H_
