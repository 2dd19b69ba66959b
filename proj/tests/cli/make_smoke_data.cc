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

// Writes a small planted-partition graph and a run config into argv[1].

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "sclrl/io.h"
#include "testing/oracles.h"

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: make_smoke_data DIR\n");
    return 1;
  }
  const std::filesystem::path dir = argv[1];
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  auto pp = sclrl::testing::planted_partition(80, 0.1, 0.01, 6, 0.1, 2);
  sclrl::export_generic(pp.graph, dir / "edges.txt", dir / "features.csv");
  std::ofstream(dir / "run.cfg") << "edges_path = edges.txt\n"
                                    "features_path = features.csv\n"
                                    "output_dir = out\n"
                                    "epochs = 2\n"
                                    "batch_size = 32\n"
                                    "folds = 3\n"
                                    "repeats = 1\n";
  return 0;
}
