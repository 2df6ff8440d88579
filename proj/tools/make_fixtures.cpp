// Copyright 2026 The Tabfuzz Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tabfuzz/fixtures.hpp"

// Writes the bundled fixtures and a run config for each.
int main(int argc, char** argv) {
  CLI::App app{"Generate the test fixtures"};
  std::string dir = "fixtures";
  std::uint64_t seed = 2026;
  app.add_option("--out", dir, "output directory");
  app.add_option("--seed", seed, "fixture seed");
  CLI11_PARSE(app, argc, argv);

  try {
    for (const tabfuzz::FixtureSpec& spec :
         {tabfuzz::mini_insurance_spec(seed), tabfuzz::pure_noise_spec(seed)}) {
      const tabfuzz::Fixture fx = tabfuzz::make_fixture(spec);
      tabfuzz::write_fixture(fx, dir);
      std::cout << "wrote " << fx.name << " (" << fx.data.size() << " rows, R^2 ceiling "
                << fx.r2_ceiling << ")\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
