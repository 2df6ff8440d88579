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

#ifndef TABFUZZ_TESTS_TEST_UTIL_HPP_
#define TABFUZZ_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <string>

#include "tabfuzz/grammar.hpp"

namespace tabfuzz::testing {

std::filesystem::path source_dir();

// The three-column census example grammar shipped in specs/.
std::string census_spec_text();
const Grammar& census_grammar();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace tabfuzz::testing

#endif  // TABFUZZ_TESTS_TEST_UTIL_HPP_
