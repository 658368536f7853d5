// Copyright 2026 The qstc Authors. All rights reserved.
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

#ifndef QSTC_IO_HPP_
#define QSTC_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace qstc {

// 17 significant digits ("%.17g", locale independent), so every double
// round-trips. Used for every real in CSV output.
std::string format_real(double value);

class CsvField {
 public:
  CsvField(double v) : text_(format_real(v)) {}
  CsvField(int v) : text_(std::to_string(v)) {}
  CsvField(long v) : text_(std::to_string(v)) {}
  CsvField(long long v) : text_(std::to_string(v)) {}
  CsvField(unsigned v) : text_(std::to_string(v)) {}
  CsvField(unsigned long v) : text_(std::to_string(v)) {}
  CsvField(unsigned long long v) : text_(std::to_string(v)) {}
  CsvField(std::string_view v) : text_(v) {}
  CsvField(const char* v) : text_(v) {}
  CsvField(const std::string& v) : text_(v) {}

  const std::string& text() const { return text_; }

 private:
  std::string text_;
};

// UTF-8 CSV with a header row and "\n" line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::vector<std::string> columns);

  void row(std::initializer_list<CsvField> fields);
  void row(const std::vector<CsvField>& fields);

  const std::vector<std::string>& columns() const { return columns_; }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
  std::vector<std::string> columns_;
  std::ofstream out_;
};

// SHA-1 of "blob <size>\0<content>", i.e. what `git hash-object` prints.
std::string git_blob_sha1(std::string_view content);
std::string file_git_sha1(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);
// Pretty-printed with a trailing newline.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& j);

}  // namespace qstc

#endif  // QSTC_IO_HPP_
