// Copyright 2026 The topobs Authors
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

#pragma once

// Tab-separated tables and small text reports. Every write goes to a
// temporary sibling first and is renamed into place.

#include <filesystem>
#include <string>
#include <vector>

namespace topobs::cli {

/// 12 significant digits, shortest form.
std::string format_number(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(const std::vector<double>& values);
};

void write_text_atomic(const std::filesystem::path& path, const std::string& contents);
void write_table(const std::filesystem::path& path, const Table& table);

/// Ordered key/value report, one "key<TAB>value" line each.
class Report {
 public:
  void add(const std::string& key, double value);
  void add(const std::string& key, const std::string& value);
  std::string str() const { return text_; }

 private:
  std::string text_;
};

struct NumericTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Column index by name, or -1.
  int column(const std::string& name) const;
};

/// Reads a header row followed by numeric rows. Throws std::runtime_error
/// naming the file and line for malformed input.
NumericTable read_table(const std::filesystem::path& path);

/// Probability column of a table: the column named "probability" if
/// present, otherwise the last one.
std::vector<double> read_distribution(const std::filesystem::path& path);

}  // namespace topobs::cli
