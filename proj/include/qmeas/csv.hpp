// Copyright 2026 The qmeas Authors
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

#pragma once

// Minimal CSV emission: comma separator, '.' decimal point, doubles printed
// with 17 significant digits so values round-trip exactly.

#include <cstdio>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qmeas {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path, std::ios::trunc) {
    if (!out_) throw std::runtime_error("cannot open output file: " + path);
  }

  template <class... Ts>
  void row(const Ts&... vals) {
    bool first = true;
    ((cell(vals, first)), ...);
    out_ << '\n';
  }

  void flush() { out_.flush(); }

 private:
  void sep(bool& first) {
    if (!first) out_ << ',';
    first = false;
  }

  void cell(double v, bool& first) {
    sep(first);
    out_ << csv_num(v);
  }
  void cell(int v, bool& first) {
    sep(first);
    out_ << v;
  }
  void cell(long v, bool& first) {
    sep(first);
    out_ << v;
  }
  void cell(std::string_view v, bool& first) {
    sep(first);
    out_ << v;
  }
  void cell(const char* v, bool& first) {
    sep(first);
    out_ << v;
  }
  void cell(const std::string& v, bool& first) {
    sep(first);
    out_ << v;
  }
  // Empty cell for values that only exist on some rows.
  void cell(const std::optional<double>& v, bool& first) {
    sep(first);
    if (v) out_ << csv_num(*v);
  }

  std::ofstream out_;
};

}  // namespace qmeas
