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

// JSON serialization of density matrices for CLI debug output: row-major
// [re, im] pairs plus the dimension.

#include <json.hpp>

#include "qmeas/matrix.hpp"

namespace qmeas {

template <std::size_t N>
nlohmann::json density_to_json(const Matrix<N>& rho) {
  nlohmann::json entries = nlohmann::json::array();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      entries.push_back({rho(i, j).real(), rho(i, j).imag()});
  return {{"dim", N}, {"entries", entries}};
}

}  // namespace qmeas
