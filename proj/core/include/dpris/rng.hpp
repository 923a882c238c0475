// SPDX-License-Identifier: Apache-2.0
//
// dpris - dual-polarized RIS-aided ISAC simulation and optimization toolkit
// Copyright (C) 2026 The dpris Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#pragma once

#include "dpris/linalg.hpp"

#include <cstdint>
#include <random>

namespace dpris {

using Rng = std::mt19937_64;

/// Named sub-streams of one realization. Every consumer of randomness pulls
/// from its own stream so that changing one draw pattern never shifts another.
enum class Stream : std::uint32_t { channels = 1, init = 2, probe = 3 };

/// Deterministic generator for (seed, realization, stream).
inline Rng make_rng(std::uint64_t seed, std::uint64_t realization, Stream stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(realization), static_cast<std::uint32_t>(realization >> 32),
                    static_cast<std::uint32_t>(stream)};
  return Rng(seq);
}

/// rows x cols matrix of i.i.d. CN(0, 1) entries, filled column-major.
inline cmat complex_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const double s = std::sqrt(0.5);
  cmat out(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      out(i, j) = cd(s * re, s * im);
    }
  return out;
}

}  // namespace dpris
