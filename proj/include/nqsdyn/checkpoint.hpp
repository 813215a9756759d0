// Copyright 2026 The nqsdyn Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#ifndef NQSDYN_CHECKPOINT_HPP
#define NQSDYN_CHECKPOINT_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "nqsdyn/rbm.hpp"

namespace nqsdyn {

/// Binary layout (all little endian):
///
///   char[8]  magic "NQSDYNCK"
///   uint32   format version (1)
///   uint32   N
///   uint32   M
///   int32    sector as sum of spins (2 S^z_tot)
///   uint8    1 if a ground-state energy is stored
///   float64  E0 (0 when absent)
///   float64  standard error of E0
///   float64  (re, im) x (N + M + N M), canonical flat order
struct Checkpoint {
  RbmParameters params;
  int sector = 0;
  std::optional<double> e0;
  double e0_error = 0.0;

  friend bool operator==(const Checkpoint &, const Checkpoint &) = default;
};

inline constexpr char kCheckpointMagic[8] = {'N', 'Q', 'S', 'D',
                                             'Y', 'N', 'C', 'K'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

std::vector<std::uint8_t> encode_checkpoint(const Checkpoint &checkpoint);
Checkpoint decode_checkpoint(const std::vector<std::uint8_t> &bytes);

void write_checkpoint(const std::filesystem::path &path,
                      const Checkpoint &checkpoint);
Checkpoint read_checkpoint(const std::filesystem::path &path);

}  // namespace nqsdyn

#endif  // NQSDYN_CHECKPOINT_HPP
