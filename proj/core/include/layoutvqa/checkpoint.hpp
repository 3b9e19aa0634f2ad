// Copyright 2026 The layoutvqa Authors
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

// Checkpoint layout (little-endian):
//   8 bytes  magic "LVQACKPT"
//   u32      format version
//   u64      header length, then a JSON header: config, vocabulary and the
//            name/size of every tensor in tensors() order
//   f64[]    raw tensor data in the same order
// Values round-trip bit for bit.

#pragma once

#include <filesystem>

#include "layoutvqa/model.hpp"

namespace layoutvqa {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const std::filesystem::path& path, const Model& model);
Model load_checkpoint(const std::filesystem::path& path);

}  // namespace layoutvqa
