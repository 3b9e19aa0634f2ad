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

// Minimal stderr logging. Verbosity comes from LAYOUTVQA_LOG
// (error, warn, info, debug; default warn).

#pragma once

#include <cstdlib>
#include <iostream>
#include <string_view>

namespace layoutvqa::log {

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

inline Level threshold() {
  static const Level level = [] {
    const char* v = std::getenv("LAYOUTVQA_LOG");
    if (!v) return Level::Warn;
    const std::string_view s(v);
    if (s == "error") return Level::Error;
    if (s == "info") return Level::Info;
    if (s == "debug") return Level::Debug;
    return Level::Warn;
  }();
  return level;
}

inline bool enabled(Level level) { return level <= threshold(); }

template <typename... Args>
void write(Level level, const Args&... args) {
  if (!enabled(level)) return;
  static constexpr std::string_view names[] = {"error", "warn", "info", "debug"};
  std::cerr << "[" << names[static_cast<int>(level)] << "] ";
  (std::cerr << ... << args) << '\n';
}

template <typename... Args>
void info(const Args&... args) {
  write(Level::Info, args...);
}

template <typename... Args>
void debug(const Args&... args) {
  write(Level::Debug, args...);
}

}  // namespace layoutvqa::log
