// Copyright 2026 The asterm Authors
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

#include <filesystem>
#include <string>

#include "asterm/lang.hpp"
#include "asterm/semantics.hpp"

namespace asterm::testing {

inline std::filesystem::path corpus(const std::string& name) {
  return std::filesystem::path(ASTERM_CORPUS_DIR) / (name + ".ppg");
}

inline std::shared_ptr<const Program> corpus_program(const std::string& name) {
  return load_program(corpus(name));
}

inline StateSpace corpus_space(const std::string& name, const Instance& inst = {}) {
  return build(corpus_program(name), inst);
}

}  // namespace asterm::testing
