// Copyright 2026 The summpipe authors
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

#ifndef SUMMPIPE_ERRORS_HPP
#define SUMMPIPE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace summpipe {

// Exit-code families used by the CLI: usage = 1, data = 2, adapter = 3.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& msg) : std::runtime_error(msg) {}
};

class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

class AdapterError : public std::runtime_error {
 public:
  explicit AdapterError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace summpipe

#endif  // SUMMPIPE_ERRORS_HPP
