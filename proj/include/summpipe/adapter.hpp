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

#ifndef SUMMPIPE_ADAPTER_HPP
#define SUMMPIPE_ADAPTER_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "summpipe/errors.hpp"

namespace summpipe {

/// One external summarizer process speaking the line-delimited JSON
/// protocol on stdin/stdout:
///   startup   <- {"ready": true}
///   request   -> {"id": n, "source": "...", "query": "..."|null}
///   response  <- {"id": n, "summary": "..."} or {"id": n, "error": "..."}
/// The channel is strictly serial; wrap calls in a mutex (the manager does)
/// before sharing one across workers.
class AdapterProcess {
 public:
  /// Spawns argv[0] with the given arguments and waits for the ready line.
  AdapterProcess(std::string name, std::vector<std::string> argv,
                 int timeout_ms);
  ~AdapterProcess();

  AdapterProcess(const AdapterProcess&) = delete;
  AdapterProcess& operator=(const AdapterProcess&) = delete;

  /// One request/response round trip. Throws AdapterError on timeout, id
  /// mismatch, malformed responses, adapter-reported errors, or exit.
  std::string summarize(const std::string& source,
                        const std::optional<std::string>& query);

  const std::string& name() const { return name_; }

  /// True once the channel is unusable (timeout, exit, malformed traffic).
  /// Adapter-reported {"error": ...} responses leave the channel healthy.
  bool broken() const { return broken_; }

 private:
  void spawn(const std::vector<std::string>& argv);
  std::string read_line(int timeout_ms);
  void write_line(const std::string& line);
  [[noreturn]] void fail_exited(const std::string& context);

  std::string name_;
  int timeout_ms_;
  int child_stdin_ = -1;
  int child_stdout_ = -1;
  long pid_ = -1;
  std::uint64_t next_id_ = 1;
  std::string buffer_;
  bool broken_ = false;
};

/// Parsed registry config: adapter name -> command line, plus settings.
struct AdapterConfig {
  std::map<std::string, std::vector<std::string>> adapters;
  int timeout_ms = 120'000;
};

/// INI-style file with an [adapters] section of `name = command args...`
/// lines and an optional [settings] section with `timeout_seconds`.
AdapterConfig load_adapter_config(const std::string& path);

/// Owns one serial channel per configured adapter, created on first use.
/// Requests from concurrent workers are queued on a per-adapter mutex, so
/// two requests never interleave on one channel.
class AdapterManager {
 public:
  AdapterManager() = default;
  explicit AdapterManager(AdapterConfig config) : config_(std::move(config)) {}

  bool has(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Spawn + handshake, then keep the channel. Returns false (with the
  /// failure message) instead of throwing, so pool assembly can skip
  /// unhealthy adapters.
  bool health_check(const std::string& name, std::string* error);

  std::string summarize(const std::string& name, const std::string& source,
                        const std::optional<std::string>& query);

 private:
  struct Channel {
    std::unique_ptr<AdapterProcess> process;
    std::mutex mutex;
  };
  Channel& channel(const std::string& name);

  AdapterConfig config_;
  std::map<std::string, std::unique_ptr<Channel>> channels_;
  std::mutex channels_mutex_;
};

}  // namespace summpipe

#endif  // SUMMPIPE_ADAPTER_HPP
