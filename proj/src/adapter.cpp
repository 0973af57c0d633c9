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

#include "summpipe/adapter.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <chrono>
#include <cstring>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace summpipe {

namespace {

using nlohmann::json;

// A dying adapter must surface as an AdapterError from the write path, not
// kill the whole process with SIGPIPE.
void ignore_sigpipe() {
  static std::once_flag flag;
  std::call_once(flag, [] { ::signal(SIGPIPE, SIG_IGN); });
}

void set_cloexec(int fd) { ::fcntl(fd, F_SETFD, FD_CLOEXEC); }

std::vector<std::string> split_command(const std::string& command) {
  std::vector<std::string> argv;
  std::istringstream in(command);
  std::string word;
  while (in >> word) argv.push_back(word);
  return argv;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

AdapterProcess::AdapterProcess(std::string name, std::vector<std::string> argv,
                               int timeout_ms)
    : name_(std::move(name)), timeout_ms_(timeout_ms) {
  if (argv.empty()) throw AdapterError("adapter '" + name_ + "': empty command");
  ignore_sigpipe();
  spawn(argv);
  // Handshake: the adapter announces readiness before the first request.
  std::string line = read_line(timeout_ms_);
  json ready = json::parse(line, nullptr, false);
  if (ready.is_discarded() || !ready.is_object() ||
      ready.value("ready", false) != true) {
    broken_ = true;
    throw AdapterError("adapter '" + name_ + "': bad ready line: " + line);
  }
}

AdapterProcess::~AdapterProcess() {
  if (child_stdin_ >= 0) ::close(child_stdin_);
  if (child_stdout_ >= 0) ::close(child_stdout_);
  if (pid_ > 0) {
    // Closing stdin asks the adapter to exit; give it a moment before
    // escalating so a hung process cannot wedge the destructor.
    const auto pid = static_cast<pid_t>(pid_);
    int status = 0;
    for (int i = 0; i < 50; ++i) {
      if (::waitpid(pid, &status, WNOHANG) != 0) return;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ::kill(pid, SIGKILL);
    ::waitpid(pid, &status, 0);
  }
}

void AdapterProcess::spawn(const std::vector<std::string>& argv) {
  int to_child[2];
  int from_child[2];
  if (::pipe(to_child) != 0 || ::pipe(from_child) != 0) {
    throw AdapterError("adapter '" + name_ + "': pipe: " + std::strerror(errno));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    throw AdapterError("adapter '" + name_ + "': fork: " + std::strerror(errno));
  }
  if (pid == 0) {
    ::dup2(to_child[0], STDIN_FILENO);
    ::dup2(from_child[1], STDOUT_FILENO);
    ::close(to_child[0]);
    ::close(to_child[1]);
    ::close(from_child[0]);
    ::close(from_child[1]);
    std::vector<char*> cargv;
    cargv.reserve(argv.size() + 1);
    for (const std::string& arg : argv) {
      cargv.push_back(const_cast<char*>(arg.c_str()));
    }
    cargv.push_back(nullptr);
    ::execvp(cargv[0], cargv.data());
    ::_exit(127);
  }
  ::close(to_child[0]);
  ::close(from_child[1]);
  child_stdin_ = to_child[1];
  child_stdout_ = from_child[0];
  set_cloexec(child_stdin_);
  set_cloexec(child_stdout_);
  pid_ = pid;
}

void AdapterProcess::fail_exited(const std::string& context) {
  broken_ = true;
  int status = 0;
  std::string detail = "exited";
  if (pid_ > 0 && ::waitpid(static_cast<pid_t>(pid_), &status, WNOHANG) > 0) {
    pid_ = -1;
    if (WIFEXITED(status)) {
      detail = "exited with status " + std::to_string(WEXITSTATUS(status));
    } else if (WIFSIGNALED(status)) {
      detail = "killed by signal " + std::to_string(WTERMSIG(status));
    }
  }
  throw AdapterError("adapter '" + name_ + "' " + detail + " during " + context);
}

std::string AdapterProcess::read_line(int timeout_ms) {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    auto newline = buffer_.find('\n');
    if (newline != std::string::npos) {
      std::string line = buffer_.substr(0, newline);
      buffer_.erase(0, newline + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    const auto remaining = std::chrono::duration_cast<std::chrono::milliseconds>(
        deadline - std::chrono::steady_clock::now());
    if (remaining.count() <= 0) {
      broken_ = true;
      throw AdapterError("adapter '" + name_ + "': timeout after " +
                         std::to_string(timeout_ms) + " ms");
    }
    struct pollfd pfd {
      child_stdout_, POLLIN, 0
    };
    const int rc = ::poll(&pfd, 1, static_cast<int>(remaining.count()));
    if (rc < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw AdapterError("adapter '" + name_ + "': poll: " + std::strerror(errno));
    }
    if (rc == 0) continue;  // deadline re-checked above
    char chunk[4096];
    const ssize_t n = ::read(child_stdout_, chunk, sizeof(chunk));
    if (n < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw AdapterError("adapter '" + name_ + "': read: " + std::strerror(errno));
    }
    if (n == 0) fail_exited("read");
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void AdapterProcess::write_line(const std::string& line) {
  std::string out = line;
  out += '\n';
  std::size_t written = 0;
  while (written < out.size()) {
    const ssize_t n =
        ::write(child_stdin_, out.data() + written, out.size() - written);
    if (n < 0) {
      if (errno == EINTR) continue;
      if (errno == EPIPE) fail_exited("write");
      broken_ = true;
      throw AdapterError("adapter '" + name_ + "': write: " + std::strerror(errno));
    }
    written += static_cast<std::size_t>(n);
  }
}

std::string AdapterProcess::summarize(const std::string& source,
                                      const std::optional<std::string>& query) {
  if (broken_) {
    throw AdapterError("adapter '" + name_ + "': channel is broken");
  }
  const std::uint64_t id = next_id_++;
  json request = {{"id", id}, {"source", source}};
  request["query"] = query ? json(*query) : json(nullptr);
  write_line(request.dump());

  const std::string line = read_line(timeout_ms_);
  json response = json::parse(line, nullptr, false);
  if (response.is_discarded() || !response.is_object() ||
      !response.contains("id") || !response["id"].is_number_unsigned()) {
    broken_ = true;
    throw AdapterError("adapter '" + name_ + "': malformed response: " + line);
  }
  if (response["id"].get<std::uint64_t>() != id) {
    broken_ = true;
    throw AdapterError("adapter '" + name_ + "': response id " +
                       response["id"].dump() + " does not match request id " +
                       std::to_string(id));
  }
  if (response.contains("error")) {
    throw AdapterError("adapter '" + name_ +
                       "' error: " + response["error"].dump());
  }
  if (!response.contains("summary") || !response["summary"].is_string()) {
    broken_ = true;
    throw AdapterError("adapter '" + name_ + "': response has no summary: " + line);
  }
  return response["summary"].get<std::string>();
}

AdapterConfig load_adapter_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open adapter config: " + path);
  AdapterConfig config;
  std::string line;
  std::string section;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';') continue;
    if (text.front() == '[' && text.back() == ']') {
      section = text.substr(1, text.size() - 2);
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected `key = value`");
    }
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty() || value.empty()) {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": expected `key = value`");
    }
    if (section == "adapters") {
      auto argv = split_command(value);
      if (argv.empty()) {
        throw DataError(path + ":" + std::to_string(lineno) + ": empty command");
      }
      config.adapters[key] = std::move(argv);
    } else if (section == "settings") {
      if (key == "timeout_seconds") {
        try {
          const double seconds = std::stod(value);
          if (seconds <= 0) throw std::invalid_argument("nonpositive");
          config.timeout_ms = static_cast<int>(seconds * 1000.0);
        } catch (const std::exception&) {
          throw DataError(path + ":" + std::to_string(lineno) +
                          ": timeout_seconds must be a positive number");
        }
      } else {
        throw DataError(path + ":" + std::to_string(lineno) +
                        ": unknown setting '" + key + "'");
      }
    } else {
      throw DataError(path + ":" + std::to_string(lineno) +
                      ": unknown section '" + section + "'");
    }
  }
  return config;
}

bool AdapterManager::has(const std::string& name) const {
  return config_.adapters.count(name) > 0;
}

std::vector<std::string> AdapterManager::names() const {
  std::vector<std::string> out;
  for (const auto& [name, argv] : config_.adapters) out.push_back(name);
  return out;
}

AdapterManager::Channel& AdapterManager::channel(const std::string& name) {
  std::lock_guard<std::mutex> lock(channels_mutex_);
  auto& slot = channels_[name];
  if (!slot) slot = std::make_unique<Channel>();
  return *slot;
}

bool AdapterManager::health_check(const std::string& name, std::string* error) {
  if (!has(name)) {
    if (error != nullptr) *error = "adapter '" + name + "' is not configured";
    return false;
  }
  try {
    Channel& ch = channel(name);
    std::lock_guard<std::mutex> lock(ch.mutex);
    if (!ch.process) {
      ch.process = std::make_unique<AdapterProcess>(
          name, config_.adapters.at(name), config_.timeout_ms);
    }
    return true;
  } catch (const AdapterError& e) {
    if (error != nullptr) *error = e.what();
    return false;
  }
}

std::string AdapterManager::summarize(const std::string& name,
                                      const std::string& source,
                                      const std::optional<std::string>& query) {
  if (!has(name)) {
    throw AdapterError("adapter '" + name + "' is not configured");
  }
  Channel& ch = channel(name);
  std::lock_guard<std::mutex> lock(ch.mutex);
  if (!ch.process) {
    ch.process = std::make_unique<AdapterProcess>(name, config_.adapters.at(name),
                                                  config_.timeout_ms);
  }
  try {
    return ch.process->summarize(source, query);
  } catch (const AdapterError&) {
    // A dead channel is discarded so the next request starts a fresh
    // process instead of hitting a closed pipe.
    if (ch.process->broken()) ch.process.reset();
    throw;
  }
}

}  // namespace summpipe
