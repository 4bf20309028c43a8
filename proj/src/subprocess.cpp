// Copyright 2026 The erkit Authors. All Rights Reserved.
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

#include "erkit/subprocess.hpp"

#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>

#include "erkit/errors.hpp"

extern char** environ;

namespace erkit {

namespace {

void set_cloexec(int fd) { ::fcntl(fd, F_SETFD, FD_CLOEXEC); }

bool is_executable_file(const std::string& path) {
  struct stat st {};
  return ::stat(path.c_str(), &st) == 0 && S_ISREG(st.st_mode) &&
         ::access(path.c_str(), X_OK) == 0;
}

}  // namespace

std::optional<std::string> find_executable(const std::string& name) {
  if (name.empty()) return std::nullopt;
  if (name.find('/') != std::string::npos) {
    if (is_executable_file(name)) return name;
    return std::nullopt;
  }
  const char* path_env = ::getenv("PATH");
  if (!path_env) return std::nullopt;
  std::string path(path_env);
  std::size_t start = 0;
  while (start <= path.size()) {
    std::size_t end = path.find(':', start);
    if (end == std::string::npos) end = path.size();
    std::string dir = path.substr(start, end - start);
    if (!dir.empty()) {
      std::string candidate = dir + "/" + name;
      if (is_executable_file(candidate)) return candidate;
    }
    start = end + 1;
  }
  return std::nullopt;
}

ProcessResult run_process(const std::vector<std::string>& argv, const std::string& stdin_data,
                          const std::map<std::string, std::string>& extra_env) {
  if (argv.empty()) throw Error(ErrorCode::IoError, "run_process: empty argv");

  // A child that exits before draining stdin must not kill us via SIGPIPE.
  static const bool sigpipe_ignored = [] {
    ::signal(SIGPIPE, SIG_IGN);
    return true;
  }();
  (void)sigpipe_ignored;

  int in_pipe[2], out_pipe[2], err_pipe[2];
  if (::pipe(in_pipe) != 0 || ::pipe(out_pipe) != 0 || ::pipe(err_pipe) != 0) {
    throw Error(ErrorCode::IoError, "run_process: pipe() failed");
  }

  std::vector<std::string> env_storage;
  for (char** e = environ; *e; ++e) {
    std::string entry(*e);
    std::size_t eq = entry.find('=');
    if (eq != std::string::npos && extra_env.count(entry.substr(0, eq))) continue;
    env_storage.push_back(std::move(entry));
  }
  for (const auto& [key, value] : extra_env) env_storage.push_back(key + "=" + value);

  std::vector<char*> c_argv, c_env;
  for (const std::string& a : argv) c_argv.push_back(const_cast<char*>(a.c_str()));
  c_argv.push_back(nullptr);
  for (const std::string& e : env_storage) c_env.push_back(const_cast<char*>(e.c_str()));
  c_env.push_back(nullptr);

  pid_t pid = ::fork();
  if (pid < 0) throw Error(ErrorCode::IoError, "run_process: fork() failed");
  if (pid == 0) {
    ::dup2(in_pipe[0], STDIN_FILENO);
    ::dup2(out_pipe[1], STDOUT_FILENO);
    ::dup2(err_pipe[1], STDERR_FILENO);
    for (int fd : {in_pipe[0], in_pipe[1], out_pipe[0], out_pipe[1], err_pipe[0], err_pipe[1]}) {
      ::close(fd);
    }
    ::execve(c_argv[0], c_argv.data(), c_env.data());
    ::_exit(127);
  }

  ::close(in_pipe[0]);
  ::close(out_pipe[1]);
  ::close(err_pipe[1]);
  set_cloexec(in_pipe[1]);
  set_cloexec(out_pipe[0]);
  set_cloexec(err_pipe[0]);

  ProcessResult result;
  std::size_t written = 0;
  bool stdin_open = true;
  if (stdin_data.empty()) {
    ::close(in_pipe[1]);
    stdin_open = false;
  }
  bool out_open = true, err_open = true;
  char buf[4096];
  while (stdin_open || out_open || err_open) {
    struct pollfd fds[3];
    nfds_t n = 0;
    int idx_in = -1, idx_out = -1, idx_err = -1;
    if (stdin_open) {
      idx_in = n;
      fds[n++] = {in_pipe[1], POLLOUT, 0};
    }
    if (out_open) {
      idx_out = n;
      fds[n++] = {out_pipe[0], POLLIN, 0};
    }
    if (err_open) {
      idx_err = n;
      fds[n++] = {err_pipe[0], POLLIN, 0};
    }
    if (::poll(fds, n, -1) < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (idx_in >= 0 && (fds[idx_in].revents & (POLLOUT | POLLERR | POLLHUP))) {
      ssize_t w = ::write(in_pipe[1], stdin_data.data() + written,
                          std::min<std::size_t>(stdin_data.size() - written, sizeof(buf)));
      if (w <= 0 || (written += static_cast<std::size_t>(w)) == stdin_data.size()) {
        ::close(in_pipe[1]);
        stdin_open = false;
      }
    }
    if (idx_out >= 0 && (fds[idx_out].revents & (POLLIN | POLLERR | POLLHUP))) {
      ssize_t r = ::read(out_pipe[0], buf, sizeof(buf));
      if (r <= 0) {
        ::close(out_pipe[0]);
        out_open = false;
      } else {
        result.out.append(buf, static_cast<std::size_t>(r));
      }
    }
    if (idx_err >= 0 && (fds[idx_err].revents & (POLLIN | POLLERR | POLLHUP))) {
      ssize_t r = ::read(err_pipe[0], buf, sizeof(buf));
      if (r <= 0) {
        ::close(err_pipe[0]);
        err_open = false;
      } else {
        result.err.append(buf, static_cast<std::size_t>(r));
      }
    }
  }

  int status = 0;
  while (::waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) {
    result.exit_code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    result.exit_code = 128 + WTERMSIG(status);
  }
  return result;
}

}  // namespace erkit
