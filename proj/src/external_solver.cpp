#include <fcntl.h>
#include <poll.h>
#include <signal.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <charconv>
#include <cstring>
#include <regex>

#include <fmt/format.h>

#include "trisat/bench.hpp"

namespace trisat {

namespace {

std::atomic<std::uint64_t> file_counter{0};

std::string shell_quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += '\'';
  return out;
}

std::string expand_template(const std::string& tmpl, const std::string& path) {
  std::string out;
  std::size_t pos = 0;
  for (;;) {
    std::size_t hit = tmpl.find("{cnf}", pos);
    if (hit == std::string::npos) break;
    out.append(tmpl, pos, hit - pos);
    out += shell_quote(path);
    pos = hit + 5;
  }
  out.append(tmpl, pos);
  return out;
}

struct ProcessOutcome {
  std::string output;
  int exit_code = -1;
  bool timed_out = false;
};

ProcessOutcome run_shell(const std::string& command,
                         std::optional<std::chrono::milliseconds> timeout) {
  int fds[2];
  if (pipe2(fds, O_CLOEXEC) != 0) {
    throw ExternalSolverError(ExternalSolverError::Kind::launch_failure,
                              fmt::format("pipe: {}", std::strerror(errno)));
  }
  pid_t pid = fork();
  if (pid < 0) {
    close(fds[0]);
    close(fds[1]);
    throw ExternalSolverError(ExternalSolverError::Kind::launch_failure,
                              fmt::format("fork: {}", std::strerror(errno)));
  }
  if (pid == 0) {
    setpgid(0, 0);
    dup2(fds[1], STDOUT_FILENO);
    dup2(fds[1], STDERR_FILENO);
    close(fds[0]);
    close(fds[1]);
    execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  setpgid(pid, pid);
  close(fds[1]);

  ProcessOutcome outcome;
  const auto deadline = timeout ? std::chrono::steady_clock::now() + *timeout
                                : std::chrono::steady_clock::time_point::max();
  char buffer[4096];
  for (;;) {
    int wait_ms = -1;
    if (timeout) {
      auto left = std::chrono::duration_cast<std::chrono::milliseconds>(
          deadline - std::chrono::steady_clock::now());
      if (left.count() <= 0) {
        outcome.timed_out = true;
        break;
      }
      wait_ms = static_cast<int>(std::min<long long>(left.count(), 1000));
    }
    pollfd pfd{fds[0], POLLIN, 0};
    int ready = poll(&pfd, 1, wait_ms);
    if (ready < 0) {
      if (errno == EINTR) continue;
      break;
    }
    if (ready == 0) continue;
    ssize_t got = read(fds[0], buffer, sizeof buffer);
    if (got < 0 && errno == EINTR) continue;
    if (got <= 0) break;
    outcome.output.append(buffer, static_cast<std::size_t>(got));
  }
  if (outcome.timed_out) kill(-pid, SIGKILL);
  close(fds[0]);

  int status = 0;
  while (waitpid(pid, &status, 0) < 0 && errno == EINTR) {
  }
  if (WIFEXITED(status)) outcome.exit_code = WEXITSTATUS(status);
  return outcome;
}

std::optional<SolveStatus> status_line(const std::string& output) {
  std::size_t pos = 0;
  while (pos < output.size()) {
    std::size_t eol = output.find('\n', pos);
    if (eol == std::string::npos) eol = output.size();
    std::string_view line(output.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line == "s SATISFIABLE") return SolveStatus::sat;
    if (line == "s UNSATISFIABLE") return SolveStatus::unsat;
    pos = eol + 1;
  }
  return std::nullopt;
}

}  // namespace

ExternalRunResult external_solver_run(const Instance& instance, const ExternalSolver& solver,
                                      const SolveLimits& limits) {
  if (solver.command_template.find("{cnf}") == std::string::npos) {
    throw ExternalSolverError(ExternalSolverError::Kind::launch_failure,
                              "solver command has no {cnf} placeholder");
  }
  std::regex decision_pattern;
  try {
    decision_pattern = std::regex(solver.decision_regex);
  } catch (const std::regex_error& e) {
    throw ExternalSolverError(ExternalSolverError::Kind::launch_failure,
                              fmt::format("bad decision regex: {}", e.what()));
  }

  std::filesystem::path dir =
      solver.temp_dir.empty() ? std::filesystem::temp_directory_path() : solver.temp_dir;
  std::filesystem::path file =
      dir / fmt::format("trisat-{}-{}.cnf", static_cast<long>(getpid()), file_counter++);
  try {
    write_file(file, write_dimacs(instance));
  } catch (const std::exception& e) {
    throw ExternalSolverError(ExternalSolverError::Kind::launch_failure, e.what());
  }

  ProcessOutcome outcome;
  try {
    outcome = run_shell(expand_template(solver.command_template, file.string()),
                        limits.max_wall_time);
  } catch (...) {
    std::filesystem::remove(file);
    throw;
  }

  ExternalRunResult result;
  result.exit_code = outcome.exit_code;
  if (outcome.timed_out) {
    std::filesystem::remove(file);
    result.status = SolveStatus::limit_exceeded;
    return result;
  }
  // sh reports 126/127 when the command cannot be executed or found.
  if (outcome.exit_code == 126 || outcome.exit_code == 127) {
    std::filesystem::remove(file);
    throw ExternalSolverError(
        ExternalSolverError::Kind::launch_failure,
        fmt::format("cannot launch '{}' (exit {})", solver.command_template, outcome.exit_code));
  }

  if (outcome.exit_code == 10) {
    result.status = SolveStatus::sat;
  } else if (outcome.exit_code == 20) {
    result.status = SolveStatus::unsat;
  } else if (auto s = status_line(outcome.output)) {
    result.status = *s;
  } else {
    throw ExternalSolverError(
        ExternalSolverError::Kind::unknown_status,
        fmt::format("solver exited with {} and printed no status line; instance kept at {}",
                    outcome.exit_code, file.string()));
  }

  std::smatch match;
  if (std::regex_search(outcome.output, match, decision_pattern) && match.size() > 1) {
    std::uint64_t value = 0;
    const std::string text = match[1].str();
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec == std::errc() && ptr == text.data() + text.size()) result.decisions = value;
  }

  if (result.decisions) {
    std::filesystem::remove(file);
  } else {
    result.kept_file = file;
  }
  return result;
}

}  // namespace trisat
