// SPDX-License-Identifier: Apache-2.0
//
// Helpers for tests that drive the CLI binary. The binary location comes
// from the DESWS_CLI environment variable (ctest sets it; set it by hand
// when running a test binary directly).
#pragma once

#include <sys/wait.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace testutil {

namespace fs = std::filesystem;

inline std::string shell_quote(const std::string& s) {
  std::string quoted = "'";
  for (char c : s) {
    if (c == '\'') {
      quoted += "'\\''";
    } else {
      quoted += c;
    }
  }
  quoted += "'";
  return quoted;
}

inline fs::path unique_temp_dir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  const fs::path dir = fs::temp_directory_path() /
                       ("desws_" + tag + "_" + std::to_string(::getpid()) + "_" +
                        std::to_string(counter.fetch_add(1)));
  fs::create_directories(dir);
  return dir;
}

inline std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

inline std::string cli_path() {
  const char* path = std::getenv("DESWS_CLI");
  if (path == nullptr || *path == '\0') {
    throw std::runtime_error(
        "DESWS_CLI is not set; point it at the desws binary (ctest does this "
        "automatically)");
  }
  return path;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

inline RunResult run_cli(const std::vector<std::string>& args) {
  const fs::path dir = unique_temp_dir("run");
  const fs::path out_path = dir / "stdout";
  const fs::path err_path = dir / "stderr";

  std::string cmd = shell_quote(cli_path());
  for (const std::string& arg : args) {
    cmd += ' ';
    cmd += shell_quote(arg);
  }
  cmd += " > " + shell_quote(out_path.string());
  cmd += " 2> " + shell_quote(err_path.string());

  const int status = std::system(cmd.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_path);
  result.err = slurp(err_path);
  fs::remove_all(dir);
  return result;
}

}  // namespace testutil
