#pragma once

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ibrw/cli.hpp"

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = ibrw::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const char* env = std::getenv("IBRW_TEST_TMP");
  const auto root = env ? std::filesystem::path(env)
                        : std::filesystem::temp_directory_path() / "ibrw_tests";
  const auto dir = root / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::string put(const std::filesystem::path& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
  return path.string();
}
