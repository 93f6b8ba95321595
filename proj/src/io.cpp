#include "mobkit/io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "mobkit/error.hpp"

namespace mobkit {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(errc::io_error, "cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(errc::io_error, "read failed: " + path);
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(errc::io_error, "cannot open for writing: " + path);
  out.write(content.data(), std::streamsize(content.size()));
  if (!out) throw Error(errc::io_error, "write failed: " + path);
}

bool file_exists(const std::string& path) {
  std::error_code ec;
  return std::filesystem::exists(path, ec);
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw Error(errc::io_error, "cannot create directory: " + path);
}

}  // namespace mobkit
