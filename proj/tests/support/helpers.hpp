#pragma once

#include <atomic>
#include <filesystem>
#include <optional>
#include <string>
#include <unistd.h>

#include "pex/error.hpp"
#include "pex/grid.hpp"

namespace pex::testing {

// Code of the pex::Error thrown by `f`, or nullopt when nothing is thrown.
template <typename F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("pex_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

// Grid from rows of '.', '#', '?' (free, obstacle, uncertain).
inline TrinaryGrid grid_from(std::initializer_list<std::string> rows,
                             double resolution = kDefaultResolution) {
  const int h = static_cast<int>(rows.size());
  const int w = static_cast<int>(rows.begin()->size());
  TrinaryGrid g(w, h, CellClass::kUncertain, resolution);
  int r = 0;
  for (const auto& row : rows) {
    for (int c = 0; c < w; ++c) {
      const char ch = row[static_cast<std::size_t>(c)];
      g[Cell{c, r}] = ch == '.' ? CellClass::kFree
                                : (ch == '#' ? CellClass::kObstacle : CellClass::kUncertain);
    }
    ++r;
  }
  return g;
}

}  // namespace pex::testing

#ifdef DOCTEST_LIBRARY_INCLUDED
namespace doctest {
template <>
struct StringMaker<std::optional<pex::ErrorCode>> {
  static String convert(const std::optional<pex::ErrorCode>& c) {
    return c ? String(std::string(pex::to_string(*c)).c_str()) : String("no error");
  }
};
template <>
struct StringMaker<pex::ErrorCode> {
  static String convert(pex::ErrorCode c) { return String(std::string(pex::to_string(c)).c_str()); }
};
}  // namespace doctest
#endif
