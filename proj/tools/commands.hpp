#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "noon/io.hpp"

namespace noon::cli {

/// Comma-separated reals. Each item is a number, a fraction "a/b", or an
/// inclusive range "start:stop:count".
std::vector<double> parse_real_list(std::string_view spec);

/// Comma-separated integers; "a:b" is the inclusive range a..b.
std::vector<int> parse_int_list(std::string_view spec);

struct Output {
  std::string command;
  io::Json parameters = io::Json::object();
  io::Json metadata = io::Json::object();
  std::vector<io::Table> tables;
  /// Extra top-level members of the JSON document.
  io::Json extra = io::Json::object();
  /// Human-readable summary lines, written to stderr.
  std::vector<std::string> messages;
};

/// Full command line in, exit code out: 0 success, 2 invalid input,
/// 3 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace noon::cli
