#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace polybern::cli {

/// Runs the command line `args` (without the program name). Tables and
/// reports go to `out` unless --out names a file; error records go to `err`.
/// Returns the process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a.
std::uint64_t fnv1a(std::string_view text) noexcept;

/// printf("%.16e"), with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double v);

const char* version() noexcept;

}  // namespace polybern::cli
