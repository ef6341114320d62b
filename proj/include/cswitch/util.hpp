#pragma once

#include <functional>
#include <string>
#include <string_view>

namespace cswitch {

/// Shortest decimal text that reads back to exactly `x`.
std::string format_double(double x);

using WarningSink = std::function<void(std::string_view)>;

/// Library warnings go to std::clog unless a sink is installed. Passing an
/// empty function restores the default. Returns the previous sink.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

/// Writes `contents` to `path` through a temporary sibling file and a rename,
/// so a failed write never leaves a partial file behind.
void write_file_atomically(const std::string& path, std::string_view contents);

}  // namespace cswitch
