#pragma once

#include <functional>
#include <string>

namespace ewn {

using WarningSink = std::function<void(const std::string&)>;

/// Replaces the warning sink and returns the previous one. The default
/// writes "warning: <message>" lines to stderr.
WarningSink set_warning_sink(WarningSink sink);
void warn(const std::string& message);

}  // namespace ewn
