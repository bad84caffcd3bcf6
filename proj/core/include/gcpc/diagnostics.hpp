#pragma once

#include <functional>
#include <string>

namespace gcpc {

/// Sink for library diagnostics (fallbacks taken, classifier disagreements).
/// Defaults to writing on std::clog. Not thread-safe to swap mid-run.
using LogHandler = std::function<void(const std::string&)>;

void set_log_handler(LogHandler handler);
void log_diagnostic(const std::string& message);

}  // namespace gcpc
