#include "gcpc/diagnostics.hpp"

#include <iostream>

namespace gcpc {

namespace {
LogHandler& handler() {
    static LogHandler h = [](const std::string& msg) { std::clog << msg << '\n'; };
    return h;
}
}  // namespace

void set_log_handler(LogHandler h) { handler() = std::move(h); }

void log_diagnostic(const std::string& message) {
    if (handler()) handler()(message);
}

}  // namespace gcpc
