#pragma once

#include <stdexcept>
#include <string>

#include "trapspec/trapspec.h"

namespace tsc {

enum class Exit : int { ok = 0, config = 2, numeric = 3, usage = 64 };

struct CliError : std::runtime_error {
    CliError(Exit code, const std::string& what) : std::runtime_error(what), code(code) {}
    Exit code;
};

inline Exit exit_for(ts_status s) {
    switch (s) {
        case TS_OK: return Exit::ok;
        case TS_CONFIG_ERROR:
        case TS_IO_ERROR:
        case TS_INVALID_ARGUMENT: return Exit::config;
        default: return Exit::numeric;
    }
}

// Throws CliError for a failed library call.
inline void check(ts_status s, const std::string& context = {}) {
    if (s == TS_OK) return;
    std::string msg = ts_last_error();
    if (msg.empty()) msg = ts_status_name(s);
    throw CliError(exit_for(s), context.empty() ? msg : context + ": " + msg);
}

}  // namespace tsc
