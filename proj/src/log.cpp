#include "bvpp/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace bvpp {

LogLevel log_threshold() {
    static const LogLevel cached = [] {
        const char* env = std::getenv("BVPP_SIM_LOG");
        if (env == nullptr) return LogLevel::Warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::Error;
        if (std::strcmp(env, "warn") == 0) return LogLevel::Warn;
        if (std::strcmp(env, "info") == 0) return LogLevel::Info;
        if (std::strcmp(env, "debug") == 0) return LogLevel::Debug;
        return LogLevel::Warn;
    }();
    return cached;
}

void log_message(LogLevel level, const std::string& msg) {
    if (level > log_threshold()) return;
    const char* tag = "warn";
    switch (level) {
        case LogLevel::Error: tag = "error"; break;
        case LogLevel::Warn: tag = "warn"; break;
        case LogLevel::Info: tag = "info"; break;
        case LogLevel::Debug: tag = "debug"; break;
    }
    std::fprintf(stderr, "[%s] %s\n", tag, msg.c_str());
}

}  // namespace bvpp
