#include "memnet/log.hpp"

#include <atomic>
#include <cstdarg>
#include <cstdlib>
#include <cstring>

namespace memnet::log {

namespace {

level initial_threshold() {
    const char* env = std::getenv("MEMNET_LOG");
    if (env == nullptr) return level::warn;
    if (std::strcmp(env, "debug") == 0) return level::debug;
    if (std::strcmp(env, "info") == 0) return level::info;
    if (std::strcmp(env, "warn") == 0) return level::warn;
    if (std::strcmp(env, "error") == 0) return level::error;
    return level::warn;
}

std::atomic<int>& threshold_storage() {
    static std::atomic<int> value{static_cast<int>(initial_threshold())};
    return value;
}

const char* level_tag(level lv) {
    switch (lv) {
    case level::debug: return "debug";
    case level::info: return "info";
    case level::warn: return "warn";
    case level::error: return "error";
    }
    return "?";
}

} // namespace

level threshold() { return static_cast<level>(threshold_storage().load(std::memory_order_relaxed)); }

void set_threshold(level lv) { threshold_storage().store(static_cast<int>(lv), std::memory_order_relaxed); }

void write(level lv, const char* fmt, ...) {
    if (static_cast<int>(lv) < static_cast<int>(threshold())) return;
    std::fprintf(stderr, "[memnet %s] ", level_tag(lv));
    va_list args;
    va_start(args, fmt);
    std::vfprintf(stderr, fmt, args);
    va_end(args);
    std::fputc('\n', stderr);
}

} // namespace memnet::log
