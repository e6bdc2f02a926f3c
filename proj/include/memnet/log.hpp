#pragma once

#include <cstdio>

namespace memnet::log {

enum class level { debug = 0, info = 1, warn = 2, error = 3 };

// Minimum level printed to stderr. Controlled by the MEMNET_LOG environment
// variable (debug|info|warn|error); defaults to warn.
level threshold();
void set_threshold(level lv);

void write(level lv, const char* fmt, ...) __attribute__((format(printf, 2, 3)));

#define MEMNET_LOG_DEBUG(...) ::memnet::log::write(::memnet::log::level::debug, __VA_ARGS__)
#define MEMNET_LOG_INFO(...) ::memnet::log::write(::memnet::log::level::info, __VA_ARGS__)
#define MEMNET_LOG_WARN(...) ::memnet::log::write(::memnet::log::level::warn, __VA_ARGS__)
#define MEMNET_LOG_ERROR(...) ::memnet::log::write(::memnet::log::level::error, __VA_ARGS__)

} // namespace memnet::log
