#pragma once

#include <stdexcept>
#include <string>

namespace memnet {

enum class errc {
    invalid_config,
    missing_timestamps,
    invalid_node,
    invalid_graph,
    invalid_series,
    invalid_activity,
    invalid_window,
    invalid_pattern,
    invalid_cluster,
    undefined_modularity,
    generation_failed,
    parse_error,
    unknown_node,
    write_error,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) { throw error(code, msg); }

} // namespace memnet
