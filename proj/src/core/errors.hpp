#pragma once

#include <stdexcept>
#include <string>

namespace monodens {

// Error categories shared by the C++ core and the C API (which maps them
// 1:1 onto md_status codes).
enum class errc {
    invalid_argument = 1,
    domain_error     = 2,
    shape_violation  = 3,
    bound_violation  = 4,
    invalid_interval = 5,
    degenerate_scale = 6,
    config_error     = 7,
    io_error         = 8,
    runtime_error    = 9,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool cond, errc code, const std::string& what) {
    if (!cond) fail(code, what);
}

} // namespace monodens
