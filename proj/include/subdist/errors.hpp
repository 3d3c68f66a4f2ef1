#pragma once

#include <stdexcept>
#include <string>

namespace subdist {

// Exit-code contract: 2 invalid input, 3 precondition violation,
// 4 internal invariant failure.

struct invalid_input_error : std::runtime_error {
    explicit invalid_input_error(const std::string& what) : std::runtime_error(what) {}
    static constexpr int exit_code = 2;
};

struct precondition_error : std::runtime_error {
    explicit precondition_error(const std::string& what) : std::runtime_error(what) {}
    static constexpr int exit_code = 3;
};

struct internal_error : std::runtime_error {
    explicit internal_error(const std::string& what) : std::runtime_error(what) {}
    static constexpr int exit_code = 4;
};

inline void require_input(bool cond, const std::string& what) {
    if (!cond) throw invalid_input_error(what);
}

inline void require_pre(bool cond, const std::string& what) {
    if (!cond) throw precondition_error(what);
}

inline void require_internal(bool cond, const std::string& what) {
    if (!cond) throw internal_error(what);
}

} // namespace subdist
