#include "rwrobust/types.hpp"

#include <cstdio>

namespace rwr {

Label Label::classification(std::string token) {
    return Label{std::move(token)};
}

Label Label::regression(double value) {
    return Label{format_exact(value), value};
}

bool is_valid_token(const std::string& token) noexcept {
    if (token.empty()) return false;
    for (char c : token) {
        if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f') return false;
    }
    return true;
}

std::string format_exact(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_report(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace rwr
