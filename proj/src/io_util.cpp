#include "mtnn/io_util.hpp"

#include <cstdio>
#include <cstdlib>

#include "mtnn/errors.hpp"

namespace mtnn {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& token, const std::string& path, int lineno) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
    if (end == begin || (end && *end != '\0')) {
        throw ParseError(path + ":" + std::to_string(lineno) + ": bad number '" + token + "'");
    }
    return v;
}

}  // namespace mtnn
