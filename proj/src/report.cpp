#include "hopfavg/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace hopfavg {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

std::string format_precise(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void KeyValueWriter::write(std::string_view key, double value) {
    out_ << key << " = " << format_number(value) << '\n';
}

void KeyValueWriter::write(std::string_view key, std::string_view value) {
    out_ << key << " = " << value << '\n';
}

void KeyValueWriter::write(std::string_view key, bool value) {
    out_ << key << " = " << (value ? "true" : "false") << '\n';
}

void KeyValueWriter::write(std::string_view key, int value) { out_ << key << " = " << value << '\n'; }

void KeyValueWriter::write(std::string_view key, std::size_t value) {
    out_ << key << " = " << value << '\n';
}

}  // namespace hopfavg
