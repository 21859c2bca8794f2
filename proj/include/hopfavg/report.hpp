#pragma once

#include <iosfwd>
#include <string>
#include <string_view>

namespace hopfavg {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

/// Fixed 17-significant-digit text, used for CSV data columns.
std::string format_precise(double value);

/// One `key = value` line per entry.
class KeyValueWriter {
public:
    explicit KeyValueWriter(std::ostream& out) : out_(out) {}

    void write(std::string_view key, double value);
    void write(std::string_view key, std::string_view value);
    void write(std::string_view key, const char* value) { write(key, std::string_view(value)); }
    void write(std::string_view key, bool value);
    void write(std::string_view key, int value);
    void write(std::string_view key, std::size_t value);

private:
    std::ostream& out_;
};

}  // namespace hopfavg
