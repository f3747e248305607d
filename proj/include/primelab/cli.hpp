#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace primelab::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitDomain = 2,
    kExitBudget = 3,
    kExitInternal = 4,
};

// Malformed command line or parameter text.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

using Cell = std::variant<std::int64_t, double, std::string>;

struct Table {
    std::vector<std::pair<std::string, std::string>> meta;
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// Doubles as %.17g, integers in decimal, strings verbatim.
std::string format_cell(const Cell& cell);

// '#'-prefixed "key: value" lines, a header row, then comma-separated rows.
std::string to_csv(const Table& table);
// {"meta": {...}, "rows": [{column: value, ...}, ...]}; non-finite doubles become null.
std::string to_json(const Table& table);
// Row values separated by single spaces, one row per line.
std::string to_plain(const Table& table);

// Decimal or scientific reals, powers "a^b" and fractions "p/q".
double parse_real(std::string_view text);
// As parse_real, but the value must be a non-negative integer below 2^63.
std::uint64_t parse_count(std::string_view text);
// Signed integer, same syntax.
std::int64_t parse_integer(std::string_view text);

// Full command line, argv[0] included. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace primelab::cli
