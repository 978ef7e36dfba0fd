#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace nfkit::cli {

struct Empty {};
using Cell = std::variant<Empty, double, long long, std::string>;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<Cell>> rows;
};

// %.12g in the C locale; non-finite values print as nan / inf / -inf.
std::string format_number(double value);
// Value rounded to 12 significant digits (what the CSV shows).
double round12(double value);

// Header line then one line per row, '\n' endings, no quoting needed for our cells.
void write_csv(std::ostream& os, const Table& table);

} // namespace nfkit::cli
