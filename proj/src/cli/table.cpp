#include "nfkit/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace nfkit::cli {

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    if (value == 0.0)
        return "0"; // folds -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

double round12(double value)
{
    if (!std::isfinite(value))
        return value;
    return std::strtod(format_number(value).c_str(), nullptr);
}

namespace {

struct CellWriter {
    std::ostream& os;
    void operator()(const Empty&) const {}
    void operator()(double v) const { os << format_number(v); }
    void operator()(long long v) const { os << v; }
    void operator()(const std::string& v) const { os << v; }
};

} // namespace

void write_csv(std::ostream& os, const Table& table)
{
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << (i ? "," : "") << table.columns[i];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                os << ',';
            std::visit(CellWriter{os}, row[i]);
        }
        os << '\n';
    }
}

} // namespace nfkit::cli
