#pragma once

#include <cstdio>
#include <string>
#include <variant>
#include <vector>

namespace fidmem::cli {

// Deterministic CSV assembly: '#' header comments, then a column row, then
// data rows. Numbers are rendered with %.12g so identical inputs produce
// byte-identical files. Content is built in memory and written at the end,
// so a failed run leaves no partial file behind.
class CsvBuilder {
public:
    using Cell = std::variant<double, long long, std::string>;

    void comment(const std::string& line) { comments_.push_back(line); }
    void columns(const std::vector<std::string>& names) { cols_ = names; }
    void row(const std::vector<Cell>& cells);

    std::string str() const;
    void write(const std::string& path) const;

private:
    std::vector<std::string> comments_;
    std::vector<std::string> cols_;
    std::vector<std::string> rows_;
};

std::string format_double(double v);

} // namespace fidmem::cli
