#include "clilib/csv.hpp"

#include <fstream>
#include <stdexcept>

namespace fidmem::cli {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void CsvBuilder::row(const std::vector<Cell>& cells)
{
    std::string line;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            line += ',';
        if (std::holds_alternative<double>(cells[i]))
            line += format_double(std::get<double>(cells[i]));
        else if (std::holds_alternative<long long>(cells[i]))
            line += std::to_string(std::get<long long>(cells[i]));
        else
            line += std::get<std::string>(cells[i]);
    }
    rows_.push_back(std::move(line));
}

std::string CsvBuilder::str() const
{
    std::string out;
    for (const auto& c : comments_)
        out += "# " + c + "\n";
    std::string head;
    for (std::size_t i = 0; i < cols_.size(); ++i) {
        if (i)
            head += ',';
        head += cols_[i];
    }
    out += head + "\n";
    for (const auto& r : rows_)
        out += r + "\n";
    return out;
}

void CsvBuilder::write(const std::string& path) const
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << str();
}

} // namespace fidmem::cli
