#include "molsec/csv.hpp"

#include <charconv>
#include <fstream>
#include <ostream>

#include "molsec/errors.hpp"

namespace molsec::csv {

Table::Table(std::vector<std::string> header) : header_(std::move(header)) {}

void Table::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size())
        throw LengthMismatchError("csv: row has " + std::to_string(row.size()) + " cells, header has " +
                                  std::to_string(header_.size()));
    rows_.push_back(std::move(row));
}

namespace {

void write_line(std::ostream& out, const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i != 0)
            out << ',';
        out << cells[i];
    }
    out << '\n';
}

} // namespace

void Table::write(std::ostream& out) const {
    write_line(out, header_);
    for (const auto& row : rows_)
        write_line(out, row);
}

std::string format(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string format(std::uint64_t value) {
    return std::to_string(value);
}

void write_csv(const Table& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path, "cannot open for writing");
    table.write(out);
    out.flush();
    if (!out)
        throw IoError(path, "write failed");
}

} // namespace molsec::csv
