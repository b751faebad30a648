#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

// Minimal comma-separated writer. Values are never quoted; every cell this
// project emits is numeric or a bare token.
namespace molsec::csv {

class Table {
public:
    explicit Table(std::vector<std::string> header);

    // Throws LengthMismatchError when the row width differs from the header.
    void add_row(std::vector<std::string> row);

    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }

    void write(std::ostream& out) const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Shortest representation that round-trips.
std::string format(double value);
std::string format(std::uint64_t value);

// Throws IoError carrying the path.
void write_csv(const Table& table, const std::filesystem::path& path);

} // namespace molsec::csv
