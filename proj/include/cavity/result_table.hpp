#pragma once

#include <json.hpp>

#include <string>
#include <variant>
#include <vector>

namespace cavity::cli {

/// Shortest decimal string that round-trips to the same double.
std::string format_number(double value);

/**
 * Column-oriented result with a units row and a metadata block.
 *
 * CSV layout: header row, unit row, data rows; LF line endings. Missing values
 * are empty cells in CSV and null in JSON.
 */
class ResultTable {
public:
    using Cell = std::variant<std::monostate, double, long long, std::string>;

    struct Column {
        std::string name;
        std::string unit;  ///< "dimensionless" for ratios, "text" for labels
    };

    void add_column(std::string name, std::string unit);
    void add_row(std::vector<Cell> row);

    [[nodiscard]] const std::vector<Column>& columns() const { return columns_; }
    [[nodiscard]] const std::vector<std::vector<Cell>>& rows() const { return rows_; }
    [[nodiscard]] std::size_t column_index(const std::string& name) const;
    [[nodiscard]] double number(std::size_t row, const std::string& column) const;

    [[nodiscard]] std::string to_csv() const;
    [[nodiscard]] std::string to_json() const;
    [[nodiscard]] std::string metadata_json() const;

    nlohmann::ordered_json metadata = nlohmann::ordered_json::object();

private:
    std::vector<Column> columns_;
    std::vector<std::vector<Cell>> rows_;
};

}  // namespace cavity::cli
