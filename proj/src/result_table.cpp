#include "cavity/result_table.hpp"

#include "cavity/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

namespace cavity::cli {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return {buf.data(), res.ptr};
}

void ResultTable::add_column(std::string name, std::string unit) {
    if (!rows_.empty()) throw InvalidArgument("columns must be declared before rows");
    if (unit.empty()) throw InvalidArgument("column " + name + " declares no unit");
    columns_.push_back({std::move(name), std::move(unit)});
}

void ResultTable::add_row(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw InvalidArgument("row width differs from column count");
    rows_.push_back(std::move(row));
}

std::size_t ResultTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i)
        if (columns_[i].name == name) return i;
    throw InvalidArgument("no column named " + name);
}

double ResultTable::number(std::size_t row, const std::string& column) const {
    const Cell& c = rows_.at(row).at(column_index(column));
    if (const auto* d = std::get_if<double>(&c)) return *d;
    if (const auto* i = std::get_if<long long>(&c)) return static_cast<double>(*i);
    return std::nan("");
}

namespace {

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

struct CsvCell {
    std::string operator()(std::monostate) const { return {}; }
    std::string operator()(double d) const { return std::isfinite(d) ? format_number(d) : std::string{}; }
    std::string operator()(long long i) const { return std::to_string(i); }
    std::string operator()(const std::string& s) const { return csv_escape(s); }
};

struct JsonCell {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(double d) const {
        if (!std::isfinite(d)) return nullptr;
        return d;
    }
    nlohmann::ordered_json operator()(long long i) const { return i; }
    nlohmann::ordered_json operator()(const std::string& s) const { return s; }
};

}  // namespace

std::string ResultTable::to_csv() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i].name);
    os << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_escape(columns_[i].unit);
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << std::visit(CsvCell{}, row[i]);
        os << '\n';
    }
    return os.str();
}

std::string ResultTable::to_json() const {
    nlohmann::ordered_json j;
    j["metadata"] = metadata;
    auto cols = nlohmann::ordered_json::array();
    for (const auto& c : columns_) cols.push_back({{"name", c.name}, {"unit", c.unit}});
    j["columns"] = cols;
    auto rows = nlohmann::ordered_json::array();
    for (const auto& row : rows_) {
        auto r = nlohmann::ordered_json::array();
        for (const auto& cell : row) r.push_back(std::visit(JsonCell{}, cell));
        rows.push_back(r);
    }
    j["rows"] = rows;
    return j.dump(2) + "\n";
}

std::string ResultTable::metadata_json() const { return metadata.dump(2) + "\n"; }

}  // namespace cavity::cli
