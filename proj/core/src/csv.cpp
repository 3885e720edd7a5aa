#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "enetfp/errors.hpp"
#include "enetfp/io.hpp"

namespace enetfp {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        cells.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

double parse_number(const std::string& cell, const std::string& origin, std::size_t line) {
    double value = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    if (!cell.empty() && *begin == '+') ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (cell.empty() || ec != std::errc() || ptr != end) {
        throw DataError(origin + ":" + std::to_string(line) + ": not a number: '" + cell + "'");
    }
    return value;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

}  // namespace

CsvTable parse_csv(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    CsvTable table;
    std::vector<std::vector<double>> rows;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        auto cells = split(line);
        if (table.header.empty()) {
            table.header = std::move(cells);
            continue;
        }
        if (cells.size() != table.header.size()) {
            throw DataError(origin + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(table.header.size()) + " columns, found " + std::to_string(cells.size()));
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_number(c, origin, line_no));
        rows.push_back(std::move(row));
    }
    if (table.header.empty()) throw DataError(origin + ": empty CSV (no header)");
    table.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            table.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return table;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_csv(buffer.str(), path);
}

std::string format_csv(const CsvTable& table) {
    std::string out;
    for (std::size_t j = 0; j < table.header.size(); ++j) out += (j ? "," : "") + table.header[j];
    out += "\n";
    for (Eigen::Index i = 0; i < table.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < table.values.cols(); ++j) out += (j ? "," : "") + format_double(table.values(i, j));
        out += "\n";
    }
    return out;
}

Dataset parse_dataset_csv(const std::string& text, const std::string& origin) {
    const CsvTable table = parse_csv(text, origin);
    std::vector<Eigen::Index> xs, ys;
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        const auto& h = table.header[j];
        if (h.rfind("x_", 0) == 0) {
            xs.push_back(static_cast<Eigen::Index>(j));
        } else if (h.rfind("y_", 0) == 0) {
            ys.push_back(static_cast<Eigen::Index>(j));
        } else {
            throw DataError(origin + ": unexpected column '" + h + "' (expected x_1..x_d, y_1..y_m)");
        }
    }
    if (xs.empty() || ys.empty()) throw DataError(origin + ": need at least one x_ and one y_ column");
    if (table.values.rows() == 0) throw DataError(origin + ": no data rows");
    Dataset data;
    data.inputs.resize(table.values.rows(), static_cast<Eigen::Index>(xs.size()));
    data.outputs.resize(table.values.rows(), static_cast<Eigen::Index>(ys.size()));
    for (std::size_t k = 0; k < xs.size(); ++k) data.inputs.col(static_cast<Eigen::Index>(k)) = table.values.col(xs[k]);
    for (std::size_t k = 0; k < ys.size(); ++k) data.outputs.col(static_cast<Eigen::Index>(k)) = table.values.col(ys[k]);
    data.validate();
    return data;
}

Dataset read_dataset_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open dataset '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_dataset_csv(buffer.str(), path);
}

std::string format_dataset_csv(const Dataset& data) {
    CsvTable table;
    for (Eigen::Index j = 0; j < data.inputs.cols(); ++j) table.header.push_back("x_" + std::to_string(j + 1));
    for (Eigen::Index j = 0; j < data.outputs.cols(); ++j) table.header.push_back("y_" + std::to_string(j + 1));
    table.values.resize(data.inputs.rows(), data.inputs.cols() + data.outputs.cols());
    table.values << data.inputs, data.outputs;
    return format_csv(table);
}

std::string experiment_report_csv(const ExperimentReport& report) {
    std::vector<std::string> params, metrics;
    for (const auto& cell : report.cells) {
        for (const auto& [k, v] : cell.params) {
            if (std::find(params.begin(), params.end(), k) == params.end()) params.push_back(k);
        }
        for (const auto& [k, v] : cell.metrics) {
            if (std::find(metrics.begin(), metrics.end(), k) == metrics.end()) metrics.push_back(k);
        }
    }
    std::string out = "cell,seed";
    for (const auto& k : params) out += "," + k;
    for (const auto& k : metrics) out += "," + k;
    out += ",support\n";
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        const auto& cell = report.cells[i];
        out += std::to_string(i) + "," + std::to_string(cell.seed);
        for (const auto& k : params) {
            const auto it = cell.params.find(k);
            out += "," + (it == cell.params.end() ? std::string() : format_double(it->second));
        }
        for (const auto& k : metrics) {
            const auto it = cell.metrics.find(k);
            out += "," + (it == cell.metrics.end() ? std::string() : format_double(it->second));
        }
        std::string support;
        for (const auto& [id, v] : cell.beta) support += (support.empty() ? "" : " ") + to_string(id);
        out += "," + support + "\n";
    }
    return out;
}

}  // namespace enetfp
