#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "config.hpp"

namespace rhlab::cli {

/// Shortest text that round-trips a double (17 significant digits).
std::string format_double(double v);

using Cell = std::variant<std::string, double, long>;

/// CSV with (config hash, version, seed) comment lines ahead of the column header.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}
    void add(std::vector<Cell> row);
    std::size_t rows() const { return rows_.size(); }
    std::string render(const RunConfig& config) const;

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

std::string artifact_version();

struct RunBundle {
    RunConfig config;
    /// File name → contents, in creation order.
    std::vector<std::pair<std::string, std::string>> files;
    std::vector<std::string> log;
    double wall_seconds = 0.0;

    void add_csv(const std::string& name, const CsvTable& table) { files.emplace_back(name, table.render(config)); }
    void add_json(const std::string& name, json doc);
    const std::string& file(const std::string& name) const;
};

/// Writes every file plus config.json and log.txt into `dir`.
void write_bundle(const RunBundle& bundle, const std::string& dir);

}  // namespace rhlab::cli
