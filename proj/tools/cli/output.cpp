#include "output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "rhlab/error.hpp"

#ifndef RHLAB_VERSION
#define RHLAB_VERSION "0.0.0"
#endif

namespace rhlab::cli {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string artifact_version() { return RHLAB_VERSION; }

void CsvTable::add(std::vector<Cell> row) {
    if (row.size() != columns_.size()) throw std::logic_error("CSV row width does not match its header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::render(const RunConfig& config) const {
    std::string out = "# config_hash=" + config.hash() + "\n# version=" + artifact_version() +
                      "\n# seed=" + std::to_string(config.seed) + "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) out += (c ? "," : "") + columns_[c];
    out += "\n";
    for (const auto& row : rows_) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ",";
            if (const auto* s = std::get_if<std::string>(&row[c])) {
                out += *s;
            } else if (const auto* d = std::get_if<double>(&row[c])) {
                out += format_double(*d);
            } else {
                out += std::to_string(std::get<long>(row[c]));
            }
        }
        out += "\n";
    }
    return out;
}

void RunBundle::add_json(const std::string& name, json doc) {
    doc["config_hash"] = config.hash();
    doc["version"] = artifact_version();
    doc["seed"] = config.seed;
    files.emplace_back(name, doc.dump(2) + "\n");
}

const std::string& RunBundle::file(const std::string& name) const {
    for (const auto& [n, content] : files)
        if (n == name) return content;
    throw std::out_of_range("bundle has no file " + name);
}

void write_bundle(const RunBundle& bundle, const std::string& dir) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw DomainError("cannot create output directory " + dir + ": " + ec.message());
    auto put = [&](const std::string& name, const std::string& content) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        if (!out) throw DomainError("cannot write " + (fs::path(dir) / name).string());
        out << content;
    };
    for (const auto& [name, content] : bundle.files) put(name, content);
    put("config.json", bundle.config.to_json().dump(2) + "\n");
    std::string log;
    for (const auto& line : bundle.log) log += line + "\n";
    log += "wall_seconds=" + format_double(bundle.wall_seconds) + "\n";
    put("log.txt", log);
}

}  // namespace rhlab::cli
