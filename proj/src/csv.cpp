#include "levyfluct/csv.hpp"

#include <cstdio>

#include <json.hpp>

#include "levyfluct/errors.hpp"

namespace levyfluct {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::string path) : path_(std::move(path)) {
    file_ = std::fopen(path_.c_str(), "wb");
    if (!file_) throw config_error("csv: cannot open " + path_);
}

CsvWriter::~CsvWriter() {
    if (file_) std::fclose(static_cast<std::FILE*>(file_));
}

void CsvWriter::comment(const std::string& line) {
    std::fprintf(static_cast<std::FILE*>(file_), "# %s\n", line.c_str());
}

void CsvWriter::header(const std::vector<std::string>& cols) {
    std::string line;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        if (k) line += ',';
        line += cols[k];
    }
    std::fprintf(static_cast<std::FILE*>(file_), "%s\n", line.c_str());
}

void CsvWriter::row(const std::vector<double>& vals) {
    std::string line;
    for (std::size_t k = 0; k < vals.size(); ++k) {
        if (k) line += ',';
        line += format_g17(vals[k]);
    }
    std::fprintf(static_cast<std::FILE*>(file_), "%s\n", line.c_str());
}

void CsvWriter::raw_row(const std::string& line) {
    std::fprintf(static_cast<std::FILE*>(file_), "%s\n", line.c_str());
}

bool RunManifest::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

void RunManifest::write(const std::string& path) const {
    nlohmann::json j;
    j["command"] = command;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["outputs"] = outputs;
    auto checks_j = nlohmann::json::array();
    for (const auto& c : checks)
        checks_j.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["checks"] = checks_j;
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw config_error("manifest: cannot open " + path);
    const std::string text = j.dump(2) + "\n";
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
}

}  // namespace levyfluct
