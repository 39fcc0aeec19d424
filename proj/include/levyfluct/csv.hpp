#pragma once

#include <string>
#include <vector>

namespace levyfluct {

/// Deterministic CSV writer: fixed %.17g formatting, caller-ordered rows.
class CsvWriter {
  public:
    explicit CsvWriter(std::string path);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void comment(const std::string& line);            ///< "# ..." header line
    void header(const std::vector<std::string>& cols);
    void row(const std::vector<double>& vals);
    void raw_row(const std::string& line);
    const std::string& path() const { return path_; }

  private:
    std::string path_;
    void* file_ = nullptr;
};

struct CheckLine {
    std::string name;
    bool pass = false;
    std::string detail;
};

/// Reproducibility manifest written next to a command's outputs.
struct RunManifest {
    std::string command;
    std::string config_digest;
    std::uint64_t seed = 0;
    std::vector<std::string> outputs;
    std::vector<CheckLine> checks;

    bool all_pass() const;
    void write(const std::string& path) const;
};

std::string format_g17(double v);

}  // namespace levyfluct
