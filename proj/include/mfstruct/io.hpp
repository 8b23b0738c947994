#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mfstruct/tables.hpp"

namespace mfstruct {

// ---- binary sieve cache ----------------------------------------------------
// Header: magic "MFS1", version u32, N u64, D u32, label length u16, label
// bytes (UTF-8). Body: N little-endian (re, im) f64 pairs for values[1..N].

void write_sieve_cache(const std::filesystem::path& path, const MultFnTable& table);
MultFnTable read_sieve_cache(const std::filesystem::path& path);

// Cache file for key (label, N) inside dir.
std::filesystem::path sieve_cache_path(const std::filesystem::path& dir, const std::string& label,
                                       uint64_t N);

// Load when a valid cache for (label, N) exists, otherwise build via the
// supplied sieve call and store the result.
MultFnTable cached_sieve(const std::filesystem::path& dir, const std::string& label, uint64_t N,
                         const std::function<MultFnTable()>& build);

// ---- CSV -------------------------------------------------------------------
// '.' decimal separator, LF line endings, %.17g doubles: byte-identical for
// identical inputs.

std::string format_double(double v);

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header);
    void row(const std::vector<std::string>& cells);
    const std::string& text() const { return buf_; }
    void save(const std::filesystem::path& path) const;

  private:
    std::string buf_;
    size_t width_;
};

// ---- SVG -------------------------------------------------------------------

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;  // (x, y), x > 0 when log_x
};

// Standalone single-file SVG line plot; x axis log10-scaled when log_x.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series, bool log_x);

}  // namespace mfstruct
