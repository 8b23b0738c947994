#include "mfstruct/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

namespace mfstruct {

namespace {

constexpr char kMagic[4] = {'M', 'F', 'S', '1'};
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::string& out, T v) {
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    out.append(buf, sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
    char buf[sizeof(T)];
    in.read(buf, sizeof(T));
    if (!in) raise(errc::cache_format, "truncated cache file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

std::string sanitize(const std::string& label) {
    std::string out;
    for (char c : label) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '.')
            out += c;
        else
            out += '_';
    }
    return out;
}

}  // namespace

void write_sieve_cache(const std::filesystem::path& path, const MultFnTable& table) {
    // layout assumes a little-endian host, as all supported targets are
    std::string out;
    out.reserve(32 + table.label().size() + 16 * table.N());
    out.append(kMagic, 4);
    put<uint32_t>(out, kVersion);
    put<uint64_t>(out, table.N());
    put<uint32_t>(out, static_cast<uint32_t>(table.D()));
    put<uint16_t>(out, static_cast<uint16_t>(table.label().size()));
    out.append(table.label());
    for (uint64_t n = 1; n <= table.N(); ++n) {
        put<double>(out, table[n].real());
        put<double>(out, table[n].imag());
    }
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(errc::cache_format, "cannot open cache file for writing: " + path.string());
    f.write(out.data(), static_cast<std::streamsize>(out.size()));
}

MultFnTable read_sieve_cache(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) raise(errc::cache_format, "cannot open cache file: " + path.string());
    char magic[4];
    f.read(magic, 4);
    if (!f || std::memcmp(magic, kMagic, 4) != 0)
        raise(errc::cache_format, "bad magic in " + path.string());
    const auto version = get<uint32_t>(f);
    if (version != kVersion) raise(errc::cache_format, "unsupported cache version");
    const auto N = get<uint64_t>(f);
    const auto D = get<uint32_t>(f);
    const auto label_len = get<uint16_t>(f);
    std::string label(label_len, '\0');
    f.read(label.data(), label_len);
    if (!f) raise(errc::cache_format, "truncated cache header");
    std::vector<cplx> v(N + 1, cplx(0.0, 0.0));
    std::vector<double> body(2 * N);
    f.read(reinterpret_cast<char*>(body.data()), static_cast<std::streamsize>(16 * N));
    if (!f) raise(errc::cache_format, "truncated cache body");
    for (uint64_t n = 1; n <= N; ++n) v[n] = cplx(body[2 * (n - 1)], body[2 * (n - 1) + 1]);
    return MultFnTable(N, static_cast<int>(D), label, TableSource::Sieved, std::move(v));
}

std::filesystem::path sieve_cache_path(const std::filesystem::path& dir, const std::string& label,
                                       uint64_t N) {
    return dir / (sanitize(label) + "_N" + std::to_string(N) + ".mfs");
}

MultFnTable cached_sieve(const std::filesystem::path& dir, const std::string& label, uint64_t N,
                         const std::function<MultFnTable()>& build) {
    const auto path = sieve_cache_path(dir, label, N);
    if (std::filesystem::exists(path)) {
        try {
            MultFnTable t = read_sieve_cache(path);
            if (t.N() == N && t.label() == label) return t;
        } catch (const Error&) {
            // fall through and rebuild
        }
    }
    MultFnTable t = build();
    std::filesystem::create_directories(dir);
    write_sieve_cache(path, t);
    return t;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += header[i];
    }
    buf_ += '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) raise(errc::range, "csv row width mismatch");
    for (size_t i = 0; i < cells.size(); ++i) {
        if (i) buf_ += ',';
        buf_ += cells[i];
    }
    buf_ += '\n';
}

void CsvWriter::save(const std::filesystem::path& path) const {
    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(errc::range, "cannot open for writing: " + path.string());
    f.write(buf_.data(), static_cast<std::streamsize>(buf_.size()));
}

namespace {

const char* kSeriesColors[] = {"#1f6fb2", "#c23b22", "#2e8540", "#8250c4", "#b8860b", "#444444"};

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series, bool log_x) {
    const double W = 820, H = 520;
    const double L = 80, R = 30, T = 50, B = 60;  // margins
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& s : series) {
        for (auto [x, y] : s.points) {
            const double xv = log_x ? std::log10(x) : x;
            xmin = std::min(xmin, xv);
            xmax = std::max(xmax, xv);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmin > xmax) {
        xmin = 0;
        xmax = 1;
    }
    if (ymin > ymax) {
        ymin = 0;
        ymax = 1;
    }
    if (ymax - ymin < 1e-300) {
        ymax = ymin + 1.0;
        ymin -= 0.1;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;
    if (xmax - xmin < 1e-300) xmax = xmin + 1.0;

    auto X = [&](double x) {
        const double xv = log_x ? std::log10(x) : x;
        return L + (xv - xmin) / (xmax - xmin) * (W - L - R);
    };
    auto Y = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_tick(W) + "\" height=\"" +
           fmt_tick(H) + "\" viewBox=\"0 0 " + fmt_tick(W) + " " + fmt_tick(H) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + fmt_tick(W / 2) + "\" y=\"26\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"16\">" +
           title + "</text>\n";
    // axes
    svg += "<line x1=\"" + fmt_tick(L) + "\" y1=\"" + fmt_tick(H - B) + "\" x2=\"" + fmt_tick(W - R) +
           "\" y2=\"" + fmt_tick(H - B) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + fmt_tick(L) + "\" y1=\"" + fmt_tick(T) + "\" x2=\"" + fmt_tick(L) +
           "\" y2=\"" + fmt_tick(H - B) + "\" stroke=\"black\"/>\n";
    // x ticks (decades when log)
    const int nx = 6;
    for (int i = 0; i <= nx; ++i) {
        const double xv = xmin + (xmax - xmin) * i / nx;
        const double px = L + (xv - xmin) / (xmax - xmin) * (W - L - R);
        svg += "<line x1=\"" + fmt_tick(px) + "\" y1=\"" + fmt_tick(H - B) + "\" x2=\"" + fmt_tick(px) +
               "\" y2=\"" + fmt_tick(H - B + 5) + "\" stroke=\"black\"/>\n";
        const std::string lab = log_x ? ("1e" + fmt_tick(xv)) : fmt_tick(xv);
        svg += "<text x=\"" + fmt_tick(px) + "\" y=\"" + fmt_tick(H - B + 20) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" + lab +
               "</text>\n";
    }
    const int ny = 5;
    for (int i = 0; i <= ny; ++i) {
        const double yv = ymin + (ymax - ymin) * i / ny;
        const double py = Y(yv);
        svg += "<line x1=\"" + fmt_tick(L - 5) + "\" y1=\"" + fmt_tick(py) + "\" x2=\"" + fmt_tick(L) +
               "\" y2=\"" + fmt_tick(py) + "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + fmt_tick(L - 8) + "\" y=\"" + fmt_tick(py + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" + fmt_tick(yv) +
               "</text>\n";
    }
    svg += "<text x=\"" + fmt_tick(W / 2) + "\" y=\"" + fmt_tick(H - 16) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
           "</text>\n";
    svg += "<text x=\"18\" y=\"" + fmt_tick(H / 2) +
           "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" transform=\"rotate(-90 18 " +
           fmt_tick(H / 2) + ")\">" + y_label + "</text>\n";

    for (size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        if (s.points.empty()) continue;
        std::string pts;
        for (auto [x, y] : s.points) pts += fmt_tick(X(x)) + "," + fmt_tick(Y(y)) + " ";
        const char* color = kSeriesColors[si % 6];
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" +
               pts + "\"/>\n";
        svg += "<text x=\"" + fmt_tick(W - R - 6) + "\" y=\"" + fmt_tick(T + 16 + 16 * si) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" + color +
               "\">" + s.name + "</text>\n";
    }
    svg += "</svg>\n";

    if (!path.parent_path().empty()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) raise(errc::range, "cannot open for writing: " + path.string());
    f.write(svg.data(), static_cast<std::streamsize>(svg.size()));
}

}  // namespace mfstruct
