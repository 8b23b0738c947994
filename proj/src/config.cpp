#include "mfstruct/config.hpp"

#include <fstream>

#include "mfstruct/errors.hpp"

namespace mfstruct {

std::vector<uint64_t> RunConfig::effective_checkpoints() const {
    if (!checkpoints.empty()) return checkpoints;
    std::vector<uint64_t> out;
    for (uint64_t x = 1000; x <= N; x *= 10) out.push_back(x);
    if (out.empty() || out.back() != N) {
        if (N >= 10) out.push_back(N);
    }
    return out;
}

void RunConfig::validate() const {
    if (N < 1) raise(errc::parse, "N must be positive");
    if (!(T > 0)) raise(errc::parse, "T must be positive");
    if (!(A > 0)) raise(errc::parse, "A must be positive");
    if (K < 0) raise(errc::parse, "K must be positive (or 0 for auto)");
    if (!(grid_step > 0)) raise(errc::parse, "grid_step must be positive");
    if (workers < 1) raise(errc::parse, "workers must be >= 1");
    for (uint64_t c : checkpoints)
        if (c < 1 || c > N) raise(errc::parse, "checkpoints must lie in [1, N]");
}

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

uint64_t parse_u64(const std::string& v, int line) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || d < 0 || d != d || d > 1.8e19)
            raise(errc::parse, "line " + std::to_string(line) + ": bad integer '" + v + "'");
        const uint64_t u = static_cast<uint64_t>(d);
        if (static_cast<double>(u) != d)
            raise(errc::parse, "line " + std::to_string(line) + ": expected an integer, got '" + v + "'");
        return u;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(errc::parse, "line " + std::to_string(line) + ": bad integer '" + v + "'");
    }
}

double parse_f64(const std::string& v, int line) {
    try {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size()) raise(errc::parse, "line " + std::to_string(line) + ": bad number '" + v + "'");
        return d;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        raise(errc::parse, "line " + std::to_string(line) + ": bad number '" + v + "'");
    }
}

}  // namespace

RunConfig parse_config(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) raise(errc::parse, "cannot open config file: " + path.string());
    RunConfig cfg;
    std::string raw;
    int line = 0;
    while (std::getline(f, raw)) {
        ++line;
        const size_t hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const std::string s = trim(raw);
        if (s.empty()) continue;
        const size_t eq = s.find('=');
        if (eq == std::string::npos)
            raise(errc::parse, "line " + std::to_string(line) + ": expected key=value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key == "N") {
            cfg.N = parse_u64(val, line);
            if (cfg.N < 1) raise(errc::parse, "line " + std::to_string(line) + ": N must be positive");
        } else if (key == "T") {
            cfg.T = parse_f64(val, line);
            if (!(cfg.T > 0)) raise(errc::parse, "line " + std::to_string(line) + ": T must be positive");
        } else if (key == "A") {
            cfg.A = parse_f64(val, line);
            if (!(cfg.A > 0)) raise(errc::parse, "line " + std::to_string(line) + ": A must be positive");
        } else if (key == "K") {
            cfg.K = parse_f64(val, line);
            if (cfg.K < 0) raise(errc::parse, "line " + std::to_string(line) + ": K must be >= 0");
        } else if (key == "checkpoints") {
            cfg.checkpoints.clear();
            size_t start = 0;
            while (start <= val.size()) {
                const size_t comma = val.find(',', start);
                const std::string piece =
                    trim(val.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
                if (!piece.empty()) cfg.checkpoints.push_back(parse_u64(piece, line));
                if (comma == std::string::npos) break;
                start = comma + 1;
            }
        } else if (key == "grid_step") {
            cfg.grid_step = parse_f64(val, line);
            if (!(cfg.grid_step > 0))
                raise(errc::parse, "line " + std::to_string(line) + ": grid_step must be positive");
        } else if (key == "output_dir") {
            cfg.output_dir = val;
        } else if (key == "cache_dir") {
            cfg.cache_dir = val;
        } else if (key == "workers") {
            cfg.workers = static_cast<int>(parse_u64(val, line));
            if (cfg.workers < 1)
                raise(errc::parse, "line " + std::to_string(line) + ": workers must be >= 1");
        } else {
            raise(errc::unknown_key, "line " + std::to_string(line) + ": unknown key '" + key + "'");
        }
    }
    cfg.validate();
    return cfg;
}

}  // namespace mfstruct
