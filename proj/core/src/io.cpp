#include "censim/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace censim {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("CSV parse error at line " + std::to_string(line) +
                             ": " + what);
}

std::string strip(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& field, std::size_t line) {
    const std::string f = strip(field);
    if (f.empty()) parse_fail(line, "empty numeric field");
    char* end = nullptr;
    errno = 0;
    const double v = std::strtod(f.c_str(), &end);
    if (errno != 0 || end == f.c_str() || *end != '\0') {
        parse_fail(line, "not a number: '" + f + "'");
    }
    return v;
}

} // namespace

std::string censored_csv(const CensoredSample& sample) {
    std::string out = "t,delta\n";
    for (std::size_t i = 0; i < sample.t.size(); ++i) {
        out += fmt_double(sample.t[i]);
        out += ',';
        out += std::to_string(sample.delta[i]);
        out += '\n';
    }
    return out;
}

std::string values_csv(const std::vector<double>& values,
                       const std::string& column) {
    std::string out = column + "\n";
    for (double v : values) {
        out += fmt_double(v);
        out += '\n';
    }
    return out;
}

std::string latent_csv(const std::vector<double>& latent,
                       const std::vector<int>& cured_flags) {
    if (latent.size() != cured_flags.size()) {
        throw std::invalid_argument("latent_csv: size mismatch");
    }
    std::string out = "x\n";
    for (std::size_t i = 0; i < latent.size(); ++i) {
        out += fmt_double(cured_flags[i] ? kCuredSentinel : latent[i]);
        out += '\n';
    }
    return out;
}

CensoredSample parse_censored_csv(std::istream& in, bool* had_delta) {
    CensoredSample sample;
    std::string line;
    std::size_t lineno = 0;
    bool with_delta = false;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string row = strip(line);
        if (row.empty()) continue;
        if (!header_seen) {
            header_seen = true;
            // Header row: "t,delta", "t", or "x" (values-only files).
            if (row == "t,delta") {
                with_delta = true;
                continue;
            }
            if (row == "t" || row == "x") {
                with_delta = false;
                continue;
            }
            parse_fail(lineno, "expected header 't,delta', 't', or 'x', got '" +
                                   row + "'");
        }
        const std::size_t comma = row.find(',');
        if (with_delta) {
            if (comma == std::string::npos) {
                parse_fail(lineno, "expected two fields 't,delta'");
            }
            sample.t.push_back(parse_number(row.substr(0, comma), lineno));
            const std::string dfield = strip(row.substr(comma + 1));
            if (dfield != "0" && dfield != "1") {
                parse_fail(lineno, "delta must be 0 or 1, got '" + dfield + "'");
            }
            sample.delta.push_back(dfield == "1" ? 1 : 0);
        } else {
            if (comma != std::string::npos) {
                parse_fail(lineno, "expected a single column");
            }
            sample.t.push_back(parse_number(row, lineno));
            sample.delta.push_back(1);
        }
    }
    if (!header_seen) parse_fail(1, "empty file");
    if (had_delta) *had_delta = with_delta;
    return sample;
}

CensoredSample read_censored_csv(const std::string& path, bool* had_delta) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open input file: " + path);
    }
    return parse_censored_csv(in, had_delta);
}

void atomic_write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open output file: " + tmp);
        }
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::remove(tmp.c_str());
            throw std::runtime_error("write failed: " + tmp);
        }
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        std::remove(tmp.c_str());
        throw std::runtime_error(std::string("rename failed: ") +
                                 std::strerror(errno));
    }
}

} // namespace censim
