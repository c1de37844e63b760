#include "varsmooth/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace varsmooth {

namespace fs = std::filesystem;

namespace {

std::ifstream open_in(const fs::path& path, std::ios::openmode mode = std::ios::in) {
    std::ifstream in(path, mode);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return in;
}

std::ofstream open_out(const fs::path& path, std::ios::openmode mode = std::ios::out) {
    std::ofstream out(path, mode);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

std::string trim(std::string s) {
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

double parse_real(const std::string& field, const fs::path& path, std::size_t line) {
    const std::string t = trim(field);
    double v = 0.0;
    const auto* first = t.data();
    const auto* last = t.data() + t.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (t.empty() || ec != std::errc() || ptr != last) {
        std::ostringstream os;
        os << path.string() << ":" << line << ": not a real number: '" << t << "'";
        throw IoError(os.str());
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, sep)) out.push_back(cell);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string format_real(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Next whitespace-delimited PGM header token, skipping '#' comments.
std::string pgm_token(std::istream& in) {
    std::string tok;
    char c;
    while (in.get(c)) {
        if (c == '#') {
            std::string rest;
            std::getline(in, rest);
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!tok.empty()) return tok;
            continue;
        }
        tok.push_back(c);
    }
    return tok;
}

} // namespace

Matrix read_matrix_csv(const fs::path& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        std::vector<double> row;
        for (const auto& cell : split(line, ',')) row.push_back(parse_real(cell, path, lineno));
        if (!rows.empty() && row.size() != rows.front().size()) {
            std::ostringstream os;
            os << path.string() << ":" << lineno << ": expected " << rows.front().size() << " columns, got "
               << row.size();
            throw IoError(os.str());
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw IoError("'" + path.string() + "' contains no data");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
    return m;
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
    auto out = open_out(path);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_real(m(r, c));
        }
        out << '\n';
    }
}

ImageBuffer read_image_csv(const fs::path& path) {
    const Matrix m = read_matrix_csv(path);
    Vector px(m.size());
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) px[r * m.cols() + c] = m(r, c);
    return {m.rows(), m.cols(), std::move(px)};
}

void write_image_csv(const fs::path& path, const ImageBuffer& img) {
    Matrix m(img.height, img.width);
    for (Eigen::Index r = 0; r < img.height; ++r)
        for (Eigen::Index c = 0; c < img.width; ++c) m(r, c) = img.at(r, c);
    write_matrix_csv(path, m);
}

ImageBuffer read_pgm(const fs::path& path) {
    auto in = open_in(path, std::ios::in | std::ios::binary);
    if (pgm_token(in) != "P5") throw IoError("'" + path.string() + "' is not a binary PGM (P5)");
    long w = 0, h = 0, maxval = 0;
    try {
        w = std::stol(pgm_token(in));
        h = std::stol(pgm_token(in));
        maxval = std::stol(pgm_token(in));
    } catch (const std::exception&) {
        throw IoError("'" + path.string() + "': malformed PGM header");
    }
    if (w <= 0 || h <= 0 || maxval != 255) throw IoError("'" + path.string() + "': only maxval 255 PGM is supported");
    std::vector<unsigned char> raw(static_cast<std::size_t>(w * h));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (in.gcount() != static_cast<std::streamsize>(raw.size())) throw IoError("'" + path.string() + "': truncated");
    Vector px(w * h);
    for (std::size_t i = 0; i < raw.size(); ++i) px[static_cast<Eigen::Index>(i)] = raw[i] / 255.0;
    return {h, w, std::move(px)};
}

void write_pgm(const fs::path& path, const ImageBuffer& img) {
    auto out = open_out(path, std::ios::out | std::ios::binary);
    out << "P5\n" << img.width << " " << img.height << "\n255\n";
    std::vector<unsigned char> raw(static_cast<std::size_t>(img.pixels.size()));
    for (Eigen::Index i = 0; i < img.pixels.size(); ++i)
        raw[static_cast<std::size_t>(i)] =
            static_cast<unsigned char>(std::lround(std::clamp(img.pixels[i], 0.0, 1.0) * 255.0));
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

ImageBuffer read_image(const fs::path& path) {
    const auto ext = path.extension().string();
    ImageBuffer img;
    if (ext == ".pgm")
        img = read_pgm(path);
    else if (ext == ".csv")
        img = read_image_csv(path);
    else
        throw IoError("'" + path.string() + "': unsupported image format (use .pgm or .csv)");
    img.pixels = img.pixels.cwiseMax(0.0).cwiseMin(1.0);
    return img;
}

void write_trace_csv(std::ostream& os, const SolveTrace& trace, bool include_timing) {
    os << kTraceHeader << '\n';
    for (const auto& r : trace.records) {
        os << r.k << ',' << format_real(r.mu) << ',' << format_real(r.gamma) << ',' << format_real(r.F_smoothed) << ','
           << format_real(r.F_true) << ',' << format_real(r.grad_norm) << ',' << format_real(r.feasibility) << ','
           << format_real(include_timing ? r.time_ms : 0.0) << '\n';
    }
}

void write_trace_csv(const fs::path& path, const SolveTrace& trace, bool include_timing) {
    auto out = open_out(path);
    write_trace_csv(out, trace, include_timing);
    if (!out) throw IoError("failed writing '" + path.string() + "'");
}

SolveTrace read_trace_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || trim(line) != kTraceHeader)
        throw IoError("'" + path.string() + "': missing or wrong trace header");
    SolveTrace trace;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split(line, ',');
        if (cells.size() != 8) {
            std::ostringstream os;
            os << path.string() << ":" << lineno << ": expected 8 fields";
            throw IoError(os.str());
        }
        TraceRecord r;
        const double k = parse_real(cells[0], path, lineno);
        if (k != std::floor(k) || k < 1) throw IoError(path.string() + ": iteration index must be a positive integer");
        r.k = static_cast<long>(k);
        r.mu = parse_real(cells[1], path, lineno);
        r.gamma = parse_real(cells[2], path, lineno);
        r.F_smoothed = parse_real(cells[3], path, lineno);
        r.F_true = parse_real(cells[4], path, lineno);
        r.grad_norm = parse_real(cells[5], path, lineno);
        r.feasibility = parse_real(cells[6], path, lineno);
        r.time_ms = parse_real(cells[7], path, lineno);
        if (!trace.records.empty() && r.k <= trace.records.back().k)
            throw IoError(path.string() + ": iteration indices must increase");
        trace.records.push_back(r);
    }
    return trace;
}

} // namespace varsmooth
