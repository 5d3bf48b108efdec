#include "nrcdt/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cctype>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <vector>

#include "nrcdt/error.hpp"

namespace nrcdt::io {

namespace {

static_assert(std::numeric_limits<double>::is_iec559);

template <typename T>
void put_le(std::ostream& out, T value) {
    std::array<unsigned char, sizeof(T)> bytes{};
    std::uint64_t bits = 0;
    if constexpr (sizeof(T) == 8) {
        bits = std::bit_cast<std::uint64_t>(value);
    }
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<unsigned char>((bits >> (8 * i)) & 0xffu);
    out.write(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::uint64_t get_u64_le(std::istream& in, std::string_view source) {
    std::array<unsigned char, 8> bytes{};
    if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size())) {
        throw Error(ErrorKind::ParseError, std::string(source) + ": truncated atom file");
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    return v;
}

double get_f64_le(std::istream& in, std::string_view source) {
    return std::bit_cast<double>(get_u64_le(in, source));
}

[[noreturn]] void parse_fail(std::string_view source, const std::string& what) {
    throw Error(ErrorKind::ParseError, std::string(source) + ": " + what);
}

// Next whitespace-delimited header token, skipping '#' comments.
std::string pgm_token(std::istream& in, std::string_view source) {
    std::string token;
    int ch;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            if (!token.empty()) return token;
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) return token;
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    if (token.empty()) parse_fail(source, "unexpected end of PGM header");
    return token;
}

std::size_t pgm_number(std::istream& in, std::string_view source, const char* field) {
    const std::string token = pgm_token(in, source);
    std::size_t consumed = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(token, &consumed);
    } catch (const std::exception&) {
        consumed = 0;
    }
    if (consumed != token.size() || token.empty() || token[0] == '-') {
        parse_fail(source, std::string("invalid PGM ") + field + " '" + token + "'");
    }
    return static_cast<std::size_t>(v);
}

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::MissingFile, "cannot open " + path.string());
    return in;
}

}  // namespace

void write_atoms(std::ostream& out, const DiscreteMeasure2D& m) {
    out.write(kAtomMagic.data(), static_cast<std::streamsize>(kAtomMagic.size()));
    put_le<std::uint64_t>(out, static_cast<std::uint64_t>(m.size()));
    const auto pts = m.points();
    const auto w = m.weights();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        put_le(out, pts[i].x);
        put_le(out, pts[i].y);
        put_le(out, w[i]);
    }
}

DiscreteMeasure2D read_atoms(std::istream& in, std::string_view source) {
    std::array<char, 7> magic{};
    if (!in.read(magic.data(), magic.size()) || std::string_view(magic.data(), magic.size()) != kAtomMagic) {
        throw Error(ErrorKind::UnsupportedFormat, std::string(source) + ": missing NRCDT1 magic");
    }
    const std::uint64_t count = get_u64_le(in, source);
    if (count == 0) throw Error(ErrorKind::ZeroMass, std::string(source) + ": atom file holds no atoms");
    if (count > (std::uint64_t{1} << 32)) parse_fail(source, "implausible atom count");
    std::vector<Point2> points(count);
    std::vector<double> weights(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        points[i].x = get_f64_le(in, source);
        points[i].y = get_f64_le(in, source);
        weights[i] = get_f64_le(in, source);
    }
    if (in.peek() != EOF) parse_fail(source, "trailing bytes after atom records");
    return make_measure_2d(std::move(points), weights);
}

Raster read_pgm(std::istream& in, std::string_view source) {
    const std::string magic = pgm_token(in, source);
    if (magic != "P2" && magic != "P5") {
        throw Error(ErrorKind::UnsupportedFormat, std::string(source) + ": not a P2/P5 graymap ('" + magic + "')");
    }
    const std::size_t width = pgm_number(in, source, "width");
    const std::size_t height = pgm_number(in, source, "height");
    const std::size_t maxval = pgm_number(in, source, "maxval");
    if (width == 0 || height == 0) parse_fail(source, "empty image");
    if (maxval == 0 || maxval > 65535) parse_fail(source, "maxval must be in [1, 65535]");

    Raster image(height, width);
    const std::size_t n = width * height;
    if (magic == "P2") {
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t v = pgm_number(in, source, "pixel");
            if (v > maxval) parse_fail(source, "pixel " + std::to_string(i) + " exceeds maxval");
            image.pixels[i] = static_cast<double>(v);
        }
        return image;
    }
    // P5: exactly one whitespace byte was consumed after maxval by pgm_token.
    const std::size_t bytes_per = maxval < 256 ? 1 : 2;
    std::vector<unsigned char> raw(n * bytes_per);
    if (!in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()))) {
        parse_fail(source, "truncated P5 pixel data (expected " + std::to_string(raw.size()) + " bytes)");
    }
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t v = raw[i * bytes_per];
        if (bytes_per == 2) v = (v << 8) | raw[i * bytes_per + 1];
        if (v > maxval) parse_fail(source, "pixel " + std::to_string(i) + " exceeds maxval");
        image.pixels[i] = static_cast<double>(v);
    }
    return image;
}

void write_pgm(std::ostream& out, const Raster& image) {
    const double peak = image.pixels.empty() ? 0.0 : *std::max_element(image.pixels.begin(), image.pixels.end());
    out << "P5\n" << image.width << ' ' << image.height << "\n255\n";
    std::vector<unsigned char> raw(image.pixels.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        const double v = peak > 0.0 ? std::clamp(image.pixels[i] / peak, 0.0, 1.0) : 0.0;
        raw[i] = static_cast<unsigned char>(std::lround(v * 255.0));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

Raster read_csv_grid(std::istream& in, std::string_view source) {
    std::vector<double> pixels;
    std::size_t width = 0;
    std::size_t height = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t cols = 0;
        std::stringstream row(line);
        std::string cell;
        while (std::getline(row, cell, ',')) {
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &consumed);
            } catch (const std::exception&) {
                consumed = 0;
            }
            const bool trailing_ok = cell.find_first_not_of(" \t", consumed) == std::string::npos;
            if (consumed == 0 || !trailing_ok) {
                parse_fail(source, "line " + std::to_string(line_no) + ", column " + std::to_string(cols + 1) +
                                       ": not a number '" + cell + "'");
            }
            if (!std::isfinite(v) || v < 0.0) {
                parse_fail(source, "line " + std::to_string(line_no) + ", column " + std::to_string(cols + 1) +
                                       ": intensity must be finite and nonnegative");
            }
            pixels.push_back(v);
            ++cols;
        }
        if (height == 0) width = cols;
        if (cols != width) {
            parse_fail(source, "line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                   " columns, found " + std::to_string(cols));
        }
        ++height;
    }
    if (height == 0) parse_fail(source, "empty CSV grid");
    Raster image(height, width);
    image.pixels = std::move(pixels);
    return image;
}

void write_csv_grid(std::ostream& out, const Raster& image) {
    out << std::setprecision(17);
    for (std::size_t r = 0; r < image.height; ++r) {
        for (std::size_t c = 0; c < image.width; ++c) {
            if (c) out << ',';
            out << image.at(r, c);
        }
        out << '\n';
    }
}

DiscreteMeasure2D read_atoms_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_atoms(in, path.string());
}

Raster read_pgm_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_pgm(in, path.string());
}

Raster read_csv_grid_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_csv_grid(in, path.string());
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    if (path.has_parent_path()) {
        std::error_code dir_ec;
        std::filesystem::create_directories(path.parent_path(), dir_ec);
        if (dir_ec) throw Error(ErrorKind::IoError, "cannot create " + path.parent_path().string());
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot write " + tmp.string());
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw Error(ErrorKind::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::IoError, "cannot rename into " + path.string());
    }
}

std::string read_file(const std::filesystem::path& path) {
    auto in = open_input(path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace nrcdt::io
