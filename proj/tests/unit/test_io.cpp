#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include <nrcdt/error.hpp>
#include <nrcdt/io.hpp>

#include "support.hpp"

using namespace nrcdt;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an nrcdt::Error");
    return ErrorKind::IoError;
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "nrcdt_test_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("ASCII PGM with comments") {
    std::istringstream in("P2\n# a comment\n3 2\n# another\n10\n0 5 10\n1 2 3\n");
    const Raster r = io::read_pgm(in);
    REQUIRE(r.height == 2);
    REQUIRE(r.width == 3);
    CHECK(r.at(0, 2) == 10.0);
    CHECK(r.at(1, 0) == 1.0);
}

TEST_CASE("binary PGM, 8 and 16 bit") {
    std::string eight = "P5 2 1 255\n";
    eight.push_back(static_cast<char>(7));
    eight.push_back(static_cast<char>(200));
    std::istringstream a(eight);
    const Raster r8 = io::read_pgm(a);
    CHECK(r8.at(0, 0) == 7.0);
    CHECK(r8.at(0, 1) == 200.0);

    std::string sixteen = "P5\n1 1\n65535\n";
    sixteen.push_back(static_cast<char>(0x01));
    sixteen.push_back(static_cast<char>(0x02));
    std::istringstream b(sixteen);
    CHECK(io::read_pgm(b).at(0, 0) == 258.0);
}

TEST_CASE("PGM errors") {
    auto parse = [](const std::string& text) {
        std::istringstream in(text);
        return io::read_pgm(in);
    };
    CHECK(kind_of([&] { (void)parse("P6 1 1 255\n"); }) == ErrorKind::UnsupportedFormat);
    CHECK(kind_of([&] { (void)parse("P2 2 2 255\n1 2 3\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { (void)parse("P2 2 x 255\n"); }) == ErrorKind::ParseError);
    CHECK(kind_of([&] { (void)parse("P5 2 2 255\nab"); }) == ErrorKind::ParseError);
}

TEST_CASE("PGM round trip keeps relative intensities") {
    Raster img(3, 4);
    img.at(0, 0) = 1.0;
    img.at(2, 3) = 2.0;
    std::stringstream buf;
    io::write_pgm(buf, img);
    const Raster back = io::read_pgm(buf);
    REQUIRE(back.height == 3);
    REQUIRE(back.width == 4);
    CHECK(back.at(2, 3) == 255.0);
    CHECK(back.at(0, 0) == 128.0);
    CHECK(back.at(1, 1) == 0.0);
}

TEST_CASE("CSV grids") {
    std::istringstream in("0,1,2\n\n3, 4 ,5\n");
    const Raster r = io::read_csv_grid(in);
    REQUIRE(r.height == 2);
    CHECK(r.at(1, 1) == 4.0);

    std::istringstream ragged("1,2\n3\n");
    try {
        (void)io::read_csv_grid(ragged, "ragged.csv");
        FAIL("expected ParseError");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ParseError);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    std::istringstream junk("1,x\n");
    CHECK(kind_of([&] { (void)io::read_csv_grid(junk); }) == ErrorKind::ParseError);
    std::istringstream negative("1,-2\n");
    CHECK(kind_of([&] { (void)io::read_csv_grid(negative); }) == ErrorKind::ParseError);

    Raster img(2, 2);
    img.at(0, 1) = 0.125;
    img.at(1, 0) = 3.0;
    std::stringstream buf;
    io::write_csv_grid(buf, img);
    const Raster back = io::read_csv_grid(buf);
    CHECK(back.pixels == img.pixels);
}

TEST_CASE("atom files round trip bit for bit") {
    nrcdt::testing::Rng rng(3);
    const auto m = nrcdt::testing::random_measure(rng, 100, 50);
    std::stringstream buf;
    io::write_atoms(buf, m);
    const auto back = io::read_atoms(buf);
    REQUIRE(back.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(back.points()[i] == m.points()[i]);
        CHECK(back.weights()[i] == m.weights()[i]);
    }
}

TEST_CASE("atom file errors") {
    std::istringstream bad_magic(std::string("NOTNRC\0", 7) + std::string(8, '\0'));
    CHECK(kind_of([&] { (void)io::read_atoms(bad_magic); }) == ErrorKind::UnsupportedFormat);

    const auto m = make_measure_2d({{1, 2}}, std::vector<double>{1});
    std::stringstream good;
    io::write_atoms(good, m);
    const std::string bytes = good.str();

    std::istringstream truncated(bytes.substr(0, bytes.size() - 3));
    CHECK(kind_of([&] { (void)io::read_atoms(truncated); }) == ErrorKind::ParseError);
    std::istringstream trailing(bytes + "x");
    CHECK(kind_of([&] { (void)io::read_atoms(trailing); }) == ErrorKind::ParseError);
}

TEST_CASE("file helpers") {
    CHECK(kind_of([] { (void)io::read_pgm_file("/nonexistent/nope.pgm"); }) == ErrorKind::MissingFile);
    CHECK(kind_of([] { (void)io::read_atoms_file("/nonexistent/nope.nrcdt"); }) == ErrorKind::MissingFile);

    const fs::path p = scratch("atomic.txt");
    io::write_file_atomic(p, "first");
    io::write_file_atomic(p, "second");
    CHECK(io::read_file(p) == "second");
    for (const auto& entry : fs::directory_iterator(p.parent_path())) {
        CHECK(entry.path().filename().string().find(".tmp") == std::string::npos);
    }
    // A regular file cannot act as a directory, even for root.
    CHECK(kind_of([&] { io::write_file_atomic(p / "sub" / "out.txt", "x"); }) == ErrorKind::IoError);
}
