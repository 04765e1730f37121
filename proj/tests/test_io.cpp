#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>
#include <limits>
#include <string>

#include "combnoise/errors.hpp"
#include "combnoise/io.hpp"

using namespace combnoise;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("combnoise_io_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

} // namespace

TEST_CASE("numeric formatting") {
    CHECK(io::fmt_g(1.0) == "1");
    CHECK(io::fmt_g(90476.19047619047) == "90476.1904762");
    CHECK(io::fmt_g(-2.5e-16) == "-2.5e-16");
    CHECK(io::fmt_g(std::numeric_limits<double>::infinity()) == "INF");
    CHECK(io::fmt_g(-std::numeric_limits<double>::infinity()) == "-INF");
    CHECK_THROWS_AS(io::fmt_g(std::nan("")), DomainError);

    CHECK(io::parse_number("90476.1904762", "t") == doctest::Approx(90476.1904762));
    CHECK(io::parse_number("INF", "t") == std::numeric_limits<double>::infinity());
    CHECK(io::parse_number("-INF", "t") == -std::numeric_limits<double>::infinity());
    CHECK_THROWS_AS(io::parse_number("12x", "t"), DomainError);
    CHECK_THROWS_AS(io::parse_number("", "t"), DomainError);
}

TEST_CASE("enum names round trip") {
    for (auto q : {Quadrature::Amplitude, Quadrature::Phase})
        CHECK(io::parse_quadrature(io::quadrature_name(q), "t") == q);
    for (auto u : {PsdUnits::RelShotLinear, PsdUnits::RelShotDb, PsdUnits::DbcPerHz})
        CHECK(io::parse_units(io::units_name(u), "t") == u);
    for (auto l : {TraceLabel::Ceo, TraceLabel::Rep, TraceLabel::Custom})
        CHECK(io::parse_trace_label(io::trace_label_name(l), "t") == l);
    for (auto f : {QualityFlag::Ok, QualityFlag::HighCorrection})
        CHECK(io::parse_flag(io::flag_name(f), "t") == f);
    CHECK_THROWS_AS(io::parse_quadrature("sideways", "t"), DomainError);
    CHECK_THROWS_AS(io::parse_units("volts", "t"), DomainError);
}

TEST_CASE("measurement tables round trip") {
    TempDir dir;
    std::vector<MeasuredVariance> rows(3);
    rows[0] = {{0}, Quadrature::Amplitude, 5e5, 1.25, 1.0123456789};
    rows[1] = {{5}, Quadrature::Phase, 5e5, 2.5, 3.14159};
    rows[2] = {{0, 5}, Quadrature::Phase, 5e5, 3.75, 2.71828};

    const std::string csv = dir.file("m.csv");
    io::write_measurements_csv(csv, rows);
    const auto back = io::read_measurements(csv);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].zones == rows[i].zones);
        CHECK(back[i].quadrature == rows[i].quadrature);
        CHECK(back[i].rf_hz == doctest::Approx(rows[i].rf_hz).epsilon(1e-11));
        CHECK(back[i].power == doctest::Approx(rows[i].power).epsilon(1e-11));
        CHECK(back[i].value == doctest::Approx(rows[i].value).epsilon(1e-11));
    }

    // JSON keeps full double precision
    const std::string json = dir.file("m.json");
    io::write_measurements_json(json, rows);
    const auto jback = io::read_measurements(json);
    REQUIRE(jback.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(jback[i].zones == rows[i].zones);
        CHECK(jback[i].value == rows[i].value);
        CHECK(jback[i].power == rows[i].power);
    }
}

TEST_CASE("measurement csv rejects malformed input") {
    TempDir dir;
    const std::string path = dir.file("bad.csv");
    {
        std::ofstream f(path);
        f << "who,what\n1,2\n";
    }
    CHECK_THROWS_AS(io::read_measurements_csv(path), DomainError);
    {
        std::ofstream f(path);
        f << "quadrature,rf_hz,zones,power,variance\nphase,5e5,0;1,1.0,1.0\n";
    }
    CHECK_THROWS_AS(io::read_measurements_csv(path), DomainError);
    {
        std::ofstream f(path);
        f << "quadrature,rf_hz,zones,power,variance\nphase,5e5,0\n";
    }
    CHECK_THROWS_AS(io::read_measurements_csv(path), DomainError);
    CHECK_THROWS_AS(io::read_measurements_csv(dir.file("absent.csv")), DomainError);
}

TEST_CASE("matrix csv round trip") {
    TempDir dir;
    const NoiseMatrix m = NoiseMatrix::make(Quadrature::Phase, 90476.19047619047, 3,
                                            {2.0, 0.25, -0.5,
                                             0.25, 1.0, 0.125,
                                             -0.5, 0.125, 1.5});
    const std::string path = dir.file("matrix.csv");
    io::write_matrix_csv(path, m);
    const NoiseMatrix back = io::read_matrix_csv(path);
    CHECK(back.quadrature == m.quadrature);
    CHECK(back.rf_hz == doctest::Approx(m.rf_hz).epsilon(1e-11));
    CHECK(back.n == 3);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) {
            CHECK(back.at(i, j) == doctest::Approx(m.at(i, j)).epsilon(1e-11));
            CHECK(back.at(i, j) == back.at(j, i));
        }
}

TEST_CASE("eigen table content") {
    TempDir dir;
    const NoiseMatrix m =
        NoiseMatrix::make(Quadrature::Amplitude, 2e4, 2, {2.0, 1.0, 1.0, 2.0});
    const EigenDecomposition e = eig_sym(m);
    const std::string path = dir.file("eigen.csv");
    io::write_eigen_csv(path, m, e);

    std::ifstream f(path);
    std::string line;
    std::getline(f, line);
    CHECK(line == "# quadrature = amplitude");
    std::getline(f, line);
    CHECK(line == "# rf_hz = 20000");
    std::getline(f, line);
    CHECK(line == "eigenvalue,c0,c1");
    std::getline(f, line);
    CHECK(line.substr(0, 2) == "3,");
}

TEST_CASE("trace csv round trip") {
    TempDir dir;
    PsdTrace t;
    t.label = TraceLabel::Rep;
    t.units = PsdUnits::DbcPerHz;
    t.rbw_hz = 1000.0;
    t.points = {{2e4, -141.25, QualityFlag::HighCorrection},
                {5e5, -150.5, QualityFlag::Ok}};
    const std::string path = dir.file("trace.csv");
    io::write_trace_csv(path, t);
    const PsdTrace back = io::read_trace_csv(path);
    CHECK(back.label == t.label);
    CHECK(back.units == t.units);
    REQUIRE(back.rbw_hz.has_value());
    CHECK(*back.rbw_hz == 1000.0);
    REQUIRE(back.points.size() == 2);
    CHECK(back.points[0].f_hz == 2e4);
    CHECK(back.points[0].value == -141.25);
    CHECK(back.points[0].flag == QualityFlag::HighCorrection);
    CHECK(back.points[1].flag == QualityFlag::Ok);

    // header lines are mandatory
    {
        std::ofstream f(dir.file("naked.csv"));
        f << "f_hz,value,quality_flag\n1e4,1.0,ok\n";
    }
    CHECK_THROWS_AS(io::read_trace_csv(dir.file("naked.csv")), DomainError);
}

TEST_CASE("geometry round trip") {
    TempDir dir;
    const FrequencyGrid g = wavelength_uniform_grid(795e-9, 36e-9, 40);
    io::Geometry geo;
    geo.envelope = gaussian_envelope(795e-9, 6e-9, g);
    geo.bands = partition(geo.envelope, 4);

    const std::string path = dir.file("geometry.json");
    io::write_geometry(path, geo);
    const io::Geometry back = io::read_geometry(path);
    CHECK(back.envelope.grid.omega0_rad_s == geo.envelope.grid.omega0_rad_s);
    CHECK(back.envelope.grid.offsets_rad_s == geo.envelope.grid.offsets_rad_s);
    CHECK(back.envelope.amplitude == geo.envelope.amplitude);
    CHECK(back.bands.zone_bounds == geo.bands.zone_bounds);
    CHECK(back.bands.powers == geo.bands.powers);
}

TEST_CASE("json errors carry the file location") {
    TempDir dir;
    const std::string path = dir.file("broken.json");
    {
        std::ofstream f(path);
        f << "{\n  \"grid\": [1, 2,\n";
    }
    try {
        io::load_json(path);
        FAIL("expected a parse failure");
    } catch (const DomainError& e) {
        const std::string msg = e.what();
        CHECK(msg.find(path) != std::string::npos);
        CHECK(msg.find("line") != std::string::npos);
    }

    {
        std::ofstream f(path);
        f << "{\"not_grid\": 1}\n";
    }
    try {
        io::read_geometry(path);
        FAIL("expected a schema failure");
    } catch (const DomainError& e) {
        CHECK(std::string(e.what()).find(path) != std::string::npos);
    }
}

TEST_CASE("unwritable output path") {
    CHECK_THROWS_AS(io::write_measurements_csv("/nonexistent_dir_xyz/m.csv", {}), DomainError);
}
