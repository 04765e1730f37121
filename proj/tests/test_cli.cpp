#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

namespace {

const std::string cli = COMBNOISE_CLI_PATH;
const std::string config_dir = COMBNOISE_CONFIG_DIR;

struct TempDir {
    std::string path;
    TempDir() {
        char tmpl[] = "/tmp/combnoise_cli_XXXXXX";
        path = mkdtemp(tmpl);
    }
    std::string operator/(const std::string& name) const { return path + "/" + name; }
};

int run(const std::string& args, const std::string& log) {
    std::string cmd = cli + " " + args + " >" + log + " 2>&1";
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool exists(const std::string& path) {
    struct stat st;
    return ::stat(path.c_str(), &st) == 0;
}

// value column of the first data row of a trace csv
double first_trace_value(const std::string& path) {
    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#' || line.rfind("f_hz", 0) == 0) continue;
        auto c1 = line.find(',');
        auto c2 = line.find(',', c1 + 1);
        return std::stod(line.substr(c1 + 1, c2 - c1 - 1));
    }
    REQUIRE(false);
    return 0.0;
}

} // namespace

TEST_CASE("version flag") {
    TempDir d;
    REQUIRE(run("--version", d / "log") == 0);
    CHECK(slurp(d / "log").find("0.1.0") != std::string::npos);
}

TEST_CASE("simulate analyze calibrate chain") {
    TempDir d;
    std::string log = d / "log";

    REQUIRE(run("simulate --config " + config_dir + "/demo.json --out-dir " + d.path, log) == 0);
    REQUIRE(exists(d / "measurements.csv"));
    REQUIRE(exists(d / "geometry.json"));
    REQUIRE(exists(d / "simulate_manifest.json"));

    // 5 rf × 2 quadratures × 55 measurements + header
    std::string meas = slurp(d / "measurements.csv");
    std::size_t lines = 0;
    for (char ch : meas)
        if (ch == '\n') ++lines;
    CHECK(lines == 551);

    REQUIRE(run("analyze --geometry " + d / "geometry.json" + " --measurements " +
                    d / "measurements.csv" + " --out-dir " + d.path,
                log) == 0);
    REQUIRE(exists(d / "matrix_phase_f000.csv"));
    REQUIRE(exists(d / "eigen_phase_f000.csv"));
    REQUIRE(exists(d / "matrix_amplitude_f000.csv"));
    REQUIRE(exists(d / "trace_ceo.csv"));
    REQUIRE(exists(d / "trace_rep.csv"));
    REQUIRE(exists(d / "analyze_manifest.json"));

    // demo injects the carrier-offset mode 10 dB above the jitter mode
    double ceo = first_trace_value(d / "trace_ceo.csv");
    double rep = first_trace_value(d / "trace_rep.csv");
    CHECK(ceo > 5.0 * rep);

    REQUIRE(run("calibrate --trace " + d / "trace_ceo.csv" +
                    " --finesse 420 --f-rep-hz 76e6 --power-w 1e-3 --wavelength-nm 795"
                    " --out-dir " +
                    d.path,
                log) == 0);
    REQUIRE(exists(d / "calibrated_ceo.csv"));
    std::string cal = slurp(d / "calibrated_ceo.csv");
    CHECK(cal.find("dbc_hz") != std::string::npos);
}

TEST_CASE("simulate output is deterministic") {
    TempDir a, b;
    REQUIRE(run("simulate --config " + config_dir + "/shot_only.json --out-dir " + a.path,
                a / "log") == 0);
    REQUIRE(run("simulate --config " + config_dir + "/shot_only.json --out-dir " + b.path,
                b / "log") == 0);
    CHECK(slurp(a / "measurements.csv") == slurp(b / "measurements.csv"));
    CHECK(slurp(a / "geometry.json") == slurp(b / "geometry.json"));
}

TEST_CASE("cavity sweep headers") {
    TempDir d;
    REQUIRE(run("cavity --finesse 420 --f-rep-hz 76e6 --out-dir " + d.path, d / "log") == 0);
    std::string sweep = slurp(d / "cavity_sweep.csv");
    CHECK(sweep.find("# f_3db_over_f_c = 1.55377397403") != std::string::npos);
    CHECK(sweep.find("-INF") != std::string::npos);
}

TEST_CASE("exit codes") {
    TempDir d;
    std::string log = d / "log";
    CHECK(run("simulate --config /nonexistent.json --out-dir " + d.path, log) == 2);
    CHECK(run("frobnicate", log) == 2);

    REQUIRE(run("simulate --config " + config_dir + "/shot_only.json --out-dir " + d.path,
                log) == 0);

    // drop one pair row: the protocol is incomplete and analyze must say so
    std::istringstream in(slurp(d / "measurements.csv"));
    std::ofstream out(d / "broken.csv");
    std::string line;
    while (std::getline(in, line))
        if (line.find(",1+2,") == std::string::npos) out << line << "\n";
    out.close();
    CHECK(run("analyze --geometry " + d / "geometry.json" + " --measurements " + d / "broken.csv" +
                  " --out-dir " + d.path,
              log) == 3);
    CHECK(slurp(log).find("missing pair") != std::string::npos);
}
