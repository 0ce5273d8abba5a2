#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <complex>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "gaborpr/analysis.hpp"
#include "gaborpr/errors.hpp"
#include "gaborpr/io.hpp"
#include "gaborpr/retrieval.hpp"
#include "gaborpr/sampling.hpp"
#include "gaborpr/signal.hpp"
#include "gaborpr/transforms.hpp"

using namespace gaborpr;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("gaborpr_io_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    fs::path operator/(const char* name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

int run_cli(const TempDir& dir, const std::string& args) {
    std::string cmd = std::string(GABORPR_CLI_PATH) + " " + args + " > " +
                      (dir / "stdout.txt").string() + " 2> " +
                      (dir / "stderr.txt").string();
    int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    REQUIRE(WIFEXITED(status));
    return WEXITSTATUS(status);
}

void check_same_signal(const BandlimitedSignal& a, const BandlimitedSignal& b) {
    CHECK(a.bandwidth == b.bandwidth);
    REQUIRE(a.coeffs.size() == b.coeffs.size());
    for (size_t i = 0; i < a.coeffs.size(); ++i) CHECK(a.coeffs[i] == b.coeffs[i]);
}

}  // namespace

TEST_CASE("signal JSON round-trips bitwise") {
    TempDir dir;
    for (double B : {0.75, 1.0 / 3.0}) {
        BandlimitedSignal s = random_signal(3, B, 42, false);
        io::write_signal(dir / "s.json", s);
        check_same_signal(io::read_signal(dir / "s.json"), s);
    }
}

TEST_CASE("measurement CSV round-trips bitwise") {
    TempDir dir;
    for (double B : {1.0, 1.0 / 3.0}) {
        BandlimitedSignal s = random_signal(2, B, 9, false);
        MagnitudeSamples samples =
            sample_magnitudes(s, make_grid(B, 0.0, 0.7, 25));
        io::write_measurements(dir / "m.csv", samples);
        MagnitudeSamples back = io::read_measurements(dir / "m.csv");
        CHECK(back.grid.bandwidth == B);
        CHECK(back.grid.omega0 == 0.0);
        CHECK(back.grid.omega1 == 0.7);
        CHECK(back.grid.half_count == 25);
        for (int j = 0; j < 2; ++j) {
            REQUIRE(back.values[j].size() == samples.values[j].size());
            for (size_t i = 0; i < back.values[j].size(); ++i) {
                CHECK(back.values[j][i] == samples.values[j][i]);
            }
        }
    }
}

TEST_CASE("report JSON round-trips bitwise") {
    TempDir dir;
    ReconstructionResult r;
    r.signal = random_signal(2, 0.5, 5, false);
    r.loss = 1.25e-17;
    r.converged = true;
    r.iterations = 37;
    r.start_index = 4;
    io::write_report(dir / "r.json", r);
    ReconstructionResult back = io::read_report(dir / "r.json", 0.5);
    check_same_signal(back.signal, r.signal);
    CHECK(back.loss == r.loss);
    CHECK(back.converged == r.converged);
    CHECK(back.iterations == r.iterations);
    CHECK(back.start_index == r.start_index);
}

TEST_CASE("zeros CSV round-trips bitwise") {
    TempDir dir;
    ZeroSet zs;
    zs.residual = 3.5e-11;
    zs.entries.push_back({cdouble(0.5, -0.3), 2});
    zs.entries.push_back({cdouble(1e-300, 2.75), 1});
    io::write_zeros(dir / "z.csv", zs);
    ZeroSet back = io::read_zeros(dir / "z.csv");
    CHECK(back.residual == zs.residual);
    REQUIRE(back.entries.size() == zs.entries.size());
    for (size_t i = 0; i < back.entries.size(); ++i) {
        CHECK(back.entries[i].location == zs.entries[i].location);
        CHECK(back.entries[i].multiplicity == zs.entries[i].multiplicity);
    }
}

TEST_CASE("zalik JSON round-trips bitwise") {
    TempDir dir;
    ZalikReport rep = zalik_report(cdouble(0.0, 1.0), 0.0, 0.5, 50);
    io::write_zalik(dir / "z.json", rep);
    ZalikReport back = io::read_zalik(dir / "z.json");
    REQUIRE(back.partial_sums.size() == rep.partial_sums.size());
    for (size_t i = 0; i < back.partial_sums.size(); ++i) {
        CHECK(back.partial_sums[i] == rep.partial_sums[i]);
    }
    CHECK(back.delta == rep.delta);
    CHECK(back.N0 == rep.N0);
    CHECK(back.divergence_verdict == rep.divergence_verdict);
}

TEST_CASE("format_double output re-parses to the same bits") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 6.02e23, 0.0}) {
        CHECK(std::strtod(io::format_double(v).c_str(), nullptr) == v);
    }
}

TEST_CASE("malformed signal files raise ParseError") {
    TempDir dir;
    fs::path p = dir / "bad.json";

    CHECK_THROWS_AS(io::read_signal(dir / "missing.json"), ParseError);

    spit(p, "{ not json");
    CHECK_THROWS_AS(io::read_signal(p), ParseError);

    spit(p, "{\"bandwidth\": 1.0}");
    CHECK_THROWS_AS(io::read_signal(p), ParseError);

    spit(p, "{\"bandwidth\": 1.0, \"coeffs\": [[1,0],[2,0]]}");
    CHECK_THROWS_AS(io::read_signal(p), ParseError);

    spit(p, "{\"bandwidth\": -2.0, \"coeffs\": [[1,0]]}");
    CHECK_THROWS_AS(io::read_signal(p), ParseError);

    spit(p, "{\"bandwidth\": 1.0, \"coeffs\": [[1,0,3]]}");
    CHECK_THROWS_AS(io::read_signal(p), ParseError);

    spit(p, "{\"bandwidth\": 1.0, \"coeffs\": [\"one\"]}");
    CHECK_THROWS_AS(io::read_signal(p), ParseError);
}

TEST_CASE("malformed measurement files raise ParseError") {
    TempDir dir;
    fs::path p = dir / "bad.csv";
    const std::string meta =
        "# gaborpr measurement v1\n"
        "# bandwidth=1/2 omega0=0 omega1=0.5 half_count=1\n";
    const std::string header = "n,x,omega,value\n";

    spit(p, header);
    CHECK_THROWS_AS(io::read_measurements(p), ParseError);

    spit(p, meta + "nope\n");
    CHECK_THROWS_AS(io::read_measurements(p), ParseError);

    spit(p, meta + header + "-1,-0.5,0,1\n0,0,0,1\n");
    CHECK_THROWS_AS(io::read_measurements(p), ParseError);

    // x column disagreeing with n/(4B)
    spit(p, meta + header +
                "-1,-0.4,0,1\n0,0,0,1\n1,0.5,0,1\n"
                "-1,-0.5,0.5,1\n0,0,0.5,1\n1,0.5,0.5,1\n");
    CHECK_THROWS_AS(io::read_measurements(p), ParseError);

    // negative magnitude
    spit(p, meta + header +
                "-1,-0.5,0,1\n0,0,0,-3\n1,0.5,0,1\n"
                "-1,-0.5,0.5,1\n0,0,0.5,1\n1,0.5,0.5,1\n");
    CHECK_THROWS_AS(io::read_measurements(p), ParseError);

    // trailing rows
    spit(p, meta + header +
                "-1,-0.5,0,1\n0,0,0,1\n1,0.5,0,1\n"
                "-1,-0.5,0.5,1\n0,0,0.5,1\n1,0.5,0.5,1\n9,9,9,9\n");
    CHECK_THROWS_AS(io::read_measurements(p), ParseError);

    // a valid file parses, as a control on the fixtures above
    spit(p, meta + header +
                "-1,-0.5,0,1\n0,0,0,1\n1,0.5,0,1\n"
                "-1,-0.5,0.5,1\n0,0,0.5,1\n1,0.5,0.5,1\n");
    MagnitudeSamples ok = io::read_measurements(p);
    CHECK(ok.grid.bandwidth == 0.5);
    CHECK(ok.values[1][2] == 1.0);
}

TEST_CASE("malformed report, zeros, and zalik files raise ParseError") {
    TempDir dir;
    fs::path p = dir / "bad";

    spit(p, "{\"loss\": 0.0}");
    CHECK_THROWS_AS(io::read_report(p, 1.0), ParseError);

    spit(p, "{\"loss\": \"tiny\", \"converged\": true, \"iterations\": 1, "
            "\"start_index\": 0, \"coeffs\": [[1,0]]}");
    CHECK_THROWS_AS(io::read_report(p, 1.0), ParseError);

    spit(p, "re,im\n");
    CHECK_THROWS_AS(io::read_zeros(p), ParseError);

    spit(p, "# residual=0\nre,im,multiplicity\n0,0,0\n");
    CHECK_THROWS_AS(io::read_zeros(p), ParseError);

    spit(p, "# residual=0\nre,im,multiplicity\n0,oops,1\n");
    CHECK_THROWS_AS(io::read_zeros(p), ParseError);

    spit(p, "{\"partial_sums\": 3, \"delta\": 1, \"N0\": 0, "
            "\"divergence_verdict\": true}");
    CHECK_THROWS_AS(io::read_zalik(p), ParseError);

    spit(p, "{\"partial_sums\": [1, \"two\"], \"delta\": 1, \"N0\": 0, "
            "\"divergence_verdict\": true}");
    CHECK_THROWS_AS(io::read_zalik(p), ParseError);
}

TEST_CASE("cli pipeline: gen, measure, reconstruct against the truth") {
    TempDir dir;
    fs::path sig = dir / "sig.json";
    fs::path mcsv = dir / "m.csv";
    fs::path rep = dir / "rep.json";

    CHECK(run_cli(dir, "gen --K 2 --seed 11 --out " + sig.string()) == 0);
    BandlimitedSignal s = io::read_signal(sig);
    check_same_signal(s, random_signal(2, 1.0, 11, false));

    CHECK(run_cli(dir, "measure --signal " + sig.string() +
                           " --omega1 0.5 --N 40 --out " + mcsv.string()) == 0);
    MagnitudeSamples expect =
        sample_magnitudes(s, make_grid(1.0, 0.0, 0.5, 40));
    fs::path ref = dir / "ref.csv";
    io::write_measurements(ref, expect);
    CHECK(slurp(mcsv) == slurp(ref));

    // reruns are byte-identical
    fs::path mcsv2 = dir / "m2.csv";
    CHECK(run_cli(dir, "measure --signal " + sig.string() +
                           " --omega1 0.5 --N 40 --out " + mcsv2.string()) == 0);
    CHECK(slurp(mcsv2) == slurp(mcsv));

    std::string rec_args = "reconstruct --measurements " + mcsv.string() +
                           " --K 2 --starts 6 --seed 3 --truth " + sig.string() +
                           " --out ";
    CHECK(run_cli(dir, rec_args + rep.string()) == 0);
    ReconstructionResult r = io::read_report(rep, 1.0);
    CHECK(r.converged);
    CHECK(r.loss <= 1e-12);
    PhaseAlignment align = phase_align(r.signal, s);
    CHECK(align.distance <= 1e-6 * s.norm());

    fs::path rep2 = dir / "rep2.json";
    CHECK(run_cli(dir, rec_args + rep2.string()) == 0);
    CHECK(slurp(rep2) == slurp(rep));
}

TEST_CASE("cli measure accepts a hand-written zero signal") {
    TempDir dir;
    fs::path sig = dir / "zero.json";
    fs::path mcsv = dir / "m.csv";
    spit(sig, "{\"bandwidth\": 1.0, \"coeffs\": [[0,0],[0,0],[0,0]]}\n");
    CHECK(run_cli(dir, "measure --signal " + sig.string() +
                           " --N 12 --out " + mcsv.string()) == 0);
    MagnitudeSamples m = io::read_measurements(mcsv);
    CHECK(m.grid.half_count == 12);
    for (int j = 0; j < 2; ++j) {
        for (double v : m.values[j]) CHECK(v == 0.0);
    }
}

TEST_CASE("cli verify writes an all-pass table") {
    TempDir dir;
    fs::path sig = dir / "sig.json";
    fs::path table = dir / "verify.csv";
    CHECK(run_cli(dir, "gen --K 2 --seed 11 --out " + sig.string()) == 0);
    CHECK(run_cli(dir, "verify --signal " + sig.string() + " --out " +
                           table.string()) == 0);

    std::istringstream in(slurp(table));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "check,pass,metric,threshold");
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ++rows;
        size_t c1 = line.find(',');
        REQUIRE(c1 != std::string::npos);
        CHECK(line.substr(c1 + 1, 2) == "1,");
    }
    CHECK(rows == 8);
}

TEST_CASE("cli counterexample emits the one-bin-blind pair") {
    TempDir dir;
    CHECK(run_cli(dir, "counterexample --seed1 1 --seed2 2 --K 2 --out-dir " +
                           dir.path.string()) == 0);
    BandlimitedSignal u = io::read_signal(dir / "u.json");
    BandlimitedSignal v = io::read_signal(dir / "v.json");
    REQUIRE(u.coeffs.size() == v.coeffs.size());
    for (size_t i = 0; i < u.coeffs.size(); ++i) {
        CHECK(v.coeffs[i] == std::conj(u.coeffs[i]));
    }

    std::istringstream in(slurp(dir / "table.csv"));
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == "x,omega,mag_u,mag_v,discrepancy");
    int rows = 0;
    while (std::getline(in, line)) {
        if (!line.empty()) ++rows;
    }
    CHECK(rows == 202);
}

TEST_CASE("cli zeros matches the in-process zero set") {
    TempDir dir;
    fs::path sig = dir / "sig.json";
    fs::path zcsv = dir / "zeros.csv";
    CHECK(run_cli(dir, "gen --K 2 --seed 11 --out " + sig.string()) == 0);
    CHECK(run_cli(dir, "zeros --signal " + sig.string() +
                           " --re-low -1.5 --re-high 1.5 --im-low -1 "
                           "--im-high 1 --tol 1e-10 --out " +
                           zcsv.string()) == 0);

    BandlimitedSignal s = io::read_signal(sig);
    EntireFn F = [&](cdouble z) { return bargmann_transform(s, z); };
    ZeroSet expect = find_zeros(F, Strip{-1.0, 1.0, -1.5, 1.5}, 1e-10);
    ZeroSet got = io::read_zeros(zcsv);
    REQUIRE(got.entries.size() == expect.entries.size());
    CHECK(got.total_multiplicity() ==
          winding_count(F, Strip{-1.0, 1.0, -1.5, 1.5}));
    for (size_t i = 0; i < got.entries.size(); ++i) {
        CHECK(got.entries[i].location == expect.entries[i].location);
        CHECK(got.entries[i].multiplicity == expect.entries[i].multiplicity);
    }
}

TEST_CASE("cli zalik matches the in-process report") {
    TempDir dir;
    fs::path out = dir / "zalik.json";
    CHECK(run_cli(dir, "zalik --z0-im 1 --tau 0.5 --N 1000 --out " +
                           out.string()) == 0);
    ZalikReport expect = zalik_report(cdouble(0.0, 1.0), 0.0, 0.5, 1000);
    ZalikReport got = io::read_zalik(out);
    REQUIRE(got.partial_sums.size() == expect.partial_sums.size());
    CHECK(got.partial_sums.back() == expect.partial_sums.back());
    CHECK(got.delta == expect.delta);
    CHECK(got.N0 == expect.N0);
    CHECK(got.divergence_verdict == expect.divergence_verdict);
}

TEST_CASE("cli exit codes distinguish the failure classes") {
    TempDir dir;
    fs::path sig = dir / "sig.json";
    CHECK(run_cli(dir, "gen --K 1 --seed 4 --out " + sig.string()) == 0);

    CHECK(run_cli(dir, "--help") == 0);
    CHECK(run_cli(dir, "") == 4);
    CHECK(run_cli(dir, "frobnicate") == 4);
    CHECK(run_cli(dir, "reconstruct --starts 0") == 4);
    CHECK(run_cli(dir, "gen --B -2") == 4);

    CHECK(run_cli(dir, "measure --signal " + (dir / "missing.json").string()) ==
          2);
    fs::path mangled = dir / "mangled.json";
    spit(mangled, "{\"bandwidth\": 1.0");
    CHECK(run_cli(dir, "measure --signal " + mangled.string()) == 2);

    // equal bins violate the grid contract
    CHECK(run_cli(dir, "measure --signal " + sig.string() +
                           " --omega0 0.5 --omega1 0.5 --out " +
                           (dir / "m.csv").string()) == 1);

    // the Bargmann factor overflows past |z| ~ 21
    CHECK(run_cli(dir, "zeros --signal " + sig.string() +
                           " --re-low 21.5 --re-high 23 --im-low -1 "
                           "--im-high 1 --out " +
                           (dir / "z.csv").string()) == 3);

    CHECK(slurp(dir / "stderr.txt").find("overflow guard") !=
          std::string::npos);
}
