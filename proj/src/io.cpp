#include "gaborpr/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

#include "gaborpr/errors.hpp"

namespace gaborpr::io {

namespace {

using nlohmann::json;

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path.string());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot open " + path.string() + " for writing");
    return out;
}

double parse_double(const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    double v = std::strtod(c, &end);
    if (end == c || *end != '\0') {
        throw ParseError("bad number '" + s + "'");
    }
    return v;
}

long parse_long(const std::string& s) {
    const char* c = s.c_str();
    char* end = nullptr;
    long v = std::strtol(c, &end, 10);
    if (end == c || *end != '\0') {
        throw ParseError("bad integer '" + s + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

// Bandwidth metadata keeps the lattice exact across tools: emit num/den when
// an exact small-denominator form reproduces the double bit for bit.
std::string format_bandwidth(double b) {
    for (long den = 1; den <= 1000000; ++den) {
        double num = std::round(b * static_cast<double>(den));
        if (std::abs(num) > 9.007199254740992e15) break;
        if (num / static_cast<double>(den) == b) {
            std::ostringstream os;
            os << static_cast<long long>(num) << "/" << den;
            return os.str();
        }
    }
    return format_double(b);
}

double parse_bandwidth(const std::string& s) {
    size_t slash = s.find('/');
    if (slash == std::string::npos) return parse_double(s);
    double num = static_cast<double>(parse_long(s.substr(0, slash)));
    double den = static_cast<double>(parse_long(s.substr(slash + 1)));
    if (den == 0.0) throw ParseError("zero denominator in bandwidth");
    return num / den;
}

json parse_json(const std::filesystem::path& path) {
    try {
        return json::parse(slurp(path));
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::vector<cdouble> coeffs_from_json(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.empty() || j.size() % 2 == 0) {
        throw ParseError(ctx + ": coeffs must be a nonempty odd-length array");
    }
    std::vector<cdouble> coeffs;
    coeffs.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
            !e[1].is_number()) {
            throw ParseError(ctx + ": each coefficient must be [re, im]");
        }
        coeffs.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return coeffs;
}

json coeffs_to_json(const std::vector<cdouble>& coeffs) {
    json arr = json::array();
    for (cdouble c : coeffs) arr.push_back({c.real(), c.imag()});
    return arr;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_signal(const std::filesystem::path& path,
                  const BandlimitedSignal& signal) {
    json j;
    j["bandwidth"] = signal.bandwidth;
    j["coeffs"] = coeffs_to_json(signal.coeffs);
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

BandlimitedSignal read_signal(const std::filesystem::path& path) {
    json j = parse_json(path);
    if (!j.is_object() || !j.contains("bandwidth") || !j.contains("coeffs")) {
        throw ParseError(path.string() +
                         ": expected {\"bandwidth\", \"coeffs\"}");
    }
    if (!j["bandwidth"].is_number()) {
        throw ParseError(path.string() + ": bandwidth must be a number");
    }
    double b = j["bandwidth"].get<double>();
    if (!(b > 0.0) || !std::isfinite(b)) {
        throw ParseError(path.string() + ": bandwidth must be positive");
    }
    return make_signal(b, coeffs_from_json(j["coeffs"], path.string()));
}

void write_measurements(const std::filesystem::path& path,
                        const MagnitudeSamples& samples) {
    const MeasurementGrid& g = samples.grid;
    auto out = open_out(path);
    out << "# gaborpr measurement v1\n";
    out << "# bandwidth=" << format_bandwidth(g.bandwidth)
        << " omega0=" << format_double(g.omega0)
        << " omega1=" << format_double(g.omega1)
        << " half_count=" << g.half_count << "\n";
    out << "n,x,omega,value\n";
    for (int j = 0; j < 2; ++j) {
        for (int n = -g.half_count; n <= g.half_count; ++n) {
            out << n << "," << format_double(g.x(n)) << ","
                << format_double(g.omega(j)) << ","
                << format_double(
                       samples.values[j][static_cast<size_t>(n + g.half_count)])
                << "\n";
        }
    }
}

MagnitudeSamples read_measurements(const std::filesystem::path& path) {
    std::istringstream in(slurp(path));
    std::string line;
    double bandwidth = 0, omega0 = 0, omega1 = 0;
    long half_count = -1;
    bool have_meta = false;

    while (std::getline(in, line) && !line.empty() && line[0] == '#') {
        std::istringstream ls(line.substr(1));
        std::string tok;
        while (ls >> tok) {
            size_t eq = tok.find('=');
            if (eq == std::string::npos) continue;
            std::string key = tok.substr(0, eq);
            std::string val = tok.substr(eq + 1);
            if (key == "bandwidth") bandwidth = parse_bandwidth(val);
            else if (key == "omega0") omega0 = parse_double(val);
            else if (key == "omega1") omega1 = parse_double(val);
            else if (key == "half_count") half_count = parse_long(val);
            have_meta = true;
        }
    }
    if (!have_meta || half_count < 1) {
        throw ParseError(path.string() + ": missing measurement metadata");
    }
    if (line != "n,x,omega,value") {
        throw ParseError(path.string() + ": expected header n,x,omega,value");
    }

    MeasurementGrid grid =
        make_grid(bandwidth, omega0, omega1, static_cast<int>(half_count));
    MagnitudeSamples samples;
    samples.grid = grid;
    size_t rows = static_cast<size_t>(2 * half_count + 1);
    samples.values[0].assign(rows, 0.0);
    samples.values[1].assign(rows, 0.0);

    for (int j = 0; j < 2; ++j) {
        for (int n = -grid.half_count; n <= grid.half_count; ++n) {
            if (!std::getline(in, line)) {
                throw ParseError(path.string() + ": truncated measurement file");
            }
            auto cols = split(line, ',');
            if (cols.size() != 4) {
                throw ParseError(path.string() + ": bad row '" + line + "'");
            }
            if (parse_long(cols[0]) != n) {
                throw ParseError(path.string() +
                                 ": rows must be sorted by (omega, n)");
            }
            if (parse_double(cols[1]) != grid.x(n)) {
                throw ParseError(path.string() +
                                 ": x column disagrees with n/(4B)");
            }
            if (parse_double(cols[2]) != grid.omega(j)) {
                throw ParseError(path.string() +
                                 ": omega column disagrees with the bin");
            }
            double v = parse_double(cols[3]);
            if (!(v >= 0.0)) {
                throw ParseError(path.string() +
                                 ": magnitude samples must be nonnegative");
            }
            samples.values[j][static_cast<size_t>(n + grid.half_count)] = v;
        }
    }
    while (std::getline(in, line)) {
        if (!line.empty()) {
            throw ParseError(path.string() + ": trailing rows after the grid");
        }
    }
    return samples;
}

void write_report(const std::filesystem::path& path,
                  const ReconstructionResult& result) {
    json j;
    j["loss"] = result.loss;
    j["converged"] = result.converged;
    j["iterations"] = result.iterations;
    j["start_index"] = result.start_index;
    j["coeffs"] = coeffs_to_json(result.signal.coeffs);
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

ReconstructionResult read_report(const std::filesystem::path& path,
                                 double bandwidth) {
    json j = parse_json(path);
    for (const char* key :
         {"loss", "converged", "iterations", "start_index", "coeffs"}) {
        if (!j.is_object() || !j.contains(key)) {
            throw ParseError(path.string() + ": report missing key '" +
                             key + "'");
        }
    }
    if (!j["loss"].is_number() || !j["converged"].is_boolean() ||
        !j["iterations"].is_number_integer() ||
        !j["start_index"].is_number_integer()) {
        throw ParseError(path.string() + ": report field has the wrong type");
    }
    ReconstructionResult r;
    r.signal =
        make_signal(bandwidth, coeffs_from_json(j["coeffs"], path.string()));
    r.loss = j["loss"].get<double>();
    r.converged = j["converged"].get<bool>();
    r.iterations = j["iterations"].get<int>();
    r.start_index = j["start_index"].get<int>();
    return r;
}

void write_zeros(const std::filesystem::path& path, const ZeroSet& zeros) {
    auto out = open_out(path);
    out << "# gaborpr zeros v1\n";
    out << "# residual=" << format_double(zeros.residual) << "\n";
    out << "re,im,multiplicity\n";
    for (const auto& e : zeros.entries) {
        out << format_double(e.location.real()) << ","
            << format_double(e.location.imag()) << "," << e.multiplicity
            << "\n";
    }
}

ZeroSet read_zeros(const std::filesystem::path& path) {
    std::istringstream in(slurp(path));
    std::string line;
    ZeroSet zs;
    while (std::getline(in, line) && !line.empty() && line[0] == '#') {
        std::istringstream ls(line.substr(1));
        std::string tok;
        while (ls >> tok) {
            size_t eq = tok.find('=');
            if (eq != std::string::npos && tok.substr(0, eq) == "residual") {
                zs.residual = parse_double(tok.substr(eq + 1));
            }
        }
    }
    if (line != "re,im,multiplicity") {
        throw ParseError(path.string() + ": expected header re,im,multiplicity");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cols = split(line, ',');
        if (cols.size() != 3) {
            throw ParseError(path.string() + ": bad row '" + line + "'");
        }
        ZeroEntry e;
        e.location = cdouble(parse_double(cols[0]), parse_double(cols[1]));
        e.multiplicity = static_cast<int>(parse_long(cols[2]));
        if (e.multiplicity < 1) {
            throw ParseError(path.string() + ": multiplicity must be positive");
        }
        zs.entries.push_back(e);
    }
    return zs;
}

void write_zalik(const std::filesystem::path& path, const ZalikReport& report) {
    json j;
    j["partial_sums"] = report.partial_sums;
    j["delta"] = report.delta;
    j["N0"] = report.N0;
    j["divergence_verdict"] = report.divergence_verdict;
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

ZalikReport read_zalik(const std::filesystem::path& path) {
    json j = parse_json(path);
    for (const char* key : {"partial_sums", "delta", "N0", "divergence_verdict"}) {
        if (!j.is_object() || !j.contains(key)) {
            throw ParseError(path.string() + ": zalik report missing key '" +
                             key + "'");
        }
    }
    ZalikReport r;
    if (!j["partial_sums"].is_array() || !j["delta"].is_number() ||
        !j["N0"].is_number_integer() || !j["divergence_verdict"].is_boolean()) {
        throw ParseError(path.string() + ": zalik field has the wrong type");
    }
    for (const auto& e : j["partial_sums"]) {
        if (!e.is_number()) {
            throw ParseError(path.string() + ": partial_sums must be numbers");
        }
        r.partial_sums.push_back(e.get<double>());
    }
    r.delta = j["delta"].get<double>();
    r.N0 = j["N0"].get<int>();
    r.divergence_verdict = j["divergence_verdict"].get<bool>();
    return r;
}

}  // namespace gaborpr::io
