#pragma once

#include <filesystem>
#include <string>

#include "gaborpr/analysis.hpp"
#include "gaborpr/retrieval.hpp"
#include "gaborpr/sampling.hpp"
#include "gaborpr/signal.hpp"

namespace gaborpr::io {

// All writers emit UTF-8 with LF line endings and full-precision numbers, so
// every file re-parses to bit-identical values. Read failures throw
// ParseError.

void write_signal(const std::filesystem::path& path,
                  const BandlimitedSignal& signal);
BandlimitedSignal read_signal(const std::filesystem::path& path);

void write_measurements(const std::filesystem::path& path,
                        const MagnitudeSamples& samples);
MagnitudeSamples read_measurements(const std::filesystem::path& path);

void write_report(const std::filesystem::path& path,
                  const ReconstructionResult& result);
// The report stores coefficients only; the caller supplies the bandwidth.
ReconstructionResult read_report(const std::filesystem::path& path,
                                 double bandwidth);

void write_zeros(const std::filesystem::path& path, const ZeroSet& zeros);
ZeroSet read_zeros(const std::filesystem::path& path);

void write_zalik(const std::filesystem::path& path, const ZalikReport& report);
ZalikReport read_zalik(const std::filesystem::path& path);

// Full-precision double formatting shared by the CSV writers (%.17g).
std::string format_double(double v);

}  // namespace gaborpr::io
