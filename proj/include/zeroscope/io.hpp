#pragma once

#include <string>

#include "zeroscope/detect.hpp"
#include "zeroscope/ppstats.hpp"
#include "zeroscope/signal.hpp"
#include "zeroscope/stft.hpp"
#include "zeroscope/theory.hpp"

namespace zeroscope {

// Every writer places a JSON metadata sidecar at `path` + ".json".  Numbers
// are written with 17 significant digits, so a write/read round trip is
// exact.  Readers throw IoError on missing or malformed files and
// ValidationError when the content violates the format's invariants.

void write_signal_csv(const std::string& path, const Signal& signal);
Signal read_signal_csv(const std::string& path);

// Raster container: 8-byte magic "SPGMv001", one JSON header line, then
// (N+1) x (K/2+1) little-endian float64 values, frame-major.
void write_spectrogram(const std::string& path, const Spectrogram& spg);
Spectrogram read_spectrogram(const std::string& path);

void write_pattern_csv(const std::string& path, const PointPattern& pattern);
PointPattern read_pattern_csv(const std::string& path);

void write_curve_csv(const std::string& path, const FunctionalCurve& curve);
FunctionalCurve read_curve_csv(const std::string& path);

void write_theory_csv(const std::string& path, const TheoryCurve& curve);

// Envelope test result with the configuration that produced it.
void write_test_json(const std::string& path, const EnvelopeTestResult& result,
                     const TestConfig& cfg);

void write_envelope_csv(const std::string& path, const std::vector<EnvelopeRow>& rows);

void write_power_csv(const std::string& path, const std::vector<PowerEstimate>& rows);

std::string format_double(double x);  // shortest 17-significant-digit form

}  // namespace zeroscope
