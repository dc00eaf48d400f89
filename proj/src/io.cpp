#include "zeroscope/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace zeroscope {

namespace {

using nlohmann::json;

constexpr char kRasterMagic[8] = {'S', 'P', 'G', 'M', 'v', '0', '0', '1'};

std::ofstream open_out(const std::string& path, bool binary = false) {
  std::ofstream f(path, binary ? std::ios::binary : std::ios::out);
  if (!f) throw IoError("cannot open for writing: " + path);
  return f;
}

std::ifstream open_in(const std::string& path, bool binary = false) {
  std::ifstream f(path, binary ? std::ios::binary : std::ios::in);
  if (!f) throw IoError("cannot open for reading: " + path);
  return f;
}

void write_sidecar(const std::string& path, const json& meta) {
  auto f = open_out(path + ".json");
  f << meta.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path + ".json");
}

json read_sidecar(const std::string& path) {
  auto f = open_in(path + ".json");
  json meta;
  try {
    f >> meta;
  } catch (const json::exception& e) {
    throw IoError("bad metadata sidecar for " + path + ": " + e.what());
  }
  return meta;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  return out;
}

double parse_double(const std::string& s, const std::string& path) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw IoError("bad number '" + s + "' in " + path);
  return v;
}

std::vector<std::vector<double>> read_csv(const std::string& path,
                                          const std::string& expected_header,
                                          std::size_t min_cols, std::size_t max_cols,
                                          std::string* header_out = nullptr) {
  auto f = open_in(path);
  std::string line;
  if (!std::getline(f, line)) throw IoError("empty file: " + path);
  if (header_out) {
    *header_out = line;
  } else if (line != expected_header) {
    throw IoError("unexpected header in " + path + ": " + line);
  }
  std::vector<std::vector<double>> rows;
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() < min_cols || fields.size() > max_cols) {
      throw IoError("unexpected column count in " + path);
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& s : fields) row.push_back(parse_double(s, path));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_signal_csv(const std::string& path, const Signal& signal) {
  auto f = open_out(path);
  const bool complex = signal.kind == SignalKind::Complex;
  f << (complex ? "t,re,im\n" : "t,re\n");
  const double dt = 1.0 / signal.fs;
  for (std::size_t i = 0; i < signal.samples.size(); ++i) {
    f << format_double(static_cast<double>(i) * dt) << ',' << format_double(signal.samples[i].real());
    if (complex) f << ',' << format_double(signal.samples[i].imag());
    f << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
  write_sidecar(path, json{{"fs", signal.fs}, {"kind", complex ? "complex" : "real"}});
}

Signal read_signal_csv(const std::string& path) {
  const json meta = read_sidecar(path);
  Signal out;
  try {
    out.fs = meta.at("fs").get<double>();
    const std::string kind = meta.at("kind").get<std::string>();
    if (kind == "real") {
      out.kind = SignalKind::Real;
    } else if (kind == "complex") {
      out.kind = SignalKind::Complex;
    } else {
      throw IoError("unknown signal kind: " + kind);
    }
  } catch (const json::exception& e) {
    throw IoError("bad signal sidecar for " + path + ": " + e.what());
  }
  if (!(out.fs > 0.0)) throw ValidationError("signal sidecar has nonpositive fs");
  std::string header;
  const auto rows = read_csv(path, "", 2, 3, &header);
  const bool complex = out.kind == SignalKind::Complex;
  if (header != (complex ? "t,re,im" : "t,re")) {
    throw IoError("signal header does not match its sidecar kind in " + path);
  }
  out.samples.reserve(rows.size());
  for (const auto& row : rows) {
    if (row.size() != (complex ? 3u : 2u)) {
      throw IoError("unexpected column count in " + path);
    }
    out.samples.emplace_back(row[1], complex ? row[2] : 0.0);
  }
  return out;
}

void write_spectrogram(const std::string& path, const Spectrogram& spg) {
  const GridSpec& g = spg.grid;
  if (spg.values.size() != (g.N + 1) * (g.K / 2 + 1)) {
    throw ValidationError("spectrogram values do not match its grid");
  }
  auto f = open_out(path, true);
  f.write(kRasterMagic, sizeof(kRasterMagic));
  const json header = {
      {"N", g.N},
      {"K", g.K},
      {"a", g.a},
      {"fs", g.fs},
      {"crop", {g.crop_n0(), g.crop_n1(), g.crop_k0(), g.crop_k1()}},
  };
  const std::string head = header.dump();
  f << head << '\n';
  f.write(reinterpret_cast<const char*>(spg.values.data()),
          static_cast<std::streamsize>(spg.values.size() * sizeof(double)));
  if (!f) throw IoError("write failed: " + path);
  write_sidecar(path, header);
}

Spectrogram read_spectrogram(const std::string& path) {
  auto f = open_in(path, true);
  char magic[8];
  f.read(magic, sizeof(magic));
  if (!f || std::memcmp(magic, kRasterMagic, sizeof(magic)) != 0) {
    throw IoError("not a raster file (bad magic): " + path);
  }
  std::string head;
  if (!std::getline(f, head)) throw IoError("missing raster header: " + path);
  Spectrogram out;
  double fs_header = 0.0;
  try {
    const json header = json::parse(head);
    out.grid = GridSpec::from_a(header.at("N").get<std::size_t>(),
                                header.at("K").get<std::size_t>(),
                                header.at("a").get<double>());
    fs_header = header.at("fs").get<double>();
  } catch (const json::exception& e) {
    throw IoError("bad raster header in " + path + ": " + e.what());
  }
  if (std::fabs(fs_header - out.grid.fs) > 1e-9 * out.grid.fs) {
    throw IoError("raster header fs does not match a * sqrt(K): " + path);
  }
  const std::size_t count = (out.grid.N + 1) * (out.grid.K / 2 + 1);
  out.values.resize(count);
  f.read(reinterpret_cast<char*>(out.values.data()),
         static_cast<std::streamsize>(count * sizeof(double)));
  if (!f || f.gcount() != static_cast<std::streamsize>(count * sizeof(double))) {
    throw IoError("raster payload truncated: " + path);
  }
  return out;
}

void write_pattern_csv(const std::string& path, const PointPattern& pattern) {
  auto f = open_out(path);
  f << "u,v\n";
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    f << format_double(pattern.u[i]) << ',' << format_double(pattern.v[i]) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
  const Window& w = pattern.window;
  write_sidecar(path, json{{"window", {w.u0, w.u1, w.v0, w.v1}}});
}

PointPattern read_pattern_csv(const std::string& path) {
  const json meta = read_sidecar(path);
  PointPattern out;
  try {
    const auto w = meta.at("window");
    out.window = Window{w.at(0).get<double>(), w.at(1).get<double>(), w.at(2).get<double>(),
                        w.at(3).get<double>()};
  } catch (const json::exception& e) {
    throw IoError("bad pattern sidecar for " + path + ": " + e.what());
  }
  for (const auto& row : read_csv(path, "u,v", 2, 2)) {
    out.u.push_back(row[0]);
    out.v.push_back(row[1]);
  }
  return out;
}

void write_curve_csv(const std::string& path, const FunctionalCurve& curve) {
  auto f = open_out(path);
  f << "r,value\n";
  for (std::size_t i = 0; i < curve.r.size(); ++i) {
    f << format_double(curve.r[i]) << ',' << format_double(curve.value[i]) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
  write_sidecar(path, json{{"statistic", curve.statistic},
                           {"correction", curve.correction},
                           {"n_points", curve.n_points},
                           {"truncated", curve.truncated}});
}

FunctionalCurve read_curve_csv(const std::string& path) {
  const json meta = read_sidecar(path);
  FunctionalCurve out;
  try {
    out.statistic = meta.at("statistic").get<std::string>();
    out.correction = meta.at("correction").get<std::string>();
    out.n_points = meta.at("n_points").get<std::size_t>();
    out.truncated = meta.at("truncated").get<bool>();
  } catch (const json::exception& e) {
    throw IoError("bad curve sidecar for " + path + ": " + e.what());
  }
  for (const auto& row : read_csv(path, "r,value", 2, 2)) {
    out.r.push_back(row[0]);
    out.value.push_back(row[1]);
  }
  return out;
}

void write_theory_csv(const std::string& path, const TheoryCurve& curve) {
  auto f = open_out(path);
  f << "r,value\n";
  for (std::size_t i = 0; i < curve.r.size(); ++i) {
    f << format_double(curve.r[i]) << ',' << format_double(curve.value[i]) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
  write_sidecar(path, json{{"statistic", curve.kind},
                           {"correction", "none"},
                           {"n_points", 0},
                           {"truncated", false}});
}

namespace {

json config_json(const TestConfig& cfg) {
  return json{
      {"statistic", cfg.statistic == Statistic::L ? "L" : "F"},
      {"norm", cfg.norm == Norm::Sup ? "sup" : "two"},
      {"r_min", cfg.r_min},
      {"r_max", cfg.r_max},
      {"m", cfg.m},
      {"k", cfg.k},
      {"null_curve",
       cfg.null_curve == NullCurve::Theoretical ? "theoretical" : "pointwise_average"},
      {"N", cfg.grid.N},
      {"K", cfg.grid.K},
      {"a", cfg.grid.a},
      {"fs", cfg.grid.fs},
      {"seed", cfg.seed},
  };
}

}  // namespace

void write_test_json(const std::string& path, const EnvelopeTestResult& result,
                     const TestConfig& cfg) {
  json doc{
      {"alpha", result.alpha},
      {"t_exp", result.t_exp},
      {"t_sorted", result.t_sorted},
      {"rank", result.rank},
      {"reject", result.reject},
      {"config", config_json(cfg)},
  };
  auto f = open_out(path);
  f << doc.dump(2) << '\n';
  if (!f) throw IoError("write failed: " + path);
}

void write_envelope_csv(const std::string& path, const std::vector<EnvelopeRow>& rows) {
  auto f = open_out(path);
  f << "r_max,t_exp,t_k\n";
  for (const auto& row : rows) {
    f << format_double(row.r_max) << ',' << format_double(row.t_exp) << ','
      << format_double(row.t_k) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
}

void write_power_csv(const std::string& path, const std::vector<PowerEstimate>& rows) {
  auto f = open_out(path);
  f << "r_max,beta_hat,cp_lo,cp_hi\n";
  for (const auto& row : rows) {
    f << format_double(row.r_max) << ',' << format_double(row.beta_hat) << ','
      << format_double(row.ci_lo) << ',' << format_double(row.ci_hi) << '\n';
  }
  if (!f) throw IoError("write failed: " + path);
  json meta;
  if (!rows.empty()) {
    std::vector<int> rej;
    for (const auto& r : rows) rej.push_back(r.rejections);
    meta = json{{"snr", rows.front().snr},
                {"reps", rows.front().reps},
                {"bonferroni_m", rows.front().bonferroni_m},
                {"rejections", rej}};
  }
  write_sidecar(path, meta);
}

}  // namespace zeroscope
