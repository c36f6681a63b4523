#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rungscope/spectra.hpp"

namespace rungscope {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Fixed-point decimal with 17 significant digits; -0 prints as 0 and zero
/// as 0.0000000000000000. Never uses exponent notation.
std::string format_fixed17(double x);

/// Lowercase hex SHA-256 of a byte string.
std::string sha256_hex(std::string_view bytes);

/// Header `omega_offset_GHz,intensity,g2`, one row per mode, `\n` endings,
/// masked g2 as an empty field.
std::string spectrum_csv(const Spectrum& spectrum);

struct WrittenFile {
  std::filesystem::path path;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

/// Writes bytes and returns their digest. Throws IoError.
WrittenFile write_file(const std::filesystem::path& path, std::string_view bytes);

WrittenFile write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path);

/// Generic CSV: header plus rows of preformatted cells.
std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

struct PlotMarker {
  double offset = 0.0;
  std::string label;
};

/// Two stacked line plots, I(omega) (linear) and g2(omega) (log10), sharing
/// the frequency axis, with dashed vertical markers.
std::string spectrum_svg(const Spectrum& spectrum, const std::vector<PlotMarker>& markers,
                         std::string_view title);

struct RunManifest {
  std::string command;
  std::string spec_text;  // rendered RunSpec
  double wall_time_s = 0.0;
  /// Convergence and audit numbers (dt, excitation drift, ...), in order.
  std::vector<std::pair<std::string, double>> diagnostics;
  std::vector<std::pair<std::string, std::string>> notes;
  std::vector<WrittenFile> outputs;
};

/// JSON document listing every output with its digest. Paths are stored
/// relative to the manifest's directory.
std::string manifest_json(const RunManifest& manifest, const std::filesystem::path& manifest_dir);

}  // namespace rungscope
