#include "rungscope/output.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rungscope/errors.hpp"

namespace rungscope {

std::string format_fixed17(double x) {
  if (x == 0.0) return "0.0000000000000000";
  if (!std::isfinite(x)) return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  const int exponent = static_cast<int>(std::floor(std::log10(std::abs(x))));
  const int decimals = std::max(0, 16 - exponent);
  std::vector<char> buf(static_cast<std::size_t>(decimals) + 400);
  std::snprintf(buf.data(), buf.size(), "%.*f", decimals, x);
  return std::string(buf.data());
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw IoError("sha256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0x0f]);
  }
  return out;
}

std::string spectrum_csv(const Spectrum& spectrum) {
  std::string out = "omega_offset_GHz,intensity,g2\n";
  for (Eigen::Index q = 0; q < spectrum.size(); ++q) {
    out += format_fixed17(spectrum.omega[q]);
    out += ',';
    out += format_fixed17(spectrum.intensity[q]);
    out += ',';
    const auto& g2 = spectrum.g2[static_cast<std::size_t>(q)];
    if (g2) out += format_fixed17(*g2);
    out += '\n';
  }
  return out;
}

WrittenFile write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot open '" + path.string() + "' for writing");
  file.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  file.close();
  if (!file) throw IoError("failed writing '" + path.string() + "'");
  return {path, sha256_hex(bytes), bytes.size()};
}

WrittenFile write_spectrum_csv(const Spectrum& spectrum, const std::filesystem::path& path) {
  return write_file(path, spectrum_csv(spectrum));
}

std::string csv_text(const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto emit = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  emit(header);
  for (const auto& row : rows) emit(row);
  return out;
}

namespace {

struct Panel {
  double x0, y0, width, height;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", x);
  return buf;
}

std::string polyline(const Panel& p, const Eigen::VectorXd& xs, const std::vector<double>& ys,
                     const std::vector<bool>& valid, double xmin, double xmax, double ymin,
                     double ymax) {
  std::string out;
  std::string points;
  auto flush = [&] {
    if (!points.empty()) {
      out += "<polyline fill=\"none\" stroke=\"#1f4e9a\" stroke-width=\"1.2\" points=\"" +
             points + "\"/>\n";
    }
    points.clear();
  };
  const double yspan = ymax > ymin ? ymax - ymin : 1.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    if (!valid[i]) {
      flush();
      continue;
    }
    const double x = p.x0 + (xs[static_cast<Eigen::Index>(i)] - xmin) / (xmax - xmin) * p.width;
    const double y = p.y0 + p.height - (ys[i] - ymin) / yspan * p.height;
    points += num(x) + "," + num(y) + " ";
  }
  flush();
  return out;
}

}  // namespace

std::string spectrum_svg(const Spectrum& spectrum, const std::vector<PlotMarker>& markers,
                         std::string_view title) {
  const double W = 760, H = 560;
  const Panel top{70, 40, 660, 210}, bottom{70, 300, 660, 210};
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"13\">"
      << title << "</text>\n";
  const auto n = static_cast<std::size_t>(spectrum.size());
  if (n < 2) {
    svg << "</svg>\n";
    return svg.str();
  }
  const double xmin = spectrum.omega[0], xmax = spectrum.omega[spectrum.size() - 1];

  std::vector<double> intensity(n), g2log(n);
  std::vector<bool> all(n, true), g2ok(n, false);
  double imax = 0.0, gmin = HUGE_VAL, gmax = -HUGE_VAL;
  for (std::size_t i = 0; i < n; ++i) {
    intensity[i] = spectrum.intensity[static_cast<Eigen::Index>(i)];
    imax = std::max(imax, intensity[i]);
    if (const auto& g = spectrum.g2[i]; g && *g > 0.0) {
      g2ok[i] = true;
      g2log[i] = std::log10(*g);
      gmin = std::min(gmin, g2log[i]);
      gmax = std::max(gmax, g2log[i]);
    }
  }
  if (gmin > gmax) gmin = 0.0, gmax = 1.0;
  gmin = std::floor(gmin);
  gmax = std::max(std::ceil(gmax), gmin + 1.0);

  for (const auto* p : {&top, &bottom}) {
    svg << "<rect x=\"" << p->x0 << "\" y=\"" << p->y0 << "\" width=\"" << p->width
        << "\" height=\"" << p->height << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (const auto& m : markers) {
      if (m.offset < xmin || m.offset > xmax) continue;
      const double x = p->x0 + (m.offset - xmin) / (xmax - xmin) * p->width;
      svg << "<line x1=\"" << num(x) << "\" y1=\"" << p->y0 << "\" x2=\"" << num(x)
          << "\" y2=\"" << p->y0 + p->height
          << "\" stroke=\"#b03a2e\" stroke-dasharray=\"4,3\"/>\n";
      if (p == &top) {
        svg << "<text x=\"" << num(x) << "\" y=\"" << p->y0 - 4
            << "\" text-anchor=\"middle\" fill=\"#b03a2e\">" << m.label << "</text>\n";
      }
    }
    svg << "<text x=\"" << p->x0 << "\" y=\"" << p->y0 + p->height + 14 << "\">" << num(xmin)
        << "</text>\n<text x=\"" << p->x0 + p->width << "\" y=\"" << p->y0 + p->height + 14
        << "\" text-anchor=\"end\">" << num(xmax) << "</text>\n";
  }
  svg << polyline(top, spectrum.omega, intensity, all, xmin, xmax, 0.0, imax);
  svg << polyline(bottom, spectrum.omega, g2log, g2ok, xmin, xmax, gmin, gmax);
  svg << "<text x=\"14\" y=\"" << top.y0 + top.height / 2 << "\" transform=\"rotate(-90 14 "
      << top.y0 + top.height / 2 << ")\" text-anchor=\"middle\">I(omega)</text>\n";
  svg << "<text x=\"14\" y=\"" << bottom.y0 + bottom.height / 2
      << "\" transform=\"rotate(-90 14 " << bottom.y0 + bottom.height / 2
      << ")\" text-anchor=\"middle\">log10 g2(omega)</text>\n";
  svg << "<text x=\"" << bottom.x0 - 4 << "\" y=\"" << bottom.y0 + 10
      << "\" text-anchor=\"end\">" << gmax << "</text>\n<text x=\"" << bottom.x0 - 4
      << "\" y=\"" << bottom.y0 + bottom.height << "\" text-anchor=\"end\">" << gmin
      << "</text>\n";
  svg << "<text x=\"" << W / 2 << "\" y=\"" << H - 10
      << "\" text-anchor=\"middle\">offset from cavity resonance (GHz)</text>\n</svg>\n";
  return svg.str();
}

std::string manifest_json(const RunManifest& manifest, const std::filesystem::path& manifest_dir) {
  nlohmann::ordered_json doc;
  doc["tool"] = "rungscope";
  doc["version"] = std::string(kToolVersion);
  doc["command"] = manifest.command;
  doc["spec"] = manifest.spec_text;
  doc["wall_time_s"] = manifest.wall_time_s;
  auto& diag = doc["diagnostics"] = nlohmann::ordered_json::object();
  for (const auto& [key, value] : manifest.diagnostics) {
    if (std::isfinite(value)) diag[key] = value;
    else diag[key] = nullptr;
  }
  for (const auto& [key, value] : manifest.notes) diag[key] = value;
  auto& files = doc["outputs"] = nlohmann::ordered_json::array();
  for (const auto& f : manifest.outputs) {
    files.push_back({{"path", f.path.lexically_relative(manifest_dir).generic_string()},
                     {"sha256", f.sha256},
                     {"bytes", f.bytes}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace rungscope
