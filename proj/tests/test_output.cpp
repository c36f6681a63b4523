#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rungscope/errors.hpp"
#include "rungscope/output.hpp"

using namespace rungscope;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rungscope_test_output_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Spectrum tiny_spectrum() {
  Spectrum sp;
  sp.omega = Eigen::Vector3d(-1.5, 0.0, 2.25);
  sp.intensity = Eigen::Vector3d(1e-3, 0.0, 0.5);
  sp.g2 = {std::optional<double>(2.5), std::nullopt, std::optional<double>(1234.5)};
  return sp;
}

}  // namespace

TEST(Fixed17, Format) {
  EXPECT_EQ(format_fixed17(0.0), "0.0000000000000000");
  EXPECT_EQ(format_fixed17(-0.0), "0.0000000000000000");
  EXPECT_EQ(format_fixed17(1.0), "1.0000000000000000");
  EXPECT_EQ(format_fixed17(-2.5), "-2.5000000000000000");
  EXPECT_EQ(format_fixed17(1234.5), "1234.5000000000000");
  EXPECT_EQ(format_fixed17(1e-3), "0.0010000000000000000");
  const auto tiny = format_fixed17(3.0e-12);
  EXPECT_EQ(tiny.find('e'), std::string::npos);
  EXPECT_DOUBLE_EQ(std::stod(tiny), 3.0e-12);
  const double x = 0.1 + 0.2;
  EXPECT_EQ(std::stod(format_fixed17(x)), x);
}

TEST(SpectrumCsv, HeaderOnlyForEmptyGrid) {
  EXPECT_EQ(spectrum_csv(Spectrum{}), "omega_offset_GHz,intensity,g2\n");
}

TEST(SpectrumCsv, RowsAndMaskedField) {
  const auto csv = spectrum_csv(tiny_spectrum());
  EXPECT_EQ(csv,
            "omega_offset_GHz,intensity,g2\n"
            "-1.5000000000000000,0.0010000000000000000,2.5000000000000000\n"
            "0.0000000000000000,0.0000000000000000,\n"
            "2.2500000000000000,0.50000000000000000,1234.5000000000000\n");
  EXPECT_EQ(csv.find('\r'), std::string::npos);
}

TEST(Sha256, KnownDigests) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST(WriteFile, DigestsAreDeterministic) {
  const auto dir = scratch_dir("digest");
  const auto a = write_spectrum_csv(tiny_spectrum(), dir / "a.csv");
  const auto b = write_spectrum_csv(tiny_spectrum(), dir / "b.csv");
  EXPECT_EQ(a.sha256, b.sha256);
  EXPECT_EQ(a.bytes, fs::file_size(dir / "a.csv"));
  EXPECT_EQ(sha256_hex(slurp(dir / "a.csv")), a.sha256);
  fs::remove_all(dir);
}

TEST(WriteFile, UnwritablePathThrowsIoError) {
  EXPECT_THROW(write_file("/nonexistent_dir_rungscope/x.csv", "x"), IoError);
}

TEST(CsvText, JoinsCells) {
  EXPECT_EQ(csv_text({"a", "b"}, {{"1", "2"}, {"3", ""}}), "a,b\n1,2\n3,\n");
}

TEST(Manifest, ListsOutputsWithMatchingDigests) {
  const auto dir = scratch_dir("manifest");
  fs::create_directories(dir / "sub");
  RunManifest m;
  m.command = "simulate";
  m.spec_text = "scenario = disk\n";
  m.diagnostics = {{"dt", 0.001}, {"drift", NAN}};
  m.notes = {{"scenario", "disk"}};
  m.outputs.push_back(write_spectrum_csv(tiny_spectrum(), dir / "spectrum.csv"));
  m.outputs.push_back(write_file(dir / "sub" / "notes.txt", "hello\n"));
  const auto doc = nlohmann::json::parse(manifest_json(m, dir));
  EXPECT_EQ(doc["tool"], "rungscope");
  EXPECT_EQ(doc["version"], std::string(kToolVersion));
  EXPECT_EQ(doc["command"], "simulate");
  EXPECT_DOUBLE_EQ(doc["diagnostics"]["dt"].get<double>(), 0.001);
  EXPECT_TRUE(doc["diagnostics"]["drift"].is_null());
  ASSERT_EQ(doc["outputs"].size(), 2u);
  EXPECT_EQ(doc["outputs"][1]["path"], "sub/notes.txt");
  for (const auto& entry : doc["outputs"]) {
    const auto path = dir / entry["path"].get<std::string>();
    EXPECT_EQ(sha256_hex(slurp(path)), entry["sha256"].get<std::string>());
    EXPECT_EQ(fs::file_size(path), entry["bytes"].get<std::uintmax_t>());
  }
  fs::remove_all(dir);
}

TEST(Svg, ContainsPlotsAndMarkers) {
  const auto svg = spectrum_svg(tiny_spectrum(), {{-1.0, "-g"}, {0.5, "2nd-"}}, "disk");
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("2nd-"), std::string::npos);
  EXPECT_NE(svg.find("disk"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}
