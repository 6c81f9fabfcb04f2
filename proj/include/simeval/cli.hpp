#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace simeval::cli {

enum ExitCode : int {
  kSuccess = 0,
  kOtherError = 1,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

/// A configuration given either as a shipped preset name or as a JSON file.
struct ConfigSource {
  std::string preset;
  std::filesystem::path file;

  bool empty() const { return preset.empty() && file.empty(); }
};

struct GenerateOptions {
  std::string sim;  ///< clb, uss or tissue
  ConfigSource config;
  std::size_t n = 2000;
  std::optional<int> image_size;      ///< overrides the config; clb presets are rescaled
  std::optional<double> mixed;        ///< clb: degraded fraction, uss: fraction of config_b
  ConfigSource config_b;              ///< uss mixing partner
  ConfigSource degrade;               ///< clb degradation, defaults to the half_band preset
  bool quantize = false;
  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path out;
};

struct FeaturesOptions {
  std::filesystem::path dataset;
  ConfigSource eval;  ///< defaults to the default eval preset
  int threads = 1;
  std::filesystem::path out;  ///< CSV file
};

struct CompareOptions {
  std::filesystem::path dataset_a;  ///< reference; noise floors come from its halves
  std::filesystem::path dataset_b;
  ConfigSource eval;
  std::optional<std::uint64_t> seed;  ///< overrides the eval floor_seed
  int threads = 1;
  std::filesystem::path out;  ///< directory: report.json plus plot CSVs
};

struct SweepOptions {
  std::string sim;        ///< clb or uss
  ConfigSource sweep;     ///< JSON with base, parameter, values
  ConfigSource base;      ///< used with parameter/values instead of `sweep`
  std::string parameter;
  std::vector<double> values;
  std::optional<int> image_size;
  std::size_t n = 2000;
  std::size_t bins = 40;
  std::uint64_t seed = 0;
  int threads = 1;
  std::filesystem::path out;  ///< directory: sweep.csv, sweep.json, hist_<k>.csv
};

struct ReportOptions {
  std::filesystem::path report;  ///< report.json written by compare
  bool svg = false;              ///< render the plot CSVs next to the report as SVG
  std::filesystem::path out;     ///< SVG directory, defaults to the report's directory
};

void cmd_generate(const GenerateOptions& o);
void cmd_features(const FeaturesOptions& o);
void cmd_compare(const CompareOptions& o);
void cmd_sweep(const SweepOptions& o);
void cmd_report(const ReportOptions& o);

/// Parses arguments, runs the subcommand and maps exceptions to exit codes.
int run(int argc, char** argv);

}  // namespace simeval::cli
