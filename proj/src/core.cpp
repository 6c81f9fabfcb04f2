#include "simeval/core.hpp"

#include "simeval/error.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <regex>
#include <sstream>

namespace simeval {

namespace fs = std::filesystem;

double nearest_rank_quantile(std::span<const double> values, double p) {
  if (values.empty()) throw DataError("quantile of an empty sample");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("quantile level must lie in (0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  const auto n = sorted.size();
  auto rank = static_cast<std::size_t>(std::ceil(p * static_cast<double>(n)));
  rank = std::clamp<std::size_t>(rank, 1, n);
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1), sorted.end());
  return sorted[rank - 1];
}

double quantization_threshold(const Ensemble& e, double top_fraction) {
  if (e.empty()) throw DataError("quantize_ensemble: empty ensemble");
  if (!(top_fraction > 0.0 && top_fraction < 1.0)) {
    throw ConfigError("quantize_ensemble: top fraction must lie in (0, 1)");
  }
  std::vector<double> pooled;
  pooled.reserve(e.size() * static_cast<std::size_t>(e.width() * e.height()));
  for (const auto& img : e.images()) pooled.insert(pooled.end(), img.data.data(), img.data.data() + img.size());
  return nearest_rank_quantile(pooled, 1.0 - top_fraction);
}

Ensemble quantize_ensemble(const Ensemble& e, double top_fraction) {
  const double threshold = quantization_threshold(e, top_fraction);
  if (!(threshold > 0.0)) throw NumericalError("quantize_ensemble: degenerate scale (threshold <= 0)");
  std::vector<Image> out;
  out.reserve(e.size());
  for (const auto& img : e.images()) {
    Grid q = (255.0 * img.data.max(0.0).min(threshold) / threshold).round();
    out.emplace_back(std::move(q), img.pixel_pitch);
  }
  Manifest m = e.manifest();
  m.quantized = true;
  m.parameters["quantization"] = {{"top_fraction", top_fraction}, {"threshold", threshold}};
  return Ensemble(std::move(out), e.labels(), std::move(m));
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_indices(std::size_t n, std::uint64_t seed) {
  if (n < 2) throw DataError("split_halves: need at least 2 images");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  RngStream rng(seed, 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::size_t first = n / 2;
  if (n % 2 == 1 && (rng() & 1U)) ++first;
  std::vector<std::size_t> a(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(first));
  std::vector<std::size_t> b(order.begin() + static_cast<std::ptrdiff_t>(first), order.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return {std::move(a), std::move(b)};
}

std::pair<Ensemble, Ensemble> split_halves(const Ensemble& e, std::uint64_t seed) {
  const auto [a, b] = split_indices(e.size(), seed);
  return {e.subset(a), e.subset(b)};
}

namespace {

constexpr const char* kManifestName = "manifest.json";

std::string image_filename(std::size_t index, StorageFormat format) {
  std::ostringstream name;
  name << "image_" << std::setw(6) << std::setfill('0') << index
       << (format == StorageFormat::gray8 ? ".pgm" : ".f64");
  return name.str();
}

void write_pgm(const Image& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> bytes(static_cast<std::size_t>(img.size()));
  for (Eigen::Index i = 0; i < img.size(); ++i) {
    const double v = img.data.data()[i];
    if (v < 0.0 || v > 255.0 || v != std::round(v)) {
      throw DataError("8-bit storage requires integer pixel values in [0, 255]");
    }
    bytes[static_cast<std::size_t>(i)] = static_cast<unsigned char>(v);
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("write failed: " + path.string());
}

Image read_pgm(const fs::path& path, Eigen::Index width, Eigen::Index height) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::string magic;
  long w = 0, h = 0, maxval = 0;
  in >> magic >> w >> h >> maxval;
  in.get();
  if (magic != "P5" || maxval != 255) throw DataError("not an 8-bit binary PGM: " + path.string());
  if (w != width || h != height) {
    throw DataError("dimension mismatch between manifest and " + path.filename().string());
  }
  std::vector<unsigned char> bytes(static_cast<std::size_t>(w * h));
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) throw DataError("truncated PGM: " + path.string());
  Grid data(h, w);
  for (Eigen::Index i = 0; i < data.size(); ++i) data.data()[i] = bytes[static_cast<std::size_t>(i)];
  return Image(std::move(data));
}

static_assert(std::endian::native == std::endian::little, "raw float64 storage assumes a little-endian host");

void write_raw(const Image& img, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(img.data.data()),
            static_cast<std::streamsize>(img.size() * static_cast<Eigen::Index>(sizeof(double))));
  if (!out) throw DataError("write failed: " + path.string());
}

Image read_raw(const fs::path& path, Eigen::Index width, Eigen::Index height) {
  const auto expected = static_cast<std::uintmax_t>(width * height) * sizeof(double);
  if (!fs::exists(path)) throw DataError("missing image file " + path.string());
  if (fs::file_size(path) != expected) {
    throw DataError("dimension mismatch between manifest and " + path.filename().string());
  }
  std::ifstream in(path, std::ios::binary);
  Grid data(height, width);
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(expected));
  if (!in) throw DataError("cannot read " + path.string());
  return Image(std::move(data));
}

}  // namespace

void save_ensemble(const Ensemble& e, const fs::path& dir, StorageFormat format) {
  if (format == StorageFormat::automatic) {
    format = e.manifest().quantized ? StorageFormat::gray8 : StorageFormat::raw_f64;
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());

  nlohmann::json files = nlohmann::json::array();
  for (std::size_t i = 0; i < e.size(); ++i) {
    const auto name = image_filename(i, format);
    if (format == StorageFormat::gray8) {
      write_pgm(e[i], dir / name);
    } else {
      write_raw(e[i], dir / name);
    }
    files.push_back(name);
  }

  const auto& m = e.manifest();
  nlohmann::json j;
  j["generator"] = m.generator;
  j["version"] = m.version;
  j["config"] = m.config;
  j["master_seed"] = m.master_seed;
  j["parameters"] = m.parameters;
  j["quantized"] = m.quantized;
  j["format"] = format == StorageFormat::gray8 ? "gray8" : "raw_f64";
  j["count"] = e.size();
  j["width"] = e.width();
  j["height"] = e.height();
  if (!e.empty() && e[0].pixel_pitch) {
    j["pixel_pitch"] = *e[0].pixel_pitch;
  } else {
    j["pixel_pitch"] = nullptr;
  }
  j["labels"] = e.labels();
  j["files"] = files;

  std::ofstream out(dir / kManifestName);
  if (!out) throw DataError("cannot write manifest in " + dir.string());
  out << j.dump(2) << '\n';
}

Ensemble load_ensemble(const fs::path& dir) {
  const auto manifest_path = dir / kManifestName;
  if (!fs::exists(manifest_path)) throw DataError("missing manifest: " + manifest_path.string());
  nlohmann::json j;
  try {
    std::ifstream in(manifest_path);
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw DataError("malformed manifest " + manifest_path.string() + ": " + ex.what());
  }

  try {
    const auto count = j.at("count").get<std::size_t>();
    const auto width = j.at("width").get<Eigen::Index>();
    const auto height = j.at("height").get<Eigen::Index>();
    const auto format = j.at("format").get<std::string>() == "gray8" ? StorageFormat::gray8 : StorageFormat::raw_f64;
    const auto labels = j.at("labels").get<std::vector<std::string>>();
    if (labels.size() != count) throw DataError("manifest label count differs from image count");

    static const std::regex pattern(R"(image_\d+\.(pgm|f64))");
    std::size_t on_disk = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (std::regex_match(entry.path().filename().string(), pattern)) ++on_disk;
    }
    if (on_disk != count) {
      throw DataError("manifest lists " + std::to_string(count) + " images but " + std::to_string(on_disk) +
                      " image files were found in " + dir.string());
    }

    std::optional<double> pitch;
    if (j.contains("pixel_pitch") && !j["pixel_pitch"].is_null()) pitch = j["pixel_pitch"].get<double>();

    std::vector<Image> images;
    images.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const auto path = dir / image_filename(i, format);
      Image img = format == StorageFormat::gray8 ? read_pgm(path, width, height) : read_raw(path, width, height);
      img.pixel_pitch = pitch;
      images.push_back(std::move(img));
    }

    Manifest m;
    m.generator = j.value("generator", std::string{});
    m.version = j.value("version", std::string{"1"});
    m.config = j.value("config", nlohmann::json::object());
    m.master_seed = j.value("master_seed", std::uint64_t{0});
    m.parameters = j.value("parameters", nlohmann::json::object());
    m.quantized = j.value("quantized", false);
    return Ensemble(std::move(images), labels, std::move(m));
  } catch (const nlohmann::json::exception& ex) {
    throw DataError("malformed manifest " + manifest_path.string() + ": " + ex.what());
  }
}

}  // namespace simeval
