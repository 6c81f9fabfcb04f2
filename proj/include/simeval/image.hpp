#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace simeval {

/// Row-major dense 2D field; rows index y, columns index x.
template <typename Scalar>
using GridT = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Grid = GridT<double>;
using ComplexGrid = GridT<std::complex<double>>;

/// A 2D real-valued image. Pixel pitch is in meters per pixel when known.
struct Image {
  Grid data;
  std::optional<double> pixel_pitch;

  Image() = default;
  explicit Image(Grid values, std::optional<double> pitch = std::nullopt)
      : data(std::move(values)), pixel_pitch(pitch) {}

  static Image constant(Eigen::Index height, Eigen::Index width, double value) {
    return Image(Grid::Constant(height, width, value));
  }

  Eigen::Index width() const { return data.cols(); }
  Eigen::Index height() const { return data.rows(); }
  Eigen::Index size() const { return data.size(); }

  bool all_finite() const { return data.isFinite().all(); }

  friend bool operator==(const Image& a, const Image& b) {
    return a.data.rows() == b.data.rows() && a.data.cols() == b.data.cols() &&
           (a.data == b.data).all() && a.pixel_pitch == b.pixel_pitch;
  }
};

/// Provenance recorded with every ensemble.
struct Manifest {
  std::string generator;
  std::string version = "1";
  nlohmann::json config = nlohmann::json::object();
  std::uint64_t master_seed = 0;
  nlohmann::json parameters = nlohmann::json::object();
  bool quantized = false;
};

/// Ordered images of uniform size with one class label per image.
class Ensemble {
 public:
  Ensemble() = default;
  Ensemble(std::vector<Image> images, std::vector<std::string> labels, Manifest manifest = {});

  const std::vector<Image>& images() const { return images_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Manifest& manifest() const { return manifest_; }
  Manifest& manifest() { return manifest_; }

  std::size_t size() const { return images_.size(); }
  bool empty() const { return images_.empty(); }
  const Image& operator[](std::size_t i) const { return images_[i]; }

  Eigen::Index width() const { return images_.empty() ? 0 : images_.front().width(); }
  Eigen::Index height() const { return images_.empty() ? 0 : images_.front().height(); }

  /// Images whose label equals `label`, in order, with the manifest carried over.
  Ensemble select_label(const std::string& label) const;
  /// Images at the given indices, in the given order.
  Ensemble subset(const std::vector<std::size_t>& indices) const;

 private:
  std::vector<Image> images_;
  std::vector<std::string> labels_;
  Manifest manifest_;
};

}  // namespace simeval
