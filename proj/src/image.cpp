#include "simeval/image.hpp"

#include "simeval/error.hpp"

namespace simeval {

Ensemble::Ensemble(std::vector<Image> images, std::vector<std::string> labels, Manifest manifest)
    : images_(std::move(images)), labels_(std::move(labels)), manifest_(std::move(manifest)) {
  if (labels_.size() != images_.size()) {
    throw DataError("ensemble: " + std::to_string(labels_.size()) + " labels for " +
                    std::to_string(images_.size()) + " images");
  }
  for (const auto& img : images_) {
    if (img.width() != width() || img.height() != height()) {
      throw DataError("ensemble: images have non-uniform dimensions");
    }
    if (!img.all_finite()) {
      throw DataError("ensemble: image contains non-finite values");
    }
  }
}

Ensemble Ensemble::select_label(const std::string& label) const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] == label) idx.push_back(i);
  }
  return subset(idx);
}

Ensemble Ensemble::subset(const std::vector<std::size_t>& indices) const {
  std::vector<Image> imgs;
  std::vector<std::string> labs;
  imgs.reserve(indices.size());
  labs.reserve(indices.size());
  for (auto i : indices) {
    if (i >= images_.size()) throw DataError("ensemble subset index out of range");
    imgs.push_back(images_[i]);
    labs.push_back(labels_[i]);
  }
  return Ensemble(std::move(imgs), std::move(labs), manifest_);
}

}  // namespace simeval
