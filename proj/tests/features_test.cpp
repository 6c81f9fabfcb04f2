#include "oracles/texture.hpp"
#include "simeval/clb.hpp"
#include "simeval/error.hpp"
#include "simeval/features.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace simeval;

namespace {

std::vector<std::vector<double>> to_table(const Image& img) {
  std::vector<std::vector<double>> t(img.height(), std::vector<double>(img.width()));
  for (Eigen::Index i = 0; i < img.height(); ++i) {
    for (Eigen::Index j = 0; j < img.width(); ++j) t[i][j] = img.data(i, j);
  }
  return t;
}

Image random_image(int h, int w, RngStream& rng) {
  Grid g(h, w);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.uniform();
  return Image(g);
}

Image from_levels(std::initializer_list<std::initializer_list<double>> rows) {
  Grid g(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) g(i, j++) = v;
    ++i;
  }
  return Image(g);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace

TEST_CASE("direction steps") {
  CHECK(features::direction_step(0) == std::array{0, 1});
  CHECK(features::direction_step(45) == std::array{-1, 1});
  CHECK(features::direction_step(90) == std::array{-1, 0});
  CHECK(features::direction_step(135) == std::array{-1, -1});
}

TEST_CASE("params validation") {
  features::Params p;
  p.gray_levels = 1;
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.glcm_angles = {30};
  CHECK_THROWS_AS(p.validate(), ConfigError);
  p = {};
  p.glcm_distances.clear();
  CHECK_THROWS_AS(p.validate(), ConfigError);
}

TEST_CASE("quantization over the image's own range") {
  RngStream rng(1, 0);
  const auto img = random_image(8, 8, rng);
  const auto levels = features::quantize(img, 16);
  const auto ref = oracle::quantize(to_table(img), 16);
  for (int i = 0; i < 8; ++i) {
    for (int j = 0; j < 8; ++j) CHECK(levels(i, j) == ref[i][j]);
  }
  CHECK(levels.minCoeff() == 0);
  CHECK(levels.maxCoeff() == 15);
  CHECK((features::quantize(Image::constant(3, 3, 7.0), 16) == 0).all());
}

TEST_CASE("first-order moments") {
  const auto two = from_levels({{0, 0}, {255, 255}});
  const auto f = features::first_order(two);
  CHECK(f.mean == 127.5);
  CHECK(*f.skewness == doctest::Approx(0.0).scale(1.0));
  CHECK(*f.kurtosis == doctest::Approx(1.0));

  const auto c = features::first_order(Image::constant(4, 4, 2.0));
  CHECK(c.mean == 2.0);
  CHECK(c.std == 0.0);
  CHECK(!c.skewness);
  CHECK(!c.kurtosis);

  RngStream rng(2, 0);
  std::normal_distribution<double> normal;
  Grid g(100, 100);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = normal(rng);
  const auto n = features::first_order(Image(g));
  CHECK(std::abs(*n.skewness) < 0.08);
  CHECK(std::abs(*n.kurtosis - 3.0) < 0.2);
}

TEST_CASE("constant image gives the trivial texture values") {
  features::Params p;
  const auto v = features::feature_vector(Image::constant(16, 16, 5.0), p);
  CHECK(v.glcm.energy == 1.0);
  CHECK(v.glcm.entropy == 0.0);
  CHECK(v.glcm.maximum == 1.0);
  CHECK(v.glcm.contrast == 0.0);
  CHECK(v.glcm.homogeneity == 1.0);
  CHECK(v.ngtdm.coarseness == 1.0 / features::kNgtdmEpsilon);
  CHECK(v.ngtdm.contrast == 0.0);
  CHECK(v.ngtdm.complexity == 0.0);
  CHECK(v.ngtdm.strength == 0.0);
  CHECK(!v.complete());
  CHECK(!v.values()[2]);
}

TEST_CASE("glcm of horizontal stripes at 90 degrees") {
  const auto stripes = from_levels({{0, 0, 0, 0}, {1, 1, 1, 1}, {0, 0, 0, 0}, {1, 1, 1, 1}});
  features::Params p;
  p.gray_levels = 2;
  p.glcm_distances = {1};
  p.glcm_angles = {90};
  const auto m = features::glcm(stripes, p);
  CHECK(m(0, 0) == 0.0);
  CHECK(m(1, 1) == 0.0);
  CHECK(m(0, 1) == 0.5);
  CHECK(features::glcm_features(m).contrast == 1.0);
}

TEST_CASE("glcm feature closed forms") {
  const int g = 4;
  Eigen::MatrixXd uniform = Eigen::MatrixXd::Constant(g, g, 1.0 / (g * g));
  const auto u = features::glcm_features(uniform);
  CHECK(u.energy == doctest::Approx(1.0 / (g * g)));
  CHECK(u.entropy == doctest::Approx(2 * std::log(g)));
  CHECK(u.maximum == doctest::Approx(1.0 / (g * g)));

  Eigen::MatrixXd diag = Eigen::MatrixXd::Identity(g, g) / g;
  const auto d = features::glcm_features(diag);
  CHECK(d.contrast == 0.0);
  CHECK(d.homogeneity == doctest::Approx(1.0));

  RngStream rng(3, 0);
  std::vector<std::vector<double>> t(g, std::vector<double>(g));
  Eigen::MatrixXd r(g, g);
  double total = 0;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) total += (r(i, j) = rng.uniform());
  }
  r /= total;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) t[i][j] = r(i, j);
  }
  const auto a = features::glcm_features(r);
  const auto b = oracle::glcm_features(t);
  CHECK(std::abs(a.energy - b.energy) < 1e-12);
  CHECK(std::abs(a.entropy - b.entropy) < 1e-12);
  CHECK(std::abs(a.maximum - b.maximum) < 1e-12);
  CHECK(std::abs(a.contrast - b.contrast) < 1e-12);
  CHECK(std::abs(a.homogeneity - b.homogeneity) < 1e-12);
}

TEST_CASE("glcm is symmetric and normalized") {
  RngStream rng(4, 0);
  features::Params p;
  for (int k = 0; k < 20; ++k) {
    const auto m = features::glcm(random_image(12, 9, rng), p);
    CHECK(m.sum() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(m.minCoeff() >= 0.0);
  }
}

TEST_CASE("glrm closed forms") {
  features::Params p;
  p.glrm_directions = {0};
  const int n = 6;
  const auto c = features::glrm(Image::constant(n, n, 1.0), p);
  CHECK(c.spe == doctest::Approx(1.0 / (n * n)));
  CHECK(c.lpe == doctest::Approx(n * n));
  CHECK(c.glu == doctest::Approx(n));
  CHECK(c.plu == doctest::Approx(n));

  Grid board(6, 6);
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 6; ++j) board(i, j) = (i + j) % 2;
  }
  const auto b = features::glrm(Image(board), p);
  CHECK(b.spe == 1.0);
  CHECK(b.lpe == 1.0);
}

TEST_CASE("glrm run lengths cover every scanned pixel") {
  RngStream rng(5, 0);
  features::Params p;
  p.gray_levels = 3;
  p.glrm_directions = {0, 45, 90, 135};
  const auto levels = features::quantize(random_image(7, 5, rng), 3);
  const auto runs = features::glrm_matrix(levels, p);
  double weighted = 0;
  for (Eigen::Index g = 0; g < runs.rows(); ++g) {
    for (Eigen::Index r = 0; r < runs.cols(); ++r) weighted += runs(g, r) * static_cast<double>(r + 1);
  }
  CHECK(weighted == 4.0 * 35.0);
}

TEST_CASE("glrm of a random two-level image matches the run scanner") {
  RngStream rng(6, 0);
  features::Params p;
  p.gray_levels = 2;
  for (int k = 0; k < 50; ++k) {
    const auto img = random_image(6, 6, rng);
    const auto a = features::glrm(img, p);
    const auto b = oracle::glrm(oracle::quantize(to_table(img), 2), p.glrm_directions);
    CHECK(std::abs(a.spe - b.spe) < 1e-12);
    CHECK(std::abs(a.lpe - b.lpe) < 1e-12);
    CHECK(std::abs(a.glu - b.glu) < 1e-12);
    CHECK(std::abs(a.plu - b.plu) < 1e-12);
  }
}

TEST_CASE("ngtdm of a random 7x7 image matches the per-pixel oracle") {
  RngStream rng(7, 0);
  for (auto norm : {features::NgtdmNormalization::interior, features::NgtdmNormalization::total}) {
    features::Params p;
    p.ngtdm_normalization = norm;
    for (int k = 0; k < 50; ++k) {
      const auto img = random_image(7, 7, rng);
      const auto a = features::ngtdm(img, p);
      const auto b = oracle::ngtdm(oracle::quantize(to_table(img), p.gray_levels), 1,
                                   norm == features::NgtdmNormalization::interior);
      CHECK(rel(a.coarseness, b.coarseness) < 1e-10);
      CHECK(rel(a.contrast, b.contrast) < 1e-10);
      CHECK(rel(a.complexity, b.complexity) < 1e-10);
      CHECK(rel(a.strength, b.strength) < 1e-10);
    }
  }
  features::Params p;
  CHECK_THROWS_AS(features::ngtdm(Image::constant(3, 3, 1.0), p), DataError);
}

TEST_CASE("all texture features match brute force on random 8x8 images") {
  RngStream rng(8, 0);
  features::Params p;
  double worst = 0;
  for (int k = 0; k < 200; ++k) {
    const auto img = random_image(8, 8, rng);
    const auto levels = oracle::quantize(to_table(img), p.gray_levels);
    const auto v = features::feature_vector(img, p);
    const auto g = oracle::glcm_features(oracle::glcm_matrix(levels, p.gray_levels, p.glcm_distances, p.glcm_angles));
    const auto r = oracle::glrm(levels, p.glrm_directions);
    const auto n = oracle::ngtdm(levels, p.ngtdm_distance);
    for (auto [x, y] : {std::pair{v.glcm.energy, g.energy}, {v.glcm.entropy, g.entropy}, {v.glcm.maximum, g.maximum},
                        {v.glcm.contrast, g.contrast}, {v.glcm.homogeneity, g.homogeneity}, {v.glrm.spe, r.spe},
                        {v.glrm.lpe, r.lpe}, {v.glrm.glu, r.glu}, {v.glrm.plu, r.plu},
                        {v.ngtdm.coarseness, n.coarseness}, {v.ngtdm.contrast, n.contrast},
                        {v.ngtdm.complexity, n.complexity}, {v.ngtdm.strength, n.strength}}) {
      worst = std::max(worst, rel(x, y));
    }
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("features are invariant to an added constant except the mean") {
  RngStream rng(9, 0);
  features::Params p;
  Grid g(16, 16);
  for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = static_cast<double>(rng() % 64);
  const auto a = features::feature_vector(Image(g), p).values();
  const auto b = features::feature_vector(Image(g + 100.0), p).values();
  CHECK(*b[0] == *a[0] + 100.0);
  for (std::size_t k = 1; k < features::kFeatureCount; ++k) {
    CHECK(*b[k] == doctest::Approx(*a[k]).epsilon(1e-9));
  }
}

TEST_CASE("blurred backgrounds are coarser") {
  clb::Config cfg;
  cfg.image_size = 32;
  cfg.layers[0].mean_clusters = 4;
  cfg.layers[0].blob_scale_x = 2;
  cfg.layers[0].blob_scale_y = 1.5;
  cfg.layers[0].beta = 2;
  features::Params p;
  int coarser = 0, total = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    RngStream rng(10, i);
    const auto img = clb::generate(cfg, rng);
    if (img.data.maxCoeff() == img.data.minCoeff()) continue;
    ++total;
    if (features::ngtdm(clb::degrade(img, {1.5, 0.5}), p).coarseness > features::ngtdm(img, p).coarseness) ++coarser;
  }
  CHECK(coarser == total);
}

TEST_CASE("feature matrix drops incomplete rows") {
  RngStream rng(11, 0);
  features::Params p;
  std::vector<features::FeatureVector> v{features::feature_vector(random_image(8, 8, rng), p),
                                         features::feature_vector(Image::constant(8, 8, 1), p),
                                         features::feature_vector(random_image(8, 8, rng), p)};
  std::vector<std::size_t> kept;
  const auto m = features::to_matrix(v, &kept);
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 17);
  CHECK(kept == std::vector<std::size_t>{0, 2});
  CHECK(features::family_columns(features::Family::ngtdm).size() == 4);
  CHECK(features::kFeatureNames[13] == "ngtdm_coarseness");
}
