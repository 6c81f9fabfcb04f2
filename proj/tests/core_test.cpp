#include "oracles/quadrature.hpp"
#include "simeval/core.hpp"
#include "simeval/error.hpp"
#include "simeval/parallel.hpp"
#include "simeval/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

using namespace simeval;
namespace fs = std::filesystem;

namespace {

Ensemble random_ensemble(std::size_t n, int h, int w, std::uint64_t seed) {
  std::vector<Image> images;
  RngStream rng(seed, 0);
  for (std::size_t k = 0; k < n; ++k) {
    Grid g(h, w);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.uniform();
    images.emplace_back(std::move(g));
  }
  return Ensemble(std::move(images), std::vector<std::string>(n, "x"));
}

fs::path scratch_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("simeval_core_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("rng streams are reproducible and distinct") {
  RngStream a(42, 3), b(42, 3), c(42, 4), d(43, 3);
  bool differs_c = false, differs_d = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a(), vb = b(), vc = c(), vd = d();
    CHECK(va == vb);
    differs_c = differs_c || va != vc;
    differs_d = differs_d || va != vd;
  }
  CHECK(differs_c);
  CHECK(differs_d);
  CHECK(a.draws() == 100);
}

TEST_CASE("rng split is a pure function of the parent key") {
  RngStream parent(7, 0);
  parent();  // consuming draws does not change children
  auto x = parent.split(5), y = RngStream(7, 0).split(5), z = RngStream(7, 0).split(6);
  CHECK(x() == y());
  CHECK(RngStream(7, 0).split(5)() != z());
}

TEST_CASE("rng uniform draws lie in [0, 1) with the right mean") {
  RngStream rng(1, 0);
  double sum = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("nearest-rank quantile matches the sort oracle") {
  RngStream rng(9, 0);
  std::vector<double> v(1001);
  for (double& x : v) x = rng.uniform() * 10 - 3;
  for (double p : {0.001, 0.1, 0.5, 0.99, 1.0}) CHECK(nearest_rank_quantile(v, p) == oracle::quantile(v, p));
}

TEST_CASE("quantize_ensemble maps endpoints linearly") {
  Grid g(1, 3);
  g << 0, 50, 100;
  Ensemble e({Image(g)}, {"x"});
  // With three pixels the 99th nearest-rank percentile is the largest value.
  const auto q = quantize_ensemble(e);
  CHECK(q[0].data(0, 0) == 0);
  CHECK(q[0].data(0, 1) == 128);
  CHECK(q[0].data(0, 2) == 255);
  CHECK(q.manifest().quantized);
}

TEST_CASE("quantize_ensemble rejects a degenerate scale") {
  Ensemble zeros({Image::constant(4, 4, 0.0)}, {"x"});
  CHECK_THROWS_AS(quantize_ensemble(zeros), NumericalError);
  CHECK_THROWS_AS(quantize_ensemble(Ensemble{}), DataError);
}

TEST_CASE("quantization threshold follows the pooled 99th percentile") {
  const auto e = random_ensemble(1, 100, 100, 3);
  std::vector<double> pooled(e[0].data.data(), e[0].data.data() + e[0].size());
  const double t = quantization_threshold(e, 0.01);
  CHECK(t == oracle::quantile(pooled, 0.99));
  CHECK(t == doctest::Approx(0.99).epsilon(0.005 / 0.99));
}

TEST_CASE("quantize_ensemble is monotone with integer output") {
  const auto e = random_ensemble(3, 16, 16, 4);
  const auto q = quantize_ensemble(e);
  std::vector<std::pair<double, double>> pairs;
  for (std::size_t k = 0; k < e.size(); ++k) {
    for (Eigen::Index i = 0; i < e[k].size(); ++i) {
      const double v = q[k].data.data()[i];
      CHECK(v == std::round(v));
      CHECK(v >= 0);
      CHECK(v <= 255);
      pairs.emplace_back(e[k].data.data()[i], v);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  for (std::size_t i = 1; i < pairs.size(); ++i) CHECK(pairs[i - 1].second <= pairs[i].second);
}

TEST_CASE("split_halves partitions deterministically") {
  const auto e = random_ensemble(10, 2, 2, 5);
  const auto [a, b] = split_halves(e, 11);
  CHECK(a.size() == 5);
  CHECK(b.size() == 5);
  const auto [ia, ib] = split_indices(10, 11);
  std::set<std::size_t> all(ia.begin(), ia.end());
  for (auto i : ib) CHECK(all.insert(i).second);
  CHECK(all.size() == 10);
  for (std::size_t k = 0; k < ia.size(); ++k) CHECK(a[k] == e[ia[k]]);
  const auto [ia2, ib2] = split_indices(10, 11);
  CHECK(ia == ia2);
  CHECK(ib == ib2);
}

TEST_CASE("split_halves of an odd ensemble") {
  std::set<std::size_t> first_sizes;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto [a, b] = split_indices(11, seed);
    CHECK(a.size() + b.size() == 11);
    CHECK((a.size() == 5 || a.size() == 6));
    first_sizes.insert(a.size());
  }
  CHECK(first_sizes.size() == 2);
  CHECK_THROWS_AS(split_indices(1, 0), DataError);
}

TEST_CASE("8-bit round trip is bit-identical") {
  const auto q = quantize_ensemble(random_ensemble(2, 5, 7, 6));
  Ensemble labelled(q.images(), {"regular", "degraded"}, q.manifest());
  const auto dir = scratch_dir("gray8");
  save_ensemble(labelled, dir);
  CHECK(fs::exists(dir / "image_000000.pgm"));
  const auto back = load_ensemble(dir);
  REQUIRE(back.size() == 2);
  CHECK(back.labels() == labelled.labels());
  for (std::size_t k = 0; k < 2; ++k) CHECK((back[k].data == labelled[k].data).all());
  CHECK(back.manifest().quantized);
}

TEST_CASE("raw round trip keeps full precision") {
  auto e = random_ensemble(1, 9, 4, 7);
  Grid g = e[0].data * 1e-7 + 1.0 / 3.0;
  Ensemble precise({Image(g, 1e-4)}, {"x"});
  precise.manifest().master_seed = 99;
  const auto dir = scratch_dir("raw");
  save_ensemble(precise, dir);
  const auto back = load_ensemble(dir);
  CHECK((back[0].data - g).abs().maxCoeff() == 0.0);
  CHECK(back[0].pixel_pitch == 1e-4);
  CHECK(back.manifest().master_seed == 99);
}

TEST_CASE("load rejects inconsistent datasets") {
  const auto dir = scratch_dir("broken");
  CHECK_THROWS_AS(load_ensemble(dir), DataError);
  save_ensemble(random_ensemble(3, 4, 4, 8), dir);
  fs::remove(dir / "image_000002.f64");
  CHECK_THROWS_AS(load_ensemble(dir), DataError);

  const auto dir2 = scratch_dir("dims");
  save_ensemble(random_ensemble(1, 4, 4, 8), dir2);
  std::ofstream(dir2 / "image_000000.f64", std::ios::binary | std::ios::trunc) << "short";
  CHECK_THROWS_AS(load_ensemble(dir2), DataError);
}

TEST_CASE("ensemble invariants are enforced") {
  CHECK_THROWS_AS(Ensemble({Image::constant(2, 2, 0)}, {}), DataError);
  CHECK_THROWS_AS(Ensemble({Image::constant(2, 2, 0), Image::constant(2, 3, 0)}, {"a", "b"}), DataError);
  Grid bad = Grid::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS(Ensemble({Image(bad)}, {"a"}), DataError);
}

TEST_CASE("compensated sum is order independent on a cancelling series") {
  CompensatedSum s;
  for (double v : {1e16, 1.0, -1e16, 1.0}) s.add(v);
  CHECK(s.value() == 2.0);
}

TEST_CASE("parallel_for visits every index once for any worker count") {
  for (int threads : {1, 3, 8}) {
    std::vector<int> hits(97, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i]++; });
    CHECK(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
  }
}
