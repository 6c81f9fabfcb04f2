#include "simeval/report.hpp"

#include "simeval/config_io.hpp"
#include "simeval/core.hpp"
#include "simeval/divergence.hpp"
#include "simeval/error.hpp"
#include "simeval/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <sstream>

namespace simeval::report {

namespace {

constexpr std::array kTextureFamilies{features::Family::glcm, features::Family::glrm, features::Family::ngtdm};

using Getter = std::function<std::optional<double>(const ImageSummary&)>;

struct Statistic {
  std::string name;
  Getter get;
};

std::vector<Statistic> statistics(const EvalConfig& cfg) {
  std::vector<Statistic> out;
  out.push_back({"mu_I", [](const ImageSummary& s) -> std::optional<double> {
                   return s.speckle ? std::optional(s.speckle->mu_I) : std::nullopt;
                 }});
  out.push_back({"sigma_I", [](const ImageSummary& s) -> std::optional<double> {
                   return s.speckle ? std::optional(s.speckle->sigma_I) : std::nullopt;
                 }});
  out.push_back({"snr2", [](const ImageSummary& s) -> std::optional<double> {
                   return s.speckle ? std::optional(s.speckle->snr2) : std::nullopt;
                 }});
  if (cfg.fg) {
    out.push_back({"fg_log_ratio", [](const ImageSummary& s) -> std::optional<double> {
                     return s.fg ? s.fg->log_ratio : std::nullopt;
                   }});
  }
  return out;
}

std::vector<double> collect(const EnsembleSummary& s, std::span<const std::size_t> rows, const Getter& get) {
  std::vector<double> out;
  out.reserve(rows.size());
  for (std::size_t r : rows) {
    if (auto v = get(s.images[r])) out.push_back(*v);
  }
  return out;
}

Eigen::MatrixXd complete_rows(const EnsembleSummary& s, std::span<const std::size_t> rows) {
  std::vector<features::FeatureVector> v;
  v.reserve(rows.size());
  for (std::size_t r : rows) v.push_back(s.images[r].features);
  return features::to_matrix(v);
}

std::vector<std::size_t> all_rows(std::size_t n) {
  std::vector<std::size_t> r(n);
  std::iota(r.begin(), r.end(), std::size_t{0});
  return r;
}

double gray_level_jsd(const EnsembleSummary& a, std::span<const std::size_t> rows_a, const EnsembleSummary& b,
                      std::span<const std::size_t> rows_b, std::size_t bins) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (std::size_t r : rows_a) lo = std::min(lo, a.images[r].min), hi = std::max(hi, a.images[r].max);
  for (std::size_t r : rows_b) lo = std::min(lo, b.images[r].min), hi = std::max(hi, b.images[r].max);
  if (!(hi > lo)) return 0.0;
  const double scale = static_cast<double>(bins) / (hi - lo);
  auto pmf = [&](const EnsembleSummary& s, std::span<const std::size_t> rows) {
    std::vector<double> counts(bins, 0.0);
    double total = 0.0;
    for (std::size_t r : rows) {
      const auto& img = (*s.ensemble)[r];
      for (Eigen::Index i = 0; i < img.size(); ++i) {
        auto k = static_cast<std::size_t>((img.data.data()[i] - lo) * scale);
        counts[std::min(k, bins - 1)] += 1.0;
      }
      total += static_cast<double>(img.size());
    }
    for (double& c : counts) c /= total;
    return counts;
  };
  return divergence::jsd_pmf(pmf(a, rows_a), pmf(b, rows_b));
}

nlohmann::json optional_number(const std::optional<double>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

void EvalConfig::validate() const {
  features.validate();
  if (gray_level_bins < 2) throw ConfigError("eval: gray_level_bins must be >= 2");
  if (knn_k < 1) throw ConfigError("eval: knn_k must be >= 1");
  if (tv_grid < 2) throw ConfigError("eval: tv_grid must be >= 2");
  if (fg && (!(fg->tolerance >= 0.0) || !(std::abs(fg->fat_value - fg->gland_value) > 2.0 * fg->tolerance))) {
    throw ConfigError("eval: fat and glandular tolerance bands overlap");
  }
}

void to_json(nlohmann::json& j, const EvalConfig& c) {
  j = {{"features", c.features},
       {"gray_level_bins", c.gray_level_bins},
       {"knn_k", c.knn_k},
       {"tv_grid", c.tv_grid},
       {"floor_seed", c.floor_seed},
       {"texture_input", c.texture_input == TextureInput::raw ? "raw" : "quantized"},
       {"pixel_kind", c.pixel_kind == stats::PixelKind::intensity ? "intensity" : "envelope"},
       {"fg", nullptr}};
  if (c.fg) j["fg"] = {{"fat_value", c.fg->fat_value}, {"gland_value", c.fg->gland_value}, {"tolerance", c.fg->tolerance}};
}

void from_json(const nlohmann::json& j, EvalConfig& c) {
  if (!j.is_object()) throw ConfigError("eval config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    static const std::array known{"features", "gray_level_bins", "knn_k", "tv_grid", "floor_seed", "texture_input",
                                  "pixel_kind", "fg", "description"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ConfigError("eval config: unknown key '" + key + "'");
    }
  }
  if (j.contains("features")) c.features = j.at("features").get<features::Params>();
  if (j.contains("gray_level_bins")) c.gray_level_bins = j.at("gray_level_bins").get<std::size_t>();
  if (j.contains("knn_k")) c.knn_k = j.at("knn_k").get<int>();
  if (j.contains("tv_grid")) c.tv_grid = j.at("tv_grid").get<int>();
  if (j.contains("floor_seed")) c.floor_seed = j.at("floor_seed").get<std::uint64_t>();
  if (j.contains("texture_input")) {
    const auto input = j.at("texture_input").get<std::string>();
    if (input == "quantized") c.texture_input = TextureInput::quantized;
    else if (input == "raw") c.texture_input = TextureInput::raw;
    else throw ConfigError("eval config: texture_input must be 'quantized' or 'raw'");
  }
  if (j.contains("pixel_kind")) {
    const auto kind = j.at("pixel_kind").get<std::string>();
    if (kind == "envelope") c.pixel_kind = stats::PixelKind::envelope;
    else if (kind == "intensity") c.pixel_kind = stats::PixelKind::intensity;
    else throw ConfigError("eval config: pixel_kind must be 'envelope' or 'intensity'");
  }
  if (j.contains("fg")) {
    const auto& fg = j.at("fg");
    if (fg.is_null()) {
      c.fg.reset();
    } else {
      for (const auto& [key, value] : fg.items()) {
        if (key != "fat_value" && key != "gland_value" && key != "tolerance") {
          throw ConfigError("eval config: unknown fg key '" + key + "'");
        }
      }
      c.fg = FgBands{fg.at("fat_value").get<double>(), fg.at("gland_value").get<double>(),
                     fg.at("tolerance").get<double>()};
    }
  }
  c.validate();
}

EnsembleSummary summarize(const Ensemble& e, const EvalConfig& cfg, int threads) {
  cfg.validate();
  EnsembleSummary s;
  s.ensemble = &e;
  s.images.resize(e.size());
  std::optional<Ensemble> quantized;
  if (cfg.texture_input == TextureInput::quantized && !e.manifest().quantized) quantized = quantize_ensemble(e);
  const Ensemble& texture = quantized ? *quantized : e;
  parallel_for(e.size(), threads, [&](std::size_t i) {
    const Image& img = e[i];
    ImageSummary& out = s.images[i];
    try {
      out.speckle = stats::snr_stats(img, cfg.pixel_kind);
    } catch (const NumericalError&) {
      out.speckle.reset();
    }
    out.features = features::feature_vector(texture[i], cfg.features);
    if (cfg.fg) out.fg = stats::fg_ratio(img, cfg.fg->fat_value, cfg.fg->gland_value, cfg.fg->tolerance);
    out.min = img.data.minCoeff();
    out.max = img.data.maxCoeff();
  });
  return s;
}

std::size_t minimum_ensemble_size(const EvalConfig& cfg) {
  return std::max<std::size_t>(4, 2 * static_cast<std::size_t>(cfg.knn_k + 1));
}

MetricSet metrics(const EnsembleSummary& a, std::span<const std::size_t> rows_a, const EnsembleSummary& b,
                  std::span<const std::size_t> rows_b, const EnsembleSummary& scaling, const EvalConfig& cfg) {
  MetricSet m;
  m.jsd_by_statistic["gray_level"] = gray_level_jsd(a, rows_a, b, rows_b, cfg.gray_level_bins);
  for (const auto& stat : statistics(cfg)) {
    const auto va = collect(a, rows_a, stat.get), vb = collect(b, rows_b, stat.get);
    if (!va.empty() && !vb.empty()) m.jsd_by_statistic[stat.name] = divergence::jsd_1d(va, vb);
  }

  const Eigen::MatrixXd fa = complete_rows(a, rows_a), fb = complete_rows(b, rows_b);
  if (fa.rows() >= 2 && fb.rows() >= 2) {
    Eigen::MatrixXd pooled(fa.rows() + fb.rows(), fa.cols());
    pooled << fa, fb;
    for (auto family : kTextureFamilies) {
      try {
        const auto model = divergence::fit_pca(pooled, family, true);
        m.tv_by_family[std::string(features::family_name(family))] =
            divergence::tv_distance_2d(divergence::project(model, fa), divergence::project(model, fb), cfg.tv_grid);
      } catch (const NumericalError&) {
      }
    }

    const Eigen::MatrixXd ref = complete_rows(scaling, all_rows(scaling.size()));
    if (ref.rows() >= 2) {
      const Eigen::RowVectorXd mean = ref.colwise().mean();
      const Eigen::RowVectorXd sd = ((ref.rowwise() - mean).array().square().colwise().sum() /
                                     static_cast<double>(ref.rows())).sqrt();
      std::vector<Eigen::Index> keep;
      for (Eigen::Index c = 0; c < ref.cols(); ++c) {
        if (sd(c) > 0.0 && std::isfinite(sd(c))) keep.push_back(c);
      }
      if (!keep.empty()) {
        auto z = [&](const Eigen::MatrixXd& x) {
          Eigen::MatrixXd out(x.rows(), static_cast<Eigen::Index>(keep.size()));
          for (std::size_t k = 0; k < keep.size(); ++k) {
            const auto c = keep[k];
            out.col(static_cast<Eigen::Index>(k)) = (x.col(c).array() - mean(c)) / sd(c);
          }
          return out;
        };
        m.frechet_features = divergence::frechet_features(z(fa), z(fb));
      }
    }
  }
  if (fa.rows() > cfg.knn_k && fb.rows() > cfg.knn_k) {
    m.knn_jsd = divergence::jsd_knn(fa, fb, {cfg.knn_k, cfg.floor_seed});
  }
  return m;
}

ComparisonReport compare(const EnsembleSummary& a, const EnsembleSummary& b, const EvalConfig& cfg) {
  cfg.validate();
  const Ensemble& ea = *a.ensemble;
  const Ensemble& eb = *b.ensemble;
  if (ea.width() != eb.width() || ea.height() != eb.height()) {
    throw DataError("compare: image dimensions differ (" + std::to_string(ea.width()) + "x" +
                    std::to_string(ea.height()) + " vs " + std::to_string(eb.width()) + "x" +
                    std::to_string(eb.height()) + ")");
  }
  const std::size_t min_size = minimum_ensemble_size(cfg);
  if (a.size() < min_size || b.size() < min_size) {
    throw DataError("compare: each ensemble needs at least " + std::to_string(min_size) + " images for knn_k=" +
                    std::to_string(cfg.knn_k));
  }

  ComparisonReport r;
  const auto rows_a = all_rows(a.size()), rows_b = all_rows(b.size());
  r.metrics = metrics(a, rows_a, b, rows_b, a, cfg);
  const auto [half1, half2] = split_indices(a.size(), cfg.floor_seed);
  r.noise_floors = metrics(a, half1, a, half2, a, cfg);

  double worst = -1.0;
  for (const auto& [family, tv] : r.metrics.tv_by_family) {
    if (tv > worst) worst = tv, r.worst_family = family;
  }

  auto incomplete = [](const EnsembleSummary& s) {
    return std::count_if(s.images.begin(), s.images.end(),
                         [](const ImageSummary& i) { return !i.features.complete(); });
  };
  r.metadata = {
      {"n_a", a.size()},
      {"n_b", b.size()},
      {"width", ea.width()},
      {"height", ea.height()},
      {"incomplete_feature_rows_a", incomplete(a)},
      {"incomplete_feature_rows_b", incomplete(b)},
      {"floor_halves", {half1.size(), half2.size()}},
      {"eval", cfg},
      {"estimators",
       {{"jsd_1d_bins", "max(32, Freedman-Diaconis on pooled samples), at most 4096"},
        {"gray_level", "pooled pixel histogram, gray_level_bins equal-width bins over the pooled range"},
        {"knn", {{"k", cfg.knn_k}, {"seed", cfg.floor_seed}, {"standardization", "pooled z-score"}}},
        {"pca", "per texture family, z-scored, fit on the pooled rows of both sides"},
        {"tv_grid", cfg.tv_grid},
        {"frechet", "features z-scored with the reference ensemble, unbiased covariance"}}}};
  return r;
}

nlohmann::json to_json(const MetricSet& m) {
  return {{"jsd_by_statistic", m.jsd_by_statistic},
          {"tv_by_family", m.tv_by_family},
          {"frechet_features", optional_number(m.frechet_features)},
          {"knn_jsd", optional_number(m.knn_jsd)}};
}

nlohmann::json to_json(const ComparisonReport& r) {
  return {{"metrics", to_json(r.metrics)},
          {"noise_floors", to_json(r.noise_floors)},
          {"worst_family", r.worst_family},
          {"metadata", r.metadata}};
}

PlotData plot_data(const EnsembleSummary& a, const EnsembleSummary& b, const EvalConfig& cfg, int threads) {
  PlotData p;
  const Ensemble& ea = *a.ensemble;
  const Ensemble& eb = *b.ensemble;

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto* s : {&a, &b}) {
    for (const auto& i : s->images) lo = std::min(lo, i.min), hi = std::max(hi, i.max);
  }
  if (!(hi > lo)) lo -= 0.5, hi += 0.5;
  p.gray_a = stats::gray_level_pdf(ea, cfg.gray_level_bins, lo, hi);
  p.gray_b = stats::gray_level_pdf(eb, cfg.gray_level_bins, lo, hi);

  auto acf = [&](const Ensemble& e) {
    try {
      return stats::autocorrelation_radial(e, threads);
    } catch (const NumericalError&) {
      return stats::RadialProfile{};
    }
  };
  p.acf_a = acf(ea);
  p.acf_b = acf(eb);

  const Getter snr2 = [](const ImageSummary& s) -> std::optional<double> {
    return s.speckle ? std::optional(s.speckle->snr2) : std::nullopt;
  };
  const auto sa = collect(a, all_rows(a.size()), snr2), sb = collect(b, all_rows(b.size()), snr2);
  if (!sa.empty() && !sb.empty()) {
    std::vector<double> pooled(sa);
    pooled.insert(pooled.end(), sb.begin(), sb.end());
    const auto [mn, mx] = std::minmax_element(pooled.begin(), pooled.end());
    double slo = *mn, shi = *mx;
    if (!(shi > slo)) slo -= 0.5, shi += 0.5;
    const std::size_t bins = stats::shared_bin_count(pooled);
    p.snr2_a = stats::histogram_density(sa, slo, shi, bins);
    p.snr2_b = stats::histogram_density(sb, slo, shi, bins);
  }

  const Eigen::MatrixXd fa = complete_rows(a, all_rows(a.size())), fb = complete_rows(b, all_rows(b.size()));
  if (fa.rows() >= 2 && fb.rows() >= 2) {
    Eigen::MatrixXd pooled(fa.rows() + fb.rows(), fa.cols());
    pooled << fa, fb;
    for (auto family : kTextureFamilies) {
      try {
        const auto model = divergence::fit_pca(pooled, family, true);
        p.projections.push_back({family, divergence::project(model, fa), divergence::project(model, fb)});
      } catch (const NumericalError&) {
      }
    }
  }
  return p;
}

std::string format_number(double v) {
  if (std::isnan(v)) return kNullMarker;
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

void write_plot_csvs(const PlotData& p, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&](const std::string& name) {
    std::ofstream out(dir / name);
    if (!out) throw DataError("cannot write " + (dir / name).string());
    return out;
  };
  auto pdf_pair = [&](const std::string& name, const stats::Pdf1D& a, const stats::Pdf1D& b) {
    auto out = open(name);
    out << "bin_center,density_a,density_b\n";
    for (std::size_t i = 0; i < a.bins(); ++i) {
      out << format_number(a.center(i)) << ',' << format_number(a.densities[i]) << ','
          << format_number(b.densities[i]) << '\n';
    }
  };
  pdf_pair("gray_level_pdf.csv", p.gray_a, p.gray_b);
  pdf_pair("snr2_pdf.csv", p.snr2_a, p.snr2_b);

  {
    auto out = open("autocorrelation_radial.csv");
    out << "radius,value_a,value_b\n";
    const std::size_t n = std::max(p.acf_a.radii.size(), p.acf_b.radii.size());
    for (std::size_t i = 0; i < n; ++i) {
      const auto& r = i < p.acf_a.radii.size() ? p.acf_a.radii : p.acf_b.radii;
      out << format_number(r[i]) << ','
          << (i < p.acf_a.values.size() ? format_number(p.acf_a.values[i]) : kNullMarker) << ','
          << (i < p.acf_b.values.size() ? format_number(p.acf_b.values[i]) : kNullMarker) << '\n';
    }
  }

  for (const auto& proj : p.projections) {
    auto out = open("pca_" + std::string(features::family_name(proj.family)) + ".csv");
    out << "ensemble,pc1,pc2\n";
    for (Eigen::Index i = 0; i < proj.a.rows(); ++i) {
      out << "a," << format_number(proj.a(i, 0)) << ',' << format_number(proj.a(i, 1)) << '\n';
    }
    for (Eigen::Index i = 0; i < proj.b.rows(); ++i) {
      out << "b," << format_number(proj.b(i, 0)) << ',' << format_number(proj.b(i, 1)) << '\n';
    }
  }
}

void write_feature_csv(std::ostream& out, const Ensemble& e, const EnsembleSummary& s,
                       const std::string& header_comment) {
  std::istringstream lines(header_comment);
  for (std::string line; std::getline(lines, line);) out << "# " << line << '\n';
  out << "index,label";
  for (auto name : features::kFeatureNames) out << ',' << name;
  out << ",mu_I,sigma_I,snr2,n_hat,f_fraction,g_fraction,fg_log_ratio\n";

  auto cell = [&](const std::optional<double>& v) { out << ',' << (v ? format_number(*v) : kNullMarker); };
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& row = s.images[i];
    out << i << ',' << e.labels()[i];
    for (const auto& v : row.features.values()) cell(v);
    if (row.speckle) {
      cell(row.speckle->mu_I);
      cell(row.speckle->sigma_I);
      cell(row.speckle->snr2);
      cell(row.speckle->n_hat);
    } else {
      for (int k = 0; k < 4; ++k) cell(std::nullopt);
    }
    if (row.fg) {
      cell(row.fg->f_fraction);
      cell(row.fg->g_fraction);
      cell(row.fg->log_ratio);
    } else {
      for (int k = 0; k < 3; ++k) cell(std::nullopt);
    }
    out << '\n';
  }
}

}  // namespace simeval::report
