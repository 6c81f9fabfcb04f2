#include "simeval/cli.hpp"

#include "simeval/clb.hpp"
#include "simeval/config_io.hpp"
#include "simeval/core.hpp"
#include "simeval/error.hpp"
#include "simeval/report.hpp"
#include "simeval/stats.hpp"
#include "simeval/tissue.hpp"
#include "simeval/uss.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace simeval::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json load(const std::string& category, const ConfigSource& src, const std::string& fallback = {}) {
  if (!src.file.empty()) {
    if (!src.preset.empty()) throw ConfigError(category + ": give either a preset or a config file, not both");
    return read_json_file(src.file);
  }
  if (!src.preset.empty()) return preset(category, src.preset);
  if (!fallback.empty()) return preset(category, fallback);
  throw ConfigError(category + ": a preset or config file is required");
}

void require_out(const fs::path& out, const std::string& cmd) {
  if (out.empty()) throw ConfigError(cmd + ": --out is required");
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed: " + path.string());
}

json manifest_json(const Manifest& m) {
  return {{"generator", m.generator}, {"config", m.config},         {"master_seed", m.master_seed},
          {"parameters", m.parameters}, {"quantized", m.quantized}, {"version", m.version}};
}

report::EvalConfig eval_config(const ConfigSource& src) {
  auto j = load("eval", src, "default");
  auto cfg = parse_config<report::EvalConfig>(j, "eval");
  cfg.validate();
  return cfg;
}

Ensemble load_dataset(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError("dataset not found: " + dir.string());
  return load_ensemble(dir);
}

// --- sweep helpers ---------------------------------------------------------------------------

struct SweepSpec {
  json base;
  std::string base_name;
  std::string parameter;
  std::vector<double> values;
};

SweepSpec sweep_spec(const SweepOptions& o) {
  SweepSpec s;
  if (!o.sweep.empty()) {
    if (!o.base.empty() || !o.parameter.empty() || !o.values.empty()) {
      throw ConfigError("sweep: a sweep file replaces --base-*, --parameter and --values");
    }
    const auto j = load(o.sim, o.sweep);
    for (const auto& [key, _] : j.items()) {
      if (key != "base" && key != "parameter" && key != "values") throw ConfigError("sweep: unknown key '" + key + "'");
    }
    try {
      s.base_name = j.at("base").get<std::string>();
      s.parameter = j.at("parameter").get<std::string>();
      s.values = j.at("values").get<std::vector<double>>();
    } catch (const json::exception& ex) {
      throw ConfigError(std::string("sweep: ") + ex.what());
    }
    s.base = preset(o.sim, s.base_name);
  } else {
    s.base = load(o.sim, o.base);
    s.base_name = o.base.preset.empty() ? o.base.file.string() : o.base.preset;
    s.parameter = o.parameter;
    s.values = o.values;
  }
  if (s.values.empty()) throw ConfigError("sweep: no values");
  if (!s.base.contains(s.parameter) || !s.base.at(s.parameter).is_number()) {
    throw ConfigError("sweep: unknown parameter '" + s.parameter + "'");
  }
  return s;
}

Ensemble sweep_ensemble(const std::string& sim, const json& cfg_json, std::optional<int> size, std::size_t n,
                        std::uint64_t seed, int threads, json& effective) {
  const RngStream rng(seed, 0);
  if (sim == "uss") {
    auto cfg = parse_config<uss::Config>(cfg_json, "uss");
    if (size) cfg.image_size = *size;
    effective = cfg;
    return uss::generate_ensemble(cfg, n, rng, threads);
  }
  auto cfg = parse_config<clb::Config>(cfg_json, "clb");
  if (size) cfg = clb::rescaled(cfg, *size);
  effective = cfg;
  return clb::generate_ensemble(cfg, n, rng, threads);
}

struct Summary {
  double mean = 0, std = 0;
};

Summary mean_std(const std::vector<double>& v) {
  if (v.empty()) return {std::nan(""), std::nan("")};
  const auto m = stats::moments(v);
  return {m.mean, std::sqrt(m.variance)};
}

// --- svg -------------------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot read " + path.string());
  CsvTable t;
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (t.header.empty()) {
      t.header = std::move(cells);
    } else {
      t.rows.push_back(std::move(cells));
    }
  }
  return t;
}

double cell_value(const std::string& s) {
  if (s == report::kNullMarker) return std::nan("");
  try {
    return std::stod(s);
  } catch (const std::exception&) {
    throw DataError("not a number in plot data: " + s);
  }
}

struct Series {
  std::string name;
  std::string color;
  std::vector<std::pair<double, double>> points;
  bool scatter = false;
};

std::string render_svg(const std::string& title, const std::string& xlabel, const std::vector<Series>& series) {
  constexpr double w = 640, h = 420, left = 60, right = 20, top = 40, bottom = 50;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  auto px = [&](double x) { return left + (x - x0) / (x1 - x0) * (w - left - right); };
  auto py = [&](double y) { return h - bottom - (y - y0) / (y1 - y0) * (h - top - bottom); };

  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << h - bottom << "\" x2=\"" << w - right << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n";
  o << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << h - bottom
    << "\" stroke=\"black\"/>\n";
  o << "<text x=\"" << left << "\" y=\"" << h - bottom + 16 << "\">" << report::format_number(x0) << "</text>\n";
  o << "<text x=\"" << w - right << "\" y=\"" << h - bottom + 16 << "\" text-anchor=\"end\">"
    << report::format_number(x1) << "</text>\n";
  o << "<text x=\"" << left - 4 << "\" y=\"" << h - bottom << "\" text-anchor=\"end\">" << report::format_number(y0)
    << "</text>\n";
  o << "<text x=\"" << left - 4 << "\" y=\"" << top + 10 << "\" text-anchor=\"end\">" << report::format_number(y1)
    << "</text>\n";
  o << "<text x=\"" << w / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\">" << xlabel << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    if (s.scatter) {
      for (auto [x, y] : s.points) {
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        o << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"1.5\" fill=\"" << s.color
          << "\" fill-opacity=\"0.5\"/>\n";
      }
    } else {
      o << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : s.points) {
        if (std::isfinite(x) && std::isfinite(y)) o << px(x) << ',' << py(y) << ' ';
      }
      o << "\"/>\n";
    }
    o << "<text x=\"" << w - right - 4 << "\" y=\"" << top + 14 * (k + 1) << "\" text-anchor=\"end\" fill=\""
      << s.color << "\">" << s.name << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::vector<Series> curve_pair(const CsvTable& t) {
  std::vector<Series> s{{"a", "#1f77b4", {}}, {"b", "#d62728", {}}};
  for (const auto& r : t.rows) {
    if (r.size() < 3) throw DataError("short row in plot data");
    const double x = cell_value(r[0]);
    s[0].points.emplace_back(x, cell_value(r[1]));
    s[1].points.emplace_back(x, cell_value(r[2]));
  }
  return s;
}

std::vector<Series> scatter_pair(const CsvTable& t) {
  std::vector<Series> s{{"a", "#1f77b4", {}, true}, {"b", "#d62728", {}, true}};
  for (const auto& r : t.rows) {
    if (r.size() < 3) throw DataError("short row in plot data");
    s[r[0] == "a" ? 0 : 1].points.emplace_back(cell_value(r[1]), cell_value(r[2]));
  }
  return s;
}

std::string metric_line(const std::string& name, double value, std::optional<double> floor) {
  std::ostringstream o;
  o << "  " << name;
  for (std::size_t k = name.size(); k < 22; ++k) o << ' ';
  o << report::format_number(value);
  if (floor) {
    o << "  floor " << report::format_number(*floor);
    o << (value > *floor ? "  above floor" : "  within floor");
  }
  return o.str();
}

}  // namespace

// --- commands --------------------------------------------------------------------------------

void cmd_generate(const GenerateOptions& o) {
  require_out(o.out, "generate");
  if (o.n == 0) throw ConfigError("generate: --n must be >= 1");
  if (o.image_size && *o.image_size < 2) throw ConfigError("generate: --size must be >= 2");
  const RngStream rng(o.seed, 0);
  json effective = {{"sim", o.sim}, {"n", o.n}, {"seed", o.seed}, {"quantize", o.quantize}};
  Ensemble e;

  if (o.sim == "clb") {
    auto cfg = parse_config<clb::Config>(load("clb", o.config), "clb");
    if (o.image_size) cfg = clb::rescaled(cfg, *o.image_size);
    cfg.validate();
    effective["config"] = cfg;
    if (o.mixed) {
      const auto d = parse_config<clb::DegradeConfig>(load("degrade", o.degrade, "half_band"), "degrade");
      effective["degrade"] = d;
      effective["mixed"] = *o.mixed;
      e = clb::generate_mixed(cfg, d, *o.mixed, o.n, rng, o.threads);
    } else {
      e = clb::generate_ensemble(cfg, o.n, rng, o.threads);
    }
  } else if (o.sim == "uss") {
    auto cfg = parse_config<uss::Config>(load("uss", o.config), "uss");
    if (o.image_size) cfg.image_size = *o.image_size;
    cfg.validate();
    effective["config"] = cfg;
    if (o.mixed) {
      if (o.config_b.empty()) throw ConfigError("generate: --mixed with --sim uss needs --preset-b or --config-b");
      auto cfg_b = parse_config<uss::Config>(load("uss", o.config_b), "uss");
      if (o.image_size) cfg_b.image_size = *o.image_size;
      cfg_b.validate();
      effective["config_b"] = cfg_b;
      effective["mixed"] = *o.mixed;
      e = uss::generate_mixed(cfg, cfg_b, *o.mixed, o.n, rng, o.threads);
    } else {
      e = uss::generate_ensemble(cfg, o.n, rng, o.threads);
    }
  } else if (o.sim == "tissue") {
    if (o.mixed) throw ConfigError("generate: --mixed is not available for tissue ensembles");
    auto cfg = parse_config<tissue::Config>(load("tissue", o.config), "tissue");
    if (o.image_size) cfg.image_size = *o.image_size;
    cfg.validate();
    effective["config"] = cfg;
    e = tissue::generate_ensemble(cfg, o.n, rng, o.threads);
  } else {
    throw ConfigError("generate: unknown simulator '" + o.sim + "'");
  }

  if (o.quantize) e = quantize_ensemble(e);
  e.manifest().config = effective;
  save_ensemble(e, o.out);
  std::cerr << "generate: " << e.size() << " " << e.width() << "x" << e.height() << " images -> " << o.out.string()
            << "\n";
}

void cmd_features(const FeaturesOptions& o) {
  const auto e = load_dataset(o.dataset);
  const auto cfg = eval_config(o.eval);
  const auto s = report::summarize(e, cfg, o.threads);
  const std::string header = "eval: " + json(cfg).dump() + "\ndataset: " + manifest_json(e.manifest()).dump();
  std::ostringstream csv;
  report::write_feature_csv(csv, e, s, header);
  if (o.out.empty()) {
    std::cout << csv.str();
  } else {
    write_text(o.out, csv.str());
  }
  std::size_t incomplete = 0;
  for (const auto& row : s.images) incomplete += row.features.complete() ? 0 : 1;
  std::cerr << "features: " << s.size() << " rows, " << incomplete << " with undefined moments\n";
}

void cmd_compare(const CompareOptions& o) {
  require_out(o.out, "compare");
  const auto a = load_dataset(o.dataset_a);
  const auto b = load_dataset(o.dataset_b);
  auto cfg = eval_config(o.eval);
  if (o.seed) cfg.floor_seed = *o.seed;
  const auto sa = report::summarize(a, cfg, o.threads);
  const auto sb = report::summarize(b, cfg, o.threads);
  const auto r = report::compare(sa, sb, cfg);
  auto j = report::to_json(r);
  j["datasets"] = {{"a", manifest_json(a.manifest())}, {"b", manifest_json(b.manifest())}};
  fs::create_directories(o.out);
  write_text(o.out / "report.json", j.dump(2) + "\n");
  report::write_plot_csvs(report::plot_data(sa, sb, cfg, o.threads), o.out);
  std::cerr << "compare: worst family " << r.worst_family << "; report -> " << (o.out / "report.json").string()
            << "\n";
}

void cmd_sweep(const SweepOptions& o) {
  require_out(o.out, "sweep");
  if (o.sim != "uss" && o.sim != "clb") throw ConfigError("sweep: --sim must be uss or clb");
  if (o.n < 2) throw ConfigError("sweep: --n must be >= 2");
  if (o.bins < 1) throw ConfigError("sweep: --bins must be >= 1");
  const auto spec = sweep_spec(o);
  const auto kind = o.sim == "uss" ? stats::PixelKind::envelope : stats::PixelKind::intensity;

  std::ostringstream table;
  json record = {{"sim", o.sim},       {"base", spec.base_name}, {"parameter", spec.parameter},
                 {"values", spec.values}, {"n", o.n},          {"seed", o.seed},
                 {"bins", o.bins},     {"configs", json::array()}};
  if (o.image_size) record["image_size"] = *o.image_size;
  table << "# sweep: " << json{{"sim", o.sim}, {"base", spec.base_name}, {"seed", o.seed}, {"n", o.n}}.dump() << "\n";
  table << spec.parameter
        << ",n,constant_images,snr2_mean,snr2_std,mu_I_mean,mu_I_std,sigma_I_mean,sigma_I_std,n_hat_mean,saturated\n";

  fs::create_directories(o.out);
  for (std::size_t k = 0; k < spec.values.size(); ++k) {
    json cfg_json = spec.base;
    cfg_json[spec.parameter] = spec.values[k];
    json effective;
    const auto e = sweep_ensemble(o.sim, cfg_json, o.image_size, o.n, o.seed, o.threads, effective);
    record["configs"].push_back(effective);

    std::vector<double> snr2, mu, sigma, n_hat;
    std::size_t constant = 0, saturated = 0;
    for (const auto& img : e.images()) {
      if (img.data.maxCoeff() == img.data.minCoeff()) {
        ++constant;
        continue;
      }
      const auto s = stats::snr_stats(img, kind);
      snr2.push_back(s.snr2);
      mu.push_back(s.mu_I);
      sigma.push_back(s.sigma_I);
      if (s.n_hat) {
        n_hat.push_back(*s.n_hat);
      } else {
        ++saturated;
      }
    }
    const auto fmt = [](Summary s) { return report::format_number(s.mean) + "," + report::format_number(s.std); };
    table << report::format_number(spec.values[k]) << ',' << e.size() << ',' << constant << ',' << fmt(mean_std(snr2))
          << ',' << fmt(mean_std(mu)) << ',' << fmt(mean_std(sigma)) << ','
          << report::format_number(mean_std(n_hat).mean) << ',' << saturated << '\n';

    std::ostringstream hist;
    hist << "# " << spec.parameter << " = " << report::format_number(spec.values[k]) << "\n";
    hist << "statistic,bin_lo,bin_hi,density\n";
    for (const auto& [name, sample] : {std::pair{"snr2", &snr2}, {"mu_I", &mu}, {"sigma_I", &sigma}}) {
      if (sample->empty()) continue;
      const auto [lo, hi] = std::minmax_element(sample->begin(), sample->end());
      const auto pdf = stats::histogram_density(*sample, *lo, *hi, o.bins);
      for (std::size_t b = 0; b < pdf.bins(); ++b) {
        hist << name << ',' << report::format_number(pdf.bin_edges[b]) << ','
             << report::format_number(pdf.bin_edges[b + 1]) << ',' << report::format_number(pdf.densities[b]) << '\n';
      }
    }
    write_text(o.out / ("hist_" + std::to_string(k) + ".csv"), hist.str());
    std::cerr << "sweep: " << spec.parameter << " = " << spec.values[k] << " done\n";
  }
  write_text(o.out / "sweep.csv", table.str());
  write_text(o.out / "sweep.json", record.dump(2) + "\n");
}

void cmd_report(const ReportOptions& o) {
  json j = read_json_file(o.report);
  if (!j.contains("metrics") || !j.contains("noise_floors")) throw DataError("not a comparison report: " + o.report.string());
  const auto& m = j.at("metrics");
  const auto& f = j.at("noise_floors");

  std::ostringstream text;
  text << "comparison report " << o.report.string() << "\n";
  if (j.contains("metadata") && j["metadata"].contains("n_a")) {
    text << "  n_a " << j["metadata"]["n_a"] << ", n_b " << j["metadata"]["n_b"] << "\n";
  }
  auto floor_of = [&](const std::string& group, const std::string& key) -> std::optional<double> {
    if (f.contains(group) && f[group].is_object() && f[group].contains(key) && f[group][key].is_number()) {
      return f[group][key].get<double>();
    }
    if (key.empty() && f.contains(group) && f[group].is_number()) return f[group].get<double>();
    return std::nullopt;
  };
  std::size_t above = 0, total = 0;
  auto emit = [&](const std::string& label, double v, std::optional<double> fl) {
    text << metric_line(label, v, fl) << "\n";
    if (fl) {
      ++total;
      above += v > *fl ? 1 : 0;
    }
  };
  for (const auto& group : {"jsd_by_statistic", "tv_by_family"}) {
    if (!m.contains(group)) continue;
    text << group << "\n";
    for (const auto& [key, value] : m[group].items()) {
      if (value.is_number()) emit(key, value.get<double>(), floor_of(group, key));
    }
  }
  for (const auto& single : {"frechet_features", "knn_jsd"}) {
    if (m.contains(single) && m[single].is_number()) emit(single, m[single].get<double>(), floor_of(single, ""));
  }
  text << "worst family: " << j.value("worst_family", std::string("NA")) << "\n";
  text << above << " of " << total << " metrics above their noise floor\n";
  std::cout << text.str();

  if (!o.svg) return;
  const fs::path src = o.report.has_parent_path() ? o.report.parent_path() : fs::path(".");
  const fs::path dst = o.out.empty() ? src : o.out;
  fs::create_directories(dst);
  const std::vector<std::tuple<std::string, std::string, std::string>> curves{
      {"gray_level_pdf", "gray-level density", "gray level"},
      {"snr2_pdf", "SNR^2 density", "SNR^2"},
      {"autocorrelation_radial", "radial autocorrelation", "lag (pixels)"}};
  std::size_t written = 0;
  for (const auto& [name, title, xlabel] : curves) {
    const auto path = src / (name + ".csv");
    if (!fs::exists(path)) continue;
    write_text(dst / (name + ".svg"), render_svg(title, xlabel, curve_pair(read_csv(path))));
    ++written;
  }
  for (const auto& entry : fs::directory_iterator(src)) {
    const auto stem = entry.path().stem().string();
    if (entry.path().extension() != ".csv" || stem.rfind("pca_", 0) != 0) continue;
    write_text(dst / (stem + ".svg"), render_svg(stem.substr(4) + " PCA projection", "pc1", scatter_pair(read_csv(entry.path()))));
    ++written;
  }
  std::cerr << "report: " << written << " SVG files -> " << dst.string() << "\n";
}

// --- argument parsing ------------------------------------------------------------------------

int run(int argc, char** argv) {
  CLI::App app{"Simulated image ensembles and their statistical evaluation"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 0;
  int threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  std::string out;
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  app.add_option("--out", out, "Output path");

  auto add_source = [](CLI::App* cmd, ConfigSource& src, const std::string& suffix, const std::string& what) {
    cmd->add_option("--preset" + suffix, src.preset, "Shipped " + what + " preset");
    cmd->add_option("--config" + suffix, src.file, what + " JSON file");
  };

  GenerateOptions gen;
  std::optional<double> mixed;
  std::optional<int> gen_size;
  auto* generate = app.add_subcommand("generate", "Generate an image ensemble");
  generate->add_option("--sim", gen.sim, "Simulator")->required()->check(CLI::IsMember({"clb", "uss", "tissue"}));
  add_source(generate, gen.config, "", "simulator");
  add_source(generate, gen.config_b, "-b", "second uss");
  generate->add_option("--degrade-preset", gen.degrade.preset, "Degradation preset (clb mixing)");
  generate->add_option("--degrade-config", gen.degrade.file, "Degradation JSON file (clb mixing)");
  generate->add_option("--n", gen.n, "Number of images")->capture_default_str();
  generate->add_option("--size", gen_size, "Image size override");
  generate->add_option("--mixed", mixed, "Minority fraction: degraded (clb) or config-b (uss)");
  generate->add_flag("--quantize", gen.quantize, "8-bit quantization at the top-1% ensemble value");

  FeaturesOptions feat;
  auto* features = app.add_subcommand("features", "Per-image feature table");
  features->add_option("dataset", feat.dataset, "Dataset directory")->required();
  add_source(features, feat.eval, "", "eval");

  CompareOptions cmp;
  std::optional<std::uint64_t> floor_seed;
  auto* compare = app.add_subcommand("compare", "Evaluation battery between two datasets");
  compare->add_option("reference", cmp.dataset_a, "Reference dataset (noise floors)")->required();
  compare->add_option("candidate", cmp.dataset_b, "Candidate dataset")->required();
  add_source(compare, cmp.eval, "", "eval");

  SweepOptions swp;
  std::optional<int> sweep_size;
  auto* sweep = app.add_subcommand("sweep", "Speckle statistics over a parameter sweep");
  sweep->add_option("--sim", swp.sim, "Simulator")->required()->check(CLI::IsMember({"clb", "uss"}));
  add_source(sweep, swp.sweep, "", "sweep");
  sweep->add_option("--base-preset", swp.base.preset, "Base simulator preset");
  sweep->add_option("--base-config", swp.base.file, "Base simulator JSON file");
  sweep->add_option("--parameter", swp.parameter, "Numeric config field to vary");
  sweep->add_option("--values", swp.values, "Comma-separated values")->delimiter(',');
  sweep->add_option("--n", swp.n, "Images per value")->capture_default_str();
  sweep->add_option("--size", sweep_size, "Image size override");
  sweep->add_option("--bins", swp.bins, "Histogram bins")->capture_default_str();

  ReportOptions rep;
  auto* report_cmd = app.add_subcommand("report", "Summarize a comparison report");
  report_cmd->add_option("report", rep.report, "report.json")->required();
  report_cmd->add_flag("--svg", rep.svg, "Render plot CSVs as SVG");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }
  // --seed on compare overrides the eval floor seed only when given.
  if (app.count("--seed") > 0) floor_seed = seed;

  try {
    if (*generate) {
      gen.seed = seed, gen.threads = threads, gen.out = out, gen.mixed = mixed, gen.image_size = gen_size;
      cmd_generate(gen);
    } else if (*features) {
      feat.threads = threads, feat.out = out;
      cmd_features(feat);
    } else if (*compare) {
      cmp.threads = threads, cmp.out = out, cmp.seed = floor_seed;
      cmd_compare(cmp);
    } else if (*sweep) {
      swp.seed = seed, swp.threads = threads, swp.out = out, swp.image_size = sweep_size;
      cmd_sweep(swp);
    } else if (*report_cmd) {
      rep.out = out;
      cmd_report(rep);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumericalError;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kOtherError;
  }
  return kSuccess;
}

}  // namespace simeval::cli
