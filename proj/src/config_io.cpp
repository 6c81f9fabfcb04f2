#include "simeval/config_io.hpp"

#include "simeval/error.hpp"
#include "simeval_presets.hpp"

#include <fstream>
#include <initializer_list>

namespace simeval {

namespace {

void require_known_keys(const nlohmann::json& j, std::initializer_list<const char*> keys, const char* what) {
  if (!j.is_object()) throw ConfigError(std::string(what) + ": expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ConfigError(std::string(what) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  try {
    return nlohmann::json::parse(in, nullptr, true, true);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("malformed config " + path.string() + ": " + ex.what());
  }
}

std::vector<std::string> preset_names(const std::string& category) {
  std::vector<std::string> out;
  for (const auto& p : presets::kAll) {
    if (p.category == category) out.emplace_back(p.name);
  }
  return out;
}

nlohmann::json preset(const std::string& category, const std::string& name) {
  for (const auto& p : presets::kAll) {
    if (p.category == category && p.name == name) return nlohmann::json::parse(p.text, nullptr, true, true);
  }
  throw ConfigError("unknown " + category + " preset '" + name + "'");
}

}  // namespace simeval

namespace simeval::clb {

void to_json(nlohmann::json& j, const Layer& l) {
  j = {{"mean_clusters", l.mean_clusters},
       {"mean_blobs", l.mean_blobs},
       {"cluster_spread", l.cluster_spread},
       {"blob_scale_x", l.blob_scale_x},
       {"blob_scale_y", l.blob_scale_y},
       {"alpha", l.alpha},
       {"beta", l.beta},
       {"orientation", l.orientation == Orientation::oriented ? "oriented" : "isotropic"},
       {"amplitude", l.amplitude}};
}

void from_json(const nlohmann::json& j, Layer& l) {
  require_known_keys(j, {"mean_clusters", "mean_blobs", "cluster_spread", "blob_scale_x", "blob_scale_y", "alpha",
                         "beta", "orientation", "amplitude"},
                     "clb layer");
  read_if(j, "mean_clusters", l.mean_clusters);
  read_if(j, "mean_blobs", l.mean_blobs);
  read_if(j, "cluster_spread", l.cluster_spread);
  read_if(j, "blob_scale_x", l.blob_scale_x);
  read_if(j, "blob_scale_y", l.blob_scale_y);
  read_if(j, "alpha", l.alpha);
  read_if(j, "beta", l.beta);
  read_if(j, "amplitude", l.amplitude);
  if (j.contains("orientation")) {
    const auto mode = j.at("orientation").get<std::string>();
    if (mode == "isotropic") l.orientation = Orientation::isotropic;
    else if (mode == "oriented") l.orientation = Orientation::oriented;
    else throw ConfigError("clb layer: orientation must be 'isotropic' or 'oriented'");
  }
}

void to_json(nlohmann::json& j, const Config& c) {
  j = {{"image_size", c.image_size}, {"dc_offset", c.dc_offset}, {"support_floor", c.support_floor}, {"layers", c.layers}};
}

void from_json(const nlohmann::json& j, Config& c) {
  require_known_keys(j, {"image_size", "dc_offset", "support_floor", "layers", "description"}, "clb config");
  read_if(j, "image_size", c.image_size);
  read_if(j, "dc_offset", c.dc_offset);
  read_if(j, "support_floor", c.support_floor);
  if (j.contains("layers")) c.layers = j.at("layers").get<std::vector<Layer>>();
  c.validate();
}

void to_json(nlohmann::json& j, const DegradeConfig& d) {
  j = {{"blur_sigma", d.blur_sigma}, {"lpf_cutoff_fraction", d.lpf_cutoff_fraction}};
}

void from_json(const nlohmann::json& j, DegradeConfig& d) {
  require_known_keys(j, {"blur_sigma", "lpf_cutoff_fraction", "description"}, "degrade config");
  read_if(j, "blur_sigma", d.blur_sigma);
  read_if(j, "lpf_cutoff_fraction", d.lpf_cutoff_fraction);
  d.validate();
}

}  // namespace simeval::clb

namespace simeval::uss {

void to_json(nlohmann::json& j, const Config& c) {
  j = {{"image_size", c.image_size},
       {"pixel_pitch", c.pixel_pitch},
       {"wave_velocity", c.wave_velocity},
       {"carrier_frequency", c.carrier_frequency},
       {"cycles_in_fwhm", c.cycles_in_fwhm},
       {"f_number_lateral", c.f_number_lateral},
       {"f_number_elevational", c.f_number_elevational},
       {"snd", c.snd}};
}

void from_json(const nlohmann::json& j, Config& c) {
  require_known_keys(j, {"image_size", "pixel_pitch", "wave_velocity", "carrier_frequency", "cycles_in_fwhm",
                         "f_number_lateral", "f_number_elevational", "snd", "description"},
                     "uss config");
  read_if(j, "image_size", c.image_size);
  read_if(j, "pixel_pitch", c.pixel_pitch);
  read_if(j, "wave_velocity", c.wave_velocity);
  read_if(j, "carrier_frequency", c.carrier_frequency);
  read_if(j, "cycles_in_fwhm", c.cycles_in_fwhm);
  read_if(j, "f_number_lateral", c.f_number_lateral);
  read_if(j, "f_number_elevational", c.f_number_elevational);
  read_if(j, "snd", c.snd);
  c.validate();
}

}  // namespace simeval::uss

namespace simeval::features {

void to_json(nlohmann::json& j, const Params& p) {
  j = {{"gray_levels", p.gray_levels},
       {"glcm_distances", p.glcm_distances},
       {"glcm_angles", p.glcm_angles},
       {"glrm_directions", p.glrm_directions},
       {"ngtdm_distance", p.ngtdm_distance},
       {"ngtdm_normalization", p.ngtdm_normalization == NgtdmNormalization::interior ? "interior" : "total"}};
}

void from_json(const nlohmann::json& j, Params& p) {
  require_known_keys(j, {"gray_levels", "glcm_distances", "glcm_angles", "glrm_directions", "ngtdm_distance",
                         "ngtdm_normalization"},
                     "feature params");
  read_if(j, "gray_levels", p.gray_levels);
  read_if(j, "glcm_distances", p.glcm_distances);
  read_if(j, "glcm_angles", p.glcm_angles);
  read_if(j, "glrm_directions", p.glrm_directions);
  read_if(j, "ngtdm_distance", p.ngtdm_distance);
  if (j.contains("ngtdm_normalization")) {
    const auto mode = j.at("ngtdm_normalization").get<std::string>();
    if (mode == "interior") p.ngtdm_normalization = NgtdmNormalization::interior;
    else if (mode == "total") p.ngtdm_normalization = NgtdmNormalization::total;
    else throw ConfigError("feature params: ngtdm_normalization must be 'interior' or 'total'");
  }
  p.validate();
}

}  // namespace simeval::features

namespace simeval::tissue {

void to_json(nlohmann::json& j, const TissueClass& c) {
  j = {{"name", c.name}, {"prevalence", c.prevalence}, {"mean_log_ratio", c.mean_log_ratio}, {"sd_log_ratio", c.sd_log_ratio}};
}

void from_json(const nlohmann::json& j, TissueClass& c) {
  require_known_keys(j, {"name", "prevalence", "mean_log_ratio", "sd_log_ratio"}, "tissue class");
  read_if(j, "name", c.name);
  read_if(j, "prevalence", c.prevalence);
  read_if(j, "mean_log_ratio", c.mean_log_ratio);
  read_if(j, "sd_log_ratio", c.sd_log_ratio);
}

void to_json(nlohmann::json& j, const Config& c) {
  j = {{"image_size", c.image_size},       {"background_value", c.background_value}, {"fat_value", c.fat_value},
       {"gland_value", c.gland_value},     {"noise_std", c.noise_std},               {"disk_fraction", c.disk_fraction},
       {"texture_sigma", c.texture_sigma}, {"classes", c.classes}};
}

void from_json(const nlohmann::json& j, Config& c) {
  require_known_keys(j, {"image_size", "background_value", "fat_value", "gland_value", "noise_std", "disk_fraction",
                         "texture_sigma", "classes", "description"},
                     "tissue config");
  read_if(j, "image_size", c.image_size);
  read_if(j, "background_value", c.background_value);
  read_if(j, "fat_value", c.fat_value);
  read_if(j, "gland_value", c.gland_value);
  read_if(j, "noise_std", c.noise_std);
  read_if(j, "disk_fraction", c.disk_fraction);
  read_if(j, "texture_sigma", c.texture_sigma);
  if (j.contains("classes")) c.classes = j.at("classes").get<std::vector<TissueClass>>();
  c.validate();
}

}  // namespace simeval::tissue
