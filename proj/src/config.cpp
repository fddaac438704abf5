// SPDX-License-Identifier: Apache-2.0

#include "ecgbench/config.hpp"

#include <cstdio>
#include <set>

#include "ecgbench/error.hpp"
#include "ecgbench/random.hpp"

namespace ecgbench {
namespace {

/// Reads members of one JSON object and rejects anything it was not asked about.
class Fields {
 public:
  Fields(const Json& obj, std::string where) : obj_(obj), where_(std::move(where)) {
    require(obj.is_object(), ErrorCode::SchemaError, where_ + " must be an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const Json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  template <class T>
  void read(const std::string& key, T& out) {
    const Json* v = raw(key);
    if (v == nullptr) return;
    if constexpr (std::is_same_v<T, bool>) {
      require(v->is_boolean(), ErrorCode::SchemaError, path(key) + " must be a boolean");
      out = v->get<bool>();
    } else if constexpr (std::is_floating_point_v<T>) {
      require(v->is_number(), ErrorCode::SchemaError, path(key) + " must be a number");
      out = v->get<double>();
    } else if constexpr (std::is_integral_v<T> && std::is_unsigned_v<T>) {
      require(is_non_negative_integer(*v), ErrorCode::SchemaError, path(key) + " must be a non-negative integer");
      out = v->get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      require(v->is_number_integer(), ErrorCode::SchemaError, path(key) + " must be an integer");
      out = v->get<T>();
    } else {
      require(v->is_string(), ErrorCode::SchemaError, path(key) + " must be a string");
      out = v->get<std::string>();
    }
  }

  template <class E, class Parse>
  void read_enum(const std::string& key, E& out, Parse parse) {
    std::string name;
    if (!has(key)) {
      seen_.insert(key);
      return;
    }
    read(key, name);
    auto parsed = parse(name);
    require(parsed.has_value(), ErrorCode::SchemaError, path(key) + ": unknown value '" + name + "'");
    out = *parsed;
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      require(seen_.count(key) > 0, ErrorCode::UnknownField, "unknown field '" + path(key) + "'");
    }
  }

  std::string path(const std::string& key) const { return where_ + "." + key; }

 private:
  const Json& obj_;
  std::string where_;
  std::set<std::string> seen_;
};

dsp::FilterSpec parse_filter(const Json& raw, const std::string& where) {
  Fields f(raw, where);
  dsp::FilterSpec spec;
  require(f.has("kind"), ErrorCode::SchemaError, where + ".kind is required");
  f.read_enum("kind", spec.kind, dsp::parse_filter_kind);
  f.read("order", spec.order);
  f.read("low_hz", spec.low_hz);
  f.read("high_hz", spec.high_hz);
  f.read("cut_hz", spec.cut_hz);
  f.read("notch_hz", spec.notch_hz);
  f.read("q", spec.q);
  f.read("transition_hz", spec.transition_hz);
  f.read("window_len", spec.window_len);
  f.read("poly_order", spec.poly_order);
  f.read_enum("phase", spec.phase, dsp::parse_phase_mode);
  f.finish();
  return spec;
}

dsp::PreprocessSettings parse_preprocess(const Json& raw) {
  Fields f(raw, "preprocess");
  dsp::PreprocessSettings out;
  if (const Json* filters = f.raw("filters")) {
    require(filters->is_array(), ErrorCode::SchemaError, "preprocess.filters must be an array");
    out.filters.clear();
    for (std::size_t i = 0; i < filters->size(); ++i) {
      out.filters.push_back(parse_filter((*filters)[i], "preprocess.filters[" + std::to_string(i) + "]"));
    }
  }
  f.read_enum("normalization", out.normalization, dsp::parse_normalization);
  f.read("beat_length", out.beat_length);
  f.read("channel", out.channel);
  f.finish();
  require(out.beat_length >= 8, ErrorCode::InconsistentSettings, "preprocess.beat_length must be >= 8");
  return out;
}

SegmentationSettings parse_segmentation(const Json& raw) {
  Fields f(raw, "segmentation");
  SegmentationSettings out;
  f.read_enum("mode", out.mode, parse_segment_mode);
  if (out.mode == SegmentMode::blind) {
    require(!f.has("pre_s") && !f.has("post_s") && !f.has("align_peak"), ErrorCode::InconsistentSettings,
            "blind segmentation takes window_s/stride_s, not pre_s/post_s/align_peak");
  } else {
    require(!f.has("window_s") && !f.has("stride_s"), ErrorCode::InconsistentSettings,
            "beat segmentation takes pre_s/post_s, not window_s/stride_s");
  }
  f.read("pre_s", out.pre_s);
  f.read("post_s", out.post_s);
  f.read("window_s", out.window_s);
  f.read("stride_s", out.stride_s);
  f.read("align_peak", out.align_peak);
  f.finish();
  if (out.mode == SegmentMode::beat) {
    require(out.pre_s >= 0.0 && out.post_s >= 0.0 && out.pre_s + out.post_s > 0.0,
            ErrorCode::InconsistentSettings, "beat mode needs pre_s, post_s >= 0 and pre_s + post_s > 0");
  } else {
    require(out.stride_s > 0.0 && out.stride_s <= out.window_s, ErrorCode::InconsistentSettings,
            "blind mode needs 0 < stride_s <= window_s");
  }
  return out;
}

augment::AugmentOp parse_op(const Json& raw, const std::string& where) {
  Fields f(raw, where);
  augment::AugmentOp op;
  require(f.has("kind"), ErrorCode::SchemaError, where + ".kind is required");
  f.read_enum("kind", op.kind, augment::parse_op_kind);
  f.read("scale_lo", op.scale_lo);
  f.read("scale_hi", op.scale_hi);
  f.read("sigma", op.sigma);
  f.read("max_shift_s", op.max_shift_s);
  f.read("crop_fraction", op.crop_fraction);
  f.finish();
  try {
    augment::validate_op(op);
  } catch (const Error& e) {
    fail(ErrorCode::InconsistentSettings, where + ": " + e.what());
  }
  return op;
}

EmbedderSettings parse_embedder_settings(const Json& raw) {
  Fields f(raw, "embedder");
  EmbedderSettings out;
  f.read_enum("kind", out.kind, parse_embedder);
  f.read("hidden_dim", out.mlp.hidden_dim);
  f.read("lr", out.mlp.lr);
  f.read("epochs", out.mlp.epochs);
  f.read("batch", out.mlp.batch);
  if (const Json* aug = f.raw("augment")) {
    Fields a(*aug, "embedder.augment");
    a.read("multiplier", out.augment.multiplier);
    if (const Json* ops = a.raw("ops")) {
      require(ops->is_array(), ErrorCode::SchemaError, "embedder.augment.ops must be an array");
      for (std::size_t i = 0; i < ops->size(); ++i) {
        out.augment.ops.push_back(parse_op((*ops)[i], "embedder.augment.ops[" + std::to_string(i) + "]"));
      }
    }
    a.finish();
  }
  f.finish();
  require(out.mlp.hidden_dim >= 1 && out.mlp.batch >= 1 && out.mlp.epochs >= 1, ErrorCode::InconsistentSettings,
          "embedder hidden_dim, epochs and batch must be >= 1");
  require(out.mlp.lr > 0.0, ErrorCode::InconsistentSettings, "embedder.lr must be positive");
  require(out.augment.multiplier == 0 || !out.augment.ops.empty(), ErrorCode::InconsistentSettings,
          "augmentation multiplier set without any ops");
  return out;
}

TimeRange parse_range(const Json& raw, const std::string& where) {
  require(raw.is_array() && raw.size() == 2 && raw[0].is_number() && raw[1].is_number(), ErrorCode::SchemaError,
          where + " must be [begin_s, end_s]");
  TimeRange r{raw[0].get<double>(), raw[1].get<double>()};
  require(r.begin_s >= 0.0 && r.begin_s < r.end_s, ErrorCode::InconsistentSettings,
          where + " must satisfy 0 <= begin < end");
  return r;
}

RegimeSettings parse_regime_settings(const Json& raw) {
  RegimeSettings out;
  if (raw.is_string()) {
    auto name = parse_regime(raw.get<std::string>());
    require(name.has_value(), ErrorCode::SchemaError, "unknown regime '" + raw.get<std::string>() + "'");
    out.names = {*name};
    return out;
  }
  Fields f(raw, "regime");
  require(!(f.has("name") && f.has("names")), ErrorCode::InconsistentSettings, "give regime.name or regime.names");
  auto regime_list = [&](const std::string& key) {
    const Json* v = f.raw(key);
    if (v == nullptr) return;
    const Json list = v->is_array() ? *v : Json::array({*v});
    out.names.clear();
    for (const auto& item : list) {
      require(item.is_string(), ErrorCode::SchemaError, "regime." + key + " entries must be strings");
      auto name = parse_regime(item.get<std::string>());
      require(name.has_value(), ErrorCode::SchemaError, "unknown regime '" + item.get<std::string>() + "'");
      require(std::find(out.names.begin(), out.names.end(), *name) == out.names.end(),
              ErrorCode::InconsistentSettings, "regime listed twice");
      out.names.push_back(*name);
    }
  };
  regime_list("name");
  regime_list("names");
  if (const Json* v = f.raw("settings")) {
    const Json list = v->is_array() ? *v : Json::array({*v});
    out.settings.clear();
    for (const auto& item : list) {
      require(item.is_string(), ErrorCode::SchemaError, "regime.settings entries must be strings");
      auto s = parse_setting(item.get<std::string>());
      require(s.has_value(), ErrorCode::SchemaError, "unknown setting '" + item.get<std::string>() + "'");
      require(std::find(out.settings.begin(), out.settings.end(), *s) == out.settings.end(),
              ErrorCode::InconsistentSettings, "setting listed twice");
      out.settings.push_back(*s);
    }
  }
  if (f.has("enroll_session")) {
    std::string s;
    f.read("enroll_session", s);
    out.enroll_session = s;
  } else {
    f.raw("enroll_session");
  }
  if (f.has("probe_session")) {
    std::string s;
    f.read("probe_session", s);
    out.probe_session = s;
  } else {
    f.raw("probe_session");
  }
  if (const Json* v = f.raw("enroll_range")) out.enroll_range = parse_range(*v, "regime.enroll_range");
  if (const Json* v = f.raw("probe_range")) out.probe_range = parse_range(*v, "regime.probe_range");
  f.read("open_ratio", out.open_ratio);
  f.read("single_session_enroll_fraction", out.single_session_enroll_fraction);
  f.finish();

  require(!out.names.empty(), ErrorCode::SchemaError, "regime.names must not be empty");
  require(!out.settings.empty(), ErrorCode::SchemaError, "regime.settings must not be empty");
  require(out.open_ratio > 0.0 && out.open_ratio < 1.0, ErrorCode::InconsistentSettings,
          "regime.open_ratio must be in (0, 1)");
  require(out.single_session_enroll_fraction > 0.0 && out.single_session_enroll_fraction < 1.0,
          ErrorCode::InconsistentSettings, "regime.single_session_enroll_fraction must be in (0, 1)");
  require(out.enroll_session.has_value() == out.probe_session.has_value(), ErrorCode::InconsistentSettings,
          "enroll_session and probe_session go together");
  require(!out.enroll_session || *out.enroll_session != *out.probe_session, ErrorCode::InconsistentSettings,
          "enroll_session and probe_session must differ");
  require(out.enroll_range.has_value() == out.probe_range.has_value(), ErrorCode::InconsistentSettings,
          "enroll_range and probe_range go together");
  const bool custom = std::find(out.names.begin(), out.names.end(), RegimeName::custom_split) != out.names.end();
  require(!custom || out.enroll_range.has_value(), ErrorCode::InconsistentSettings,
          "custom_split needs enroll_range and probe_range");
  if (out.enroll_range) {
    const auto& a = *out.enroll_range;
    const auto& b = *out.probe_range;
    require(a.end_s <= b.begin_s || b.end_s <= a.begin_s, ErrorCode::OverlappingRanges,
            "enroll_range and probe_range overlap");
  }
  return out;
}

EvaluationSettings parse_evaluation(const Json& raw) {
  Fields f(raw, "evaluation");
  EvaluationSettings out;
  f.read_enum("metric", out.metric, parse_metric);
  if (const Json* v = f.raw("template_size")) {
    if (v->is_string()) {
      require(v->get<std::string>() == "all", ErrorCode::SchemaError, "evaluation.template_size must be 'all' or >= 1");
    } else {
      require(is_non_negative_integer(*v) && v->get<std::size_t>() >= 1, ErrorCode::SchemaError,
              "evaluation.template_size must be 'all' or >= 1");
      out.template_size = v->get<std::size_t>();
    }
  }
  f.read_enum("template_fusion", out.template_fusion, parse_fusion);
  f.read("probe_fusion_k", out.probe_fusion_k);
  f.read_enum("pair_sampling", out.pair_sampling, parse_pair_sampling);
  f.read("far_target", out.far_target);
  f.finish();
  require(out.probe_fusion_k >= 1, ErrorCode::InconsistentSettings, "evaluation.probe_fusion_k must be >= 1");
  require(out.far_target > 0.0 && out.far_target <= 1.0, ErrorCode::InconsistentSettings,
          "evaluation.far_target must be in (0, 1]");
  return out;
}

DatasetSource parse_dataset(const Json& raw) {
  Fields f(raw, "dataset");
  DatasetSource out;
  if (f.has("manifest")) {
    std::string path;
    f.read("manifest", path);
    out.manifest = path;
  } else {
    f.raw("manifest");
  }
  if (const Json* s = f.raw("synthetic")) {
    require(s->is_object(), ErrorCode::SchemaError, "dataset.synthetic must be an object");
    out.synthetic = *s;
  }
  f.finish();
  require(out.manifest.has_value() != out.synthetic.has_value(), ErrorCode::InconsistentSettings,
          "dataset needs exactly one of 'manifest' or 'synthetic'");
  return out;
}

}  // namespace

RunConfig validate_config(const Json& raw) {
  Fields f(raw, "config");
  RunConfig cfg;
  const Json* dataset = f.raw("dataset");
  require(dataset != nullptr, ErrorCode::SchemaError, "config.dataset is required");
  cfg.dataset = parse_dataset(*dataset);
  if (const Json* v = f.raw("preprocess")) cfg.preprocess = parse_preprocess(*v);
  if (const Json* v = f.raw("segmentation")) cfg.segmentation = parse_segmentation(*v);
  if (const Json* v = f.raw("embedder")) cfg.embedder = parse_embedder_settings(*v);
  if (const Json* v = f.raw("regime")) cfg.regime = parse_regime_settings(*v);
  if (const Json* v = f.raw("evaluation")) cfg.evaluation = parse_evaluation(*v);
  if (const Json* v = f.raw("seeds")) {
    require(v->is_array(), ErrorCode::SchemaError, "config.seeds must be an array");
    cfg.seeds.clear();
    for (const auto& s : *v) {
      require(is_non_negative_integer(s), ErrorCode::SchemaError, "seeds must be non-negative integers");
      cfg.seeds.push_back(s.get<std::uint64_t>());
    }
    require(!cfg.seeds.empty(), ErrorCode::EmptySeeds, "config.seeds is empty");
  }
  f.finish();
  return cfg;
}

Json to_json(const RunConfig& cfg) {
  Json j;
  Json dataset = Json::object();
  if (cfg.dataset.manifest) dataset["manifest"] = *cfg.dataset.manifest;
  if (cfg.dataset.synthetic) dataset["synthetic"] = *cfg.dataset.synthetic;
  j["dataset"] = dataset;

  Json filters = Json::array();
  for (const auto& s : cfg.preprocess.filters) {
    filters.push_back({{"kind", dsp::to_string(s.kind)},
                       {"order", s.order},
                       {"low_hz", s.low_hz},
                       {"high_hz", s.high_hz},
                       {"cut_hz", s.cut_hz},
                       {"notch_hz", s.notch_hz},
                       {"q", s.q},
                       {"transition_hz", s.transition_hz},
                       {"window_len", s.window_len},
                       {"poly_order", s.poly_order},
                       {"phase", dsp::to_string(s.phase)}});
  }
  j["preprocess"] = {{"filters", filters},
                     {"normalization", dsp::to_string(cfg.preprocess.normalization)},
                     {"beat_length", cfg.preprocess.beat_length},
                     {"channel", cfg.preprocess.channel}};

  const auto& seg = cfg.segmentation;
  if (seg.mode == SegmentMode::beat) {
    j["segmentation"] = {{"mode", "beat"}, {"pre_s", seg.pre_s}, {"post_s", seg.post_s}, {"align_peak", seg.align_peak}};
  } else {
    j["segmentation"] = {{"mode", "blind"}, {"window_s", seg.window_s}, {"stride_s", seg.stride_s}};
  }

  Json ops = Json::array();
  for (const auto& op : cfg.embedder.augment.ops) {
    ops.push_back({{"kind", augment::to_string(op.kind)},
                   {"scale_lo", op.scale_lo},
                   {"scale_hi", op.scale_hi},
                   {"sigma", op.sigma},
                   {"max_shift_s", op.max_shift_s},
                   {"crop_fraction", op.crop_fraction}});
  }
  j["embedder"] = {{"kind", to_string(cfg.embedder.kind)},
                   {"hidden_dim", cfg.embedder.mlp.hidden_dim},
                   {"lr", cfg.embedder.mlp.lr},
                   {"epochs", cfg.embedder.mlp.epochs},
                   {"batch", cfg.embedder.mlp.batch},
                   {"augment", {{"multiplier", cfg.embedder.augment.multiplier}, {"ops", ops}}}};

  const auto& r = cfg.regime;
  Json names = Json::array();
  for (auto n : r.names) names.push_back(to_string(n));
  Json settings = Json::array();
  for (auto s : r.settings) settings.push_back(to_string(s));
  Json regime = {{"names", names},
                 {"settings", settings},
                 {"open_ratio", r.open_ratio},
                 {"single_session_enroll_fraction", r.single_session_enroll_fraction}};
  if (r.enroll_session) regime["enroll_session"] = *r.enroll_session;
  if (r.probe_session) regime["probe_session"] = *r.probe_session;
  if (r.enroll_range) regime["enroll_range"] = {r.enroll_range->begin_s, r.enroll_range->end_s};
  if (r.probe_range) regime["probe_range"] = {r.probe_range->begin_s, r.probe_range->end_s};
  j["regime"] = regime;

  const auto& e = cfg.evaluation;
  j["evaluation"] = {{"metric", to_string(e.metric)},
                     {"template_fusion", to_string(e.template_fusion)},
                     {"probe_fusion_k", e.probe_fusion_k},
                     {"pair_sampling", to_string(e.pair_sampling)},
                     {"far_target", e.far_target}};
  if (e.template_size) {
    j["evaluation"]["template_size"] = *e.template_size;
  } else {
    j["evaluation"]["template_size"] = "all";
  }
  j["seeds"] = cfg.seeds;
  return j;
}

std::string config_digest(const RunConfig& cfg) {
  // nlohmann objects are key-sorted, so dump() is canonical.
  const std::uint64_t h = detail::fnv1a(to_json(cfg).dump());
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace ecgbench
