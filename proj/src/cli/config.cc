// Copyright 2026 The FedBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fedbench/cli/config.h"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fedbench::cli {
namespace {

using nlohmann::json;

// Walks one JSON object, recording type errors and unknown keys.
class Reader {
 public:
  Reader(const json& obj, std::string path, std::vector<std::string>& errors)
      : obj_(obj), path_(std::move(path)), errors_(errors) {
    if (!obj_.is_object()) Error(path_, "must be an object");
  }
  ~Reader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, value] : obj_.items()) {
      if (!seen_.contains(key)) Error(Path(key), "unknown key");
    }
  }

  bool Has(const std::string& key) {
    seen_.insert(key);
    return obj_.is_object() && obj_.contains(key) && !obj_.at(key).is_null();
  }
  const json* Get(const std::string& key) {
    return Has(key) ? &obj_.at(key) : nullptr;
  }
  std::string Path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }
  void Error(const std::string& where, const std::string& what) {
    errors_.push_back(where + ": " + what);
  }
  void Require(const std::string& key) {
    if (!Has(key)) Error(Path(key), "required field missing");
  }

  void Read(const std::string& key, std::string& out) {
    if (const json* v = Get(key)) {
      if (v->is_string()) {
        out = v->get<std::string>();
      } else {
        Error(Path(key), "expected a string");
      }
    }
  }
  void Read(const std::string& key, double& out) {
    if (const json* v = Get(key)) {
      if (v->is_number()) {
        out = v->get<double>();
      } else {
        Error(Path(key), "expected a number");
      }
    }
  }
  void Read(const std::string& key, bool& out) {
    if (const json* v = Get(key)) {
      if (v->is_boolean()) {
        out = v->get<bool>();
      } else {
        Error(Path(key), "expected true or false");
      }
    }
  }
  template <typename T>
    requires std::is_unsigned_v<T>
  void Read(const std::string& key, T& out) {
    if (const json* v = Get(key)) {
      if (v->is_number_unsigned() ||
          (v->is_number_integer() && v->get<std::int64_t>() >= 0)) {
        out = static_cast<T>(v->get<std::uint64_t>());
      } else {
        Error(Path(key), "expected a non-negative integer");
      }
    }
  }
  void Read(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = Get(key)) ReadSizes(*v, Path(key), out);
  }
  void ReadSizes(const json& v, const std::string& where,
                 std::vector<std::size_t>& out) {
    if (!v.is_array()) {
      Error(where, "expected a list of non-negative integers");
      return;
    }
    out.clear();
    for (const auto& x : v) {
      if (!x.is_number_unsigned()) {
        Error(where, "expected a list of non-negative integers");
        return;
      }
      out.push_back(x.get<std::size_t>());
    }
  }
  // Parses an enum through `parse`, recording its error message.
  template <typename T, typename Parse>
  void ReadEnum(const std::string& key, T& out, Parse parse) {
    std::string s;
    if (!Has(key)) return;
    Read(key, s);
    if (s.empty()) return;
    try {
      out = parse(s);
    } catch (const std::exception& e) {
      Error(Path(key), e.what());
    }
  }

 private:
  const json& obj_;
  std::string path_;
  std::vector<std::string>& errors_;
  std::set<std::string> seen_;
};

data::LabelOwner ParseOwner(std::string_view s) {
  if (s == "a") return data::LabelOwner::kA;
  if (s == "b") return data::LabelOwner::kB;
  throw std::invalid_argument("label owner must be 'a' or 'b'");
}

void ReadWorkload(const json& j, ExperimentConfig& c,
                  std::vector<std::string>& errors) {
  Reader r(j, "workload", errors);
  WorkloadConfig& w = c.workload;
  r.Require("source");
  r.ReadEnum("source", w.source, [](std::string_view s) {
    if (s == "synth") return Source::kSynth;
    if (s == "csv") return Source::kCsv;
    throw std::invalid_argument("source must be 'synth' or 'csv'");
  });
  r.Read("split_seed", w.split_seed);
  if (w.source == Source::kSynth) {
    r.Require("kind");
    r.ReadEnum("kind", w.synth.kind, data::ParseSynthKind);
    r.Read("n", w.synth.n);
    r.Read("d", w.synth.d);
    r.Read("classes", w.synth.classes);
    r.Read("noise", w.synth.noise);
    r.Read("separation", w.synth.separation);
    r.Read("data_seed", w.synth.seed);
  } else {
    r.Require("path");
    r.Read("path", w.csv_path);
    r.ReadEnum("task", w.csv_task, [](std::string_view s) {
      if (s == "classification") return data::CsvTask::kClassification;
      if (s == "regression") return data::CsvTask::kRegression;
      throw std::invalid_argument("task must be 'classification' or 'regression'");
    });
  }
}

void ReadModel(const json& j, ExperimentConfig& c,
               std::vector<std::string>& errors) {
  Reader r(j, "model", errors);
  if (const json* h = r.Get("hidden")) {
    if (h->is_string() && h->get<std::string>() == "auto") {
      c.hidden.reset();
    } else {
      std::vector<std::size_t> widths;
      r.ReadSizes(*h, "model.hidden", widths);
      c.hidden = widths;
    }
  }
  r.ReadEnum("activation", c.activation, models::ParseActivation);
  std::string metric;
  r.Read("metric", metric);
  if (!metric.empty()) {
    try {
      c.metric = stats::ParseMetric(metric);
    } catch (const std::exception& e) {
      r.Error("model.metric", e.what());
    }
  }
}

void ReadAlgorithm(const json& j, ExperimentConfig& c,
                   std::vector<std::string>& errors) {
  Reader r(j, "algorithm", errors);
  r.Require("name");
  r.ReadEnum("name", c.algo.algorithm, fl::ParseAlgorithm);
  r.Read("fraction", c.algo.client_fraction);
  r.Read("local_epochs", c.algo.local_epochs);
  r.Read("prox_mu", c.algo.prox_mu);
  r.Read("batch_size", c.algo.batch_size);
  if (r.Has("max_rounds")) {
    std::size_t m = 0;
    r.Read("max_rounds", m);
    c.algo.max_rounds = m;
  } else {
    c.algo.max_rounds.reset();
  }
}

void ReadDp(const json& j, ExperimentConfig& c,
            std::vector<std::string>& errors) {
  Reader r(j, "dp", errors);
  privacy::DpConfig dp;
  r.Read("clip", dp.clip);
  r.Read("epsilon", dp.target_epsilon);
  r.Read("noise_multiplier", dp.noise_multiplier);
  r.Read("delta", dp.delta);
  r.Read("sampling_rate", dp.sampling_rate);
  r.Read("rounds", dp.rounds);
  c.dp = dp;
}

void ReadSecAgg(const json& j, ExperimentConfig& c,
                std::vector<std::string>& errors) {
  Reader r(j, "secure_agg", errors);
  c.secagg.enabled = true;
  const bool has_parts = r.Has("parts");
  const bool has_sent = r.Has("parts_sent");
  if (has_parts && has_sent) {
    r.Error("secure_agg", "give either parts or parts_sent, not both");
  }
  if (has_sent) {
    std::size_t sent = 0;
    r.Read("parts_sent", sent);
    c.secagg.parts = sent + 1;
  } else {
    r.Read("parts", c.secagg.parts);
  }
  double bits = 20.0;
  r.Read("fraction_bits", bits);
  if (!(bits >= 1.0 && bits <= 40.0) || bits != std::floor(bits)) {
    r.Error("secure_agg.fraction_bits", "must be an integer in [1, 40]");
  } else {
    c.secagg.scale = std::ldexp(1.0, -static_cast<int>(bits));
  }
}

void ReadCompression(const json& j, ExperimentConfig& c,
                     std::vector<std::string>& errors) {
  Reader r(j, "compression", errors);
  r.ReadEnum("method", c.compression.method, compression::ParseMethod);
  r.Read("k", c.compression.k_fraction);
  r.Read("rank", c.compression.rank);
  r.Read("error_feedback", c.compression.error_feedback);
  r.Read("damping", c.compression.damping);
  r.Read("randk_rescale", c.compression.randk_rescale);
}

void ReadChannel(const json& j, ExperimentConfig& c,
                 std::vector<std::string>& errors) {
  Reader r(j, "channel", errors);
  if (r.Has("bandwidth_mbps")) {
    double mbps = 0.0;
    r.Read("bandwidth_mbps", mbps);
    c.channel.bandwidth_bps = mbps * 1e6;
  } else {
    c.channel.bandwidth_bps = std::numeric_limits<double>::infinity();
  }
  double ms = 0.0;
  r.Read("latency_ms", ms);
  c.channel.latency_s = ms / 1000.0;
}

void ReadCost(const json& j, ExperimentConfig& c,
              std::vector<std::string>& errors) {
  Reader r(j, "cost", errors);
  r.Read("train_per_sample_param", c.cost.train_per_sample_param);
  r.Read("eval_per_sample_param", c.cost.eval_per_sample_param);
  r.Read("encrypt_per_value", c.cost.encrypt_per_value);
  r.Read("other_per_value", c.cost.other_per_value);
  r.ReadEnum("clock", c.cost.wall_clock, [](std::string_view s) {
    if (s == "logical") return false;
    if (s == "wall") return true;
    throw std::invalid_argument("clock must be 'logical' or 'wall'");
  });
}

void ReadVertical(const json& j, ExperimentConfig& c,
                  std::vector<std::string>& errors) {
  Reader r(j, "vertical", errors);
  VerticalConfig& v = c.vertical;
  r.Require("party_widths");
  r.Read("party_widths", v.party_widths);
  r.Read("cut_widths", v.cut_widths);
  r.Read("top_hidden", v.top_hidden);
  if (const json* bh = r.Get("bottom_hidden")) {
    if (!bh->is_array()) {
      r.Error("vertical.bottom_hidden", "expected a list of lists");
    } else {
      v.bottom_hidden.clear();
      for (const auto& x : *bh) {
        std::vector<std::size_t> widths;
        r.ReadSizes(x, "vertical.bottom_hidden", widths);
        v.bottom_hidden.push_back(widths);
      }
    }
  }
  r.Read("overlap", v.overlap);
  r.ReadEnum("label_owner", v.label_owner, ParseOwner);
  r.Read("batch_size", v.batch_size);
  r.Read("max_epochs", v.max_epochs);
  r.Read("combine_parties", v.combine_parties);
}

}  // namespace

SetupMode ParseSetupMode(std::string_view name) {
  if (name == "federated") return SetupMode::kFederated;
  if (name == "combined") return SetupMode::kCombined;
  if (name == "solo") return SetupMode::kSolo;
  if (name == "vertical") return SetupMode::kVertical;
  throw std::invalid_argument("unknown setup mode '" + std::string(name) + "'");
}

std::string_view ToString(SetupMode m) {
  switch (m) {
    case SetupMode::kFederated:
      return "federated";
    case SetupMode::kCombined:
      return "combined";
    case SetupMode::kSolo:
      return "solo";
    case SetupMode::kVertical:
      return "vertical";
  }
  return "?";
}

ParseOutcome ParseConfigJson(const json& doc) {
  ParseOutcome out;
  ExperimentConfig c;
  std::vector<std::string>& errors = out.errors;
  {
    Reader r(doc, "", errors);
    std::string format;
    r.Require("format");
    r.Read("format", format);
    if (!format.empty() && format != kConfigFormat) {
      r.Error("format", "expected '" + std::string(kConfigFormat) + "'");
    }
    r.Read("name", c.name);
    r.Require("workload");
    if (const json* w = r.Get("workload")) ReadWorkload(*w, c, errors);
    if (const json* m = r.Get("model")) ReadModel(*m, c, errors);
    if (const json* s = r.Get("setup")) {
      Reader sr(*s, "setup", errors);
      sr.ReadEnum("mode", c.mode, ParseSetupMode);
      sr.Read("solo_client", c.solo_client);
    }
    if (const json* p = r.Get("partition")) {
      Reader pr(*p, "partition", errors);
      pr.ReadEnum("scheme", c.scheme, data::ParsePartitionScheme);
      pr.Read("alpha", c.alpha);
      pr.Read("clients", c.clients);
    }
    r.Require("algorithm");
    if (const json* a = r.Get("algorithm")) ReadAlgorithm(*a, c, errors);
    if (const json* o = r.Get("optimizer")) {
      Reader orr(*o, "optimizer", errors);
      orr.ReadEnum("kind", c.optimizer.kind, models::ParseOptimizerKind);
      orr.Read("lr", c.optimizer.lr);
      orr.Read("momentum", c.optimizer.momentum);
      orr.Read("beta1", c.optimizer.beta1);
      orr.Read("beta2", c.optimizer.beta2);
      orr.Read("epsilon", c.optimizer.epsilon);
    }
    if (const json* p = r.Get("plateau")) {
      Reader pr(*p, "plateau", errors);
      pr.Read("factor", c.plateau.factor);
      pr.Read("patience", c.plateau.patience);
      pr.Read("threshold", c.plateau.threshold);
      pr.ReadEnum("on", c.schedule_on_loss, [](std::string_view s) {
        if (s == "loss") return true;
        if (s == "metric") return false;
        throw std::invalid_argument("plateau.on must be 'loss' or 'metric'");
      });
    }
    if (const json* d = r.Get("dp")) ReadDp(*d, c, errors);
    if (const json* s = r.Get("secure_agg")) ReadSecAgg(*s, c, errors);
    if (const json* k = r.Get("compression")) ReadCompression(*k, c, errors);
    if (const json* ch = r.Get("channel")) ReadChannel(*ch, c, errors);
    if (const json* co = r.Get("cost")) ReadCost(*co, c, errors);
    if (const json* v = r.Get("vertical")) ReadVertical(*v, c, errors);
    r.Read("repetitions", c.repetitions);
    r.Read("base_seed", c.base_seed);
    r.Read("output_dir", c.output_dir);
    r.Read("workers", c.workers);
  }
  if (errors.empty()) {
    for (auto& e : ValidateConfig(c)) errors.push_back(std::move(e));
  }
  if (errors.empty()) out.config = std::move(c);
  return out;
}

WorkloadConfig ParseWorkloadJson(const json& doc) {
  ExperimentConfig c;
  std::vector<std::string> errors;
  ReadWorkload(doc, c, errors);
  if (errors.empty()) {
    c.mode = SetupMode::kCombined;
    for (auto& e : ValidateConfig(c)) {
      if (e.rfind("workload", 0) == 0) errors.push_back(std::move(e));
    }
  }
  if (!errors.empty()) {
    std::string msg = "invalid workload:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return c.workload;
}

ParseOutcome ParseConfig(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    ParseOutcome out;
    out.errors.push_back(std::string("syntax: ") + e.what());
    return out;
  }
  return ParseConfigJson(doc);
}

ExperimentConfig ParseConfigOrThrow(std::string_view text) {
  ParseOutcome out = ParseConfig(text);
  if (!out.ok()) {
    std::string msg = "invalid config:";
    for (const auto& e : out.errors) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }
  return *out.config;
}

ExperimentConfig LoadConfigFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfigOrThrow(ss.str());
}

std::vector<std::string> ValidateConfig(const ExperimentConfig& c) {
  std::vector<std::string> errors;
  auto check = [&](const std::string& where, auto&& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      errors.push_back(where + ": " + e.what());
    }
  };
  const auto& w = c.workload;
  if (w.source == Source::kSynth) {
    if (w.synth.n < 12) errors.push_back("workload.n: must be >= 12");
    if (w.synth.d == 0) errors.push_back("workload.d: must be >= 1");
    if (w.synth.kind == data::SynthKind::kBlobs && w.synth.classes < 2) {
      errors.push_back("workload.classes: must be >= 2");
    }
    if (!(w.synth.noise >= 0.0)) errors.push_back("workload.noise: must be >= 0");
  }
  if (c.hidden) {
    for (std::size_t h : *c.hidden) {
      if (h == 0) errors.push_back("model.hidden: widths must be positive");
    }
  }
  if (c.repetitions == 0) errors.push_back("repetitions: must be >= 1");
  if (c.workers == 0) errors.push_back("workers: must be >= 1");
  if (c.clients == 0) errors.push_back("partition.clients: must be >= 1");
  if (c.scheme != data::PartitionScheme::kIid && !(c.alpha > 0.0)) {
    errors.push_back("partition.alpha: must be > 0");
  }
  if (c.mode == SetupMode::kSolo && c.solo_client >= c.clients) {
    errors.push_back("setup.solo_client: must be < partition.clients");
  }
  check("algorithm", [&] { c.algo.Validate(); });
  if (!(c.optimizer.lr > 0.0)) errors.push_back("optimizer.lr: must be > 0");
  if (!(c.plateau.factor > 0.0 && c.plateau.factor < 1.0)) {
    errors.push_back("plateau.factor: must be in (0, 1)");
  }
  if (c.dp) check("dp", [&] { c.dp->Validate(); });
  check("compression", [&] { c.compression.Validate(); });
  check("channel", [&] { c.channel.Validate(); });
  check("cost", [&] { c.cost.Validate(); });
  if (c.secagg.enabled && c.mode == SetupMode::kFederated) {
    const auto m = static_cast<std::size_t>(std::ceil(
        c.algo.client_fraction * static_cast<double>(c.clients) - 1e-9));
    if (c.secagg.parts < 2 || c.secagg.parts > m) {
      errors.push_back("secure_agg.parts: need 2 <= parts <= " +
                       std::to_string(m) + " participants per round");
    }
  }
  if (c.mode == SetupMode::kVertical) {
    const auto& v = c.vertical;
    const std::size_t parties = v.party_widths.size();
    if (parties == 0) errors.push_back("vertical.party_widths: required");
    if (v.cut_widths.size() != parties) {
      errors.push_back("vertical.cut_widths: one width per party");
    }
    if (!v.bottom_hidden.empty() && v.bottom_hidden.size() != parties) {
      errors.push_back("vertical.bottom_hidden: one list per party");
    }
    for (const auto& h : v.bottom_hidden) {
      if (!v.bottom_hidden.empty() && h.size() != v.bottom_hidden.front().size() &&
          v.combine_parties) {
        errors.push_back("vertical.combine_parties: bottoms must share depth");
        break;
      }
    }
    std::size_t total = 0;
    for (std::size_t pw : v.party_widths) total += pw;
    if (w.source == Source::kSynth && total != w.synth.d) {
      errors.push_back("vertical.party_widths: must sum to workload.d");
    }
    if (!(v.overlap > 0.0 && v.overlap <= 1.0)) {
      errors.push_back("vertical.overlap: must be in (0, 1]");
    }
    if (parties != 2 && v.overlap != 1.0) {
      errors.push_back("vertical.overlap: partial overlap needs exactly 2 parties");
    }
    if (v.batch_size == 0 || v.max_epochs == 0) {
      errors.push_back("vertical: batch_size and max_epochs must be >= 1");
    }
    if (c.dp || c.secagg.enabled ||
        c.compression.method != compression::Method::kNone) {
      errors.push_back("vertical: dp, secure_agg and compression are horizontal-only");
    }
  }
  return errors;
}

nlohmann::json ToJson(const ExperimentConfig& c) {
  json j;
  j["format"] = kConfigFormat;
  j["name"] = c.name;
  json w;
  if (c.workload.source == Source::kSynth) {
    const auto& s = c.workload.synth;
    w = {{"source", "synth"}, {"kind", data::ToString(s.kind)}, {"n", s.n},
         {"d", s.d}, {"classes", s.classes}, {"noise", s.noise},
         {"separation", s.separation}, {"data_seed", s.seed}};
  } else {
    w = {{"source", "csv"},
         {"path", c.workload.csv_path},
         {"task", c.workload.csv_task == data::CsvTask::kClassification
                      ? "classification"
                      : "regression"}};
  }
  w["split_seed"] = c.workload.split_seed;
  j["workload"] = w;
  json model = {{"activation", models::ToString(c.activation)}};
  if (c.hidden) {
    model["hidden"] = *c.hidden;
  } else {
    model["hidden"] = "auto";
  }
  if (c.metric) model["metric"] = stats::ToString(*c.metric);
  j["model"] = model;
  j["setup"] = {{"mode", ToString(c.mode)}, {"solo_client", c.solo_client}};
  j["partition"] = {{"scheme", data::ToString(c.scheme)},
                    {"alpha", c.alpha},
                    {"clients", c.clients}};
  json algo = {{"name", fl::ToString(c.algo.algorithm)},
               {"fraction", c.algo.client_fraction},
               {"local_epochs", c.algo.local_epochs},
               {"prox_mu", c.algo.prox_mu},
               {"batch_size", c.algo.batch_size}};
  if (c.algo.max_rounds) algo["max_rounds"] = *c.algo.max_rounds;
  j["algorithm"] = algo;
  j["optimizer"] = {
      {"kind", c.optimizer.kind == models::OptimizerKind::kAdam ? "adam" : "sgd"},
      {"lr", c.optimizer.lr},
      {"momentum", c.optimizer.momentum},
      {"beta1", c.optimizer.beta1},
      {"beta2", c.optimizer.beta2},
      {"epsilon", c.optimizer.epsilon}};
  j["plateau"] = {{"factor", c.plateau.factor},
                  {"patience", c.plateau.patience},
                  {"threshold", c.plateau.threshold},
                  {"on", c.schedule_on_loss ? "loss" : "metric"}};
  if (c.dp) {
    j["dp"] = {{"clip", c.dp->clip},
               {"epsilon", c.dp->target_epsilon},
               {"noise_multiplier", c.dp->noise_multiplier},
               {"delta", c.dp->delta},
               {"sampling_rate", c.dp->sampling_rate},
               {"rounds", c.dp->rounds}};
  }
  if (c.secagg.enabled) {
    j["secure_agg"] = {
        {"parts", c.secagg.parts},
        {"fraction_bits", static_cast<int>(std::lround(-std::log2(c.secagg.scale)))}};
  }
  j["compression"] = {{"method", compression::ToString(c.compression.method)},
                      {"k", c.compression.k_fraction},
                      {"rank", c.compression.rank},
                      {"error_feedback", c.compression.error_feedback},
                      {"damping", c.compression.damping},
                      {"randk_rescale", c.compression.randk_rescale}};
  json ch = {{"latency_ms", c.channel.latency_s * 1000.0}};
  if (std::isfinite(c.channel.bandwidth_bps)) {
    ch["bandwidth_mbps"] = c.channel.bandwidth_bps / 1e6;
  }
  j["channel"] = ch;
  j["cost"] = {{"train_per_sample_param", c.cost.train_per_sample_param},
               {"eval_per_sample_param", c.cost.eval_per_sample_param},
               {"encrypt_per_value", c.cost.encrypt_per_value},
               {"other_per_value", c.cost.other_per_value},
               {"clock", c.cost.wall_clock ? "wall" : "logical"}};
  if (c.mode == SetupMode::kVertical) {
    const auto& v = c.vertical;
    j["vertical"] = {{"party_widths", v.party_widths},
                     {"bottom_hidden", v.bottom_hidden},
                     {"cut_widths", v.cut_widths},
                     {"top_hidden", v.top_hidden},
                     {"overlap", v.overlap},
                     {"label_owner", v.label_owner == data::LabelOwner::kA ? "a" : "b"},
                     {"batch_size", v.batch_size},
                     {"max_epochs", v.max_epochs},
                     {"combine_parties", v.combine_parties}};
  }
  j["repetitions"] = c.repetitions;
  j["base_seed"] = c.base_seed;
  j["output_dir"] = c.output_dir;
  j["workers"] = c.workers;
  return j;
}

}  // namespace fedbench::cli
