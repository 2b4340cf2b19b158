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

#include "fedbench/cli/experiment.h"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

#include "fedbench/data/csv.h"
#include "fedbench/data/partition.h"
#include "fedbench/data/synth.h"
#include "fedbench/data/vertical.h"
#include "fedbench/numkit/rng.h"

namespace fedbench::cli {
namespace {

constexpr std::uint64_t kOverlapStream = 0x0E71;

data::PartitionSpec Partition(const ExperimentConfig& c,
                              const data::Dataset& train, std::uint64_t seed) {
  switch (c.scheme) {
    case data::PartitionScheme::kIid:
      return data::PartitionIid(train, c.clients, seed);
    case data::PartitionScheme::kLabelSkew:
      return data::PartitionLabelSkew(train, c.alpha, c.clients, seed);
    case data::PartitionScheme::kQuantitySkew:
      return data::PartitionQuantitySkew(train, c.alpha, c.clients, seed,
                                         data::QuantityMode::kDirichlet);
    case data::PartitionScheme::kPowerLaw:
      return data::PartitionQuantitySkew(train, c.alpha, c.clients, seed,
                                         data::QuantityMode::kPowerLaw);
  }
  throw std::logic_error("unhandled partition scheme");
}

data::Dataset Columns(const data::Dataset& ds, std::size_t begin,
                      std::size_t width) {
  data::Dataset out;
  out.name = ds.name;
  out.labels = ds.labels;
  out.keys = ds.keys;
  out.num_classes = ds.num_classes;
  out.features = numkit::DenseMatrix(ds.size(), width);
  for (std::size_t r = 0; r < ds.size(); ++r) {
    for (std::size_t c = 0; c < width; ++c) {
      out.features(r, c) = ds.features(r, begin + c);
    }
  }
  return out;
}

}  // namespace

data::Dataset LoadWorkload(const WorkloadConfig& workload) {
  data::Dataset ds = workload.source == Source::kSynth
                         ? data::SynthDataset(workload.synth)
                         : data::ReadCsvFile(workload.csv_path, workload.csv_task);
  ds.Validate();
  return ds;
}

models::MlpSpec ResolveModel(const ExperimentConfig& config,
                             const data::Dataset& ds) {
  models::MlpSpec spec;
  const std::size_t d = ds.width();
  spec.widths.push_back(d);
  if (config.hidden) {
    spec.widths.insert(spec.widths.end(), config.hidden->begin(),
                       config.hidden->end());
  } else {
    spec.widths.push_back(2 * d);
    spec.widths.push_back(std::max<std::size_t>(1, d / 2));
  }
  if (!ds.is_classification()) {
    spec.head = models::Head::kLinearMse;
    spec.widths.push_back(1);
  } else if (ds.num_classes == 2) {
    spec.head = models::Head::kSigmoidBce;
    spec.widths.push_back(1);
  } else {
    spec.head = models::Head::kSoftmaxCrossEntropy;
    spec.widths.push_back(ds.num_classes);
  }
  spec.activation = config.activation;
  spec.Validate();
  return spec;
}

stats::Metric ResolveMetric(const ExperimentConfig& config,
                            const models::MlpSpec& model) {
  return config.metric ? *config.metric : stats::DefaultMetric(model.head);
}

HorizontalSetup BuildHorizontal(const ExperimentConfig& config,
                                std::uint64_t seed) {
  if (config.mode == SetupMode::kVertical) {
    throw std::invalid_argument("BuildHorizontal: config is vertical");
  }
  const data::Dataset ds = LoadWorkload(config.workload);
  const data::TrainTestVal split =
      data::SplitTrainTestVal(ds, config.workload.split_seed);

  HorizontalSetup setup;
  fl::RunSettings& s = setup.settings;
  s.model = ResolveModel(config, ds);
  s.metric = ResolveMetric(config, s.model);
  s.optimizer = config.optimizer;
  s.plateau = config.plateau;
  s.schedule_on_loss = config.schedule_on_loss;
  s.algo = config.algo;
  s.dp = config.dp;
  s.secagg = config.secagg;
  s.compression = config.compression;
  s.channel = config.channel;
  s.cost = config.cost;
  s.seed = seed;
  s.workers = config.workers;

  setup.data.val = split.val;
  setup.data.test = split.test;
  if (config.mode == SetupMode::kCombined) {
    setup.data.clients.push_back(split.train);
    s.secagg.enabled = false;
  } else {
    setup.partition = Partition(config, split.train, seed);
    setup.partition.CheckSetPartition(split.train.size());
    for (std::size_t i = 0; i < setup.partition.client_indices.size(); ++i) {
      if (config.mode == SetupMode::kSolo && i != config.solo_client) continue;
      setup.data.clients.push_back(
          split.train.Subset(setup.partition.client_indices[i]));
    }
    if (config.mode == SetupMode::kSolo) s.secagg.enabled = false;
  }
  if (s.dp && s.dp->delta == 0.0) {
    s.dp->delta = privacy::DefaultDelta(split.train.size());
  }
  return setup;
}

VerticalSetup BuildVertical(const ExperimentConfig& config, std::uint64_t seed) {
  if (config.mode != SetupMode::kVertical) {
    throw std::invalid_argument("BuildVertical: config is not vertical");
  }
  const VerticalConfig& v = config.vertical;
  const data::Dataset ds = LoadWorkload(config.workload);
  std::size_t total = 0;
  for (std::size_t w : v.party_widths) total += w;
  if (total != ds.width()) {
    throw std::invalid_argument("vertical: party widths sum to " +
                                std::to_string(total) + ", data has " +
                                std::to_string(ds.width()) + " columns");
  }

  VerticalSetup setup;
  data::Dataset joined;
  if (v.party_widths.size() == 2) {
    data::Dataset a = Columns(ds, 0, v.party_widths[0]);
    data::Dataset b = Columns(ds, v.party_widths[0], v.party_widths[1]);
    if (v.overlap < 1.0) {
      numkit::SeededRng rng = numkit::SeededRng::Derive(
          config.workload.split_seed, {kOverlapStream});
      std::vector<std::size_t> order = rng.Permutation(b.size());
      const auto keep = static_cast<std::size_t>(
          v.overlap * static_cast<double>(b.size()));
      order.resize(std::max<std::size_t>(1, keep));
      std::sort(order.begin(), order.end());
      b = b.Subset(order);
    }
    setup.aligned = data::AlignVertical(a, b, v.label_owner);
    joined = setup.aligned.joined;
  } else {
    joined = ds;
  }
  const data::TrainTestVal split =
      data::SplitTrainTestVal(joined, config.workload.split_seed);

  const models::MlpSpec base = ResolveModel(config, ds);
  std::vector<std::size_t> party_widths = v.party_widths;
  std::vector<std::vector<std::size_t>> bottom_hidden = v.bottom_hidden;
  bottom_hidden.resize(party_widths.size());
  std::vector<std::size_t> cut_widths = v.cut_widths;
  if (v.combine_parties) {
    std::vector<std::size_t> hidden(bottom_hidden.front().size(), 0);
    for (const auto& h : bottom_hidden) {
      for (std::size_t l = 0; l < h.size(); ++l) hidden[l] += h[l];
    }
    party_widths = {total};
    bottom_hidden = {hidden};
    cut_widths = {std::accumulate(cut_widths.begin(), cut_widths.end(),
                                  std::size_t{0})};
  }
  splitnn::VerticalSettings& s = setup.settings;
  s.spec = splitnn::MakeSplitSpec(party_widths, bottom_hidden, cut_widths,
                                  v.top_hidden, base.output_width(),
                                  config.activation, base.head);
  s.optimizer = config.optimizer;
  s.plateau = config.plateau;
  s.batch_size = v.batch_size;
  s.max_epochs = v.max_epochs;
  s.channel = config.channel;
  s.cost = config.cost;
  s.metric = ResolveMetric(config, base);
  s.seed = seed;
  setup.data.party_widths = party_widths;
  setup.data.train = split.train;
  setup.data.val = split.val;
  setup.data.test = split.test;
  return setup;
}

fl::ExperimentResult RunOnce(const ExperimentConfig& config, std::uint64_t seed,
                             const fl::RoundObserver& observer) {
  if (config.mode == SetupMode::kVertical) {
    const VerticalSetup setup = BuildVertical(config, seed);
    return splitnn::TrainVertical(setup.settings, setup.data, observer).run;
  }
  const HorizontalSetup setup = BuildHorizontal(config, seed);
  return fl::RunExperiment(setup.settings, setup.data, observer);
}

}  // namespace fedbench::cli
