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

#include "fedbench/splitnn/vertical_trainer.h"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "fedbench/compression/compression.h"
#include "fedbench/numkit/rng.h"

namespace fedbench::splitnn {
namespace {

using netsim::ActorId;
using netsim::Bucket;
using netsim::BucketTimes;
using netsim::Ticks;
using netsim::ToTicks;

constexpr std::uint64_t kBatchStream = 0x5B17;
constexpr std::uint64_t kIndexBytes = 8;

Ticks Cost(double per_unit, double units) { return ToTicks(per_unit * units); }

class Phase {
 public:
  explicit Phase(std::size_t parties) {
    expected_.push_back(netsim::kServer);
    for (std::size_t i = 0; i < parties; ++i) {
      expected_.push_back(static_cast<ActorId>(i));
    }
    for (ActorId id : expected_) reports_[id] = {};
  }
  BucketTimes& operator[](ActorId id) { return reports_[id]; }
  void Commit(netsim::TimeLedger& ledger) { ledger.RoundClock(expected_, reports_); }

 private:
  std::vector<ActorId> expected_;
  std::map<ActorId, BucketTimes> reports_;
};

BucketTimes SumAccounts(const netsim::TimeLedger& ledger) {
  BucketTimes sum;
  for (const auto& [id, account] : ledger.accounts()) sum += account.buckets;
  return sum;
}

}  // namespace

std::vector<DenseMatrix> PartyBlocks(const VerticalData& data,
                                     const DenseMatrix& features) {
  return SplitColumns(features, data.party_widths);
}

VerticalResult TrainVertical(const VerticalSettings& settings,
                             const VerticalData& data,
                             const fl::RoundObserver& observer) {
  const SplitSpec& spec = settings.spec;
  spec.Validate();
  settings.channel.Validate();
  settings.cost.Validate();
  const std::size_t parties = spec.num_parties();
  if (data.party_widths.size() != parties) {
    throw std::invalid_argument("vertical: party widths do not match spec");
  }
  for (std::size_t i = 0; i < parties; ++i) {
    if (data.party_widths[i] != spec.bottoms[i].input_width()) {
      throw std::invalid_argument("vertical: party feature width mismatch");
    }
  }
  const std::size_t n = data.train.size();
  if (n == 0 || data.val.size() == 0 || data.test.size() == 0) {
    throw std::invalid_argument("vertical: empty split");
  }
  if (settings.batch_size == 0 || settings.max_epochs == 0) {
    throw std::invalid_argument("vertical: batch size and epochs must be >= 1");
  }

  VerticalResult out;
  fl::ExperimentResult& result = out.run;
  SplitParams params = InitSplitParams(spec, settings.seed);
  std::vector<models::OptimizerState> party_opt;
  std::vector<double> party_cost;
  for (std::size_t i = 0; i < parties; ++i) {
    party_opt.emplace_back(settings.optimizer, params.bottoms[i].size());
    party_cost.push_back(static_cast<double>(params.bottoms[i].size()));
  }
  models::OptimizerState top_opt(settings.optimizer, params.top.size());
  const auto top_cost = static_cast<double>(params.top.size());
  double total_params = top_cost;
  for (double c : party_cost) total_params += c;

  models::PlateauConfig plateau = settings.plateau;
  plateau.mode = models::PlateauMode::kMin;
  models::PlateauScheduler scheduler(settings.optimizer.lr, plateau);

  netsim::TimeLedger& ledger = result.ledger;
  ledger.AddActor(netsim::kServer);
  for (std::size_t i = 0; i < parties; ++i) ledger.AddActor(static_cast<ActorId>(i));

  const std::vector<DenseMatrix> train_blocks = PartyBlocks(data, data.train.features);
  const std::vector<DenseMatrix> val_blocks = PartyBlocks(data, data.val.features);
  const std::vector<std::size_t> cuts = spec.cut_widths();
  const fl::CostModel& cost = settings.cost;
  const std::size_t batch = std::min(settings.batch_size, n);
  const std::size_t batches = (n + batch - 1) / batch;
  std::vector<std::size_t> all_parties(parties);
  for (std::size_t i = 0; i < parties; ++i) all_parties[i] = i;

  for (std::size_t epoch = 1; epoch <= settings.max_epochs; ++epoch) {
    const BucketTimes before = SumAccounts(ledger);
    const auto snapshot = ledger.accounts();
    fl::RoundResult rr;
    rr.round = epoch;
    rr.participants = all_parties;
    rr.lr = scheduler.lr();
    for (auto& o : party_opt) o.set_lr(scheduler.lr());
    top_opt.set_lr(scheduler.lr());
    numkit::SeededRng rng =
        numkit::SeededRng::Derive(settings.seed, {kBatchStream, epoch});
    const std::vector<std::size_t> order = rng.Permutation(n);

    for (std::size_t b = 0; b < batches; ++b) {
      const std::size_t begin = b * batch;
      const std::size_t end = std::min(n, begin + batch);
      std::span<const std::size_t> rows(order.data() + begin, end - begin);
      const auto bd = static_cast<double>(rows.size());

      // Server broadcasts the aligned row indices.
      {
        Phase phase(parties);
        const std::uint64_t bytes = 8 + kIndexBytes * rows.size();
        const Ticks t = ToTicks(settings.channel.TransferSeconds(bytes));
        for (std::size_t i = 0; i < parties; ++i) {
          phase[netsim::kServer][Bucket::kCommunicate] += t;
          phase[static_cast<ActorId>(i)][Bucket::kCommunicate] += t;
          ledger.AddBytes(netsim::kServer, bytes, 0);
          ledger.AddBytes(static_cast<ActorId>(i), 0, bytes);
          rr.bytes_down += bytes;
        }
        phase.Commit(ledger);
      }

      std::vector<DenseMatrix> party_batches;
      for (std::size_t i = 0; i < parties; ++i) {
        party_batches.push_back(train_blocks[i].SelectRows(rows));
      }
      const SplitForwardResult fwd = SplitForward(spec, params, party_batches);

      // Parties run their bottoms and upload cut activations.
      {
        Phase phase(parties);
        for (std::size_t i = 0; i < parties; ++i) {
          phase[static_cast<ActorId>(i)][Bucket::kTrain] +=
              Cost(cost.eval_per_sample_param, bd * party_cost[i]);
        }
        phase.Commit(ledger);
      }
      {
        Phase phase(parties);
        for (std::size_t i = 0; i < parties; ++i) {
          const std::uint64_t bytes = compression::RawWireBytes(rows.size() * cuts[i]);
          const Ticks t = ToTicks(settings.channel.TransferSeconds(bytes));
          phase[static_cast<ActorId>(i)][Bucket::kCommunicate] += t;
          phase[netsim::kServer][Bucket::kCommunicate] += t;
          ledger.AddBytes(static_cast<ActorId>(i), bytes, 0);
          ledger.AddBytes(netsim::kServer, 0, bytes);
          rr.bytes_up += bytes;
        }
        phase.Commit(ledger);
      }

      const data::Dataset labels = data.train.Subset(rows);
      const SplitGradients grads = SplitBackward(
          spec, params, fwd.caches, models::MakeTargets(spec.top, labels.labels));
      top_opt.Step(params.top.values, grads.top.values);
      {
        Phase phase(parties);
        phase[netsim::kServer][Bucket::kTrain] +=
            Cost(cost.train_per_sample_param, bd * top_cost);
        phase.Commit(ledger);
      }

      // Server returns cut gradients; parties finish backward and step.
      {
        Phase phase(parties);
        for (std::size_t i = 0; i < parties; ++i) {
          const std::uint64_t bytes = compression::RawWireBytes(rows.size() * cuts[i]);
          const Ticks t = ToTicks(settings.channel.TransferSeconds(bytes));
          phase[netsim::kServer][Bucket::kCommunicate] += t;
          phase[static_cast<ActorId>(i)][Bucket::kCommunicate] += t;
          ledger.AddBytes(netsim::kServer, bytes, 0);
          ledger.AddBytes(static_cast<ActorId>(i), 0, bytes);
          rr.bytes_down += bytes;
        }
        phase.Commit(ledger);
      }
      {
        Phase phase(parties);
        for (std::size_t i = 0; i < parties; ++i) {
          party_opt[i].Step(params.bottoms[i].values, grads.bottoms[i].values);
          phase[static_cast<ActorId>(i)][Bucket::kTrain] += Cost(
              cost.train_per_sample_param - cost.eval_per_sample_param,
              bd * party_cost[i]);
        }
        phase.Commit(ledger);
      }
      result.samples_processed += bd;
    }

    // Validation on the server.
    {
      Phase phase(parties);
      const SplitForwardResult val = SplitForward(spec, params, val_blocks);
      rr.val_loss = models::Loss(spec.top, val.outputs,
                                 models::MakeTargets(spec.top, data.val.labels));
      rr.metric = stats::EvaluateOutputs(val.outputs, data.val.labels,
                                         settings.metric);
      phase[netsim::kServer][Bucket::kTrain] += Cost(
          cost.eval_per_sample_param,
          static_cast<double>(data.val.size()) * total_params);
      phase.Commit(ledger);
    }
    const models::PlateauStep step = scheduler.Step(rr.val_loss);
    rr.reduction_count = step.reduction_count;
    const BucketTimes after = SumAccounts(ledger);
    for (std::size_t k = 0; k < netsim::kNumBuckets; ++k) {
      rr.buckets.ticks[k] = after.ticks[k] - before.ticks[k];
    }
    rr.actors = fl::LedgerDeltas(snapshot, ledger.accounts());
    if (!ledger.Conserved()) result.conserved_every_round = false;
    if (observer) observer(rr);
    result.rounds.push_back(std::move(rr));
    if (step.reduction_count >= stats::kConvergedReductions) break;
  }

  {
    Phase phase(parties);
    const SplitForwardResult test =
        SplitForward(spec, params, PartyBlocks(data, data.test.features));
    result.final_metric =
        stats::EvaluateOutputs(test.outputs, data.test.labels, settings.metric);
    phase[netsim::kServer][Bucket::kTrain] += Cost(
        cost.eval_per_sample_param,
        static_cast<double>(data.test.size()) * total_params);
    phase.Commit(ledger);
  }
  result.rounds_run = result.rounds.size();
  std::vector<int> curve;
  for (const auto& r : result.rounds) curve.push_back(r.reduction_count);
  result.convergence_rounds = stats::ConvergenceRounds(curve);
  const double total_s = netsim::ToSeconds(ledger.now());
  result.throughput = total_s > 0.0 ? result.samples_processed / total_s : 0.0;
  result.overhead =
      netsim::ComputeOverheadAndThroughput(ledger.ClientTotals(), 1.0).overhead;
  out.final_params = std::move(params);
  return out;
}

}  // namespace fedbench::splitnn
