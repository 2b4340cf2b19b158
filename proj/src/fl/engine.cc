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

#include "fedbench/fl/engine.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <thread>

#include "fedbench/numkit/vector_ops.h"

namespace fedbench::fl {
namespace {

using netsim::ActorId;
using netsim::Bucket;
using netsim::BucketTimes;
using netsim::Ticks;
using netsim::ToTicks;

constexpr std::uint64_t kRoundStream = 0xC11E;
constexpr std::uint64_t kTrainStream = 0x10CA1;
constexpr std::uint64_t kDpStream = 0xD9;
constexpr std::uint64_t kCompressStream = 0xC0;

Ticks Cost(double per_unit, double units) { return ToTicks(per_unit * units); }

struct LocalOutcome {
  ClientUpdate update;
  std::vector<double> contribution;  // weighted, ready to be summed
  std::uint64_t upload_bytes = 0;
  BucketTimes busy;
};

// Participants' BucketTimes for one phase, plus the server's.
class PhaseReports {
 public:
  explicit PhaseReports(const std::vector<std::size_t>& participants) {
    expected_.push_back(netsim::kServer);
    reports_[netsim::kServer] = {};
    for (std::size_t c : participants) {
      expected_.push_back(static_cast<ActorId>(c));
      reports_[static_cast<ActorId>(c)] = {};
    }
  }
  BucketTimes& server() { return reports_[netsim::kServer]; }
  BucketTimes& client(std::size_t c) { return reports_[static_cast<ActorId>(c)]; }
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

BucketTimes Difference(const BucketTimes& after, const BucketTimes& before) {
  BucketTimes out;
  for (std::size_t i = 0; i < netsim::kNumBuckets; ++i) {
    out.ticks[i] = after.ticks[i] - before.ticks[i];
  }
  return out;
}

template <typename Fn>
void ForEachParallel(std::size_t n, std::size_t workers, Fn&& fn) {
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

std::vector<ActorDelta> LedgerDeltas(
    const std::map<ActorId, netsim::ActorAccount>& before,
    const std::map<ActorId, netsim::ActorAccount>& after) {
  std::vector<ActorDelta> out;
  for (const auto& [id, now] : after) {
    ActorDelta d;
    d.actor = id;
    d.buckets = now.buckets;
    d.bytes_up = now.bytes_up;
    d.bytes_down = now.bytes_down;
    if (auto it = before.find(id); it != before.end()) {
      d.buckets = Difference(now.buckets, it->second.buckets);
      d.bytes_up -= it->second.bytes_up;
      d.bytes_down -= it->second.bytes_down;
    }
    out.push_back(d);
  }
  return out;
}

void CostModel::Validate() const {
  for (double c : {train_per_sample_param, eval_per_sample_param,
                   encrypt_per_value, other_per_value}) {
    if (!(c >= 0.0) || !std::isfinite(c)) {
      throw std::invalid_argument("cost model constants must be finite and >= 0");
    }
  }
}

void RunSettings::Validate(std::size_t n_clients) const {
  model.Validate();
  algo.Validate();
  cost.Validate();
  channel.Validate();
  compression.Validate();
  if (n_clients == 0) throw std::invalid_argument("no clients");
  if (dp) dp->Validate();
  if (secagg.enabled) {
    const auto m = static_cast<std::size_t>(
        std::ceil(algo.client_fraction * static_cast<double>(n_clients) - 1e-9));
    if (secagg.parts < 2 || secagg.parts > m) {
      throw std::invalid_argument(
          "secure aggregation needs 2 <= parts <= participants per round (" +
          std::to_string(m) + ")");
    }
  }
  if (round_limit == 0) throw std::invalid_argument("round limit must be >= 1");
}

double DatasetLoss(const models::MlpSpec& spec,
                   const models::ParamVector& params, const data::Dataset& ds) {
  const auto fwd = models::Forward(spec, params, ds.features);
  return models::Loss(spec, fwd.outputs, models::MakeTargets(spec, ds.labels));
}

ExperimentResult RunExperiment(const RunSettings& settings,
                               const FederatedData& data,
                               const RoundObserver& observer) {
  const std::size_t n_clients = data.clients.size();
  settings.Validate(n_clients);
  for (const auto& c : data.clients) {
    if (c.size() == 0) throw std::invalid_argument("a client holds no data");
  }
  if (data.val.size() == 0 || data.test.size() == 0) {
    throw std::invalid_argument("validation and test sets must be non-empty");
  }

  const AlgoConfig& algo = settings.algo;
  const CostModel& cost = settings.cost;
  const bool secure = settings.secagg.enabled;
  const bool compress = settings.compression.method != compression::Method::kNone;

  ExperimentResult result;
  models::ParamVector global = models::InitParams(settings.model, settings.seed);
  const std::size_t p = global.size();
  const auto pd = static_cast<double>(p);

  models::OptimizerState server_opt(settings.optimizer, p);
  models::PlateauConfig plateau = settings.plateau;
  if (!settings.schedule_on_loss && stats::HigherIsBetter(settings.metric)) {
    plateau.mode = models::PlateauMode::kMax;
  } else {
    plateau.mode = models::PlateauMode::kMin;
  }
  models::PlateauScheduler scheduler(settings.optimizer.lr, plateau);

  netsim::TimeLedger& ledger = result.ledger;
  ledger.AddActor(netsim::kServer);
  for (std::size_t c = 0; c < n_clients; ++c) {
    ledger.AddActor(static_cast<ActorId>(c));
  }

  std::vector<compression::ClientCompressor> compressors(
      n_clients, compression::ClientCompressor(settings.compression));

  // Privacy calibration.
  std::optional<privacy::PrivacyLedger> accountant;
  double sigma = 0.0;
  double q = 1.0;
  if (settings.dp) {
    std::size_t n_train = 0;
    q = 0.0;
    for (const auto& c : data.clients) {
      n_train += c.size();
      const double qi =
          algo.algorithm == Algorithm::kFedSgd
              ? 1.0
              : std::min(1.0, static_cast<double>(algo.batch_size) /
                                  static_cast<double>(c.size()));
      q = std::max(q, qi);
    }
    if (settings.dp->sampling_rate < 1.0) q = settings.dp->sampling_rate;
    const double delta = settings.dp->delta > 0.0 ? settings.dp->delta
                                                  : privacy::DefaultDelta(n_train);
    sigma = settings.dp->noise_multiplier > 0.0
                ? settings.dp->noise_multiplier
                : privacy::CalibrateSigma(settings.dp->target_epsilon, delta, q,
                                          settings.dp->rounds);
    accountant.emplace(delta);
  }
  result.sigma = sigma;

  const std::size_t max_rounds =
      algo.max_rounds ? *algo.max_rounds : settings.round_limit;
  const std::uint64_t raw_bytes = compression::RawWireBytes(p);
  const secagg::FixedCodec base_codec{settings.secagg.scale,
                                      settings.secagg.modulus, 1};
  double raw_upload_total = 0.0;
  double actual_upload_total = 0.0;

  for (std::size_t round = 1; round <= max_rounds; ++round) {
    const BucketTimes before = SumAccounts(ledger);
    const auto snapshot = ledger.accounts();
    numkit::SeededRng round_rng =
        numkit::SeededRng::Derive(settings.seed, {kRoundStream, round});
    RoundResult rr;
    rr.round = round;
    rr.participants = SampleClients(n_clients, algo.client_fraction, round_rng);
    rr.lr = scheduler.lr();
    const std::vector<std::size_t>& parts = rr.participants;
    const std::size_t m = parts.size();

    // Broadcast: the server sends to each participant in turn.
    {
      PhaseReports phase(parts);
      const Ticks t_down = ToTicks(settings.channel.TransferSeconds(raw_bytes));
      phase.server()[Bucket::kOther] += Cost(cost.other_per_value, pd);
      for (std::size_t c : parts) {
        phase.server()[Bucket::kCommunicate] += t_down;
        phase.client(c)[Bucket::kCommunicate] += t_down;
        phase.client(c)[Bucket::kOther] += Cost(cost.other_per_value, pd);
        ledger.AddBytes(static_cast<ActorId>(c), 0, raw_bytes);
        ledger.AddBytes(netsim::kServer, raw_bytes, 0);
        rr.bytes_down += raw_bytes;
      }
      phase.Commit(ledger);
    }

    // Local training, privacy and compression, one outcome per participant.
    double n_round = 0.0;
    for (std::size_t c : parts) n_round += static_cast<double>(data.clients[c].size());
    LocalTrainConfig local;
    local.algorithm = algo.algorithm;
    local.epochs = algo.local_epochs;
    local.batch_size = algo.batch_size;
    local.prox_mu = algo.prox_mu;
    local.optimizer = settings.optimizer;
    local.optimizer.lr = scheduler.lr();

    std::vector<LocalOutcome> outcomes(m);
    ForEachParallel(m, settings.workers, [&](std::size_t idx) {
      const std::size_t c = parts[idx];
      LocalOutcome& out = outcomes[idx];
      numkit::SeededRng train_rng =
          numkit::SeededRng::Derive(settings.seed, {kTrainStream, round, c});
      const auto start = std::chrono::steady_clock::now();
      out.update = LocalTrain(settings.model, data.clients[c], global, local,
                              train_rng, c);
      const std::chrono::duration<double> took =
          std::chrono::steady_clock::now() - start;
      out.busy[Bucket::kTrain] =
          cost.wall_clock
              ? ToTicks(took.count())
              : Cost(cost.train_per_sample_param,
                     static_cast<double>(out.update.samples_processed) * pd);

      std::vector<double>& payload = out.update.payload.values;
      if (settings.dp) {
        numkit::SeededRng dp_rng =
            numkit::SeededRng::Derive(settings.seed, {kDpStream, round, c});
        payload = privacy::DpSanitize(payload, settings.dp->clip, sigma, dp_rng);
        out.busy[Bucket::kOther] += Cost(cost.other_per_value, pd);
      }
      out.upload_bytes = raw_bytes;
      if (compress) {
        numkit::SeededRng comp_rng =
            numkit::SeededRng::Derive(settings.seed, {kCompressStream, round, c});
        const compression::CompressedGrad packed = compressors[c].Compress(
            payload, out.update.payload.segments, comp_rng);
        payload = compression::Decompress(packed);
        out.upload_bytes = packed.wire_bytes;
        out.busy[Bucket::kOther] += Cost(cost.other_per_value, pd);
      }
      out.busy[Bucket::kOther] += Cost(cost.other_per_value, pd);  // serialize
      out.update.wire_bytes = out.upload_bytes;
      const double weight =
          static_cast<double>(out.update.num_samples) / n_round;
      out.contribution = WeightedContribution(out.update, algo.algorithm, weight);
      if (secure) {
        out.busy[Bucket::kEncrypt] += Cost(
            cost.encrypt_per_value, pd * static_cast<double>(settings.secagg.parts));
      }
    });
    {
      PhaseReports phase(parts);
      for (std::size_t idx = 0; idx < m; ++idx) {
        phase.client(parts[idx]) = outcomes[idx].busy;
        result.samples_processed +=
            static_cast<double>(outcomes[idx].update.samples_processed);
      }
      phase.Commit(ledger);
    }

    // Share exchange and masked aggregation.
    std::vector<double> combined(p, 0.0);
    std::uint64_t upload_bytes_secure = 0;
    if (secure) {
      std::vector<std::vector<double>> inputs;
      inputs.reserve(m);
      for (const auto& o : outcomes) inputs.push_back(o.contribution);
      secagg::FixedCodec codec = base_codec;
      codec.n_parties = m;
      const secagg::SecureSumResult sum = secagg::SecureSum(
          inputs, settings.secagg.parts, codec, settings.seed, round);
      combined = sum.sum;
      upload_bytes_secure = sum.upload_bytes_per_client;

      PhaseReports phase(parts);
      const Ticks t_part = ToTicks(settings.channel.TransferSeconds(
          secagg::RingWireBytes(p)));
      for (std::size_t c : parts) {
        BucketTimes& b = phase.client(c);
        for (std::size_t j = 1; j < settings.secagg.parts; ++j) {
          b[Bucket::kCommunicate] += t_part;
        }
        b[Bucket::kEncrypt] += Cost(
            cost.encrypt_per_value, pd * static_cast<double>(settings.secagg.parts));
        ledger.AddBytes(static_cast<ActorId>(c), sum.share_bytes_per_client,
                        sum.share_bytes_per_client);
        rr.bytes_peer += sum.share_bytes_per_client;
      }
      phase.Commit(ledger);
    } else {
      for (const auto& o : outcomes) {
        for (std::size_t i = 0; i < p; ++i) combined[i] += o.contribution[i];
      }
    }

    // Upload: the server receives one message at a time.
    {
      PhaseReports phase(parts);
      for (std::size_t idx = 0; idx < m; ++idx) {
        const std::size_t c = parts[idx];
        const std::uint64_t bytes =
            secure ? upload_bytes_secure : outcomes[idx].upload_bytes;
        const Ticks t_up = ToTicks(settings.channel.TransferSeconds(bytes));
        phase.client(c)[Bucket::kCommunicate] += t_up;
        phase.server()[Bucket::kCommunicate] += t_up;
        ledger.AddBytes(static_cast<ActorId>(c), bytes, 0);
        ledger.AddBytes(netsim::kServer, 0, bytes);
        rr.bytes_up += bytes;
        raw_upload_total += static_cast<double>(raw_bytes);
        actual_upload_total += static_cast<double>(bytes);
      }
      phase.Commit(ledger);
    }

    // Aggregate, apply, evaluate.
    {
      PhaseReports phase(parts);
      const auto md = static_cast<double>(m);
      phase.server()[Bucket::kOther] += Cost(cost.other_per_value, pd * md);
      if (secure) {
        phase.server()[Bucket::kEncrypt] += Cost(cost.encrypt_per_value, pd * md);
      }
      if (algo.algorithm == Algorithm::kFedSgd) {
        server_opt.set_lr(scheduler.lr());
        server_opt.Step(global.values, combined);
      } else {
        double tau_eff = 1.0;
        if (algo.algorithm == Algorithm::kFedNova) {
          std::vector<ClientUpdate> meta;
          meta.reserve(m);
          for (const auto& o : outcomes) {
            ClientUpdate u;
            u.client_id = o.update.client_id;
            u.local_steps = o.update.local_steps;
            u.num_samples = o.update.num_samples;
            meta.push_back(std::move(u));
          }
          tau_eff = EffectiveSteps(meta);
        }
        global = ApplyCombined(global, combined, algo.algorithm, tau_eff,
                               scheduler.lr());
      }
      if (!numkit::AllFinite(global.values)) {
        throw std::runtime_error("global parameters diverged in round " +
                                 std::to_string(round));
      }
      const auto val_fwd = models::Forward(settings.model, global, data.val.features);
      rr.val_loss = models::Loss(settings.model, val_fwd.outputs,
                                 models::MakeTargets(settings.model, data.val.labels));
      rr.metric = stats::EvaluateOutputs(val_fwd.outputs, data.val.labels,
                                         settings.metric);
      phase.server()[Bucket::kTrain] += Cost(
          cost.eval_per_sample_param, static_cast<double>(data.val.size()) * pd);
      phase.Commit(ledger);
    }

    const models::PlateauStep step =
        scheduler.Step(settings.schedule_on_loss ? rr.val_loss : rr.metric);
    rr.reduction_count = step.reduction_count;
    if (accountant) rr.epsilon = accountant->Record(q, sigma);
    rr.buckets = Difference(SumAccounts(ledger), before);
    rr.actors = LedgerDeltas(snapshot, ledger.accounts());
    if (settings.record_params) rr.global_params = global.values;
    if (!ledger.Conserved()) result.conserved_every_round = false;
    if (observer) observer(rr);
    result.rounds.push_back(std::move(rr));
    if (step.reduction_count >= stats::kConvergedReductions) break;
  }

  // Final test evaluation, charged to the server.
  {
    PhaseReports phase({});
    result.final_metric =
        stats::Evaluate(settings.model, global, data.test, settings.metric);
    phase.server()[Bucket::kTrain] += Cost(
        cost.eval_per_sample_param, static_cast<double>(data.test.size()) * pd);
    phase.Commit(ledger);
    if (!ledger.Conserved()) result.conserved_every_round = false;
  }

  result.rounds_run = result.rounds.size();
  std::vector<int> curve;
  curve.reserve(result.rounds.size());
  for (const auto& r : result.rounds) curve.push_back(r.reduction_count);
  result.convergence_rounds = stats::ConvergenceRounds(curve);
  const double total_s = netsim::ToSeconds(ledger.now());
  result.throughput = total_s > 0.0 ? result.samples_processed / total_s : 0.0;
  result.overhead =
      netsim::ComputeOverheadAndThroughput(ledger.ClientTotals(), 1.0).overhead;
  result.uplink_ratio =
      actual_upload_total > 0.0 ? raw_upload_total / actual_upload_total : 1.0;
  if (accountant) {
    result.epsilon = accountant->Epsilon();
    result.privacy_rows = accountant->rows();
  }
  result.final_params = std::move(global);
  return result;
}

}  // namespace fedbench::fl
