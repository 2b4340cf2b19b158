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

#include "fedbench/netsim/netsim.h"

#include <cmath>
#include <stdexcept>

namespace fedbench::netsim {

Ticks ToTicks(double seconds) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) {
    throw std::invalid_argument("ToTicks: duration must be finite and >= 0");
  }
  return static_cast<Ticks>(
      std::llround(seconds * static_cast<double>(kTicksPerSecond)));
}

double ToSeconds(Ticks ticks) {
  return static_cast<double>(ticks) / static_cast<double>(kTicksPerSecond);
}

void Channel::Validate() const {
  if (!(bandwidth_bps > 0.0)) {
    throw std::invalid_argument("Channel: bandwidth must be > 0 or infinite");
  }
  if (!(latency_s >= 0.0) || !std::isfinite(latency_s)) {
    throw std::invalid_argument("Channel: latency must be finite and >= 0");
  }
}

double Channel::TransferSeconds(std::uint64_t bytes) const {
  if (std::isinf(bandwidth_bps)) return latency_s;
  return latency_s + static_cast<double>(bytes) * 8.0 / bandwidth_bps;
}

void LogicalClock::Advance(Ticks dt) {
  if (dt < 0) throw std::invalid_argument("LogicalClock: time cannot go back");
  now_ += dt;
}

double Transmit(const Channel& channel, std::uint64_t bytes,
                LogicalClock& clock) {
  const double elapsed = channel.TransferSeconds(bytes);
  clock.Advance(ToTicks(elapsed));
  clock.LogBytes(bytes);
  return elapsed;
}

std::string_view ToString(Bucket b) {
  switch (b) {
    case Bucket::kTrain:
      return "train";
    case Bucket::kCommunicate:
      return "communicate";
    case Bucket::kEncrypt:
      return "encrypt";
    case Bucket::kIdle:
      return "idle";
    case Bucket::kOther:
      return "other";
  }
  return "?";
}

Ticks BucketTimes::total() const {
  Ticks t = 0;
  for (Ticks b : ticks) t += b;
  return t;
}

BucketTimes& BucketTimes::operator+=(const BucketTimes& other) {
  for (std::size_t i = 0; i < kNumBuckets; ++i) ticks[i] += other.ticks[i];
  return *this;
}

std::string ActorName(ActorId id) {
  return id == kServer ? "server" : "client" + std::to_string(id);
}

void TimeLedger::AddActor(ActorId id) {
  ActorAccount account;
  account.joined_at = clock_.now();
  accounts_.emplace(id, account);
}

Ticks TimeLedger::RoundClock(const std::vector<ActorId>& expected,
                             const std::map<ActorId, BucketTimes>& reports) {
  Ticks phase = 0;
  for (ActorId id : expected) {
    if (!accounts_.contains(id)) {
      throw std::invalid_argument("RoundClock: unknown actor " + ActorName(id));
    }
    auto it = reports.find(id);
    if (it == reports.end()) {
      throw std::invalid_argument("RoundClock: no report from " +
                                  ActorName(id));
    }
    BucketTimes busy = it->second;
    busy[Bucket::kIdle] = 0;
    for (Ticks t : busy.ticks) {
      if (t < 0) throw std::invalid_argument("RoundClock: negative duration");
    }
    phase = std::max(phase, busy.total());
  }
  for (auto& [id, account] : accounts_) {
    BucketTimes busy;
    if (auto it = reports.find(id); it != reports.end()) {
      busy = it->second;
      busy[Bucket::kIdle] = 0;
    }
    account.buckets += busy;
    account.buckets[Bucket::kIdle] += phase - busy.total();
  }
  clock_.Advance(phase);
  return phase;
}

void TimeLedger::AddBytes(ActorId id, std::uint64_t up, std::uint64_t down) {
  auto it = accounts_.find(id);
  if (it == accounts_.end()) {
    throw std::invalid_argument("AddBytes: unknown actor " + ActorName(id));
  }
  it->second.bytes_up += up;
  it->second.bytes_down += down;
  clock_.LogBytes(up);
}

const ActorAccount& TimeLedger::account(ActorId id) const {
  auto it = accounts_.find(id);
  if (it == accounts_.end()) {
    throw std::invalid_argument("unknown actor " + ActorName(id));
  }
  return it->second;
}

BucketTimes TimeLedger::ClientTotals() const {
  BucketTimes sum;
  for (const auto& [id, account] : accounts_) {
    if (id != kServer) sum += account.buckets;
  }
  return sum;
}

bool TimeLedger::Conserved() const {
  for (const auto& [id, account] : accounts_) {
    if (account.buckets.total() != clock_.now() - account.joined_at) {
      return false;
    }
    for (Ticks t : account.buckets.ticks) {
      if (t < 0) return false;
    }
  }
  return true;
}

OverheadThroughput ComputeOverheadAndThroughput(const BucketTimes& times,
                                                double samples_processed) {
  const Ticks total = times.total();
  if (total <= 0) {
    throw std::invalid_argument("overhead: total time must be > 0");
  }
  OverheadThroughput out;
  out.overhead = static_cast<double>(total - times[Bucket::kTrain]) /
                 static_cast<double>(total);
  out.throughput = samples_processed / ToSeconds(total);
  return out;
}

}  // namespace fedbench::netsim
