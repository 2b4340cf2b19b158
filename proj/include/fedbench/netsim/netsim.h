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

#ifndef FEDBENCH_NETSIM_NETSIM_H_
#define FEDBENCH_NETSIM_NETSIM_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace fedbench::netsim {

// Simulated time is counted in integer picoseconds so per-actor bucket sums
// reproduce the clock exactly.
using Ticks = std::int64_t;
inline constexpr Ticks kTicksPerSecond = 1'000'000'000'000;

Ticks ToTicks(double seconds);
double ToSeconds(Ticks ticks);

// A point-to-point link. bandwidth_bps may be +infinity (no limit).
struct Channel {
  double bandwidth_bps = std::numeric_limits<double>::infinity();
  double latency_s = 0.0;

  void Validate() const;
  // latency + bytes * 8 / bandwidth.
  double TransferSeconds(std::uint64_t bytes) const;
};

// Monotone simulated clock with a byte counter.
class LogicalClock {
 public:
  Ticks now() const { return now_; }
  double seconds() const { return ToSeconds(now_); }
  void Advance(Ticks dt);
  std::uint64_t bytes_logged() const { return bytes_; }
  void LogBytes(std::uint64_t bytes) { bytes_ += bytes; }

 private:
  Ticks now_ = 0;
  std::uint64_t bytes_ = 0;
};

// Sends `bytes` over `channel`: advances the clock by the transfer time,
// logs the bytes, and returns the elapsed seconds.
double Transmit(const Channel& channel, std::uint64_t bytes,
                LogicalClock& clock);

enum class Bucket : std::size_t { kTrain, kCommunicate, kEncrypt, kIdle, kOther };
inline constexpr std::size_t kNumBuckets = 5;
std::string_view ToString(Bucket b);

struct BucketTimes {
  std::array<Ticks, kNumBuckets> ticks{};

  Ticks& operator[](Bucket b) { return ticks[static_cast<std::size_t>(b)]; }
  Ticks operator[](Bucket b) const {
    return ticks[static_cast<std::size_t>(b)];
  }
  Ticks total() const;
  double seconds(Bucket b) const { return ToSeconds((*this)[b]); }
  BucketTimes& operator+=(const BucketTimes& other);
};

using ActorId = int;
inline constexpr ActorId kServer = -1;
std::string ActorName(ActorId id);

struct ActorAccount {
  BucketTimes buckets;
  std::uint64_t bytes_up = 0;
  std::uint64_t bytes_down = 0;
  Ticks joined_at = 0;
};

// Per-actor decomposition of simulated time. Work is charged in
// barrier-synchronized phases: every registered actor's account grows by
// exactly the phase length, busy time in its own buckets and the rest idle.
class TimeLedger {
 public:
  void AddActor(ActorId id);
  bool HasActor(ActorId id) const { return accounts_.contains(id); }

  // Charges one phase. `expected` lists the actors that must report (a
  // missing report is an error); registered actors outside `expected` sit
  // idle. Idle entries in reports are ignored. Returns the phase length,
  // which is the largest reported busy total.
  Ticks RoundClock(const std::vector<ActorId>& expected,
                   const std::map<ActorId, BucketTimes>& reports);

  void AddBytes(ActorId id, std::uint64_t up, std::uint64_t down);

  Ticks now() const { return clock_.now(); }
  const LogicalClock& clock() const { return clock_; }
  const ActorAccount& account(ActorId id) const;
  const std::map<ActorId, ActorAccount>& accounts() const { return accounts_; }

  // Sum over all client actors (everyone except the server).
  BucketTimes ClientTotals() const;
  // Every account's buckets sum to its lifetime on the clock.
  bool Conserved() const;

 private:
  LogicalClock clock_;
  std::map<ActorId, ActorAccount> accounts_;
};

struct OverheadThroughput {
  double overhead = 0.0;    // (t_total - t_train) / t_total
  double throughput = 0.0;  // samples / t_total
};

// The train bucket holds training and testing time.
OverheadThroughput ComputeOverheadAndThroughput(const BucketTimes& times,
                                                double samples_processed);

}  // namespace fedbench::netsim

#endif  // FEDBENCH_NETSIM_NETSIM_H_
