// Copyright 2026 The Leaklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEAKLAB_ORACLE_HPP
#define LEAKLAB_ORACLE_HPP

#include <memory>
#include <optional>
#include <vector>

#include "leaklab/attachment_store.hpp"
#include "leaklab/bytes.hpp"
#include "leaklab/client.hpp"
#include "leaklab/noise.hpp"
#include "leaklab/signal_backup.hpp"
#include "leaklab/whatsapp_backup.hpp"

namespace leaklab {

// Everything the adversary is allowed to see per backup round. The
// monolithic pipeline exposes a total ciphertext length plus the attachment
// pair set; the frame pipeline exposes the raw backup bytes, which carry no
// plaintext beyond the lengths structure.
struct WhatsAppObservation {
  size_t ciphertext_len = 0;
  std::vector<AttachmentCiphertextPair> attachment_pairs;
};

struct SignalObservation {
  Bytes wire;
};

struct BackupObservation {
  int round = 0;
  std::optional<WhatsAppObservation> whatsapp;
  std::optional<SignalObservation> signal;
};

// The adversary's entire interface to the victim: inject messages, observe
// backups. Attacks must never touch anything else.
class BackupOracle {
 public:
  virtual ~BackupOracle() = default;

  virtual void inject(const InboundMessage& msg) = 0;

  // Runs the between-backup noise interval, then produces the next backup.
  // Increments the round counter q.
  virtual BackupObservation next_backup() = 0;

  // The backup already sitting in storage before the attack; not counted
  // as an observation round.
  virtual BackupObservation baseline() = 0;

  // Models the adversary waiting until the scenario's honest party has sent
  // the (single) target message.
  virtual void wait_for_target() = 0;

  virtual int rounds() const = 0;
};

enum class PipelineKind { kWhatsApp, kSignal };

struct OracleConfig {
  PipelineKind pipeline = PipelineKind::kWhatsApp;
  WhatsAppBackupConfig whatsapp;
  SignalVersion signal_version = SignalVersion::kV0;
  std::string passphrase = "123456789012345678901234567890";
};

// Simulation-backed oracle: owns the victim client, the backup pipeline and
// the noise model, and schedules the honest party's target delivery.
class SimOracle : public BackupOracle {
 public:
  SimOracle(ClientConfig client_config, OracleConfig oracle_config,
            NoiseSpec noise, uint64_t seed);

  void inject(const InboundMessage& msg) override;
  BackupObservation next_backup() override;
  BackupObservation baseline() override;
  void wait_for_target() override;
  int rounds() const override { return round_; }

  // Harness-side setup: prior state and the honest target delivery.
  Client& setup_client() { return client_; }
  void schedule_target(const InboundMessage& msg) { pending_target_ = msg; }

  // Ground-truth access for verification; never for attacks. The sentinel
  // flag lets tests prove an attack run kept its hands off.
  Client& debug_client() {
    debug_accessed_ = true;
    return client_;
  }
  bool debug_accessed() const { return debug_accessed_; }
  void reset_debug_flag() { debug_accessed_ = false; }

 private:
  BackupObservation observe();

  Client client_;
  OracleConfig config_;
  NoiseSpec noise_;
  Rng rng_;
  Key256 wa_key_{};
  SignalKeys signal_keys_;
  std::optional<InboundMessage> pending_target_;
  int round_ = 0;
  uint32_t epoch_ = 0;
  int64_t clock_ = 1700000000;
  bool debug_accessed_ = false;
};

}  // namespace leaklab

#endif  // LEAKLAB_ORACLE_HPP
