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

#include "leaklab/oracle.hpp"

namespace leaklab {

SimOracle::SimOracle(ClientConfig client_config, OracleConfig oracle_config,
                     NoiseSpec noise, uint64_t seed)
    : client_(client_config, Rng::derive(seed, 1)),
      config_(oracle_config),
      noise_(noise),
      rng_(Rng::derive(seed, 2)) {
  Rng key_rng(Rng::derive(seed, 3));
  Bytes key = key_rng.bytes(32);
  std::copy(key.begin(), key.end(), wa_key_.begin());
  signal_keys_ = derive_keys(config_.passphrase, key_rng.bytes(32));
}

void SimOracle::inject(const InboundMessage& msg) {
  InboundMessage stamped = msg;
  if (stamped.timestamp == 0) stamped.timestamp = ++clock_;
  client_.receive(stamped);
}

void SimOracle::wait_for_target() {
  if (!pending_target_) return;
  InboundMessage msg = *pending_target_;
  if (msg.timestamp == 0) msg.timestamp = ++clock_;
  client_.receive(msg);
  pending_target_.reset();
}

BackupObservation SimOracle::observe() {
  BackupObservation obs;
  obs.round = round_;
  if (config_.pipeline == PipelineKind::kWhatsApp) {
    WhatsAppBackup backup =
        whatsapp_make_backup(client_, config_.whatsapp, wa_key_, epoch_, rng_);
    WhatsAppObservation wa;
    wa.ciphertext_len = backup.ciphertext_len();
    wa.attachment_pairs = client_.attachments().backup_view(rng_);
    obs.whatsapp = std::move(wa);
  } else {
    SignalBackup backup =
        signal_make_backup(client_, signal_keys_, config_.signal_version, rng_);
    obs.signal = SignalObservation{std::move(backup.wire)};
  }
  epoch_++;
  return obs;
}

BackupObservation SimOracle::next_backup() {
  apply_noise_interval(client_, noise_, rng_, clock_);
  round_++;
  return observe();
}

BackupObservation SimOracle::baseline() { return observe(); }

}  // namespace leaklab
