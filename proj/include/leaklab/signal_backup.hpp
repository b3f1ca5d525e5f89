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

#ifndef LEAKLAB_SIGNAL_BACKUP_HPP
#define LEAKLAB_SIGNAL_BACKUP_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "leaklab/bytes.hpp"
#include "leaklab/client.hpp"
#include "leaklab/rng.hpp"

namespace leaklab {

// Frame-oriented pipeline: one CREATE statement frame per table, one INSERT
// statement frame per row (contacts, threads, messages blocks first, the
// remaining tables alphabetically, rowid ascending within a table), each
// frame AES-CTR encrypted and MACed separately with a plaintext 4-byte
// big-endian length prepended. Media contents follow their row's frame as a
// header frame plus raw ciphertext with no length prefix. The v1 revision
// re-encrypts the whole frame stream as one boundary-free body.
// Wire layout is pinned in docs/format-signal-backup.md.

struct SignalKeys {
  Bytes enc_key;  // 32
  Bytes mac_key;  // 32
  Bytes iv;       // 16
  Bytes salt;     // 32
};

// HKDF over the 30-digit passphrase with the given salt. Throws
// MalformedPassphrase unless the passphrase is exactly 30 decimal digits.
SignalKeys derive_keys(const std::string& passphrase, BytesView salt);

enum class SignalVersion { kV0, kV1 };

constexpr size_t kFrameMacLen = 10;
constexpr size_t kMediaHeaderPtLen = 16;

struct SignalBackup {
  Bytes wire;
  SignalVersion version = SignalVersion::kV0;
  // Ground truth for tests and oracles: emitted ciphertext length of every
  // length-prefixed frame, in order, and each media region's byte count.
  std::vector<uint32_t> frame_lengths;
  std::vector<size_t> media_lengths;
};

SignalBackup signal_make_backup(const Client& client, const SignalKeys& keys,
                                SignalVersion version, Rng& rng);

// Keyless parse: follows the plaintext length fields from the first frame
// and returns every frame length up to the first media region. Throws
// BoundaryLost on v1 input or a truncated stream.
std::vector<uint32_t> parse_frame_lengths(BytesView wire);

// Candidate boundary offsets: positions whose 4-byte big-endian value is a
// plausible in-bounds frame length (< 2^20).
std::vector<size_t> heuristic_scan(BytesView wire, size_t start = 0);

// Frames recovered by following length fields and re-synchronizing past
// media regions via the heuristic scan.
struct ParsedFrame {
  size_t offset = 0;
  uint32_t length = 0;
  bool after_gap = false;  // first frame recovered after a media region
};
std::vector<ParsedFrame> parse_frames_resync(BytesView wire);

// Number of CREATE statement frames a backup of this profile starts with.
size_t create_frame_count(Profile profile);

}  // namespace leaklab

#endif  // LEAKLAB_SIGNAL_BACKUP_HPP
