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

#include "leaklab/signal_backup.hpp"

#include <algorithm>
#include <cctype>

#include "leaklab/crypto.hpp"
#include "leaklab/errors.hpp"

namespace leaklab {

namespace {

constexpr uint32_t kMaxPlausibleFrame = 1u << 20;

const char* create_statement(const std::string& table) {
  if (table == "contacts")
    return "CREATE TABLE contacts (_id INTEGER PRIMARY KEY, name TEXT, "
           "number TEXT, registered INTEGER)";
  if (table == "threads")
    return "CREATE TABLE threads (_id INTEGER PRIMARY KEY, recipient INTEGER, "
           "snippet TEXT, date INTEGER)";
  if (table == "messages")
    return "CREATE TABLE messages (_id INTEGER PRIMARY KEY, thread INTEGER, "
           "body TEXT, date INTEGER, flags INTEGER)";
  if (table == "attachments_meta")
    return "CREATE TABLE attachments_meta (_id INTEGER PRIMARY KEY, message "
           "INTEGER, size INTEGER)";
  return "CREATE TABLE misc (_id INTEGER PRIMARY KEY)";
}

Bytes frame_iv(BytesView base_iv, uint32_t counter) {
  Bytes iv(base_iv.begin(), base_iv.end());
  for (int i = 0; i < 4; ++i)
    iv[12 + i] ^= static_cast<uint8_t>(counter >> (24 - 8 * i));
  return iv;
}

// Filler plaintext for an insert statement; only its length matters, but it
// must be stable across backups of an unchanged row.
Bytes row_plaintext(const FrameMeta& meta) {
  Rng fill(meta.fill_seed);
  return fill.bytes(meta.pt_len);
}

Bytes media_plaintext(const FrameMeta& meta) {
  Rng fill(meta.fill_seed ^ 0x6d656469a5a5a5a5ULL);
  return fill.bytes(meta.media_len);
}

struct FrameWriter {
  const SignalKeys& keys;
  uint32_t counter = 0;
  Bytes out;
  std::vector<uint32_t> frame_lengths;
  std::vector<size_t> media_lengths;

  Bytes seal(BytesView plaintext) {
    Bytes ct = crypto::aes256_ctr(keys.enc_key, frame_iv(keys.iv, counter++),
                                  plaintext);
    Bytes mac = crypto::hmac_sha256(keys.mac_key, ct);
    ct.insert(ct.end(), mac.begin(), mac.begin() + kFrameMacLen);
    return ct;
  }

  void add_frame(BytesView plaintext) {
    Bytes ct = seal(plaintext);
    put_be32(out, static_cast<uint32_t>(ct.size()));
    append(out, BytesView(ct));
    frame_lengths.push_back(static_cast<uint32_t>(ct.size()));
  }

  void add_media(BytesView media) {
    Bytes mh(kMediaHeaderPtLen, 0);
    mh[0] = 'M';
    mh[1] = 'H';
    uint64_t len = media.size() + kFrameMacLen;
    for (int i = 0; i < 8; ++i)
      mh[2 + i] = static_cast<uint8_t>(len >> (56 - 8 * i));
    add_frame(mh);
    Bytes ct = seal(media);
    append(out, BytesView(ct));
    media_lengths.push_back(ct.size());
  }
};

}  // namespace

SignalKeys derive_keys(const std::string& passphrase, BytesView salt) {
  if (passphrase.size() != 30 ||
      !std::all_of(passphrase.begin(), passphrase.end(),
                   [](unsigned char c) { return std::isdigit(c); }))
    throw MalformedPassphrase("passphrase must be 30 decimal digits");

  Bytes okm = crypto::hkdf_sha256(to_bytes(passphrase), salt,
                                  to_bytes("backup export"), 80);
  SignalKeys keys;
  keys.enc_key.assign(okm.begin(), okm.begin() + 32);
  keys.mac_key.assign(okm.begin() + 32, okm.begin() + 64);
  keys.iv.assign(okm.begin() + 64, okm.begin() + 80);
  keys.salt.assign(salt.begin(), salt.end());
  return keys;
}

SignalBackup signal_make_backup(const Client& client, const SignalKeys& keys,
                                SignalVersion version, Rng& rng) {
  if (client.config().profile != Profile::kSignal)
    throw ConfigError("signal backup needs a signal-profile client");

  FrameWriter w{keys};

  const auto& tables = signal_tables();
  for (const auto& name : tables)
    w.add_frame(to_bytes(create_statement(name)));

  for (const auto& name : tables) {
    const Table& table = client.db().table(name);
    for (int64_t rowid : table.rowids()) {
      auto fit = client.frames().find({name, rowid});
      if (fit == client.frames().end()) continue;
      w.add_frame(row_plaintext(fit->second));
      if (fit->second.media_len > 0) w.add_media(media_plaintext(fit->second));
    }
  }

  SignalBackup backup;
  backup.version = version;
  backup.frame_lengths = std::move(w.frame_lengths);
  backup.media_lengths = std::move(w.media_lengths);

  Bytes header;
  header.push_back(version == SignalVersion::kV0 ? 0x00 : 0x01);
  append(header, BytesView(keys.iv));
  append(header, BytesView(keys.salt));

  Bytes& wire = backup.wire;
  put_be32(wire, static_cast<uint32_t>(header.size()));
  append(wire, BytesView(header));

  if (version == SignalVersion::kV0) {
    append(wire, BytesView(w.out));
  } else {
    // Length fields move inside the encrypted stream and the whole body is
    // re-encrypted as one run, leaving no recoverable internal boundaries.
    Bytes inner_iv = rng.bytes(16);
    Bytes body = crypto::aes256_ctr(keys.enc_key, inner_iv, w.out);
    Bytes mac = crypto::hmac_sha256(keys.mac_key, body);
    append(wire, BytesView(inner_iv));
    append(wire, BytesView(body));
    wire.insert(wire.end(), mac.begin(), mac.begin() + kFrameMacLen);
  }
  return backup;
}

std::vector<uint32_t> parse_frame_lengths(BytesView wire) {
  if (wire.size() < 4) throw BoundaryLost("truncated header");
  uint32_t header_len = get_be32(wire.data());
  if (header_len < 1 || 4 + header_len > wire.size())
    throw BoundaryLost("bad header length");
  if (wire[4] != 0x00)
    throw BoundaryLost("boundary-hiding format");

  std::vector<uint32_t> lengths;
  size_t pos = 4 + header_len;
  while (pos < wire.size()) {
    if (pos + 4 > wire.size()) throw BoundaryLost("truncated length field");
    uint32_t len = get_be32(wire.data() + pos);
    if (len == 0 || len >= kMaxPlausibleFrame) return lengths;  // media region
    if (pos + 4 + len > wire.size()) throw BoundaryLost("truncated frame");
    lengths.push_back(len);
    pos += 4 + len;
  }
  return lengths;
}

std::vector<size_t> heuristic_scan(BytesView wire, size_t start) {
  std::vector<size_t> candidates;
  if (wire.size() < 4) return candidates;
  for (size_t o = start; o + 4 <= wire.size(); ++o) {
    uint32_t v = get_be32(wire.data() + o);
    if (v > 0 && v < kMaxPlausibleFrame && o + 4 + v <= wire.size())
      candidates.push_back(o);
  }
  return candidates;
}

namespace {

// Parses a plausible-length chain from `pos`; returns frames appended to
// `frames` if the chain reaches EOF or another implausible region after at
// least `min_chain` frames.
bool try_chain(BytesView wire, size_t pos, size_t min_chain,
               std::vector<ParsedFrame>& frames, size_t& resume) {
  std::vector<ParsedFrame> chain;
  while (pos < wire.size()) {
    if (pos + 4 > wire.size()) return false;
    uint32_t len = get_be32(wire.data() + pos);
    if (len == 0 || len >= kMaxPlausibleFrame) break;
    if (pos + 4 + len > wire.size()) return false;
    chain.push_back(ParsedFrame{pos, len, false});
    pos += 4 + len;
  }
  if (chain.size() < min_chain && pos < wire.size()) return false;
  frames.insert(frames.end(), chain.begin(), chain.end());
  resume = pos;
  return true;
}

}  // namespace

std::vector<ParsedFrame> parse_frames_resync(BytesView wire) {
  if (wire.size() < 4) throw BoundaryLost("truncated header");
  uint32_t header_len = get_be32(wire.data());
  if (header_len < 1 || 4 + header_len > wire.size())
    throw BoundaryLost("bad header length");
  if (wire[4] != 0x00) throw BoundaryLost("boundary-hiding format");

  std::vector<ParsedFrame> frames;
  size_t pos = 4 + header_len;
  bool after_gap = false;
  while (pos < wire.size()) {
    size_t before = frames.size();
    size_t resume = pos;
    if (try_chain(wire, pos, 1, frames, resume) && frames.size() > before) {
      if (after_gap) frames[before].after_gap = true;
      after_gap = false;
      pos = resume;
      continue;
    }
    // Inside a media region: resynchronize at the next offset from which a
    // chain of at least two frames (or a clean run to EOF) parses.
    bool found = false;
    for (size_t o : heuristic_scan(wire, pos + 1)) {
      size_t r = o;
      std::vector<ParsedFrame> tentative;
      if (try_chain(wire, o, 2, tentative, r)) {
        pos = o;
        after_gap = true;
        found = true;
        break;
      }
    }
    if (!found) break;
  }
  return frames;
}

size_t create_frame_count(Profile profile) {
  return profile == Profile::kSignal ? signal_tables().size()
                                     : whatsapp_tables().size();
}

}  // namespace leaklab
