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

#include "leaklab/whatsapp_backup.hpp"

#include <zlib.h>

#include "leaklab/crypto.hpp"
#include "leaklab/errors.hpp"

namespace leaklab {

Bytes deflate_bytes(BytesView in, int level) {
  uLongf bound = compressBound(static_cast<uLong>(in.size()));
  Bytes out(bound);
  z_stream zs{};
  if (deflateInit(&zs, level) != Z_OK) throw Error("deflate: init failed");
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  int rc = deflate(&zs, Z_FINISH);
  deflateEnd(&zs);
  if (rc != Z_STREAM_END) throw Error("deflate: stream error");
  out.resize(zs.total_out);
  return out;
}

Bytes inflate_bytes(BytesView in) {
  z_stream zs{};
  if (inflateInit(&zs) != Z_OK) throw Error("inflate: init failed");
  zs.next_in = const_cast<Bytef*>(in.data());
  zs.avail_in = static_cast<uInt>(in.size());
  Bytes out;
  Bytes chunk(1 << 16);
  int rc = Z_OK;
  while (rc != Z_STREAM_END) {
    zs.next_out = chunk.data();
    zs.avail_out = static_cast<uInt>(chunk.size());
    rc = inflate(&zs, Z_NO_FLUSH);
    if (rc != Z_OK && rc != Z_STREAM_END) {
      inflateEnd(&zs);
      throw Error("inflate: stream error");
    }
    out.insert(out.end(), chunk.begin(),
               chunk.begin() + (chunk.size() - zs.avail_out));
  }
  inflateEnd(&zs);
  return out;
}

WhatsAppBackup whatsapp_seal_image(BytesView image,
                                   const WhatsAppBackupConfig& config,
                                   const Key256& key, uint32_t epoch,
                                   Rng& rng) {
  Bytes body = config.compression_enabled
                   ? deflate_bytes(image, config.compression_level)
                   : Bytes(image.begin(), image.end());

  WhatsAppBackup backup;
  backup.epoch = epoch;
  Bytes& wire = backup.wire;
  wire.reserve(config.aead_overhead() + body.size());
  append(wire, std::string_view("LWB"));
  wire.push_back(config.compression_enabled ? 0x01 : 0x00);
  put_be32(wire, epoch);
  Bytes nonce = rng.bytes(12);
  append(wire, BytesView(nonce));
  Bytes sealed = crypto::aes256_gcm_seal(BytesView(key), nonce, body);
  append(wire, BytesView(sealed));
  return backup;
}

WhatsAppBackup whatsapp_make_backup(const Client& client,
                                    const WhatsAppBackupConfig& config,
                                    const Key256& key, uint32_t epoch,
                                    Rng& rng) {
  return whatsapp_seal_image(client.db().serialize(), config, key, epoch, rng);
}

Bytes whatsapp_open_backup(BytesView wire, const WhatsAppBackupConfig& config,
                           const Key256& key) {
  if (wire.size() < config.aead_overhead() ||
      wire[0] != 'L' || wire[1] != 'W' || wire[2] != 'B')
    throw Error("whatsapp backup: bad header");
  bool compressed = wire[3] == 0x01;
  BytesView nonce = wire.subspan(8, 12);
  BytesView sealed = wire.subspan(20);
  Bytes body = crypto::aes256_gcm_open(BytesView(key), nonce, sealed);
  return compressed ? inflate_bytes(body) : body;
}

}  // namespace leaklab
