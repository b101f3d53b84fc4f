// Copyright 2026 The Setchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>
#include <optional>
#include <string>

#include "setchain/bytes.hpp"

namespace setchain {

/// Compress/decompress pair identified by a short name that travels with
/// every compressed ledger transaction.
class Codec {
 public:
  virtual ~Codec() = default;

  virtual std::string name() const = 0;
  virtual Bytes compress(ByteView input) const = 0;
  /// nullopt on malformed input or when the output would exceed `max_output`.
  virtual std::optional<Bytes> decompress(ByteView input, std::size_t max_output) const = 0;
};

inline constexpr int kDefaultBrotliQuality = 5;
inline constexpr int kDefaultBrotliWindow = 22;
inline constexpr std::size_t kMaxDecompressedBatch = 64 * 1024 * 1024;

class BrotliCodec final : public Codec {
 public:
  explicit BrotliCodec(int quality = kDefaultBrotliQuality, int lgwin = kDefaultBrotliWindow);

  std::string name() const override { return "brotli"; }
  Bytes compress(ByteView input) const override;
  std::optional<Bytes> decompress(ByteView input, std::size_t max_output) const override;

  int quality() const { return quality_; }

 private:
  int quality_;
  int lgwin_;
};

/// Identity codec for ratio-1 experiments.
class NullCodec final : public Codec {
 public:
  std::string name() const override { return "null"; }
  Bytes compress(ByteView input) const override { return Bytes(input.begin(), input.end()); }
  std::optional<Bytes> decompress(ByteView input, std::size_t max_output) const override;
};

/// "brotli" or "null"; throws ConfigError otherwise.
std::shared_ptr<const Codec> make_codec(const std::string& name, int brotli_quality = kDefaultBrotliQuality);

/// 0x03 || name length (1 byte) || name || codec output.
Bytes encode_compressed_tx(const Codec& codec, ByteView batch_bytes);

/// Inverse of encode_compressed_tx. Only codec names this build knows are
/// accepted; everything else is a decode failure.
std::optional<Bytes> decode_compressed_tx(ByteView tx, std::size_t max_output = kMaxDecompressedBatch);

}  // namespace setchain
