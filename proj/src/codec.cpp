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

#include "setchain/codec.hpp"

#include <brotli/decode.h>
#include <brotli/encode.h>

#include "setchain/element.hpp"
#include "setchain/types.hpp"

namespace setchain {

BrotliCodec::BrotliCodec(int quality, int lgwin) : quality_(quality), lgwin_(lgwin) {
  if (quality < BROTLI_MIN_QUALITY || quality > BROTLI_MAX_QUALITY) throw ConfigError("brotli quality out of range");
  if (lgwin < BROTLI_MIN_WINDOW_BITS || lgwin > BROTLI_MAX_WINDOW_BITS) throw ConfigError("brotli window out of range");
}

Bytes BrotliCodec::compress(ByteView input) const {
  Bytes out(BrotliEncoderMaxCompressedSize(input.size()));
  std::size_t out_size = out.size();
  if (out.empty() ||
      BrotliEncoderCompress(quality_, lgwin_, BROTLI_MODE_GENERIC, input.size(), input.data(), &out_size,
                            out.data()) != BROTLI_TRUE) {
    throw EncodingError("brotli compression failed");
  }
  out.resize(out_size);
  return out;
}

std::optional<Bytes> BrotliCodec::decompress(ByteView input, std::size_t max_output) const {
  std::unique_ptr<BrotliDecoderState, decltype(&BrotliDecoderDestroyInstance)> state(
      BrotliDecoderCreateInstance(nullptr, nullptr, nullptr), &BrotliDecoderDestroyInstance);
  if (!state) return std::nullopt;

  Bytes out;
  std::size_t avail_in = input.size();
  const std::uint8_t* next_in = input.data();
  std::uint8_t chunk[1 << 16];
  for (;;) {
    std::size_t avail_out = sizeof(chunk);
    std::uint8_t* next_out = chunk;
    const BrotliDecoderResult r =
        BrotliDecoderDecompressStream(state.get(), &avail_in, &next_in, &avail_out, &next_out, nullptr);
    const std::size_t produced = sizeof(chunk) - avail_out;
    if (out.size() + produced > max_output) return std::nullopt;
    out.insert(out.end(), chunk, chunk + produced);
    if (r == BROTLI_DECODER_RESULT_SUCCESS) {
      if (avail_in != 0) return std::nullopt;
      return out;
    }
    if (r == BROTLI_DECODER_RESULT_NEEDS_MORE_OUTPUT) continue;
    return std::nullopt;
  }
}

std::optional<Bytes> NullCodec::decompress(ByteView input, std::size_t max_output) const {
  if (input.size() > max_output) return std::nullopt;
  return Bytes(input.begin(), input.end());
}

std::shared_ptr<const Codec> make_codec(const std::string& name, int brotli_quality) {
  if (name == "brotli") return std::make_shared<BrotliCodec>(brotli_quality);
  if (name == "null") return std::make_shared<NullCodec>();
  throw ConfigError("unknown codec '" + name + "'");
}

Bytes encode_compressed_tx(const Codec& codec, ByteView batch_bytes) {
  const std::string name = codec.name();
  if (name.empty() || name.size() > 255) throw EncodingError("codec name length out of range");
  const Bytes body = codec.compress(batch_bytes);
  Bytes out;
  out.reserve(2 + name.size() + body.size());
  put_u8(out, kCompressedBatchTag);
  put_u8(out, static_cast<std::uint8_t>(name.size()));
  out.insert(out.end(), name.begin(), name.end());
  put_bytes(out, body);
  return out;
}

std::optional<Bytes> decode_compressed_tx(ByteView tx, std::size_t max_output) {
  ByteReader r(tx);
  auto tag = r.u8();
  if (!tag || *tag != kCompressedBatchTag) return std::nullopt;
  auto len = r.u8();
  if (!len || *len == 0) return std::nullopt;
  auto name = r.take(*len);
  if (!name) return std::nullopt;
  const ByteView body = tx.subspan(2 + *len);
  const std::string_view n = as_string_view(*name);
  if (n == "brotli") {
    static const BrotliCodec brotli;
    return brotli.decompress(body, max_output);
  }
  if (n == "null") {
    static const NullCodec null_codec;
    return null_codec.decompress(body, max_output);
  }
  return std::nullopt;
}

}  // namespace setchain
