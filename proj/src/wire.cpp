// Copyright 2026 The streamlda Authors. All Rights Reserved.
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

#include "streamlda/wire.hpp"

#include <bit>
#include <string>

#include "streamlda/common.hpp"

namespace streamlda::wire {

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t x) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t x) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(x >> (8 * i)));
}

void put_f64(std::vector<std::uint8_t>& out, double x) { put_u64(out, std::bit_cast<std::uint64_t>(x)); }

void put_triples(std::vector<std::uint8_t>& out, const SparseDelta& entries) {
  put_u32(out, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    put_u32(out, e.topic);
    put_u32(out, e.word);
    put_f64(out, e.value);
  }
}

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t x = 0;
    for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * i);
    return x;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t x = 0;
    for (int i = 0; i < 8; ++i) x |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * i);
    return x;
  }
  double f64() { return std::bit_cast<double>(u64()); }

  SparseDelta triples() {
    const std::uint32_t n = u32();
    need(static_cast<std::size_t>(n) * kTripleBytes);
    SparseDelta entries(n);
    for (auto& e : entries) {
      e.topic = u32();
      e.word = u32();
      e.value = f64();
    }
    return entries;
  }

  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const {
    if (remaining() < n) throw ProtocolError("frame payload too short");
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> encode(const Message& message) {
  std::vector<std::uint8_t> out(kLengthBytes, 0);
  std::visit(
      [&out](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, Fetch>) {
          out.push_back(static_cast<std::uint8_t>(Tag::kFetch));
        } else if constexpr (std::is_same_v<T, Snapshot>) {
          out.push_back(static_cast<std::uint8_t>(Tag::kSnapshot));
          put_u32(out, m.num_topics);
          put_u32(out, m.vocab_size);
          put_f64(out, m.lambda);
          put_triples(out, m.entries);
        } else if constexpr (std::is_same_v<T, Push>) {
          out.push_back(static_cast<std::uint8_t>(Tag::kPush));
          put_triples(out, m.entries);
        } else {
          out.push_back(static_cast<std::uint8_t>(Tag::kAck));
          out.push_back(m.applied ? 1 : 0);
        }
      },
      message);
  const auto length = static_cast<std::uint32_t>(out.size() - kLengthBytes);
  for (int i = 0; i < 4; ++i) out[i] = static_cast<std::uint8_t>(length >> (8 * i));
  return out;
}

std::optional<std::uint32_t> peek_length(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kLengthBytes) return std::nullopt;
  std::uint32_t x = 0;
  for (int i = 0; i < 4; ++i) x |= static_cast<std::uint32_t>(bytes[i]) << (8 * i);
  return x;
}

Message decode(std::span<const std::uint8_t> frame) {
  const auto length = peek_length(frame);
  if (!length) throw ProtocolError("truncated frame: missing length prefix");
  if (*length < 1) throw ProtocolError("length mismatch: frame has no tag");
  if (frame.size() - kLengthBytes < *length) throw ProtocolError("truncated frame");
  if (frame.size() - kLengthBytes > *length) throw ProtocolError("length mismatch: trailing bytes");

  Reader r(frame.subspan(kLengthBytes));
  const std::uint8_t tag = r.u8();
  Message message;
  switch (tag) {
    case static_cast<std::uint8_t>(Tag::kFetch):
      message = Fetch{};
      break;
    case static_cast<std::uint8_t>(Tag::kSnapshot): {
      Snapshot s;
      s.num_topics = r.u32();
      s.vocab_size = r.u32();
      s.lambda = r.f64();
      s.entries = r.triples();
      for (const auto& e : s.entries) {
        if (e.topic >= s.num_topics || e.word >= s.vocab_size) {
          throw ProtocolError("snapshot triple outside declared dimensions");
        }
      }
      message = std::move(s);
      break;
    }
    case static_cast<std::uint8_t>(Tag::kPush):
      message = Push{r.triples()};
      break;
    case static_cast<std::uint8_t>(Tag::kAck): {
      const std::uint8_t applied = r.u8();
      if (applied > 1) throw ProtocolError("ack flag must be 0 or 1");
      message = Ack{applied == 1};
      break;
    }
    default:
      throw ProtocolError("unknown message tag " + std::to_string(tag));
  }
  if (r.remaining() != 0) throw ProtocolError("length mismatch: payload longer than message");
  return message;
}

}  // namespace streamlda::wire
