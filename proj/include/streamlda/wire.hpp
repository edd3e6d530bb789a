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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "streamlda/stats.hpp"

namespace streamlda::wire {

// Frame layout (all integers little-endian):
//   u32 length   bytes that follow: the tag plus the payload
//   u8  tag      1=FETCH 2=SNAPSHOT 3=PUSH 4=ACK
//   payload
// Sparse triples: u32 count N, then N x (u32 topic, u32 word, f64 value).
// SNAPSHOT payload: u32 K, u32 V, f64 lambda, triples.
// PUSH payload: triples.  ACK payload: u8 applied (0 or 1).  FETCH: empty.

enum class Tag : std::uint8_t { kFetch = 1, kSnapshot = 2, kPush = 3, kAck = 4 };

constexpr std::size_t kLengthBytes = 4;
constexpr std::size_t kTripleBytes = 16;
// Refuse frames above 1 GiB rather than allocate on a corrupt length.
constexpr std::uint32_t kMaxFrameLength = 1u << 30;

struct Fetch {
  friend bool operator==(const Fetch&, const Fetch&) = default;
};

struct Snapshot {
  std::uint32_t num_topics = 0;
  std::uint32_t vocab_size = 0;
  double lambda = 1.0;
  SparseDelta entries;

  friend bool operator==(const Snapshot&, const Snapshot&) = default;
};

struct Push {
  SparseDelta entries;

  friend bool operator==(const Push&, const Push&) = default;
};

struct Ack {
  bool applied = false;

  friend bool operator==(const Ack&, const Ack&) = default;
};

using Message = std::variant<Fetch, Snapshot, Push, Ack>;

std::vector<std::uint8_t> encode(const Message& message);

/// Decodes exactly one complete frame. Throws ProtocolError on a truncated
/// frame, an unknown tag, a length that disagrees with the payload, or a
/// SNAPSHOT triple outside its declared K x V.
Message decode(std::span<const std::uint8_t> frame);

/// Reads the u32 length prefix; nullopt when fewer than four bytes are given.
std::optional<std::uint32_t> peek_length(std::span<const std::uint8_t> bytes);

}  // namespace streamlda::wire
