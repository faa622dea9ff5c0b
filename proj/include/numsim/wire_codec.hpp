#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>

namespace numsim {

// ICMP-style control frame exchanged between links and users.
//
//  0        1        2        3
//  +--------+--------+--------+--------+
//  | type=1 |  code  |    checksum     |
//  +--------+--------+--------+--------+
//  |   identifier    |    sequence     |
//  +--------+--------+--------+--------+
//  |        timestamp (ms, u32)        |
//  +--------+--------+--------+--------+
//  |    payload (IEEE-754 binary64)    |
//  |                                   |
//  +--------+--------+--------+--------+
//
// All multi-byte fields are big-endian. The payload is the link price for a
// notification and the requested bandwidth for a response.
enum class MessageCode : std::uint8_t { kPriceNotification = 0, kResponse = 1 };

inline constexpr std::uint8_t kMessageType = 1;
inline constexpr std::size_t kFrameSize = 20;

using Frame = std::array<std::uint8_t, kFrameSize>;

struct PriceMessage {
  std::uint8_t msg_type = kMessageType;
  std::uint8_t code = 0;
  std::uint16_t checksum = 0;  // filled in by encode, verified by decode
  std::uint16_t identifier = 0;
  std::uint16_t sequence = 0;
  std::uint32_t timestamp_ms = 0;
  double payload = 0.0;

  friend bool operator==(const PriceMessage&, const PriceMessage&) = default;
};

// Internet checksum: ones' complement of the ones' complement sum of the
// big-endian 16-bit words. An odd trailing byte is padded with zero.
std::uint16_t checksum(std::span<const std::uint8_t> bytes);

// Throws CodecError on a bad type/code or a non-finite payload.
Frame encode(const PriceMessage& msg);

// Throws CodecError on wrong length, bad checksum, type or code.
PriceMessage decode(std::span<const std::uint8_t> bytes);

// Lowercase hex, two digits per byte, no separators.
std::string to_hex(std::span<const std::uint8_t> bytes);

}  // namespace numsim
