#include "numsim/wire_codec.hpp"

#include <bit>
#include <cmath>

#include "numsim/error.hpp"

namespace numsim {

namespace {

void put_be(Frame& out, std::size_t at, std::uint64_t value, int width) {
  for (int i = width - 1; i >= 0; --i) {
    out[at + static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(value & 0xffu);
    value >>= 8;
  }
}

std::uint64_t get_be(std::span<const std::uint8_t> in, std::size_t at, int width) {
  std::uint64_t value = 0;
  for (int i = 0; i < width; ++i) value = (value << 8) | in[at + static_cast<std::size_t>(i)];
  return value;
}

std::uint32_t ones_complement_sum(std::span<const std::uint8_t> bytes) {
  std::uint32_t sum = 0;
  std::size_t i = 0;
  for (; i + 1 < bytes.size(); i += 2) sum += (static_cast<std::uint32_t>(bytes[i]) << 8) | bytes[i + 1];
  if (i < bytes.size()) sum += static_cast<std::uint32_t>(bytes[i]) << 8;
  while (sum >> 16) sum = (sum & 0xffffu) + (sum >> 16);
  return sum;
}

}  // namespace

std::uint16_t checksum(std::span<const std::uint8_t> bytes) {
  return static_cast<std::uint16_t>(~ones_complement_sum(bytes) & 0xffffu);
}

Frame encode(const PriceMessage& msg) {
  if (msg.msg_type != kMessageType) throw CodecError("encode: message type must be 1");
  if (msg.code > 1) throw CodecError("encode: code must be 0 or 1");
  if (!std::isfinite(msg.payload)) throw CodecError("encode: payload must be finite");

  Frame out{};
  out[0] = msg.msg_type;
  out[1] = msg.code;
  put_be(out, 4, msg.identifier, 2);
  put_be(out, 6, msg.sequence, 2);
  put_be(out, 8, msg.timestamp_ms, 4);
  put_be(out, 12, std::bit_cast<std::uint64_t>(msg.payload), 8);
  put_be(out, 2, checksum(out), 2);
  return out;
}

PriceMessage decode(std::span<const std::uint8_t> bytes) {
  if (bytes.size() != kFrameSize)
    throw CodecError("decode: expected " + std::to_string(kFrameSize) + " bytes, got " +
                     std::to_string(bytes.size()));
  if (ones_complement_sum(bytes) != 0xffffu) throw CodecError("decode: checksum mismatch");
  if (bytes[0] != kMessageType) throw CodecError("decode: message type must be 1");
  if (bytes[1] > 1) throw CodecError("decode: code must be 0 or 1");

  PriceMessage msg;
  msg.msg_type = bytes[0];
  msg.code = bytes[1];
  msg.checksum = static_cast<std::uint16_t>(get_be(bytes, 2, 2));
  msg.identifier = static_cast<std::uint16_t>(get_be(bytes, 4, 2));
  msg.sequence = static_cast<std::uint16_t>(get_be(bytes, 6, 2));
  msg.timestamp_ms = static_cast<std::uint32_t>(get_be(bytes, 8, 4));
  msg.payload = std::bit_cast<double>(get_be(bytes, 12, 8));
  return msg;
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kDigits[b >> 4]);
    out.push_back(kDigits[b & 0x0f]);
  }
  return out;
}

}  // namespace numsim
