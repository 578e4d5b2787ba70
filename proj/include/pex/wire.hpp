#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pex/predictor.hpp"
#include "pex/transport.hpp"

// Framing for out-of-process predictors. All integers and floats are
// little-endian.
//
//   request  : magic | 0x01 | side u32 | resolution f32 | col u32 | row u32
//              | 3*side^2 bytes (free, uncertain, obstacle planes)
//   response : magic | 0x02 | side u32 | side^2 f32 obstacle probabilities
//   error    : magic | 0xFF | len u32  | len bytes of UTF-8
namespace pex::wire {

// The four ASCII bytes "SXP1" in wire order.
inline constexpr std::array<std::uint8_t, 4> kMagic = {0x53, 0x58, 0x50, 0x31};

enum class FrameType : std::uint8_t {
  kRequest = 0x01,
  kResponse = 0x02,
  kError = 0xFF,
};

// Sanity caps applied while decoding untrusted input.
inline constexpr std::uint32_t kMaxSide = 8192;
inline constexpr std::uint32_t kMaxErrorLength = 1u << 20;

struct ResponseFrame {
  std::uint32_t side = 0;
  std::vector<float> prob;  // row-major
};

struct ErrorFrame {
  std::string message;
};

using Frame = std::variant<PredictRequest, ResponseFrame, ErrorFrame>;

std::vector<std::uint8_t> encode_request(const PredictRequest& req);
std::vector<std::uint8_t> encode_response(const ProbabilityGrid& prob);
std::vector<std::uint8_t> encode_response(std::uint32_t side, std::span<const float> prob);
std::vector<std::uint8_t> encode_error(std::string_view message);

// Decodes one frame. Bad magic, unknown type or oversize lengths raise
// kProtocolViolation; a stream that ends before the first byte raises
// kConnectionFailed and one that ends mid-frame raises kProtocolViolation.
Frame read_frame(ByteSource& source);

PredictResponse to_response(const ResponseFrame& frame, double resolution);

}  // namespace pex::wire
