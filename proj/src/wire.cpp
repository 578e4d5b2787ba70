#include "pex/wire.hpp"

#include <bit>
#include <cstring>

namespace pex::wire {

namespace {

static_assert(std::endian::native == std::endian::little,
              "wire encoding assumes a little-endian host");

void put_u8(std::vector<std::uint8_t>& out, std::uint8_t v) { out.push_back(v); }

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_header(std::vector<std::uint8_t>& out, FrameType type) {
  out.insert(out.end(), kMagic.begin(), kMagic.end());
  put_u8(out, static_cast<std::uint8_t>(type));
}

std::uint32_t get_u32(ByteSource& src) {
  std::array<std::uint8_t, 4> b{};
  src.read_exact(b);
  return static_cast<std::uint32_t>(b[0]) | static_cast<std::uint32_t>(b[1]) << 8 |
         static_cast<std::uint32_t>(b[2]) << 16 | static_cast<std::uint32_t>(b[3]) << 24;
}

float get_f32(ByteSource& src) { return std::bit_cast<float>(get_u32(src)); }

std::uint32_t checked_side(std::uint32_t side) {
  if (side == 0 || side > kMaxSide) {
    throw Error(ErrorCode::kProtocolViolation, "frame side out of range");
  }
  return side;
}

Frame read_body(ByteSource& src, FrameType type) {
  switch (type) {
    case FrameType::kRequest: {
      PredictRequest req;
      const std::uint32_t side = checked_side(get_u32(src));
      req.resolution = static_cast<double>(get_f32(src));
      req.robot_cell.col = static_cast<int>(get_u32(src));
      req.robot_cell.row = static_cast<int>(get_u32(src));
      const std::size_t n = static_cast<std::size_t>(side) * side;
      req.window.width = req.window.height = static_cast<int>(side);
      req.window.free.resize(n);
      req.window.uncertain.resize(n);
      req.window.obstacle.resize(n);
      src.read_exact(req.window.free);
      src.read_exact(req.window.uncertain);
      src.read_exact(req.window.obstacle);
      return req;
    }
    case FrameType::kResponse: {
      ResponseFrame resp;
      resp.side = checked_side(get_u32(src));
      const std::size_t n = static_cast<std::size_t>(resp.side) * resp.side;
      std::vector<std::uint8_t> raw(n * 4);
      src.read_exact(raw);
      resp.prob.resize(n);
      for (std::size_t i = 0; i < n; ++i) {
        std::uint32_t bits = 0;
        for (int b = 0; b < 4; ++b) {
          bits |= static_cast<std::uint32_t>(raw[i * 4 + b]) << (8 * b);
        }
        resp.prob[i] = std::bit_cast<float>(bits);
      }
      return resp;
    }
    case FrameType::kError: {
      const std::uint32_t len = get_u32(src);
      if (len > kMaxErrorLength) {
        throw Error(ErrorCode::kProtocolViolation, "error message too long");
      }
      std::string message(len, '\0');
      src.read_exact(std::span(reinterpret_cast<std::uint8_t*>(message.data()), len));
      return ErrorFrame{std::move(message)};
    }
  }
  throw Error(ErrorCode::kProtocolViolation, "unknown frame type");
}

}  // namespace

std::vector<std::uint8_t> encode_request(const PredictRequest& req) {
  validate_request(req);
  const auto side = static_cast<std::uint32_t>(req.side());
  std::vector<std::uint8_t> out;
  out.reserve(21 + 3 * req.window.free.size());
  put_header(out, FrameType::kRequest);
  put_u32(out, side);
  put_f32(out, static_cast<float>(req.resolution));
  put_u32(out, static_cast<std::uint32_t>(req.robot_cell.col));
  put_u32(out, static_cast<std::uint32_t>(req.robot_cell.row));
  out.insert(out.end(), req.window.free.begin(), req.window.free.end());
  out.insert(out.end(), req.window.uncertain.begin(), req.window.uncertain.end());
  out.insert(out.end(), req.window.obstacle.begin(), req.window.obstacle.end());
  return out;
}

std::vector<std::uint8_t> encode_response(std::uint32_t side, std::span<const float> prob) {
  if (prob.size() != static_cast<std::size_t>(side) * side) {
    throw Error(ErrorCode::kInvalidArgument, "response payload does not match side");
  }
  std::vector<std::uint8_t> out;
  out.reserve(9 + 4 * prob.size());
  put_header(out, FrameType::kResponse);
  put_u32(out, side);
  for (float p : prob) put_f32(out, p);
  return out;
}

std::vector<std::uint8_t> encode_response(const ProbabilityGrid& prob) {
  if (prob.width() != prob.height()) {
    throw Error(ErrorCode::kInvalidArgument, "response grid must be square");
  }
  std::vector<float> values(prob.cells().begin(), prob.cells().end());
  return encode_response(static_cast<std::uint32_t>(prob.width()), values);
}

std::vector<std::uint8_t> encode_error(std::string_view message) {
  std::vector<std::uint8_t> out;
  out.reserve(9 + message.size());
  put_header(out, FrameType::kError);
  put_u32(out, static_cast<std::uint32_t>(message.size()));
  out.insert(out.end(), message.begin(), message.end());
  return out;
}

Frame read_frame(ByteSource& source) {
  std::array<std::uint8_t, 4> magic{};
  // Only a stream that ends before its first byte is a clean close.
  source.read_exact(std::span(magic).first(1));
  try {
    source.read_exact(std::span(magic).subspan(1));
    if (magic != kMagic) {
      throw Error(ErrorCode::kProtocolViolation, "bad magic");
    }
    std::array<std::uint8_t, 1> type{};
    source.read_exact(type);
    const auto t = static_cast<FrameType>(type[0]);
    if (t != FrameType::kRequest && t != FrameType::kResponse && t != FrameType::kError) {
      throw Error(ErrorCode::kProtocolViolation, "unknown frame type");
    }
    return read_body(source, t);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kConnectionFailed) {
      throw Error(ErrorCode::kProtocolViolation, "truncated frame: " + e.detail());
    }
    throw;
  }
}

PredictResponse to_response(const ResponseFrame& frame, double resolution) {
  const int side = static_cast<int>(frame.side);
  ProbabilityGrid prob(side, side, 0.5, resolution > 0.0 ? resolution : kDefaultResolution);
  auto cells = prob.cells();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i] = static_cast<double>(frame.prob[i]);
  }
  return {std::move(prob)};
}

}  // namespace pex::wire
