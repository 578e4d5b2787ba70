#include "pex/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

#include "pex/wire.hpp"

namespace pex {

namespace {

TrinaryGrid decode_window(const PredictRequest& req) {
  return decode_channels(req.window, req.resolution);
}

// No observed obstacle on the Bresenham line from `a` to `b` (inclusive).
bool line_clear(const TrinaryGrid& grid, Cell a, Cell b) {
  const int dx = std::abs(b.col - a.col);
  const int dy = -std::abs(b.row - a.row);
  const int sx = a.col < b.col ? 1 : -1;
  const int sy = a.row < b.row ? 1 : -1;
  int err = dx + dy;
  Cell c = a;
  while (true) {
    if (grid[c] == CellClass::kObstacle) return false;
    if (c == b) return true;
    const int e2 = 2 * err;
    if (e2 >= dy) {
      err += dy;
      c.col += sx;
    }
    if (e2 <= dx) {
      err += dx;
      c.row += sy;
    }
  }
}

// Summed-area table of free cells for O(1) "any free in box" queries.
class FreeCounts {
 public:
  explicit FreeCounts(const TrinaryGrid& grid)
      : w_(grid.width() + 1), sums_(static_cast<std::size_t>(w_) * (grid.height() + 1), 0) {
    for (int r = 0; r < grid.height(); ++r) {
      for (int c = 0; c < grid.width(); ++c) {
        const int free = grid[Cell{c, r}] == CellClass::kFree ? 1 : 0;
        at(c + 1, r + 1) = free + at(c, r + 1) + at(c + 1, r) - at(c, r);
      }
    }
  }

  // Free cells in the inclusive box [c0,c1] x [r0,r1] (already clipped).
  int count(int c0, int r0, int c1, int r1) const {
    return at(c1 + 1, r1 + 1) - at(c0, r1 + 1) - at(c1 + 1, r0) + at(c0, r0);
  }

 private:
  int& at(int c, int r) { return sums_[static_cast<std::size_t>(r) * w_ + c]; }
  int at(int c, int r) const { return sums_[static_cast<std::size_t>(r) * w_ + c]; }

  int w_;
  std::vector<int> sums_;
};

}  // namespace

void validate_request(const PredictRequest& req) {
  const auto& w = req.window;
  if (w.width != w.height) {
    throw Error(ErrorCode::kInvalidArgument, "request window must be square");
  }
  if (w.width < 8) {
    throw Error(ErrorCode::kInvalidArgument, "request window side must be >= 8");
  }
  if (req.robot_cell.col < 0 || req.robot_cell.row < 0 ||
      req.robot_cell.col >= w.width || req.robot_cell.row >= w.height) {
    throw Error(ErrorCode::kInvalidArgument, "robot cell outside request window");
  }
  if (!(req.resolution > 0.0) || !std::isfinite(req.resolution)) {
    throw Error(ErrorCode::kInvalidArgument, "request resolution must be > 0");
  }
  (void)decode_channels(w);  // one-hot check
}

void validate_response(const PredictRequest& req, const PredictResponse& resp) {
  if (resp.prob.width() != req.side() || resp.prob.height() != req.side()) {
    throw Error(ErrorCode::kProtocolViolation,
                "response side " + std::to_string(resp.prob.width()) + "x" +
                    std::to_string(resp.prob.height()) + " does not match request side " +
                    std::to_string(req.side()));
  }
  try {
    validate_probabilities(resp.prob.cells());
  } catch (const Error& e) {
    throw Error(ErrorCode::kProtocolViolation, e.detail());
  }
}

PredictRequest make_request(const ObservationWindow& window) {
  return {encode_channels(window.grid), window.grid.resolution(), window.center};
}

PredictResponse predict_null(const PredictRequest& req) {
  return {lift(decode_window(req))};
}

PredictResponse predict_oracle(const PredictRequest& req, const TrinaryGrid& truth_window) {
  if (truth_window.width() != req.side() || truth_window.height() != req.side()) {
    throw Error(ErrorCode::kGridMismatch, "truth window does not match request");
  }
  ProbabilityGrid prob = lift(truth_window);
  return {ProbabilityGrid(GridGeometry{req.side(), req.side(), req.resolution, {}},
                          std::vector<double>(prob.cells().begin(), prob.cells().end()))};
}

PredictResponse predict_dilate(const PredictRequest& req, int radius) {
  if (radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "dilation radius must be >= 0");
  }
  const TrinaryGrid observed = decode_window(req);
  ProbabilityGrid prob = lift(observed);
  if (radius == 0) return {std::move(prob)};

  const FreeCounts free_counts(observed);
  const int side = observed.width();
  for (int r = 0; r < side; ++r) {
    for (int c = 0; c < side; ++c) {
      const Cell u{c, r};
      if (observed[u] != CellClass::kUncertain) continue;
      const int c0 = std::max(0, c - radius), c1 = std::min(side - 1, c + radius);
      const int r0 = std::max(0, r - radius), r1 = std::min(side - 1, r + radius);
      if (free_counts.count(c0, r0, c1, r1) == 0) continue;
      bool reached = false;
      for (int fr = r0; fr <= r1 && !reached; ++fr) {
        for (int fc = c0; fc <= c1 && !reached; ++fc) {
          const Cell f{fc, fr};
          reached = observed[f] == CellClass::kFree && line_clear(observed, f, u);
        }
      }
      if (reached) prob[u] = kDilatedFreeProbability;
    }
  }
  return {std::move(prob)};
}

PredictResponse predict_remote(const PredictRequest& req, const Endpoint& endpoint,
                               std::chrono::milliseconds timeout) {
  RemotePredictor remote(endpoint, timeout);
  return remote.predict(req);
}

PredictResponse NullPredictor::predict(const ObservationWindow& window) {
  return predict_null(make_request(window));
}

PredictResponse OraclePredictor::predict(const ObservationWindow& window) {
  const int side = window.grid.width();
  TrinaryGrid truth(side, side, CellClass::kUncertain, window.grid.resolution(),
                    window.grid.origin());
  for (int r = 0; r < side; ++r) {
    const int src_r = window.world_offset.row + window_to_crop_index(r, window.crop_side, side);
    for (int c = 0; c < side; ++c) {
      const Cell src{window.world_offset.col + window_to_crop_index(c, window.crop_side, side),
                     src_r};
      if (world_->in_bounds(src)) truth[Cell{c, r}] = (*world_)[src];
    }
  }
  return predict_oracle(make_request(window), truth);
}

DilatePredictor::DilatePredictor(int radius) : radius_(radius) {
  if (radius < 0) {
    throw Error(ErrorCode::kInvalidArgument, "dilation radius must be >= 0");
  }
}

PredictResponse DilatePredictor::predict(const ObservationWindow& window) {
  return predict_dilate(make_request(window), radius_);
}

RemotePredictor::RemotePredictor(Endpoint endpoint, std::chrono::milliseconds timeout,
                                 std::uint64_t parameter_count)
    : endpoint_(std::move(endpoint)), timeout_(timeout), parameter_count_(parameter_count) {}

PredictResponse RemotePredictor::predict(const ObservationWindow& window) {
  return predict(make_request(window));
}

PredictResponse RemotePredictor::predict(const PredictRequest& req) {
  validate_request(req);
  try {
    return exchange(req);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kConnectionFailed) throw;
    connection_.reset();
    return exchange(req);
  }
}

PredictResponse RemotePredictor::exchange(const PredictRequest& req) {
  if (!connection_) connection_ = Connection::connect(endpoint_, timeout_);
  try {
    connection_->write_all(wire::encode_request(req));
    wire::Frame frame = wire::read_frame(*connection_);
    if (auto* err = std::get_if<wire::ErrorFrame>(&frame)) {
      throw Error(ErrorCode::kRemoteError, err->message);
    }
    auto* resp = std::get_if<wire::ResponseFrame>(&frame);
    if (resp == nullptr) {
      throw Error(ErrorCode::kProtocolViolation, "expected a response frame");
    }
    if (resp->side != static_cast<std::uint32_t>(req.side())) {
      throw Error(ErrorCode::kProtocolViolation,
                  "response side " + std::to_string(resp->side) +
                      " does not match request side " + std::to_string(req.side()));
    }
    PredictResponse out = wire::to_response(*resp, req.resolution);
    validate_response(req, out);
    return out;
  } catch (const Error& e) {
    // Anything but a clean error frame leaves the stream in an unknown state.
    if (e.code() != ErrorCode::kRemoteError) connection_.reset();
    throw;
  }
}

}  // namespace pex
