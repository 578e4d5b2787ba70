#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "pex/grid.hpp"
#include "pex/sensesim.hpp"
#include "pex/transport.hpp"

namespace pex {

inline constexpr int kDefaultWindowSide = 256;
// Probability given to free space extrapolated by the dilation predictor.
// Below the default tau_free so the extrapolated cells threshold to Free.
inline constexpr double kDilatedFreeProbability = 0.25;
inline constexpr std::chrono::milliseconds kDefaultRemoteTimeout{10000};

struct PredictRequest {
  ChannelStack window;  // square, side >= 8
  double resolution = kDefaultResolution;  // meters per window cell
  Cell robot_cell;      // robot position inside the window

  int side() const { return window.width; }
  friend bool operator==(const PredictRequest&, const PredictRequest&) = default;
};

struct PredictResponse {
  ProbabilityGrid prob;  // same side as the request
};

// Throws kInvalidArgument when the request breaks its invariants.
void validate_request(const PredictRequest& req);
// Throws kProtocolViolation when `resp` does not fit `req`.
void validate_response(const PredictRequest& req, const PredictResponse& resp);

PredictRequest make_request(const ObservationWindow& window);

// Observed cells lifted to 0/1, everything else 0.5.
PredictResponse predict_null(const PredictRequest& req);
// Ground-truth lift of `truth_window`; ignores the observation entirely.
PredictResponse predict_oracle(const PredictRequest& req,
                               const TrinaryGrid& truth_window);
// predict_null plus free-space extrapolation: uncertain cells within
// Chebyshev `radius` of an observed free cell, with no observed obstacle on
// the cell line between them, become kDilatedFreeProbability.
PredictResponse predict_dilate(const PredictRequest& req, int radius);
// One request/response exchange with an out-of-process predictor.
PredictResponse predict_remote(const PredictRequest& req, const Endpoint& endpoint,
                               std::chrono::milliseconds timeout = kDefaultRemoteTimeout);

// Interface used by the exploration loop; one instance per robot.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictResponse predict(const ObservationWindow& window) = 0;
  virtual std::string name() const = 0;
  // Model size reported for the exploration objective; 0 for built-ins.
  virtual std::uint64_t parameter_count() const { return 0; }
};

class NullPredictor final : public Predictor {
 public:
  PredictResponse predict(const ObservationWindow& window) override;
  std::string name() const override { return "null"; }
};

// Reads the truth window straight out of the world it was given.
class OraclePredictor final : public Predictor {
 public:
  explicit OraclePredictor(const TrinaryGrid& world) : world_(&world) {}
  PredictResponse predict(const ObservationWindow& window) override;
  std::string name() const override { return "oracle"; }

 private:
  const TrinaryGrid* world_;
};

class DilatePredictor final : public Predictor {
 public:
  explicit DilatePredictor(int radius);
  PredictResponse predict(const ObservationWindow& window) override;
  std::string name() const override { return "dilate"; }

 private:
  int radius_;
};

// Keeps one connection open; on connection failure reconnects and retries
// the request once.
class RemotePredictor final : public Predictor {
 public:
  explicit RemotePredictor(Endpoint endpoint,
                           std::chrono::milliseconds timeout = kDefaultRemoteTimeout,
                           std::uint64_t parameter_count = 0);
  PredictResponse predict(const ObservationWindow& window) override;
  PredictResponse predict(const PredictRequest& req);
  std::string name() const override { return "remote"; }
  std::uint64_t parameter_count() const override { return parameter_count_; }

 private:
  PredictResponse exchange(const PredictRequest& req);

  Endpoint endpoint_;
  std::chrono::milliseconds timeout_;
  std::uint64_t parameter_count_;
  std::optional<Connection> connection_;
};

}  // namespace pex
