#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "levyfluct/process.hpp"

namespace levyfluct {

/// One simulated first-passage record.
struct QuintupleSample {
    double t_rel = 0.0;              ///< passage time minus time of last maximum
    double g = 0.0;                  ///< time of the last maximum before passage
    double overshoot = 0.0;          ///< u > 0
    double undershoot = 0.0;         ///< v = x - X_{tau-} >= y
    double lastmax_undershoot = 0.0; ///< y = x - sup X before passage
    bool crept = false;              ///< impossible in this class; carried for the record
    double weight = 1.0;             ///< importance-sampling likelihood ratio (1 when plain)
};

/// Path abandoned: the closed-form comeback bound dropped below miss_epsilon.
struct NoPassage {
    double remaining_bound = 0.0;
};

using PassageOutcome = std::variant<QuintupleSample, NoPassage>;

struct SimConfig {
    std::uint64_t seed = 1;
    std::size_t n_samples = 0;
    double barrier = 1.0;
    double miss_epsilon = 1e-7;  ///< in (0, 1e-6]
    double tilt_theta = 0.0;     ///< 0 = plain sampling
};
void validate_sim_config(const SimConfig& cfg);

/// Deterministic per-sample random stream (xoshiro256++ keyed by splitmix64),
/// so sample i depends only on (seed, i) and never on the thread layout.
class SampleRng {
  public:
    SampleRng(std::uint64_t seed, std::uint64_t index);
    std::uint64_t next();
    double uniform();                  ///< in [0, 1)
    double exponential(double rate);   ///< inverse-CDF

  private:
    std::uint64_t s_[4];
};

/// Draws one jump size; `rate` is the (tilted) arrival intensity.
struct JumpSampler {
    double rate = 0.0;
    std::function<double(SampleRng&)> draw;
};

/// Everything the path simulator needs. Samplers are already tilted when
/// theta > 0; `log_mgf` is log E e^{theta X_1} of the original process, used
/// in the likelihood ratio exp(-theta X_tau + tau log_mgf).
struct PassageModel {
    double drift_down = 0.0;  ///< c > 0: X decreases at rate c between jumps
    JumpSampler up;
    JumpSampler down;  ///< rate 0 when absent
    double theta = 0.0;
    double log_mgf = 0.0;
    /// d -> upper bound on the probability of ever climbing by d (used to
    /// declare NoPassage when below miss_epsilon; plain sampling only).
    std::function<double(double)> comeback_bound;
};

/// One exact path to first passage over cfg.barrier (or a certified miss).
PassageOutcome sample_passage_one(const PassageModel& m, const SimConfig& cfg,
                                  std::uint64_t index);

/// All samples, embarrassingly parallel, output in index order (byte-stable
/// across thread counts).
std::vector<PassageOutcome> sample_passage(const PassageModel& m, const SimConfig& cfg);

/// A recorded jump event; drift is implicit between events.
struct PathEvent {
    double time = 0.0;
    double jump = 0.0;  ///< signed: > 0 up, < 0 down
};

/// Last-maximum bookkeeping of an explicit event path whose final event
/// crosses the barrier: returns (g, t_rel, y) and the undershoot. Ties at the
/// maximum take the last attaining time.
struct LastMaxRecord {
    double g = 0.0;
    double t_rel = 0.0;
    double y = 0.0;
    double undershoot = 0.0;
};
LastMaxRecord record_last_max(std::span<const PathEvent> events, double drift_down,
                              double barrier);

}  // namespace levyfluct
