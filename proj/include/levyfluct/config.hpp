#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "levyfluct/ladder.hpp"
#include "levyfluct/measures.hpp"
#include "levyfluct/process.hpp"
#include "levyfluct/rw_oracle.hpp"
#include "levyfluct/simulate.hpp"

namespace levyfluct {

/// Named jump-measure family with parameters.
///   exponential:  tail = rate * e^{-mu y}
///   tilted_pareto: tail = rate * e^{-alpha y} (1 + y)^{-p}
///   tabulated:    two-column (y, density) table, piecewise linear
struct JumpConfig {
    enum class Kind { exponential, tilted_pareto, tabulated };
    Kind kind = Kind::exponential;
    double rate = 1.0;
    double mu = 1.0;     // exponential
    double alpha = 1.0;  // tilted_pareto tilt
    double p = 2.0;      // tilted_pareto power
    std::vector<std::pair<double, double>> table;  // tabulated (y, density)
};

struct ModelConfig {
    enum class Kind { sp_bv, two_sided, stable };
    Kind kind = Kind::sp_bv;
    double drift = 0.0;  ///< sp_bv: downward rate c; two_sided: signed drift
    JumpConfig up;
    JumpConfig down;  // two_sided only
    StableSpec stable;
};

struct EvalRange {
    bool fixed = false;
    double value = 0.0;            // when fixed
    double from = 0.0, to = 0.0, step = 1.0;  // otherwise
    std::vector<double> expand() const;
};

struct EvalConfig {
    std::string law;
    std::map<std::string, EvalRange> coords;
    double barrier = 2.0;  // finite-x laws
};

struct AsymConfig {
    double alpha = 1.0;
    std::vector<double> x_ladder{2.0, 4.0, 6.0, 8.0};
    std::size_t samples_per_x = 100000;
    double tilt = 1.0;
};

struct NamedLattice {
    std::string name;
    LatticeStep step;
};

struct Config {
    std::optional<ModelConfig> model;
    GridSpec grid{1.0 / 1024, 32.0};
    GridSpec bound_grid{1.0 / 16, 64.0};
    SimConfig sim;
    AsymConfig asym;
    std::vector<NamedLattice> lattices;
    int barrier_max = 5, i_max = 6, j_max = 6;
    std::optional<EvalConfig> eval;
    std::vector<std::pair<double, double>> stable_grid;
    std::string source_digest;  ///< FNV-1a of the config bytes
};

Config load_config(const std::string& path);
Config parse_config(const std::string& json_text);

JumpMeasure make_jump_measure(const JumpConfig& jc);
SpectrallyPositiveBV make_sp_model(const ModelConfig& mc);
TwoSidedCPP make_two_sided_model(const ModelConfig& mc);

/// Arrival intensity of the exponentially tilted jump measure,
/// \int e^{theta y} Pi(dy); throws config_error outside the moment radius.
double tilted_jump_rate(const JumpConfig& jc, double theta);

/// Exact sampler of the (tilted) normalized jump law.
JumpSampler make_jump_sampler(const JumpConfig& jc, double theta);

/// Assembles the simulator input. The comeback bound comes from
/// `bound_ladder`, a renewal grid of the spectrally positive model (for the
/// two-sided class: of its dominating spectrally positive model). Tilted
/// sampling requires the tilted process to drift upward.
PassageModel make_passage_model(const ModelConfig& mc, double theta,
                                const LadderData& bound_ladder);

/// Ladder grid for the comeback bound: for sp_bv the model itself, for
/// two_sided the dominator obtained by dropping the downward jumps.
LadderData build_bound_ladder(const ModelConfig& mc, const GridSpec& grid);

std::uint64_t fnv1a64(const std::string& bytes);

}  // namespace levyfluct
