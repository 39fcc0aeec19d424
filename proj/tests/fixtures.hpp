// Shared reference models and cached ladder builds (the convolution series is
// the expensive part; build each grid once per test binary).
#pragma once

#include <cmath>

#include "levyfluct/config.hpp"
#include "levyfluct/ladder.hpp"
#include "levyfluct/laws.hpp"
#include "levyfluct/process.hpp"

namespace fixtures {

using namespace levyfluct;

// Cramer-Lundberg reference: Exp(1) jumps at rate 1, drift 2.
inline JumpConfig exp_jumps() {
    JumpConfig jc;
    jc.kind = JumpConfig::Kind::exponential;
    jc.rate = 1.0;
    jc.mu = 1.0;
    return jc;
}

inline SpectrallyPositiveBV exp_model() {
    return SpectrallyPositiveBV{2.0, make_jump_measure(exp_jumps())};
}

// Semi-heavy reference: tail e^{-y}(1+y)^{-2}, rate 1, drift 2, alpha = 1.
inline JumpConfig tp_jumps() {
    JumpConfig jc;
    jc.kind = JumpConfig::Kind::tilted_pareto;
    jc.rate = 1.0;
    jc.alpha = 1.0;
    jc.p = 2.0;
    return jc;
}

inline SpectrallyPositiveBV tp_model() {
    return SpectrallyPositiveBV{2.0, make_jump_measure(tp_jumps())};
}

// frozen reference constants of the tilted-Pareto model
inline constexpr double tp_mean_jump = 0.40365263767680591;  // e * E_2(1)
inline constexpr double tp_q = 1.5963473623231941;           // 2 - mean
inline constexpr double tp_qpxi = 1.0;                       // 2 - \int e^y tail = 1
inline constexpr double tp_m11 = 0.62643007631163767;        // 1 / q
inline constexpr double tp_m10 = 0.37356992368836233;        // 1 - m11

inline const LadderData& exp_ladder_fine() {  // h = 1/1024, L = 32
    static const LadderData lad = build_ladder(exp_model(), GridSpec{1.0 / 1024, 32.0});
    return lad;
}

inline const LadderData& exp_ladder_coarse() {  // h = 1/256, L = 32
    static const LadderData lad = build_ladder(exp_model(), GridSpec{1.0 / 256, 32.0});
    return lad;
}

inline const LadderData& tp_ladder_fine() {  // h = 1/64, L = 512
    static const LadderData lad = build_ladder(tp_model(), GridSpec{1.0 / 64, 512.0});
    return lad;
}

inline const LadderData& tp_ladder_coarse() {  // h = 1/32, L = 128
    static const LadderData lad = build_ladder(tp_model(), GridSpec{1.0 / 32, 128.0});
    return lad;
}

inline const RegimeData& tp_regime() {
    static const RegimeData r = [] {
        RegimeData rd;
        rd.alpha = 1.0;
        rd.process = tp_model();
        rd.ladder = tp_ladder_fine();
        rd.q = rd.ladder.q;
        rd.q_plus_xi_neg_alpha = rd.q + rd.ladder.xi(-1.0);
        return rd;
    }();
    return r;
}

inline const RegimeData& tp_regime_coarse() {
    static const RegimeData r = [] {
        RegimeData rd;
        rd.alpha = 1.0;
        rd.process = tp_model();
        rd.ladder = tp_ladder_coarse();
        rd.q = rd.ladder.q;
        rd.q_plus_xi_neg_alpha = rd.q + rd.ladder.xi(-1.0);
        return rd;
    }();
    return r;
}

}  // namespace fixtures
