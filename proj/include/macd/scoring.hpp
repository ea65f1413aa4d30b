#pragma once

#include "macd/types.hpp"

namespace macd {

// Contrast of an expert log-probability against a single amateur penalty.
inline double cd_score(double expert_logp, double amateur_logp, double alpha) {
    if (alpha < 0.0) throw_error(ErrorCode::InvalidParameter, "alpha must be >= 0");
    return expert_logp - alpha * amateur_logp;
}

// Penalty is the ensemble-mean amateur log-probability (floored upstream).
inline double mean_penalized_score(double expert_logp, double mean_amateur_logp, double alpha) {
    if (alpha < 0.0) throw_error(ErrorCode::InvalidParameter, "alpha must be >= 0");
    return expert_logp - alpha * mean_amateur_logp;
}

// Penalty is the consensus ratio, a vote fraction in [0, 1].
inline double consensus_penalized_score(double expert_logp, double consensus_ratio,
                                        double alpha) {
    if (alpha < 0.0) throw_error(ErrorCode::InvalidParameter, "alpha must be >= 0");
    if (consensus_ratio < 0.0 || consensus_ratio > 1.0) {
        throw_error(ErrorCode::CrOutOfRange, "consensus ratio must lie in [0, 1]");
    }
    return expert_logp - alpha * consensus_ratio;
}

}  // namespace macd
