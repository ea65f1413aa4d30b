#include "macd/logprob.hpp"

#include <cmath>
#include <limits>

namespace macd {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

double logsumexp(std::span<const double> logp) {
    double m = kNegInf;
    for (double v : logp) {
        if (v > m) m = v;
    }
    if (std::isinf(m) && m < 0) return kNegInf;  // all-zero distribution
    double sum = 0.0;
    for (double v : logp) {
        sum += std::exp(v - m);
    }
    return m + std::log(sum);
}

bool is_normalized(const LogProbDistribution& dist, double tol) {
    if (dist.logp.empty()) return false;
    for (double v : dist.logp) {
        if (std::isnan(v)) return false;
        if (std::isinf(v) && v > 0) return false;
    }
    return std::fabs(logsumexp(dist.logp)) <= tol;
}

LogProbDistribution renormalize(LogProbDistribution dist) {
    const double lse = logsumexp(dist.logp);
    for (double& v : dist.logp) {
        if (!std::isinf(v)) v -= lse;
    }
    return dist;
}

LogProbDistribution apply_temperature(const LogProbDistribution& dist, double tau) {
    if (!(tau > 0.0)) {
        throw_error(ErrorCode::NonPositiveTemperature,
                    "temperature must be > 0, got " + std::to_string(tau));
    }
    if (tau == 1.0) return dist;  // identity, exact by contract
    LogProbDistribution out;
    out.logp.reserve(dist.size());
    for (double v : dist.logp) {
        out.logp.push_back(std::isinf(v) ? kNegInf : v / tau);
    }
    return renormalize(std::move(out));
}

LogProbDistribution dist_from_weights(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    LogProbDistribution out;
    out.logp.reserve(weights.size());
    for (double w : weights) {
        out.logp.push_back(w > 0.0 ? std::log(w / total) : kNegInf);
    }
    return out;
}

LogProbDistribution uniform_dist(std::size_t n) {
    LogProbDistribution out;
    out.logp.assign(n, -std::log(static_cast<double>(n)));
    return out;
}

}  // namespace macd
