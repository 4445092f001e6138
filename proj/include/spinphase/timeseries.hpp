#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinphase/types.hpp"

namespace spinphase {

struct TimeSeries {
    std::vector<double> times;
    std::vector<double> values;

    void validate() const {
        if (times.size() != values.size())
            throw std::invalid_argument("TimeSeries: times and values length mismatch");
        for (std::size_t i = 1; i < times.size(); ++i)
            if (!(times[i] > times[i - 1]))
                throw std::invalid_argument("TimeSeries: times must be strictly increasing");
    }

    std::size_t size() const { return times.size(); }
};

// Phase-space overlap sum_{m,n} W_i(m,n) W_f(m,n). For two pure states this
// is |<psi_i|psi_f>|^2 / N.
inline double correlation(const PhaseGrid& wi, const PhaseGrid& wf) {
    require_same_dim(wi.dim, wf.dim, "correlation");
    return (wi.values.cwiseProduct(wf.values)).sum();
}

enum class SeriesKind { correlation, entropy };

namespace detail {

// Refine a local extremum at interior index i with a three-point parabola.
// Returns the offset in samples, clamped to [-0.5, 0.5] by construction of
// a genuine extremum.
inline double parabolic_offset(const std::vector<double>& v, std::size_t i) {
    const double denom = v[i - 1] - 2.0 * v[i] + v[i + 1];
    if (denom == 0.0) return 0.0;
    return 0.5 * (v[i - 1] - v[i + 1]) / denom;
}

}  // namespace detail

// Recurrence time of a sampled series.
//
// correlation: the series starts at its maximum; find the first sample that
// has dropped below 90% of the initial value, then the first interior local
// maximum at or above that 90% threshold, and refine it with a parabola.
//
// entropy: the series starts high; qualifying local minima are interior
// samples below the midline (global min + half the range), separated from
// the previous accepted one by at least two samples and strictly after the
// first sample. Consecutive minima alternate between the two wells, so the
// recurrence time is the second qualifying minimum relative to the start.
inline double extract_period(const TimeSeries& ts, SeriesKind kind) {
    ts.validate();
    const std::size_t n = ts.size();
    if (n < 5) throw std::invalid_argument("extract_period: need at least 5 samples");
    const double dt = ts.times[1] - ts.times[0];
    const auto& v = ts.values;

    double lo = v[0], hi = v[0];
    for (double x : v) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)))
        throw std::runtime_error("extract_period: series is constant, no recurrence to measure");

    if (kind == SeriesKind::correlation) {
        const double v0 = v[0];
        const double thresh = 0.9 * v0;
        std::size_t fall = n;
        for (std::size_t i = 0; i < n; ++i)
            if (v[i] < thresh) {
                fall = i;
                break;
            }
        if (fall == n)
            throw std::runtime_error("extract_period: correlation never leaves the initial plateau");
        for (std::size_t i = fall + 1; i + 1 < n; ++i) {
            if (v[i] >= v[i - 1] && v[i] >= v[i + 1] && v[i] >= thresh) {
                const double off = detail::parabolic_offset(v, i);
                return ts.times[i] + off * dt - ts.times[0];
            }
        }
        throw std::runtime_error("extract_period: no recurrence peak found in the sampled window");
    }

    // entropy branch; minima in the first two samples are echoes of the start
    // value, not recurrences, so the search begins at the third sample
    const double midline = lo + 0.5 * (hi - lo);
    std::size_t last_accepted = 0;
    int found = 0;
    for (std::size_t i = 2; i + 1 < n; ++i) {
        if (!(v[i] <= v[i - 1] && v[i] <= v[i + 1])) continue;
        if (v[i] > midline) continue;
        if (found > 0 && i < last_accepted + 2) continue;
        ++found;
        last_accepted = i;
        if (found == 2) {
            const double off = detail::parabolic_offset(v, i);
            return ts.times[i] + off * dt - ts.times[0];
        }
    }
    throw std::runtime_error("extract_period: fewer than two entropy minima in the sampled window");
}

// Energy splitting read off a recurrence time: Omega = 2 pi / tau.
inline double gap_from_period(double period) {
    if (!(period > 0.0) || !std::isfinite(period))
        throw std::invalid_argument("gap_from_period: period must be positive");
    return 2.0 * std::numbers::pi / period;
}

}  // namespace spinphase
