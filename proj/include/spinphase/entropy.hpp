#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "spinphase/mapping.hpp"
#include "spinphase/timeseries.hpp"
#include "spinphase/types.hpp"

namespace spinphase {

struct EntropyRecord {
    double time = 0.0;
    double s_husimi = 0.0;
    double s_momentum = 0.0;
    double s_angle = 0.0;
    double mutual = 0.0;
};

namespace detail {

// Shared entropy functional -(1/N) sum p log p over nonnegative weights.
// Entries below -1e-10 are treated as corrupted input; tiny positive values
// underflow the log and contribute nothing.
inline double entropy_sum(const Eigen::MatrixXd& p, int n_dim, const char* who) {
    double s = 0.0;
    for (int a = 0; a < p.rows(); ++a) {
        for (int b = 0; b < p.cols(); ++b) {
            const double x = p(a, b);
            if (x < -1e-10) throw std::invalid_argument(std::string(who) + ": negative weight");
            if (x < 1e-300) continue;
            s -= x * std::log(x);
        }
    }
    return s / double(n_dim);
}

}  // namespace detail

// Wehrl entropy of a smoothed distribution, S = -(1/N) sum H log H with the
// natural logarithm.
inline double wehrl_entropy(const PhaseGrid& h) {
    if (h.kind != GridKind::husimi)
        throw std::invalid_argument("wehrl_entropy: expects a husimi grid");
    return detail::entropy_sum(h.values, h.dim.n_dim, "wehrl_entropy");
}

// Entropies of the momentum (sum over angle) and angle (sum over momentum)
// marginals, same functional and normalization as the joint entropy.
inline std::pair<double, double> marginal_entropies(const PhaseGrid& h) {
    if (h.kind != GridKind::husimi)
        throw std::invalid_argument("marginal_entropies: expects a husimi grid");
    const auto [pm, pn] = marginals(h);
    const double sm = detail::entropy_sum(pm, h.dim.n_dim, "marginal_entropies");
    const double sn = detail::entropy_sum(pn, h.dim.n_dim, "marginal_entropies");
    return {sm, sn};
}

// Mutual correlation I = S_momentum + S_angle - S_joint. Nonnegative up to
// rounding; anything below -1e-10 means the inputs are inconsistent.
inline double mutual_correlation(double s_joint, double s_momentum, double s_angle) {
    const double mi = s_momentum + s_angle - s_joint;
    if (mi < -1e-10) throw std::invalid_argument("mutual_correlation: negative mutual information");
    return mi;
}

inline double mutual_correlation(const EntropyRecord& r) {
    return mutual_correlation(r.s_husimi, r.s_momentum, r.s_angle);
}

struct EntropyTrace {
    TimeSeries series;                  // (time, s_husimi) pairs
    std::vector<EntropyRecord> records;
};

// Full entropy bookkeeping for a sequence of smoothed grids.
inline EntropyTrace entropy_trace(const std::vector<PhaseGrid>& grids,
                                  const std::vector<double>& times) {
    if (grids.size() != times.size())
        throw std::invalid_argument("entropy_trace: grids and times length mismatch");
    EntropyTrace out;
    out.records.reserve(grids.size());
    for (std::size_t i = 0; i < grids.size(); ++i) {
        EntropyRecord r;
        r.time = times[i];
        r.s_husimi = wehrl_entropy(grids[i]);
        const auto [sm, sn] = marginal_entropies(grids[i]);
        r.s_momentum = sm;
        r.s_angle = sn;
        r.mutual = mutual_correlation(r);
        out.records.push_back(r);
        out.series.times.push_back(r.time);
        out.series.values.push_back(r.s_husimi);
    }
    out.series.validate();
    return out;
}

}  // namespace spinphase
