#pragma once

#include <complex>
#include <vector>

#include "trimlevy/levy_model.hpp"
#include "trimlevy/limit_laws.hpp"  // CfEstimate
#include "trimlevy/rng.hpp"

namespace trimlevy {

// Conditioning data for the finite-t conditional CFs: the ordered jumps at
// ranks m..r are pinned to the levels y_m >= ... >= y_r > 0.
struct ConditionSpec {
    double t = 1.0;
    int m = 1;
    int r = 1;
    std::vector<double> levels;  // size r - m + 1, nonincreasing

    void validate(const LevyModel& model) const;
};

struct EstimateWithError {
    std::complex<double> value;
    double std_error = 0.0;
};

// Atom factor K_{m,r}(theta, t, y_m..y_r): conditional CF of the Poisson tie
// correction at level y_r given the pinned ranks.  Exactly 1 when y_r is a
// continuity point.  Monte Carlo over the conditioned gamma sequence with the
// Poisson CF integrated out analytically per draw; single-level conditioning
// samples the truncated gamma law directly.
EstimateWithError k_factor(const LevyModel& model, const ConditionSpec& spec, double theta,
                           int draws, RngStream& rng);

// E(e^{i theta ^{(r)}X_t} | jumps at ranks m..r pinned at the levels):
// CF of the restricted process at y_r times the atom factor.
EstimateWithError conditional_cf_trimmed(const LevyModel& model, const ConditionSpec& spec,
                                         double theta, int draws, RngStream& rng);

// Conditional CF of the centered trimmed ratio with denominator at rank r+n,
// given jumps at ranks r..r+n pinned at `levels` (size n+1, nonincreasing).
// Compensated models use the rescaled-measure kernel; subordinators the
// drift-centered form.
EstimateWithError conditional_cf_ratio(const LevyModel& model, double t, int r, int n,
                                       const std::vector<double>& levels, double theta,
                                       int draws, RngStream& rng);

// P(Gamma_{r+k}/Gamma_{r+n} < x_k^{-alpha}, 1 <= k <= n-1), the limit of the
// conditional jump-ratio probabilities.  Closed form: an order-statistic box
// probability mixed over Beta(r, n).
double conditional_jump_ratio_limit(int r, int n, double alpha,
                                    const std::vector<double>& x_vec);

// Monte Carlo cross-check over raw gamma sequences.
EstimateWithError conditional_jump_ratio_mc(int r, int n, double alpha,
                                            const std::vector<double>& x_vec, int draws,
                                            RngStream& rng);

// P(U_{(k)} <= bounds[k-1] for all k) for the ascending order statistics of
// `count` iid Uniform(0,1); bounds must be nondecreasing.  (Steck-type
// recursion; exposed for tests.)
double uniform_order_stat_box(const std::vector<double>& bounds);

}  // namespace trimlevy
