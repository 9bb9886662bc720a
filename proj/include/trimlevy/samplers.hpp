#pragma once

#include <vector>

#include "trimlevy/levy_model.hpp"
#include "trimlevy/rng.hpp"

namespace trimlevy {

// One joint draw of the top `count` ordered jumps at time t together with the
// underlying arrival times of the unit Poisson process.
struct OrderedJumpSample {
    double t = 1.0;
    std::vector<double> gammas;  // strictly increasing
    std::vector<double> jumps;   // nonincreasing, jumps[i] = inv_tail(gammas[i]/t)
};

// Joint draw of a trimmed value and the recorded ordered jumps.  The trimmed
// value at rank `rank` decomposes as
//   trimmed_value = remainder + tie_correction + sum of recorded jumps below
//                   rank (indices rank+1 .. jumps.size())
// where `remainder` is a draw of the process with jumps restricted below the
// smallest recorded jump and `tie_correction` is the Poisson atom correction
// at that level (zero off atoms).
struct TrimmedSample {
    OrderedJumpSample ordered;
    double remainder = 0.0;
    double tie_correction = 0.0;
    double trimmed_value = 0.0;
    int rank = 0;
};

// Partial sums of unit exponentials: (Gamma_1, ..., Gamma_count).
std::vector<double> gamma_sequence(int count, RngStream& rng);

OrderedJumpSample sample_ordered_jumps(const LevyModel& model, double t, int count,
                                       RngStream& rng);

// One draw of X_t^{(y)}: shift/drift, Gaussian part, compound-Poisson jumps
// above an accuracy threshold, and a mean (or Gaussian) substitute for the
// residual small jumps.  y may be +inf (untrimmed process).
double sample_small_jump_remainder(const LevyModel& model, double y, double t, RngStream& rng);

// y * Poisson(t * (positive_tail_left(y) - v)); exactly zero when y is a
// continuity point and v >= positive_tail(y).
double sample_tie_correction(const LevyModel& model, double y, double v, double t,
                             RngStream& rng);

// Joint draw of ^{(r)}X_t and the top r+extra ordered jumps.  r=0 with
// extra=0 returns X_t itself with no recorded jumps.
TrimmedSample sample_trimmed(const LevyModel& model, double t, int r, int extra,
                             RngStream& rng);

enum class Centering {
    Auto,   // Rho for two-sided/compensated models, Drift for subordinators
    Rho,    // t * centering_rho(jump at rank r+n)
    Drift,  // t * drift (0 for driftless subordinators)
    None,
};

// ((trimmed_value - centering) / jump_{r+k})_{k=1..n}; requires the sample to
// have rank r and at least r+n recorded jumps.
std::vector<double> ratio_vector(const TrimmedSample& sample, const LevyModel& model, int r,
                                 int n, Centering centering = Centering::Auto);

// Exact-series draw of the r-trimmed pure-stable subordinator at time t
// (alpha < 1): sum of (Gamma_{r+j}/t)^{-1/alpha} over j=1..terms plus the
// mean of the neglected tail.  Internal cross-check oracle.
double stable_series_trimmed(double alpha, double t, int r, RngStream& rng, int terms = 4000);

}  // namespace trimlevy
