#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "trimlevy/levy_model.hpp"
#include "trimlevy/limit_laws.hpp"
#include "trimlevy/rng.hpp"
#include "trimlevy/samplers.hpp"

namespace trimlevy {

struct ExperimentConfig {
    LevyModel model;
    int r = 1;
    int n = 1;
    std::vector<double> t_grid;       // strictly decreasing
    long sample_count = 10000;
    std::uint64_t seed = 1;
    std::vector<double> theta_grid;
    std::vector<double> lambda_grid;
    std::vector<int> n_grid;          // large-trim trimming depths
    double eps = 0.1;
    int threads = 1;
    Centering centering = Centering::Auto;

    void validate() const;
    static ExperimentConfig from_json_text(const std::string& text);
};

// Tabular result: one CSV row per cell, plus a JSON summary string carrying
// pass/fail flags and runtime metadata (runtime never enters the CSV so that
// reruns are byte-identical).
struct ExperimentReport {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::string summary_json;
};

void write_report_csv(const ExperimentReport& report, const std::string& path);
void write_summary_json(const ExperimentReport& report, const std::string& path);

// One-sample Kolmogorov-Smirnov distance; sample need not be sorted.
double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf);
// Two-sample KS distance.
double ks_two_sample(std::vector<double> a, std::vector<double> b);
// Wilson score interval for a binomial proportion (z = 1.96 default).
std::pair<double, double> wilson_interval(long hits, long count, double z = 1.96);

// Trimmed-ratio convergence toward the stable limit law: per t, the KS
// distance of the marginal ratio (denominator rank r+n) against the inverted
// limit CF, and the sup CF distance on theta_grid.
ExperimentReport convergence_experiment(const ExperimentConfig& config);

// Laplace-transform check for driftless subordinators: empirical
// E exp(-lambda * trimmed/jump_r) against (1 + Psi(lambda))^{-r}.
ExperimentReport subordinator_laplace_experiment(const ExperimentConfig& config);

// Exceedance of the deeply trimmed remainder: P(^{(r+n)}X_t > eps * jump_r)
// on the (n, t) grid, pathwise-coupled across n.
ExperimentReport large_trim_experiment(const ExperimentConfig& config);

// Normalized jump vector (jump_{r+k} / ^{(r)}X_t): per-coordinate KS against
// the t=1 stable reference plus simplex diagnostics.
ExperimentReport pd_ratio_experiment(const ExperimentConfig& config);

// Deterministic parallel map: runs fn(0..cells-1) on `threads` workers.
void parallel_for(int cells, int threads, const std::function<void(int)>& fn);

}  // namespace trimlevy
