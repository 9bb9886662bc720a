#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

namespace trimlevy {

enum class ModelKind { PureStable, TemperedStable, AtomicStable, GammaSubordinator };

struct Atom {
    double location;  // > 0
    double mass;      // > 0
};

// Parametric Levy measure with evaluable tails, generalized inverse tails,
// atoms and truncated moments.
//
// Positive tails of the catalogued families (before atoms/truncation):
//   PureStable        x^{-alpha}
//   TemperedStable    x^{-alpha} e^{-x}
//   AtomicStable      x^{-alpha} plus finitely many atoms
//   GammaSubordinator E1(x)
// The negative tail is (a_minus/a_plus) times the continuous positive shape.
//
// `drift` present means the model is a subordinator parameterized by its
// drift (no Brownian part, no compensation of small jumps); absent means the
// triplet is read in the compensated form with shift `gamma_shift`.
// `truncation` restricts the measure to {x < truncation}.
struct LevyModel {
    ModelKind kind = ModelKind::PureStable;
    double alpha = 0.5;
    double a_plus = 1.0;
    double a_minus = 0.0;
    double gamma_shift = 0.0;
    double sigma2 = 0.0;
    std::vector<Atom> atoms;  // sorted by location, ascending
    std::optional<double> drift;
    std::optional<double> truncation;

    void validate() const;
    bool is_subordinator() const { return drift.has_value(); }
    double neg_ratio() const { return a_plus > 0.0 ? a_minus / a_plus : 0.0; }

    // Tail of the positive jumps, right-continuous; +inf is never returned
    // for x > 0 in the catalogue.
    double positive_tail(double x) const;
    // Left limit of the positive tail (differs from positive_tail at atoms).
    double positive_tail_left(double x) const;
    double negative_tail(double x) const;

    // Generalized inverse inf{v>0 : positive_tail(v) <= y}; constant across
    // atom plateaus, returns the atom location exactly there.
    double inverse_positive_tail(double y) const;
    double inverse_negative_tail(double y) const;

    // Continuous-part densities; u > 0 is the magnitude for the negative side.
    double positive_density(double x) const;
    double negative_density(double u) const;

    // First and second moments of the continuous part on (0,eps], closed
    // form per family (atoms below eps added explicitly).
    double truncated_moment1(double eps) const;
    double truncated_moment2(double eps) const;
    // Same for the negative side magnitudes.
    double truncated_moment1_neg(double eps) const;
    double truncated_moment2_neg(double eps) const;

    // First moment over the band (a, b], a > 0: finite for every family even
    // when the moment at the origin diverges.  Atoms in the band included.
    double band_moment1(double a, double b) const;
    double band_moment1_neg(double a, double b) const;

    // rho_X(w): two-branch centering function.
    double centering_rho(double w) const;

    // integral over (lower, upper] of e^{i theta x} (plain) or of
    // e^{i theta x} - 1 - i theta x 1{|x|<=1} (compensated) against the
    // measure.  `lower` may be negative; for the compensated form it may
    // approach 0 from either side.
    std::complex<double> truncated_exp_moment(double theta, double lower, double upper,
                                              bool compensated = false) const;

    // Exponent kernel: integral over (-inf, y) of
    //   e^{i theta x} - 1 - i theta x 1{|x| <= cutoff}
    // against the measure (cutoff = 1 recovers the canonical form).
    std::complex<double> cf_exponent_kernel(double theta, double y, double cutoff = 1.0) const;
    // Subordinator form: integral over (0, y) of e^{i theta x} - 1.
    std::complex<double> cf_exponent_subordinator(double theta, double y) const;

    // Triplet of the process with jumps restricted to {x < y}.
    LevyModel restricted(double y) const;
    // gamma^{(y)} of the restricted triplet.
    double restricted_gamma(double y) const;

    static LevyModel from_json_text(const std::string& text);
    std::string to_json_text() const;

    // gamma of the compensated-form triplet, whichever convention is stored.
    double canonical_gamma() const;

    // Internal helpers (exposed for tests).
    double positive_tail_left_full(double x) const;
    double positive_tail_cont(double x) const;
    std::complex<double> compensated_small_pos(double theta, double cap) const;
    std::complex<double> compensated_small_neg(double theta, double cap) const;
    std::complex<double> plain_pos(double theta, double a, double b) const;
    std::complex<double> plain_neg(double theta, double a, double b) const;
};

// Stable limit process: exact power tails, no atoms, gamma = 0, sigma^2 = 0.
struct StableLimitModel {
    double alpha = 0.5;
    double a_plus = 1.0;
    double a_minus = 0.0;

    LevyModel to_levy() const;
};

struct RvDiagnosticRow {
    double t;
    double value;
};
struct RvDiagnostic {
    std::vector<RvDiagnosticRow> rows;
    double limit;  // u^{-alpha} y
    bool converged;
};

// Regular-variation check: t |-> t * tail(u * inverse_tail(y/t)).
RvDiagnostic regular_variation_diagnostic(const LevyModel& model, double u, double y,
                                          const std::vector<double>& t_grid,
                                          double rel_tol = 0.01);

// Convenience factories.
LevyModel make_pure_stable(double alpha, double a_minus = 0.0, bool subordinator = false);
LevyModel make_tempered_stable(double alpha, double a_minus = 0.0, bool subordinator = true);
LevyModel make_atomic_stable(double alpha, const std::vector<Atom>& atoms,
                             bool subordinator = false);
LevyModel make_gamma_subordinator();

}  // namespace trimlevy
