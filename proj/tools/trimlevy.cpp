// trimlevy: sampling, transform evaluation, CF inversion and the Monte Carlo
// experiment harnesses for trimmed Levy processes.

#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "trimlevy/conditional.hpp"
#include "trimlevy/experiments.hpp"
#include "trimlevy/levy_model.hpp"
#include "trimlevy/limit_laws.hpp"
#include "trimlevy/rng.hpp"
#include "trimlevy/samplers.hpp"

namespace {

using namespace trimlevy;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct ModelFlags {
    std::string name = "stable";
    double alpha = 0.5;
    double a_plus = 1.0;
    double a_minus = 0.0;
    std::string atoms;  // "loc:mass,loc:mass"
    double drift = 0.0;
    bool has_drift = false;
    std::string config;  // model JSON file, overrides the inline flags
};

void add_model_flags(CLI::App* cmd, ModelFlags& mf) {
    cmd->add_option("--model", mf.name, "model family: stable, tempered, atomic, gamma");
    cmd->add_option("--alpha", mf.alpha, "stable index in (0,2)");
    cmd->add_option("--a-plus", mf.a_plus, "positive tail coefficient");
    cmd->add_option("--a-minus", mf.a_minus, "negative tail coefficient");
    cmd->add_option("--atoms", mf.atoms, "atoms as loc:mass[,loc:mass...]");
    cmd->add_option("--drift", mf.drift, "subordinator drift (presence selects the subordinator form)")
        ->expected(1)
        ->each([&mf](const std::string&) { mf.has_drift = true; });
    cmd->add_option("--config", mf.config, "model JSON file (overrides inline flags)");
}

std::vector<Atom> parse_atoms(const std::string& text) {
    std::vector<Atom> atoms;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto pos = item.find(':');
        if (pos == std::string::npos)
            throw std::invalid_argument("--atoms entries must be loc:mass");
        atoms.push_back({std::stod(item.substr(0, pos)), std::stod(item.substr(pos + 1))});
    }
    return atoms;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

LevyModel build_model(const ModelFlags& mf) {
    if (!mf.config.empty()) return LevyModel::from_json_text(read_file(mf.config));
    LevyModel m;
    if (mf.name == "stable")
        m.kind = ModelKind::PureStable;
    else if (mf.name == "tempered")
        m.kind = ModelKind::TemperedStable;
    else if (mf.name == "atomic")
        m.kind = ModelKind::AtomicStable;
    else if (mf.name == "gamma")
        m.kind = ModelKind::GammaSubordinator;
    else
        throw std::invalid_argument("unknown --model '" + mf.name + "'");
    m.alpha = mf.alpha;
    m.a_plus = mf.a_plus;
    m.a_minus = mf.a_minus;
    if (!mf.atoms.empty()) m.atoms = parse_atoms(mf.atoms);
    if (mf.has_drift)
        m.drift = mf.drift;
    else if (m.kind == ModelKind::TemperedStable || m.kind == ModelKind::GammaSubordinator)
        m.drift = 0.0;  // default subordinator convention for the finite-mean families
    m.validate();
    return m;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open " + path);
    return out;
}

// stdout when --out is empty
class OutTarget {
public:
    explicit OutTarget(const std::string& path) {
        if (!path.empty()) file_ = open_out(path);
        stream_ = path.empty() ? &std::cout : &file_;
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_ = nullptr;
};

int resolve_threads(int flag_threads) {
    const char* env = std::getenv("TRIMLEVY_THREADS");
    if (env && *env) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return flag_threads;
}

ExperimentConfig load_experiment_config(const std::string& path, int threads, bool has_seed,
                                        std::uint64_t seed) {
    auto cfg = ExperimentConfig::from_json_text(read_file(path));
    if (threads >= 1) cfg.threads = threads;
    cfg.threads = resolve_threads(cfg.threads);
    if (has_seed) cfg.seed = seed;
    cfg.validate();
    return cfg;
}

void emit_report(const ExperimentReport& rep, const std::string& out) {
    if (out.empty()) {
        for (std::size_t i = 0; i < rep.columns.size(); ++i)
            std::cout << (i ? "," : "") << rep.columns[i];
        std::cout << '\n';
        for (const auto& row : rep.rows) {
            for (std::size_t i = 0; i < row.size(); ++i)
                std::cout << (i ? "," : "") << fmt17(row[i]);
            std::cout << '\n';
        }
        std::cout << rep.summary_json << '\n';
    } else {
        write_report_csv(rep, out + ".csv");
        write_summary_json(rep, out + ".json");
        std::cerr << "wrote " << out << ".csv and " << out << ".json\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"trimmed Levy process sampling and verification toolkit"};
    app.require_subcommand(1);

    ModelFlags mf;
    double t = 1.0, theta = 1.0, lambda = 1.0, eps = 0.1;
    int r = 1, n = 1;
    long count = 10;
    std::uint64_t seed = 1;
    bool seed_given = false;
    int threads = -1;
    std::string out, exp_config;
    std::vector<double> theta_vec, lambda_vec;

    auto* sj = app.add_subcommand("sample-jumps", "joint draws of the largest ordered jumps");
    add_model_flags(sj, mf);
    sj->add_option("--t", t, "time horizon");
    sj->add_option("--count", count, "ordered jumps per draw");
    sj->add_option("--n", n, "number of draws (rows)");
    sj->add_option("--seed", seed, "RNG seed");
    sj->add_option("--out", out, "output CSV path (default stdout)");

    auto* st = app.add_subcommand("sample-trimmed", "joint draws of the trimmed value and top jumps");
    add_model_flags(st, mf);
    st->add_option("--t", t, "time horizon");
    st->add_option("--r", r, "trimming order");
    st->add_option("--n", n, "extra recorded jumps below rank r");
    st->add_option("--count", count, "number of draws");
    st->add_option("--seed", seed, "RNG seed");
    st->add_option("--out", out, "output CSV path (default stdout)");

    auto* lc = app.add_subcommand("limit-cf", "CF of the centered limit ratio on a theta grid");
    lc->add_option("--alpha", mf.alpha, "stable index");
    lc->add_option("--a-minus", mf.a_minus, "negative tail coefficient");
    lc->add_option("--r", r, "trimming order");
    lc->add_option("--n", n, "denominator rank offset");
    lc->add_option("--theta", theta_vec, "evaluation points")->expected(-1);
    lc->add_option("--out", out, "output CSV path (default stdout)");

    auto* ll = app.add_subcommand("limit-laplace", "limit Laplace transform (1+Psi(lambda))^{-r}");
    ll->add_option("--alpha", mf.alpha, "stable index (< 1)");
    ll->add_option("--r", r, "trimming order");
    ll->add_option("--lambda", lambda_vec, "evaluation points")->expected(-1);
    ll->add_option("--out", out, "output CSV path (default stdout)");

    double xmin = -40.0, xmax = 80.0;
    long grid_points = 801;
    double cap = 60.0;
    auto* ic = app.add_subcommand("invert-cf", "CDF of the centered limit ratio by CF inversion");
    ic->add_option("--alpha", mf.alpha, "stable index");
    ic->add_option("--a-minus", mf.a_minus, "negative tail coefficient");
    ic->add_option("--r", r, "trimming order");
    ic->add_option("--n", n, "denominator rank offset");
    ic->add_option("--xmin", xmin, "grid lower end");
    ic->add_option("--xmax", xmax, "grid upper end");
    ic->add_option("--count", grid_points, "grid points");
    ic->add_option("--theta", cap, "integration cap");
    ic->add_option("--out", out, "output CSV path (default stdout)");

    auto* cv = app.add_subcommand("converge", "trimmed-ratio convergence experiment");
    cv->add_option("--config", exp_config, "experiment JSON config")->required();
    cv->add_option("--threads", threads, "worker threads (env TRIMLEVY_THREADS overrides)");
    cv->add_option("--seed", seed, "override the config seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    cv->add_option("--out", out, "artifact prefix: writes <out>.csv and <out>.json");

    auto* lp = app.add_subcommand("laplace-check", "subordinator Laplace-transform experiment");
    lp->add_option("--config", exp_config, "experiment JSON config")->required();
    lp->add_option("--threads", threads, "worker threads (env TRIMLEVY_THREADS overrides)");
    lp->add_option("--seed", seed, "override the config seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    lp->add_option("--out", out, "artifact prefix");

    auto* ltr = app.add_subcommand("large-trim", "deep-trimming exceedance experiment");
    ltr->add_option("--config", exp_config, "experiment JSON config")->required();
    ltr->add_option("--threads", threads, "worker threads (env TRIMLEVY_THREADS overrides)");
    ltr->add_option("--seed", seed, "override the config seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    ltr->add_option("--out", out, "artifact prefix");

    auto* pd = app.add_subcommand("pd", "normalized jump-vector experiment");
    pd->add_option("--config", exp_config, "experiment JSON config")->required();
    pd->add_option("--threads", threads, "worker threads (env TRIMLEVY_THREADS overrides)");
    pd->add_option("--seed", seed, "override the config seed")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    pd->add_option("--out", out, "artifact prefix");

    double rv_u = 2.0, rv_y = 1.0;
    std::vector<double> rv_t;
    auto* rv = app.add_subcommand("rv-diag", "regular-variation scaling diagnostic");
    add_model_flags(rv, mf);
    rv->add_option("--theta", rv_u, "scale factor u applied inside the tail");
    rv->add_option("--lambda", rv_y, "tail level y");
    rv->add_option("--t", rv_t, "time grid (decreasing)")->expected(-1);
    rv->add_option("--out", out, "output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? 2 : 0;
    }

    try {
        if (sj->parsed()) {
            auto model = build_model(mf);
            RngStream rng(seed, 0);
            OutTarget target(out);
            auto& os = target.get();
            for (long c = 0; c < count; ++c) os << (c ? "," : "") << "jump_" << (c + 1);
            os << '\n';
            for (int row = 0; row < n; ++row) {
                auto s = sample_ordered_jumps(model, t, static_cast<int>(count), rng);
                for (long c = 0; c < count; ++c) os << (c ? "," : "") << fmt17(s.jumps[c]);
                os << '\n';
            }
        } else if (st->parsed()) {
            auto model = build_model(mf);
            RngStream rng(seed, 0);
            OutTarget target(out);
            auto& os = target.get();
            os << "trimmed_value,remainder,tie_correction";
            for (int c = 0; c < r + n; ++c) os << ",jump_" << (c + 1);
            os << '\n';
            for (long d = 0; d < count; ++d) {
                auto s = sample_trimmed(model, t, r, n, rng);
                os << fmt17(s.trimmed_value) << ',' << fmt17(s.remainder) << ','
                   << fmt17(s.tie_correction);
                for (int c = 0; c < r + n; ++c) os << ',' << fmt17(s.ordered.jumps[c]);
                os << '\n';
            }
        } else if (lc->parsed()) {
            if (theta_vec.empty()) theta_vec = {theta};
            LimitLawSpec spec(mf.alpha, mf.a_minus, r, n);
            OutTarget target(out);
            auto& os = target.get();
            os << "theta,cf_real,cf_imag\n";
            for (double th : theta_vec) {
                auto z = limit_cf_single(spec, th);
                os << fmt17(th) << ',' << fmt17(z.real()) << ',' << fmt17(z.imag()) << '\n';
            }
        } else if (ll->parsed()) {
            if (lambda_vec.empty()) lambda_vec = {lambda};
            LimitLawSpec spec(mf.alpha, 0.0, r, 1, true);
            OutTarget target(out);
            auto& os = target.get();
            os << "lambda,laplace_transform\n";
            for (double l : lambda_vec)
                os << fmt17(l) << ',' << fmt17(limit_laplace(spec, l)) << '\n';
        } else if (ic->parsed()) {
            LimitLawSpec spec(mf.alpha, mf.a_minus, r, n);
            std::vector<double> xs(grid_points);
            for (long i = 0; i < grid_points; ++i)
                xs[i] = xmin + (xmax - xmin) * i / (grid_points - 1);
            auto fs = cdf_from_cf([&](double th) { return limit_cf_single(spec, th); }, xs, cap);
            OutTarget target(out);
            auto& os = target.get();
            os << "x,cdf\n";
            for (long i = 0; i < grid_points; ++i)
                os << fmt17(xs[i]) << ',' << fmt17(fs[i]) << '\n';
        } else if (cv->parsed()) {
            emit_report(convergence_experiment(
                            load_experiment_config(exp_config, threads, seed_given, seed)),
                        out);
        } else if (lp->parsed()) {
            emit_report(subordinator_laplace_experiment(
                            load_experiment_config(exp_config, threads, seed_given, seed)),
                        out);
        } else if (ltr->parsed()) {
            emit_report(large_trim_experiment(
                            load_experiment_config(exp_config, threads, seed_given, seed)),
                        out);
        } else if (pd->parsed()) {
            emit_report(pd_ratio_experiment(
                            load_experiment_config(exp_config, threads, seed_given, seed)),
                        out);
        } else if (rv->parsed()) {
            auto model = build_model(mf);
            if (rv_t.empty())
                for (int k = 0; k >= -6; --k) rv_t.push_back(std::pow(10.0, k));
            auto diag = regular_variation_diagnostic(model, rv_u, rv_y, rv_t);
            OutTarget target(out);
            auto& os = target.get();
            os << "t,scaled_tail,limit\n";
            for (const auto& row : diag.rows)
                os << fmt17(row.t) << ',' << fmt17(row.value) << ',' << fmt17(diag.limit)
                   << '\n';
            std::cerr << (diag.converged ? "converged\n" : "not converged\n");
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
