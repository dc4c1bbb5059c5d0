// hef: fit, evaluate and cross-validate harmonic exponential family
// densities, run conjugate rotation inference, and export grids.
//
// All reports go to stdout as key=value lines or TSV; diagnostics go to
// stderr. Subcommands exit 0 on success and nonzero on any error.

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hef/bayes_rotation.hpp"
#include "hef/data_io.hpp"
#include "hef/expfam.hpp"
#include "hef/optimize.hpp"

namespace {

constexpr std::uint64_t kDefaultSeed = 20177;  // fixed so reruns reproduce

hef::Manifold manifold_from_flag(const std::string& name) {
    if (name == "s1") return hef::Manifold::S1;
    if (name == "s2") return hef::Manifold::S2;
    if (name == "so3") return hef::Manifold::SO3;
    throw CLI::ValidationError("--manifold", "must be one of s1, s2, so3");
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

hef::ParseReport read_points(const std::string& path, hef::Manifold m, bool angles,
                             const hef::ColumnMap& columns) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    if (m == hef::Manifold::S2 && !angles) return hef::parse_earthquakes(in, columns);
    return hef::parse_angles(in, m);
}

std::ostream& open_output(std::ofstream& file, const std::string& path) {
    if (path.empty() || path == "-") return std::cout;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    return file;
}

hef::SphericalSignal load_signal(const std::string& path, int L) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    const hef::GridFunction f = hef::import_grid(in);
    if (f.spec.manifold != hef::Manifold::S2)
        throw std::runtime_error("'" + path + "' is not a sphere grid");
    return hef::sphere_analyze(f, L);
}

struct FitOpts {
    std::string manifold = "s2";
    std::string input;
    std::string model;
    int bandlimit = 0;
    double oversample = 2.0;
    double reg = 0.0;
    std::string reg_scheme = "plancherel";
    int max_iterations = 500;
    double tolerance = 1e-5;
    bool angles = false;
    hef::ColumnMap columns;
};

int run_fit(const FitOpts& o) {
    const hef::Manifold m = manifold_from_flag(o.manifold);
    const auto parsed = read_points(o.input, m, o.angles, o.columns);
    if (parsed.points.empty()) throw std::runtime_error("no usable data rows in input");
    const hef::SufficientStats stats = hef::empirical_moments(parsed.points, o.bandlimit);

    hef::FitConfig cfg;
    cfg.L = o.bandlimit;
    cfg.oversample = o.oversample;
    cfg.reg_strength = o.reg;
    cfg.scheme = (o.reg > 0.0 && o.reg_scheme == "plancherel") ? hef::RegScheme::Plancherel
                                                               : hef::RegScheme::None;
    cfg.max_iterations = o.max_iterations;
    cfg.gradient_tolerance = o.tolerance;

    const auto t0 = std::chrono::steady_clock::now();
    const hef::FitResult fit = hef::fit_map(stats, cfg);
    const auto t1 = std::chrono::steady_clock::now();
    if (!fit.converged)
        std::cerr << "warning: optimizer stopped early: " << fit.diagnostic << "\n";

    hef::ModelFile file;
    file.manifold = m;
    file.L = cfg.L;
    file.oversample = cfg.oversample;
    file.scheme = cfg.scheme;
    file.reg_strength = cfg.reg_strength;
    file.coef = fit.eta.eta;
    hef::write_model_file(o.model, file);

    std::cout << "n=" << parsed.points.size() << "\n";
    std::cout << "discarded=" << parsed.discarded << "\n";
    std::cout << "warnings=" << parsed.warnings << "\n";
    std::cout << "train_ll=" << fmt(hef::log_likelihood(fit.eta, stats, cfg.oversample)) << "\n";
    std::cout << "iterations=" << fit.iterations << "\n";
    std::cout << "converged=" << (fit.converged ? 1 : 0) << "\n";
    std::cout << "gradient_norm=" << fmt(fit.gradient_norm) << "\n";
    std::cout << "wall_seconds=" << fmt(std::chrono::duration<double>(t1 - t0).count()) << "\n";
    return 0;
}

struct EvalOpts {
    std::string model;
    std::string input;
    bool angles = false;
    hef::ColumnMap columns;
};

int run_eval(const EvalOpts& o) {
    const hef::ModelFile file = hef::read_model_file(o.model);
    const auto parsed = read_points(o.input, file.manifold, o.angles, o.columns);
    if (parsed.points.empty()) throw std::runtime_error("no usable data rows in input");
    const hef::NaturalParams eta{file.manifold, file.L, file.coef};
    const double log_z = hef::moments(eta, file.oversample).log_z;

    const long n = static_cast<long>(parsed.points.size());
    std::vector<double> ll(n);
#pragma omp parallel for schedule(dynamic, 64)
    for (long i = 0; i < n; ++i)
        ll[i] = hef::log_unnormalized(eta, parsed.points[i]) - log_z;
    double mean = 0.0;
    for (double v : ll) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : ll) var += (v - mean) * (v - mean);

    std::cout << "n=" << n << "\n";
    std::cout << "ll_mean=" << fmt(mean) << "\n";
    std::cout << "ll_std=" << fmt(std::sqrt(var / n)) << "\n";
    return 0;
}

struct CrossvalOpts {
    std::string manifold = "s2";
    std::string input;
    std::string output;
    std::vector<int> bandlimits;
    std::vector<double> regs{0.0};
    int folds = 5;
    std::uint64_t seed = kDefaultSeed;
    double oversample = 2.0;
    int max_iterations = 500;
    double tolerance = 1e-5;
    bool angles = false;
    hef::ColumnMap columns;
};

int run_crossval(const CrossvalOpts& o) {
    const hef::Manifold m = manifold_from_flag(o.manifold);
    const auto parsed = read_points(o.input, m, o.angles, o.columns);
    if (parsed.points.empty()) throw std::runtime_error("no usable data rows in input");

    hef::FitConfig base;
    base.oversample = o.oversample;
    base.max_iterations = o.max_iterations;
    base.gradient_tolerance = o.tolerance;
    const hef::CrossValReport report =
        hef::cross_validate(parsed.points, o.folds, o.bandlimits, o.regs, base, o.seed);

    std::ofstream file;
    std::ostream& out = open_output(file, o.output);
    out << "L\talpha_reg\tfold\ttrain_ll\ttest_ll\tseconds\n";
    for (const auto& e : report.entries)
        out << e.L << "\t" << fmt(e.reg_strength) << "\t" << e.fold << "\t" << fmt(e.train_ll)
            << "\t" << fmt(e.test_ll) << "\t" << fmt(e.seconds) << "\n";
    for (const auto& s : report.summaries)
        std::cerr << "L=" << s.L << " reg=" << fmt(s.reg_strength) << " train=" << fmt(s.train_mean)
                  << "+-" << fmt(s.train_std) << " test=" << fmt(s.test_mean) << "+-"
                  << fmt(s.test_std) << " seconds=" << fmt(s.seconds_mean) << "\n";
    return 0;
}

struct PosteriorOpts {
    std::string input_x;
    std::string input_y;
    std::string prior;
    std::string output;
    double sigma = 0.0;
    int bandlimit = 0;
    int grid_bandlimit = 16;
    int refine_steps = 10;
};

hef::PosteriorParams compute_posterior(const PosteriorOpts& o) {
    const hef::SphericalSignal x = load_signal(o.input_x, o.bandlimit);
    const hef::SphericalSignal y = load_signal(o.input_y, o.bandlimit);
    hef::NaturalParams prior = hef::NaturalParams::zeros(hef::Manifold::SO3, o.bandlimit);
    if (!o.prior.empty()) {
        const hef::ModelFile file = hef::read_model_file(o.prior);
        if (file.manifold != hef::Manifold::SO3)
            throw std::runtime_error("prior model must live on so3");
        prior = hef::NaturalParams{file.manifold, file.L, file.coef};
    }
    return hef::posterior(prior, x, y, o.sigma);
}

void write_posterior_model(const std::string& path, const hef::PosteriorParams& post) {
    hef::ModelFile file;
    file.manifold = hef::Manifold::SO3;
    file.L = post.L;
    file.oversample = 2.0;
    file.scheme = hef::RegScheme::None;
    file.reg_strength = 0.0;
    file.coef = post.eta;
    hef::write_model_file(path, file);
}

int run_posterior(const PosteriorOpts& o) {
    const hef::PosteriorParams post = compute_posterior(o);
    write_posterior_model(o.output, post);
    std::cout << "bandlimit=" << post.L << "\n";
    std::cout << "coefficients=" << post.eta.size() << "\n";
    return 0;
}

int run_map(const PosteriorOpts& o) {
    const hef::PosteriorParams post = compute_posterior(o);
    if (!o.output.empty()) write_posterior_model(o.output, post);
    const hef::MapEstimate est = hef::map_rotation(post, o.grid_bandlimit, o.refine_steps);
    std::cout << "alpha=" << fmt(est.g.alpha()) << "\n";
    std::cout << "beta=" << fmt(est.g.beta()) << "\n";
    std::cout << "gamma=" << fmt(est.g.gamma()) << "\n";
    std::cout << "log_value=" << fmt(est.log_value) << "\n";
    return 0;
}

struct ExportOpts {
    std::string model;
    std::string output;
    int grid_bandlimit = 0;
};

int run_export(const ExportOpts& o) {
    const hef::ModelFile file = hef::read_model_file(o.model);
    const hef::NaturalParams eta{file.manifold, file.L, file.coef};
    const hef::GridFunction grid = hef::density_grid(eta, o.grid_bandlimit);
    std::ofstream out_file;
    std::ostream& out = open_output(out_file, o.output);
    hef::export_grid(out, grid);
    return 0;
}

void add_column_flags(CLI::App* cmd, hef::ColumnMap& columns, bool& angles) {
    cmd->add_option("--lat-col", columns.latitude, "latitude column name or index");
    cmd->add_option("--lon-col", columns.longitude, "longitude column name or index");
    cmd->add_flag("--angles", angles,
                  "read radian angle columns (THETA / BETA,PHI / ALPHA,BETA,GAMMA) "
                  "instead of degrees latitude/longitude");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"harmonic exponential family densities on s1, s2 and so3"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "OpenMP thread count (0 = library default)")
        ->check(CLI::NonNegativeNumber);

    FitOpts fit;
    CLI::App* fit_cmd = app.add_subcommand("fit", "fit a density to data points");
    fit_cmd->add_option("--manifold", fit.manifold)->check(CLI::IsMember({"s1", "s2", "so3"}));
    fit_cmd->add_option("--input", fit.input, "data table (TSV with header)")->required();
    fit_cmd->add_option("--model", fit.model, "output model file")->required();
    fit_cmd->add_option("--bandlimit", fit.bandlimit)->required()->check(CLI::PositiveNumber);
    fit_cmd->add_option("--oversample", fit.oversample)->check(CLI::Range(1.0, 16.0));
    fit_cmd->add_option("--reg", fit.reg)->check(CLI::NonNegativeNumber);
    fit_cmd->add_option("--reg-scheme", fit.reg_scheme)->check(CLI::IsMember({"none", "plancherel"}));
    fit_cmd->add_option("--max-iterations", fit.max_iterations)->check(CLI::PositiveNumber);
    fit_cmd->add_option("--tolerance", fit.tolerance)->check(CLI::PositiveNumber);
    add_column_flags(fit_cmd, fit.columns, fit.angles);

    EvalOpts eval;
    CLI::App* eval_cmd = app.add_subcommand("eval", "mean log-likelihood of data under a model");
    eval_cmd->add_option("--model", eval.model)->required();
    eval_cmd->add_option("--input", eval.input)->required();
    add_column_flags(eval_cmd, eval.columns, eval.angles);

    CrossvalOpts cv;
    CLI::App* cv_cmd = app.add_subcommand("crossval", "k-fold cross-validation over a grid");
    cv_cmd->add_option("--manifold", cv.manifold)->check(CLI::IsMember({"s1", "s2", "so3"}));
    cv_cmd->add_option("--input", cv.input)->required();
    cv_cmd->add_option("--output", cv.output, "TSV report path (default stdout)");
    cv_cmd->add_option("--bandlimit", cv.bandlimits, "bandlimits to evaluate")
        ->required()
        ->check(CLI::PositiveNumber);
    cv_cmd->add_option("--reg", cv.regs, "regularization strengths")->check(CLI::NonNegativeNumber);
    cv_cmd->add_option("--folds", cv.folds)->check(CLI::Range(2, 1000));
    cv_cmd->add_option("--seed", cv.seed);
    cv_cmd->add_option("--oversample", cv.oversample)->check(CLI::Range(1.0, 16.0));
    cv_cmd->add_option("--max-iterations", cv.max_iterations)->check(CLI::PositiveNumber);
    cv_cmd->add_option("--tolerance", cv.tolerance)->check(CLI::PositiveNumber);
    add_column_flags(cv_cmd, cv.columns, cv.angles);

    PosteriorOpts post;
    CLI::App* post_cmd =
        app.add_subcommand("posterior", "conjugate posterior over rotations from a signal pair");
    PosteriorOpts map_opts;
    CLI::App* map_cmd = app.add_subcommand("map", "most likely rotation for a signal pair");
    for (auto [cmd, o] : {std::pair{post_cmd, &post}, std::pair{map_cmd, &map_opts}}) {
        cmd->add_option("--input-x", o->input_x, "observed signal grid file")->required();
        cmd->add_option("--input-y", o->input_y, "reference signal grid file")->required();
        cmd->add_option("--sigma", o->sigma, "noise standard deviation")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--bandlimit", o->bandlimit, "signal bandlimit")
            ->required()
            ->check(CLI::PositiveNumber);
        cmd->add_option("--prior", o->prior, "optional so3 prior model file");
    }
    post_cmd->add_option("--output", post.output, "posterior model file")->required();
    map_cmd->add_option("--output", map_opts.output, "also write the posterior model file");
    map_cmd->add_option("--grid-bandlimit", map_opts.grid_bandlimit)->check(CLI::PositiveNumber);
    map_cmd->add_option("--refine-steps", map_opts.refine_steps)->check(CLI::NonNegativeNumber);

    ExportOpts exp;
    CLI::App* exp_cmd = app.add_subcommand("export-grid", "normalized density on the canonical grid");
    exp_cmd->add_option("--model", exp.model)->required();
    exp_cmd->add_option("--grid-bandlimit", exp.grid_bandlimit)->required()->check(CLI::PositiveNumber);
    exp_cmd->add_option("--output", exp.output, "grid file path (default stdout)");

    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (fit_cmd->parsed()) return run_fit(fit);
        if (eval_cmd->parsed()) return run_eval(eval);
        if (cv_cmd->parsed()) return run_crossval(cv);
        if (post_cmd->parsed()) return run_posterior(post);
        if (map_cmd->parsed()) return run_map(map_opts);
        if (exp_cmd->parsed()) return run_export(exp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
