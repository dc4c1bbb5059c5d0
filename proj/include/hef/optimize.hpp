#pragma once

// MAP fitting of natural parameters by limited-memory BFGS with a strong
// Wolfe line search, and a seeded cross-validation harness.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hef/expfam.hpp"

namespace hef {

enum class RegScheme { None, Plancherel };

struct FitConfig {
    int L = 0;
    double oversample = 2.0;
    double reg_strength = 0.0;
    RegScheme scheme = RegScheme::None;
    int max_iterations = 500;
    double gradient_tolerance = 1e-5;  // infinity norm
    int history = 10;
};

struct FitResult {
    NaturalParams eta;
    double objective = 0.0;
    double gradient_norm = 0.0;  // infinity norm at the returned iterate
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;  // objective after each accepted step
    std::string diagnostic;
};

// Minimize  -(eta . mean_stats - log Z) + 1/2 sum_i reg_i eta_i^2  from
// eta = 0 (or a caller-supplied start). The objective is convex, so the
// returned iterate is the global optimum whenever the tolerance is met.
FitResult fit_map(const SufficientStats& stats, const FitConfig& cfg);
FitResult fit_map(const SufficientStats& stats, const FitConfig& cfg,
                  std::span<const double> initial);

struct CrossValEntry {
    int L = 0;
    double reg_strength = 0.0;
    int fold = 0;
    double train_ll = 0.0;
    double test_ll = 0.0;
    double seconds = 0.0;
};

struct CrossValSummary {
    int L = 0;
    double reg_strength = 0.0;
    double train_mean = 0.0, train_std = 0.0;
    double test_mean = 0.0, test_std = 0.0;
    double seconds_mean = 0.0;
};

struct CrossValReport {
    std::vector<CrossValEntry> entries;
    std::vector<CrossValSummary> summaries;
};

// k-fold cross-validation over a (bandlimit, regularization) grid. Folds are
// contiguous blocks of a seeded uniform shuffle, so a rerun with the same
// seed reproduces the exact assignment.
CrossValReport cross_validate(std::span<const ManifoldPoint> points, int folds,
                              std::span<const int> bandlimits,
                              std::span<const double> reg_strengths, const FitConfig& base,
                              std::uint64_t seed);

// --- generic minimizer --------------------------------------------------------

struct LbfgsOptions {
    int history = 10;
    int max_iterations = 500;
    double gradient_tolerance = 1e-5;  // infinity norm
    double sufficient_decrease = 1e-4;
    double curvature = 0.9;
    int max_line_search = 40;
};

struct LbfgsResult {
    std::vector<double> x;
    double f = 0.0;
    double gradient_norm = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> trace;
    std::string message;
};

// fg(x, grad_out) returns the objective and writes its gradient.
using Objective = std::function<double(std::span<const double>, std::span<double>)>;

LbfgsResult lbfgs_minimize(const Objective& fg, std::vector<double> x0,
                           const LbfgsOptions& options);

}  // namespace hef
