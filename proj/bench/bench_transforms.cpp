// Timing comparison between the OpenMP fast transforms and the serial
// reference implementation, plus the measured scaling of sphere analysis.
//
// Usage: hef_bench [max_B]

#include <omp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "hef/expfam.hpp"
#include "hef/transforms.hpp"

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

hef::SpectralCoeffs random_coeffs(hef::Manifold m, int L, unsigned seed) {
    std::mt19937 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    hef::SpectralCoeffs c{m, L, std::vector<double>(hef::basis_count(m, L))};
    for (double& v : c.coef) v = normal(rng);
    return c;
}

template <typename F>
double best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = clock_type::now();
        fn();
        best = std::min(best, seconds_since(t0));
    }
    return best;
}

}  // namespace

int main(int argc, char** argv) {
    const int max_b = argc > 1 ? std::atoi(argv[1]) : 256;
    std::printf("threads=%d\n\n", omp_get_max_threads());

    std::printf("fast vs reference (round trip synthesize+analyze)\n");
    std::printf("%-5s %-4s %-4s %12s %12s %8s\n", "mfld", "B", "L", "fast_s", "ref_s", "ratio");
    struct Case {
        hef::Manifold m;
        int B;
    };
    for (const Case c : {Case{hef::Manifold::S1, 64}, Case{hef::Manifold::S2, 16},
                         Case{hef::Manifold::S2, 32}, Case{hef::Manifold::SO3, 8},
                         Case{hef::Manifold::SO3, 16}}) {
        const int L = c.B - 1;
        const hef::GridSpec spec = hef::make_grid(c.m, c.B);
        const hef::SpectralCoeffs coeffs = random_coeffs(c.m, L, 99);
        (void)hef::synthesize(coeffs, spec);  // build tables before timing
        const double fast = best_of(3, [&] {
            const hef::GridFunction g = hef::synthesize(coeffs, spec);
            (void)hef::analyze(g, L);
        });
        const double ref = best_of(1, [&] {
            const hef::GridFunction g = hef::synthesize_reference(coeffs, spec);
            (void)hef::analyze_reference(g, L);
        });
        std::printf("%-5s %-4d %-4d %12.6f %12.6f %8.1f\n", hef::manifold_name(c.m), c.B, L, fast,
                    ref, ref / fast);
    }

    std::printf("\nsphere moment scaling (L = (B-1)/2, tables amortized)\n");
    std::printf("%-6s %-6s %12s\n", "B", "L", "seconds");
    std::vector<double> logb, logt;
    for (int B = 32; B <= max_b; B *= 2) {
        const int L = (B - 1) / 2;
        hef::NaturalParams eta = hef::NaturalParams::zeros(hef::Manifold::S2, L);
        std::mt19937 rng(7);
        std::normal_distribution<double> normal(0.0, 0.05);
        for (double& v : eta.eta) v = normal(rng);
        (void)hef::moments(eta, 2.0);  // warm the table cache
        const double t = best_of(3, [&] { (void)hef::moments(eta, 2.0); });
        std::printf("%-6d %-6d %12.6f\n", B, L, t);
        logb.push_back(std::log(static_cast<double>(B)));
        logt.push_back(std::log(t));
    }
    if (logb.size() >= 2) {
        double sb = 0, st = 0, sbb = 0, sbt = 0;
        const double n = static_cast<double>(logb.size());
        for (size_t i = 0; i < logb.size(); ++i) {
            sb += logb[i];
            st += logt[i];
            sbb += logb[i] * logb[i];
            sbt += logb[i] * logt[i];
        }
        const double slope = (n * sbt - sb * st) / (n * sbb - sb * sb);
        std::printf("fitted exponent: %.2f\n", slope);
    }
    return 0;
}
