#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "chebmark/extremal_fraction.hpp"
#include "chebmark/rational_class.hpp"

namespace chebmark {

struct VerificationReport {
    std::string claim;
    std::string fixture;
    int n_samples = 1;
    int grid = 0;
    double max_violation = 0.0;  // max over the grid of |r'(x)| - bound(x)
    std::optional<double> violation_point;
    double r_prime_norm = 0.0;
    double m_prime_norm = 0.0;
    bool pass = false;
    double tol = 0.0;
    bool exploratory = false;
    std::vector<std::string> warnings;
    std::string error;  // set when the fixture run aborted (e.g. SamplingExhausted)
};

// Pointwise Rusak-type bound |r'(x)| <= bound_profile(x) on per-band grids.
// r must pass the star certificate and carry unit norm (renormalized when
// within 1e-8).
VerificationReport check_pointwise(const RationalFraction& r, const ExtremalFraction& ef,
                                   int grid = 2001, double tol = 1e-7);

// Markov norm bound ||r'|| <= ||m_n'||. Complex poles downgrade the run to
// exploratory: the norm bound is only claimed over real pole configurations.
VerificationReport check_markov(const RationalFraction& r, const ExtremalFraction& ef,
                                double tol = 1e-7);

// Bernstein-type bound |r'(x)| <= sqrt(1 - r(x)^2) gamma'(x) on the zero
// hulls.
VerificationReport check_bernstein(const RationalFraction& r, const ExtremalFraction& ef,
                                   int grid = 2001, double tol = 1e-7);

struct RemarkM4Entry {
    double a = 0.0;
    double t3_prime_abs = 0.0;  // |12a^2 - 3|
    double m4_prime_abs = 0.0;  // 16a/(1-a^2)
    double margin = 0.0;        // t3_prime_abs - m4_prime_abs
};

struct CounterexampleReport {
    std::string claim;
    std::vector<RemarkM4Entry> entries;
    double crossover_lo = 0.0;
    double crossover_hi = 0.0;
    double r_prime_at_1 = 0.0;
    double m2_prime_at_1 = 0.0;
    double r_norm = 0.0;
    double r_prime_norm = 0.0;
    double m2_prime_norm = 0.0;
    bool pass = false;
};

// |T_3'(a)| vs |m_4'(a)| on E = [-1,-a] u [a,1]: the star condition is
// essential; the polynomial T_3 beats the extremal fraction's bound for
// small a. Brackets the crossover of 3 - 12a^2 = 16a/(1-a^2).
CounterexampleReport reproduce_remark_m4(const std::vector<double>& a_values);

// Rusak's example r = (72x^2-5x)/(100x^2+1) with poles at +-i/10: with
// |xi| <= 1 the endpoint derivative beats m_2' there, so the pole hypothesis
// is essential. Also records the global derivative norms.
CounterexampleReport reproduce_rusak_remark();

struct FixtureSpec {
    std::string name;
    IntervalSystem system;
    PoleConfiguration poles;
};

struct BatchConfig {
    std::vector<FixtureSpec> fixtures;
    int samples = 200;
    std::uint64_t seed = 1;
    double epsilon = 0.05;
    int grid = 2001;
    double tol_pointwise = 1e-7;
    double tol_markov = 1e-7;
    double tol_bernstein = 1e-7;
    bool exploratory_non_star = false;
};

// The three stock fixtures: classical single band, the symmetric two-band
// polynomial case, and a symmetric two-band system with finite real poles.
std::vector<FixtureSpec> default_fixtures();

// Deterministic aggregate run: per fixture, the extremal equality case plus
// sampled pointwise/Markov/Bernstein suites (violations aggregated over
// samples). Sampling failures are surfaced per fixture, not thrown.
std::vector<VerificationReport> batch_verify(const BatchConfig& config);

std::string reports_to_json(const std::vector<VerificationReport>& reports);
std::string counterexample_to_json(const CounterexampleReport& report);

}  // namespace chebmark
