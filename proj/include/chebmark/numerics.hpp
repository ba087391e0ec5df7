#pragma once

#include <functional>
#include <span>
#include <utility>

#include "chebmark/error.hpp"

namespace chebmark {

struct QuadratureSpec {
    int node_count = 64;
    double target_rel_tol = 1e-12;
    int max_refinements = 12;
};

using RealFunction = std::function<double(double)>;

// Batch evaluator: fills out[i] = f(xs[i]).
using BatchFunction = std::function<void(std::span<const double>, std::span<double>)>;

// integral over (alpha,beta) of f(t) / sqrt((t-alpha)(beta-t)) dt.
//
// Gauss-Chebyshev nodes t_i = m + h*cos((2i-1)pi/(2N)); N doubles until two
// successive estimates agree to the requested relative tolerance. Node order
// and summation order are fixed, so a given spec always produces the same
// bits.
double integrate_singular(const RealFunction& f, double alpha, double beta,
                          const QuadratureSpec& spec = {});
double integrate_singular(const BatchFunction& f, double alpha, double beta,
                          const QuadratureSpec& spec = {});

// Adaptive Gauss-Legendre (16-point panels, global doubling) for smooth
// integrands.
double integrate_smooth(const RealFunction& f, double a, double b, double rel_tol = 1e-12,
                        int max_refinements = 16);
double integrate_smooth(const BatchFunction& f, double a, double b, double rel_tol = 1e-12,
                        int max_refinements = 16);

// Cauchy principal value of the integral over (alpha,beta) of
// g(t) / ((t - pole) sqrt((t-alpha)(beta-t))) dt, for pole strictly inside
// (alpha,beta): symmetric excision of (pole-eps, pole+eps) with Richardson
// extrapolation in eps.
double principal_value_singular(const RealFunction& g, double pole, double alpha, double beta,
                                double rel_tol = 1e-11);

// Root of g in [lo, hi] with g(lo)g(hi) <= 0, bracketed to width <= tol.
double find_root_bracketed(const RealFunction& g, double lo, double hi, double tol);

// (argmax, max) of f on [lo, hi]: coarse grid scan, then golden-section
// refinement around the best grid cell.
std::pair<double, double> maximize_on_interval(const RealFunction& f, double lo, double hi,
                                               int grid, double tol);

}  // namespace chebmark
