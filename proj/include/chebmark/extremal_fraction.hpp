#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

#include "chebmark/harmonic_measure.hpp"
#include "chebmark/interval_system.hpp"
#include "chebmark/pole.hpp"

namespace chebmark {

// The 2n poles of the rational class, counted with multiplicity and closed
// under conjugation; rho(x) is the real denominator polynomial over the
// finite poles (empty product when all poles sit at infinity).
class PoleConfiguration {
  public:
    static PoleConfiguration from_poles(std::vector<PolePoint> poles);

    int n() const { return static_cast<int>(poles_.size() / 2); }
    int finite_degree() const;
    const std::vector<PolePoint>& poles() const { return poles_; }
    const std::vector<double>& real_poles() const { return real_poles_; }
    const std::vector<double>& quad_centers() const { return quad_centers_; }
    const std::vector<double>& quad_im2() const { return quad_im2_; }

    double rho(double x) const;
    double rho_log_deriv(double x) const;
    void rho_many(std::span<const double> xs, std::span<double> rho,
                  std::span<double> logderiv) const;

  private:
    std::vector<PolePoint> poles_;
    std::vector<double> real_poles_;
    std::vector<double> quad_centers_;
    std::vector<double> quad_im2_;
};

struct QuantizationSignature {
    std::vector<int> q;           // one positive integer per band, sum n
    std::vector<double> residuals;  // |sum_j omega_k(xi_j) - 2 q_k|
};

// Checks sum_j omega_k(xi_j) = 2 q_k for every band; throws
// QuantizationViolated (reporting the worst band) beyond tol.
QuantizationSignature quantization_check(const IntervalSystem& e, const PoleConfiguration& poles,
                                         double tol = 1e-6);

struct ConvexityReport {
    bool ok = true;
    double min_second_difference = 0.0;
    double worst_point = 0.0;
};

// The extremal Chebyshev-Markov fraction m_n = cos(gamma_n) for a quantized
// pole configuration: phase function, zeros, equioscillation nodes, the
// zero-hull set (per band), the recovered numerator, and the sharp derivative
// bound profile. Immutable after construction.
class ExtremalFraction {
  public:
    const IntervalSystem& system() const;
    const PoleConfiguration& poles() const;
    const QuantizationSignature& quantization() const;

    // Phase gamma_n: 0 at the left hull end, n*pi at the right, constant
    // across gaps, strictly increasing inside bands.
    double gamma(double x) const;

    // gamma_n'(x) = (pi/2) sum_j density_j(x); x must be a band interior point.
    double gamma_prime(double x) const;
    void gamma_prime_many(std::span<const double> xs, std::span<double> out) const;

    // cos(gamma) on E, the recovered numerator over sqrt(rho) elsewhere.
    double m_eval(double x) const;
    // -sin(gamma) gamma' on band interiors, numerator-form derivative at band
    // endpoints and in gaps.
    double m_prime(double x) const;

    // Numerator-form value/derivative, valid on all of conv(E).
    void m_many_numerator(std::span<const double> xs, std::span<double> value,
                          std::span<double> deriv) const;

    // gamma' on the zero hulls, |m'| elsewhere on E.
    double bound_profile(double x) const;

    // max(gamma' at the zeros, sup of |m'| over E minus the zero hulls).
    double markov_constant() const;

    // Second-difference convexity diagnostic for gamma' on band interiors.
    ConvexityReport convexity_report(int grid = 401) const;

    const std::vector<double>& zeros() const;
    const std::vector<int>& zeros_per_band() const;
    const std::vector<std::pair<double, double>>& e_tilde() const;
    bool in_e_tilde(double x) const;
    const std::vector<double>& osc_nodes() const;

    // Descending coefficients b_0..b_n of the recovered numerator.
    const std::vector<double>& numerator() const;

    struct Impl;
    explicit ExtremalFraction(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    const Impl& impl() const { return *impl_; }

  private:
    std::shared_ptr<const Impl> impl_;
};

ExtremalFraction build_extremal(const IntervalSystem& e, const PoleConfiguration& poles);

inline double gamma_prime(const ExtremalFraction& ef, double x) { return ef.gamma_prime(x); }
inline double m_eval(const ExtremalFraction& ef, double x) { return ef.m_eval(x); }
inline double m_prime(const ExtremalFraction& ef, double x) { return ef.m_prime(x); }
inline double bound_profile(const ExtremalFraction& ef, double x) { return ef.bound_profile(x); }
inline double markov_constant(const ExtremalFraction& ef) { return ef.markov_constant(); }

// Rusak's single-interval closed forms on [-1,1] for parameters |a_k| < 1
// (conjugate-closed): the cosine fraction m_n(x) = cos((1/2) sum_k
// acos((x+a_k)/(1+a_k x))) and lambda_n(x) = (1/2) sum_k
// sqrt(1-a_k^2)/(1+a_k x). The pole map is xi_k = -1/a_k.
class RusakClosedForm {
  public:
    explicit RusakClosedForm(std::vector<std::complex<double>> a_params);

    double m(double x) const;
    double lambda(double x) const;
    double m_prime(double x) const;
    int n() const { return static_cast<int>(a_.size() / 2); }
    const std::vector<std::complex<double>>& params() const { return a_; }

  private:
    double phase(double x) const;
    std::vector<std::complex<double>> a_;
};

inline RusakClosedForm closed_form_rusak(std::vector<std::complex<double>> a_params) {
    return RusakClosedForm(std::move(a_params));
}

}  // namespace chebmark
