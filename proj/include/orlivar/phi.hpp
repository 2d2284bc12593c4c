#pragma once

#include <string>

namespace orlivar {

enum class PhiFamily {
    Power,        // phi(t) = p |t|^{p-2} t,                   p > 1
    LogPower,     // phi(t) = log(1 + |t|^s) |t|^{p-2} t,      p > 1, s > 1
    PowerOverLog, // phi(t) = |t|^{p-2} t / log(1 + |t|),      p > 2
};

/// Generating function of the Young pair: an odd, strictly increasing
/// bijection of the reals, one of three parametric families.
struct PhiSpec {
    PhiFamily family = PhiFamily::Power;
    double p = 2.0;
    double s = 0.0; // only LogPower uses it

    static PhiSpec power(double p);
    static PhiSpec log_power(double p, double s);
    static PhiSpec power_over_log(double p);

    bool has_closed_form_big_phi() const { return family == PhiFamily::Power; }
    std::string describe() const;
};

/// phi(t) for any finite t (odd in t).
double phi_eval(const PhiSpec& spec, double t);

/// phi'(t) for t > 0; at t = 0 the one-sided limit.
double phi_prime(const PhiSpec& spec, double t);

/// a(t) = phi(t)/t for t > 0; at t = 0 the limit, which may be +infinity for
/// parameter ranges where phi is sublinear at the origin (Power with p < 2,
/// PowerOverLog with p < 3).
double a_eval(const PhiSpec& spec, double t);

/// Solves phi(t) = y to relative tolerance 1e-12 (phi is a bijection).
double phi_inverse(const PhiSpec& spec, double y);

/// Local Young exponent 1 + t phi'(t)/phi(t) evaluated at t = exp(log_t),
/// stable for |log_t| far beyond the representable range of t itself. Its
/// limits as log_t -> -inf/+inf equal the limits of t phi(t)/Phi(t).
double log_slope(const PhiSpec& spec, double log_t);

} // namespace orlivar
