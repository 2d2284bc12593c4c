#include "orlivar/phi.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace orlivar {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// x / ((1+x) log(1+x)) with the limit 1 at x = 0. Written with x/(1+x) first
// so the value stays finite up to x = DBL_MAX.
double w_ratio(double x) {
    if (x == 0.0) return 1.0;
    return (x / (1.0 + x)) / std::log1p(x);
}

} // namespace

PhiSpec PhiSpec::power(double p) {
    if (!(p > 1.0)) throw std::invalid_argument("PhiSpec: power family requires p > 1");
    return PhiSpec{PhiFamily::Power, p, 0.0};
}

PhiSpec PhiSpec::log_power(double p, double s) {
    if (!(p > 1.0) || !(s >= 1.0))
        throw std::invalid_argument("PhiSpec: log_power family requires p > 1 and s >= 1");
    return PhiSpec{PhiFamily::LogPower, p, s};
}

PhiSpec PhiSpec::power_over_log(double p) {
    if (!(p > 2.0)) throw std::invalid_argument("PhiSpec: power_over_log family requires p > 2");
    return PhiSpec{PhiFamily::PowerOverLog, p, 0.0};
}

std::string PhiSpec::describe() const {
    std::ostringstream os;
    switch (family) {
        case PhiFamily::Power: os << "power(p=" << p << ")"; break;
        case PhiFamily::LogPower: os << "log_power(p=" << p << ", s=" << s << ")"; break;
        case PhiFamily::PowerOverLog: os << "power_over_log(p=" << p << ")"; break;
    }
    return os.str();
}

double phi_eval(const PhiSpec& spec, double t) {
    if (t == 0.0) return 0.0;
    const double at = std::abs(t);
    const double sign = t > 0.0 ? 1.0 : -1.0;
    switch (spec.family) {
        case PhiFamily::Power:
            return sign * spec.p * std::pow(at, spec.p - 1.0);
        case PhiFamily::LogPower:
            return sign * std::log1p(std::pow(at, spec.s)) * std::pow(at, spec.p - 1.0);
        case PhiFamily::PowerOverLog:
            // t^{p-2} * (t / log(1+t)) avoids 0/0 as t -> 0.
            return sign * std::pow(at, spec.p - 2.0) * (at / std::log1p(at));
    }
    return 0.0;
}

double phi_prime(const PhiSpec& spec, double t) {
    const double at = std::abs(t);
    switch (spec.family) {
        case PhiFamily::Power:
            if (at == 0.0) {
                if (spec.p > 2.0) return 0.0;
                if (spec.p == 2.0) return spec.p;
                return kInf;
            }
            return spec.p * (spec.p - 1.0) * std::pow(at, spec.p - 2.0);
        case PhiFamily::LogPower: {
            if (at == 0.0) return (spec.p + spec.s > 3.0) ? 0.0 : ((spec.p + spec.s == 3.0) ? 1.0 : kInf);
            const double x = std::pow(at, spec.s);
            const double lg = std::log1p(x);
            return std::pow(at, spec.p - 2.0) * (spec.s * (x / (1.0 + x)) + (spec.p - 1.0) * lg);
        }
        case PhiFamily::PowerOverLog: {
            if (at == 0.0) {
                if (spec.p > 3.0) return 0.0;
                if (spec.p == 3.0) return 1.0;
                return kInf;
            }
            const double core = std::pow(at, spec.p - 3.0) * (at / std::log1p(at));
            return core * (spec.p - 1.0 - w_ratio(at));
        }
    }
    return 0.0;
}

double a_eval(const PhiSpec& spec, double t) {
    switch (spec.family) {
        case PhiFamily::Power:
            if (t == 0.0) {
                if (spec.p > 2.0) return 0.0;
                if (spec.p == 2.0) return spec.p;
                return kInf;
            }
            return spec.p * std::pow(t, spec.p - 2.0);
        case PhiFamily::LogPower:
            // p, s > 1 gives p + s > 2, so the limit at 0 is always 0.
            if (t == 0.0) return 0.0;
            return std::log1p(std::pow(t, spec.s)) * std::pow(t, spec.p - 2.0);
        case PhiFamily::PowerOverLog:
            if (t == 0.0) {
                if (spec.p > 3.0) return 0.0;
                if (spec.p == 3.0) return 1.0;
                return kInf;
            }
            return std::pow(t, spec.p - 3.0) * (t / std::log1p(t));
    }
    return 0.0;
}

double phi_inverse(const PhiSpec& spec, double y) {
    if (y == 0.0) return 0.0;
    const double ay = std::abs(y);
    const double sign = y > 0.0 ? 1.0 : -1.0;

    double hi = 1.0;
    while (phi_eval(spec, hi) < ay && hi < kInf) hi *= 2.0;
    double lo = 0.0;
    if (hi == 1.0) {
        lo = 0.5;
        while (phi_eval(spec, lo) > ay) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1e-300) {
                lo = 0.0;
                break;
            }
        }
    } else {
        lo = 0.5 * hi;
    }

    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (phi_eval(spec, mid) < ay)
            lo = mid;
        else
            hi = mid;
    }
    return sign * 0.5 * (lo + hi);
}

double log_slope(const PhiSpec& spec, double log_t) {
    switch (spec.family) {
        case PhiFamily::Power:
            return spec.p;
        case PhiFamily::LogPower: {
            const double st = spec.s * log_t;
            const double w = (st > 690.0) ? 1.0 / st : w_ratio(std::exp(st));
            return spec.p + spec.s * w;
        }
        case PhiFamily::PowerOverLog: {
            const double w = (log_t > 690.0) ? 1.0 / log_t : w_ratio(std::exp(log_t));
            return spec.p - w;
        }
    }
    return spec.p;
}

} // namespace orlivar
