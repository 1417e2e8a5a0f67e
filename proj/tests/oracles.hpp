#pragma once

// Reference computations kept deliberately naive: std::erfc, plain bisection,
// fixed-grid trapezoids. They share no code with the library.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

inline double q_func(double x)
{
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

inline double ber_qpsk_lin(double snr)
{
    return 0.5 * std::erfc(std::sqrt(snr / 2.0));
}

inline double ber_16qam_lin(double snr)
{
    const double d = std::sqrt(snr / 5.0);
    return (3.0 * q_func(d) + 2.0 * q_func(3.0 * d) - q_func(5.0 * d)) / 4.0;
}

// kind: 0 qpsk, 1 hybrid, 2 16qam
inline double ber(int kind, double snr_db)
{
    const double s = std::pow(10.0, snr_db / 10.0);
    switch (kind) {
    case 0:
        return ber_qpsk_lin(s);
    case 2:
        return ber_16qam_lin(s);
    default:
        return std::sqrt(ber_qpsk_lin(s) * ber_16qam_lin(s));
    }
}

/// SNR (dB) for a BER by bisection on a decreasing function.
inline double snr_for_ber(int kind, double target)
{
    double lo = -40.0;
    double hi = 70.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (ber(kind, mid) > target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// erfc^-1 by bisection on std::erfc over [0, 30].
inline double erfc_inv(double y)
{
    double lo = 0.0;
    double hi = 30.0;
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::erfc(mid) > y) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

inline double q_db(double b)
{
    return 20.0 * std::log10(std::numbers::sqrt2 * erfc_inv(2.0 * b));
}

inline double rc_psd(double f, double sr, double r)
{
    const double a = std::fabs(f);
    const double f1 = (1.0 - r) * sr / 2.0;
    const double f2 = (1.0 + r) * sr / 2.0;
    if (a <= f1) {
        return 1.0 / sr;
    }
    if (a >= f2) {
        return 0.0;
    }
    return 0.5 / sr * (1.0 + std::cos(std::numbers::pi * (a - f1) / (r * sr)));
}

/// Fixed-step trapezoid on [a, b] with n intervals.
inline double trapz(const std::function<double(double)>& fn, double a, double b, int n)
{
    const double h = (b - a) / n;
    double s = 0.5 * (fn(a) + fn(b));
    for (int i = 1; i < n; ++i) {
        s += fn(a + i * h);
    }
    return s * h;
}

/// integral(Sv*Si(f-d)) / integral(Sv^2) over the whole victim support.
inline double overlap(double sr_v, double sr_i, double r, double spacing, int n = 40000)
{
    const double hv = (1.0 + r) * sr_v / 2.0;
    const double num = trapz(
        [&](double f) { return rc_psd(f, sr_v, r) * rc_psd(f - spacing, sr_i, r); }, -hv, hv, n);
    const double den =
        trapz([&](double f) { const double p = rc_psd(f, sr_v, r); return p * p; }, -hv, hv, n);
    return num / den;
}

inline double super_gauss(double f, double b, int n)
{
    return std::exp(-std::log(2.0) * std::pow(2.0 * f / b, 2 * n));
}

/// Fraction of a carrier's power passed by one super-Gaussian filter at `offset`.
inline double transmission(double sr, double r, double offset, double b, int n, int count = 1)
{
    const double h = (1.0 + r) * sr / 2.0;
    const double pass = trapz(
        [&](double f) { return rc_psd(f, sr, r) * std::pow(super_gauss(f + offset, b, n), count); },
        -h, h, 40000);
    const double total = trapz([&](double f) { return rc_psd(f, sr, r); }, -h, h, 40000);
    return pass / total;
}

/// -3.01 dB full width of `count` identical centered super-Gaussians.
inline double cascade_width(double b, int n, int count)
{
    double lo = 0.0;
    double hi = 10.0 * b;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (std::pow(super_gauss(mid, b, n), count) >= 0.5) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo + hi;
}

/// P(|median of 5 iid N(0, s)| <= t) from the order-statistic density.
inline double median5_within(double t, double s)
{
    auto cdf = [&](double x) { return 0.5 * std::erfc(-x / (s * std::numbers::sqrt2)); };
    // median of 5 is the 3rd order statistic: F_med = sum_{k=3..5} C(5,k) F^k (1-F)^(5-k)
    auto fmed = [&](double x) {
        const double F = cdf(x);
        return 10.0 * std::pow(F, 3) * std::pow(1 - F, 2) + 5.0 * std::pow(F, 4) * (1 - F) +
               std::pow(F, 5);
    };
    return fmed(t) - fmed(-t);
}

}  // namespace oracle
