// reservoir.hpp — Ohmic bosonic reservoirs and their up/down rate kernels

#pragma once

#include <string_view>

namespace dqt {

enum class Terminal { left, right };

inline constexpr Terminal terminals[] = {Terminal::left, Terminal::right};

std::string_view to_string(Terminal t);

struct Reservoir {
    Terminal label{Terminal::left};
    double temperature{1.0}; // k_B T
    double alpha{0.001};     // dissipation strength
    double omega_c{10.0};    // cutoff frequency

    // Throws ValidationError unless temperature, alpha and omega_c are positive.
    void validate() const;
};

struct Reservoirs {
    Reservoir left{Terminal::left, 1.2, 0.001, 10.0};
    Reservoir right{Terminal::right, 0.4, 0.001, 10.0};

    const Reservoir& operator[](Terminal t) const { return t == Terminal::left ? left : right; }
    void validate() const;
};

namespace bath {

// gamma(w) = pi alpha w exp(-w/omega_c) for w > 0, and 0 for w <= 0 (theta(0) = 0).
double ohmic_spectral_density(double omega, const Reservoir& r);

// 1 / (exp(w/kT) - 1). Throws std::domain_error for w <= 0.
double bose_occupation(double omega, const Reservoir& r);

// gamma(w) [1 + n(w)], zero for w <= 0. Tends to pi alpha kT as w -> 0+.
double rate_down(double omega, const Reservoir& r);

// gamma(w) n(w), zero for w <= 0. Tends to pi alpha kT as w -> 0+.
double rate_up(double omega, const Reservoir& r);

} // namespace bath
} // namespace dqt
