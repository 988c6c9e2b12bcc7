// reservoir.cpp — Ohmic bosonic reservoirs and their up/down rate kernels

#include "dqt/reservoir.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dqt/errors.hpp"

namespace dqt {

std::string_view to_string(Terminal t) { return t == Terminal::left ? "left" : "right"; }

void Reservoir::validate() const {
    const std::string name{to_string(label)};
    if (!(temperature > 0.0)) throw ValidationError("reservoir " + name + ": temperature must be > 0");
    if (!(alpha > 0.0)) throw ValidationError("reservoir " + name + ": alpha must be > 0");
    if (!(omega_c > 0.0)) throw ValidationError("reservoir " + name + ": omega_c must be > 0");
}

void Reservoirs::validate() const {
    left.validate();
    right.validate();
    if (left.label != Terminal::left || right.label != Terminal::right) {
        throw ValidationError("reservoirs: labels must be (left, right)");
    }
}

namespace bath {

namespace {

// pi alpha exp(-w/omega_c), the part of gamma(w)/w shared by both kernels.
double prefactor(double omega, const Reservoir& r) {
    return std::numbers::pi * r.alpha * std::exp(-omega / r.omega_c);
}

} // namespace

double ohmic_spectral_density(double omega, const Reservoir& r) {
    if (!(omega > 0.0)) return 0.0;
    return prefactor(omega, r) * omega;
}

double bose_occupation(double omega, const Reservoir& r) {
    if (!(omega > 0.0)) throw std::domain_error("bose_occupation: omega must be > 0");
    return 1.0 / std::expm1(omega / r.temperature);
}

// w [1 + n(w)] = w / (1 - exp(-w/kT)) and w n(w) = w / (exp(w/kT) - 1) are
// both bounded near w = 0, so they are evaluated directly with expm1.
double rate_down(double omega, const Reservoir& r) {
    if (!(omega > 0.0)) return 0.0;
    return prefactor(omega, r) * (omega / -std::expm1(-omega / r.temperature));
}

double rate_up(double omega, const Reservoir& r) {
    if (!(omega > 0.0)) return 0.0;
    return prefactor(omega, r) * (omega / std::expm1(omega / r.temperature));
}

} // namespace bath
} // namespace dqt
