// models.hpp — Driven model systems: rotated-frame Hamiltonians, bath couplings,
// and the lab-frame time-periodic Hamiltonian.
//
// All models conserve the excitation number N_A = sum_mu A_mu^dag A_mu in the
// absence of the drive, so the rotation R(t) = exp(-i omega_d t N_A) removes
// the explicit time dependence:
//
//   H = H_S - omega_d N_A - (eta/2)(A_l^dag + A_l)
//
// The drive always acts through the left coupling operator.

#pragma once

#include <cstddef>
#include <variant>

#include "dqt/operator.hpp"

namespace dqt {

struct DriveSpec {
    double eta{0.0};     // amplitude
    double omega_d{0.0}; // frequency

    void validate() const;
};

// Single qubit coupled to both baths through sigma_-.
struct NesbModel {
    double epsilon{1.0};
};

// Two qubits with flip-flop hopping; left qubit couples to the left bath and
// carries the drive, right qubit couples to the right bath.
struct CoupledSpinsModel {
    double epsilon_l{1.0};
    double epsilon_r{1.0};
    double hopping{0.2};
};

// Kerr oscillator truncated to n_max Fock states.
struct KerrModel {
    double epsilon{1.0};
    double chi{0.4};
    std::size_t n_max{20};
};

using ModelSpec = std::variant<NesbModel, CoupledSpinsModel, KerrModel>;

struct RotatedSystem {
    Operator hamiltonian;
    Operator coupling_left;
    Operator coupling_right;
    std::size_t dim{0};

    const Operator& coupling(bool left) const { return left ? coupling_left : coupling_right; }
};

namespace models {

void validate(const ModelSpec& m);

RotatedSystem build_nesb(const NesbModel& m, const DriveSpec& d);
RotatedSystem build_coupled_spins(const CoupledSpinsModel& m, const DriveSpec& d);
RotatedSystem build_kerr(const KerrModel& m, const DriveSpec& d);

// Dispatches on the variant.
RotatedSystem build_rotated(const ModelSpec& m, const DriveSpec& d);

// Undriven lab-frame system Hamiltonian H_S.
Operator bare_hamiltonian(const ModelSpec& m);

// A_l, the operator the drive couples to.
Operator drive_operator(const ModelSpec& m);

// N_A.
Operator excitation_number(const ModelSpec& m);

// H_DS(t) = H_S - (eta/2)(exp(-i omega_d t) A_l^dag + exp(i omega_d t) A_l).
Operator lab_frame_hamiltonian(const ModelSpec& m, const DriveSpec& d, double t);

// Same as lab_frame_hamiltonian with H_S and A_l built once, for propagators
// that evaluate H_DS(t) many times.
class LabFrameHamiltonian {
public:
    LabFrameHamiltonian(const ModelSpec& m, const DriveSpec& d);

    Operator operator()(double t) const;

    const DriveSpec& drive() const { return drive_; }
    std::size_t dim() const { return static_cast<std::size_t>(bare_.rows()); }

private:
    Operator bare_;
    Operator lowering_;
    DriveSpec drive_;
};

// R(t) = exp(-i omega_d t N_A); N_A is diagonal in every model's basis.
Operator rotation(const ModelSpec& m, const DriveSpec& d, double t);

std::size_t dimension(const ModelSpec& m);

} // namespace models
} // namespace dqt
