// models.cpp — Driven model systems

#include "dqt/models.hpp"

#include <cmath>
#include <string>

#include "dqt/errors.hpp"

namespace dqt {

void DriveSpec::validate() const {
    if (!(eta >= 0.0)) throw ValidationError("drive: eta must be >= 0");
    if (!(omega_d >= 0.0)) throw ValidationError("drive: omega_d must be >= 0");
}

namespace models {

namespace {

struct SpinOperators {
    Operator left;  // sigma_- (x) I
    Operator right; // I (x) sigma_-
};

SpinOperators two_spin_lowering() {
    const Operator s = ops::pauli_lowering();
    const Operator id = ops::identity(2);
    return {ops::tensor_product(s, id), ops::tensor_product(id, s)};
}

Operator number(const Operator& a) { return a.adjoint() * a; }

template <class... Fs> struct overloaded : Fs... { using Fs::operator()...; };
template <class... Fs> overloaded(Fs...) -> overloaded<Fs...>;

} // namespace

void validate(const ModelSpec& m) {
    std::visit(overloaded{
                   [](const NesbModel& x) {
                       if (!(x.epsilon > 0.0)) throw ValidationError("model: epsilon must be > 0");
                   },
                   [](const CoupledSpinsModel& x) {
                       if (!(x.epsilon_l > 0.0)) throw ValidationError("model: epsilon_l must be > 0");
                       if (!(x.epsilon_r > 0.0)) throw ValidationError("model: epsilon_r must be > 0");
                       if (!std::isfinite(x.hopping)) throw ValidationError("model: hopping must be finite");
                   },
                   [](const KerrModel& x) {
                       if (!(x.epsilon > 0.0)) throw ValidationError("model: epsilon must be > 0");
                       if (!(x.chi >= 0.0)) throw ValidationError("model: chi must be >= 0");
                       if (x.n_max < 2) throw ValidationError("model: n_max must be >= 2");
                   },
               },
               m);
}

RotatedSystem build_nesb(const NesbModel& m, const DriveSpec& d) {
    const Operator s = ops::pauli_lowering();
    const double detuning = m.epsilon - d.omega_d;
    RotatedSystem sys;
    sys.hamiltonian = detuning * number(s) - 0.5 * d.eta * (s + s.adjoint());
    sys.coupling_left = s;
    sys.coupling_right = s;
    sys.dim = 2;
    return sys;
}

// Detuning is applied per site: Delta_mu = epsilon_mu - omega_d.
RotatedSystem build_coupled_spins(const CoupledSpinsModel& m, const DriveSpec& d) {
    const auto [sl, sr] = two_spin_lowering();
    RotatedSystem sys;
    sys.hamiltonian = (m.epsilon_l - d.omega_d) * number(sl) + (m.epsilon_r - d.omega_d) * number(sr) +
                      m.hopping * (sl.adjoint() * sr + sr.adjoint() * sl) - 0.5 * d.eta * (sl + sl.adjoint());
    sys.coupling_left = sl;
    sys.coupling_right = sr;
    sys.dim = 4;
    return sys;
}

RotatedSystem build_kerr(const KerrModel& m, const DriveSpec& d) {
    const Operator a = ops::boson_annihilation(m.n_max);
    const Operator ad = a.adjoint();
    RotatedSystem sys;
    sys.hamiltonian = (m.epsilon - d.omega_d) * (ad * a) + m.chi * (ad * ad * a * a) - 0.5 * d.eta * (a + ad);
    sys.coupling_left = a;
    sys.coupling_right = a;
    sys.dim = m.n_max;
    return sys;
}

RotatedSystem build_rotated(const ModelSpec& m, const DriveSpec& d) {
    return std::visit(overloaded{
                          [&](const NesbModel& x) { return build_nesb(x, d); },
                          [&](const CoupledSpinsModel& x) { return build_coupled_spins(x, d); },
                          [&](const KerrModel& x) { return build_kerr(x, d); },
                      },
                      m);
}

Operator bare_hamiltonian(const ModelSpec& m) {
    // The rotated Hamiltonian at omega_d = eta = 0 is H_S itself.
    return build_rotated(m, DriveSpec{}).hamiltonian;
}

Operator drive_operator(const ModelSpec& m) { return build_rotated(m, DriveSpec{}).coupling_left; }

Operator excitation_number(const ModelSpec& m) {
    const RotatedSystem sys = build_rotated(m, DriveSpec{});
    if (std::holds_alternative<CoupledSpinsModel>(m)) {
        return number(sys.coupling_left) + number(sys.coupling_right);
    }
    return number(sys.coupling_left);
}

Operator lab_frame_hamiltonian(const ModelSpec& m, const DriveSpec& d, double t) {
    return LabFrameHamiltonian(m, d)(t);
}

LabFrameHamiltonian::LabFrameHamiltonian(const ModelSpec& m, const DriveSpec& d)
    : bare_(bare_hamiltonian(m)), lowering_(drive_operator(m)), drive_(d) {}

Operator LabFrameHamiltonian::operator()(double t) const {
    const cplx phase = std::polar(1.0, -drive_.omega_d * t);
    return bare_ - 0.5 * drive_.eta * (phase * lowering_.adjoint() + std::conj(phase) * lowering_);
}

Operator rotation(const ModelSpec& m, const DriveSpec& d, double t) {
    const Eigen::VectorXcd n = excitation_number(m).diagonal();
    Eigen::VectorXcd phases(n.size());
    for (Eigen::Index k = 0; k < n.size(); ++k) phases(k) = std::polar(1.0, -d.omega_d * t * n(k).real());
    return phases.asDiagonal();
}

std::size_t dimension(const ModelSpec& m) {
    return std::visit(overloaded{
                          [](const NesbModel&) -> std::size_t { return 2; },
                          [](const CoupledSpinsModel&) -> std::size_t { return 4; },
                          [](const KerrModel& x) { return x.n_max; },
                      },
                      m);
}

} // namespace models
} // namespace dqt
