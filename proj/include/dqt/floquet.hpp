// floquet.hpp — Floquet master equation (FME) computed from the lab-frame,
// time-periodic Hamiltonian. Nothing here uses the rotating frame, so
// agreement with the dDME is an independent check.
//
// Pipeline: one-period propagator -> quasienergies and Floquet modes ->
// sideband Fourier coefficients sigma^-_{ab,m} of each bath coupling ->
// sideband rate table with gaps Delta = eps_b - eps_a - m Omega -> shared
// population solver and current formula.

#pragma once

#include <cstddef>
#include <vector>

#include "dqt/dqme.hpp"
#include "dqt/errors.hpp"
#include "dqt/models.hpp"
#include "dqt/operator.hpp"
#include "dqt/reservoir.hpp"

namespace dqt {

struct FloquetControls {
    std::size_t n_steps{4096}; // midpoint steps per period; multiple of n_t
    std::size_t n_t{512};      // mode samples per period
    int m_max{8};              // sidebands kept: -m_max .. m_max
    double parseval_tol{1e-8};
    double rel_tol{1e-6}; // current change accepted when refining
    int max_refinements{5};
};

// Propagators U(t_k) at t_k = k T / n_t for k = 0 .. n_t (U(t_0) = I).
struct PeriodSamples {
    double period{0.0};
    double omega{0.0};
    std::vector<Operator> propagators;
};

struct FloquetSystem {
    double period{0.0};
    double omega{0.0};
    Eigen::VectorXd quasienergies; // ascending, folded into (-omega/2, omega/2]
    // mode_samples[k].col(a) = |psi_a(t_k)>, k = 0 .. n_t (the last equals t = T).
    std::vector<Eigen::MatrixXcd> mode_samples;

    std::size_t dim() const { return static_cast<std::size_t>(quasienergies.size()); }
    std::size_t n_t() const { return mode_samples.empty() ? 0 : mode_samples.size() - 1; }
};

// sigma^-_{ab,m} for m in [-m_max, m_max]; by_sideband[m + m_max](a, b).
struct SidebandCoefficients {
    int m_max{0};
    std::vector<Eigen::MatrixXcd> by_sideband;

    const Eigen::MatrixXcd& at(int m) const { return by_sideband[static_cast<std::size_t>(m + m_max)]; }
};

// Raised by fourier_components when the sideband range misses more spectral
// weight than the Parseval tolerance allows.
class SidebandTruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace floquet {

// Time-ordered product of exp(-i H(t_mid) dt) over one period. Throws
// ValidationError for omega_d <= 0 or n_steps < 256, NumericalError if the
// product drifts from unitarity by more than 1e-10.
PeriodSamples sample_one_period(const ModelSpec& m, const DriveSpec& d, std::size_t n_steps, std::size_t n_t);

Operator propagate_one_period(const ModelSpec& m, const DriveSpec& d, std::size_t n_steps);

// Quasienergies from the eigenphases of U(T) and modes
// |psi_a(t_k)> = U(t_k)|psi_a(0)> exp(i eps_a t_k).
FloquetSystem floquet_decompose(const PeriodSamples& samples);

// Re-labels mode a with eps_a + k Omega and |psi_a(t)> exp(i k Omega t): the
// same physical Floquet state in another Brillouin zone.
FloquetSystem shift_quasienergy(const FloquetSystem& fs, std::size_t a, int k);

// Uniform-grid quadrature of (1/T) int dt exp(-i m Omega t) <psi_a(t)|A|psi_b(t)>.
// Requires n_t >= 4 m_max. Throws SidebandTruncationError when
// mean_t |<psi_a|A|psi_b>|^2 - sum_m |sigma_m|^2 > parseval_tol * max(1, mean).
SidebandCoefficients fourier_components(const FloquetSystem& fs, const Operator& coupling, int m_max,
                                        double parseval_tol = 1e-8);

// Largest Parseval tail over all mode pairs (absolute).
double parseval_defect(const FloquetSystem& fs, const Operator& coupling, const SidebandCoefficients& c);

// One entry per reservoir, ordered mode pair (to = a, from = b) and sideband m:
// frequency = eps_b - eps_a - m Omega, weight = |sigma^-_{ab,m}|^2,
// rates G^-(w) = gamma(w)[1 + n(w)] and G^+(w) = gamma(w) n(w) times weight
// (both zero for w <= 0).
RateTable build_sideband_table(const FloquetSystem& fs, const SidebandCoefficients& left,
                               const SidebandCoefficients& right, const Reservoirs& reservoirs);

// Steady Floquet populations and energy currents summed over all sidebands.
CurrentReport fme_rates_and_currents(const RateTable& sideband_table);

// Everything above for one parameter point with fixed controls; m_max (and
// n_t, when needed) grow until the Parseval check passes. `controls` is
// updated to what was actually used.
CurrentReport evaluate_once(const ModelSpec& m, const DriveSpec& d, const Reservoirs& reservoirs,
                            FloquetControls& controls);

struct FmeResult {
    CurrentReport report;
    FloquetControls controls; // the refined controls that met the tolerance
    int refinements{0};
};

// Refines (n_steps, n_t, m_max) -> (2 n_steps, 2 n_t, m_max + 2) until the
// currents change by less than controls.rel_tol.
FmeResult evaluate(const ModelSpec& m, const DriveSpec& d, const Reservoirs& reservoirs,
                   FloquetControls controls = {});

} // namespace floquet
} // namespace dqt
