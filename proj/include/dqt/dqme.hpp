// dqme.hpp — Driven dressed master equation (dDME) and its traditional
// counterpart (DME): rate tables over the rotated eigenbasis, steady-state
// populations, and energy currents.
//
// For every reservoir mu and ordered eigenstate pair (m, m'), the channel
// energy exchanged with the bath is
//
//   dDME: w = omega_d + E_m' - E_m        DME: w = E_m' - E_m
//
// and the rates are
//
//   Gamma_-(w) = gamma(w) [1 + n(w)] |<phi_m|A_mu|phi_m'>|^2   (m' -> m)
//   Gamma_+(w) = gamma(w) n(w)       |<phi_m|A_mu|phi_m'>|^2   (m -> m')
//
// Populations decouple from coherences (secular structure), the Lamb shift is
// dropped, and the current into reservoir mu is
//
//   J_mu = sum_{m,m'} w [Gamma_- P_m' - Gamma_+ P_m].

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "dqt/models.hpp"
#include "dqt/operator.hpp"
#include "dqt/reservoir.hpp"

namespace dqt {

enum class Method { dqme, dme, fme };

std::string_view to_string(Method m);

// One dissipative channel: a down process from -> to at rate_down and the
// reverse up process at rate_up, both exchanging `frequency` with the bath.
struct RateEntry {
    Terminal reservoir{Terminal::left};
    std::size_t to{0};
    std::size_t from{0};
    int sideband{0}; // Floquet sideband index; 0 for rotated-frame tables
    double frequency{0.0};
    double weight{0.0}; // |<to|A|from>|^2 or |sigma^-_{to,from,m}|^2
    double rate_down{0.0};
    double rate_up{0.0};
};

struct RateTable {
    std::size_t dim{0};
    std::vector<RateEntry> entries;
};

struct PopulationVector {
    Eigen::VectorXd p;

    std::size_t dim() const { return static_cast<std::size_t>(p.size()); }
};

struct CurrentReport {
    double j_left{0.0};
    double j_right{0.0};
    double j_pump{0.0};
    Method method{Method::dqme};

    double operator[](Terminal t) const { return t == Terminal::left ? j_left : j_right; }
    double max_abs() const;
};

// max over the three flows of |a - b|, divided by max(|a|) (or 1 if a is zero).
double relative_difference(const CurrentReport& a, const CurrentReport& b);

namespace dqme {

RateTable build_rate_table(const RotatedSystem& sys, const EigenSystem& es, const Reservoirs& reservoirs,
                           const DriveSpec& d);

// Same structure with the drive frequency removed from the channel energy.
RateTable build_rate_table_traditional(const RotatedSystem& sys, const EigenSystem& es,
                                       const Reservoirs& reservoirs, const DriveSpec& d);

// Population generator W (dP/dt = W P); every column sums to zero.
Eigen::MatrixXd build_population_generator(const RateTable& rt);

// Unique stationary distribution of W. Transient states receive zero weight.
// Throws ReducibleGeneratorError when W has more than one closed class.
PopulationVector solve_steady_state(const Eigen::MatrixXd& w);

// Closed communicating classes of the rate graph of W (edge m' -> m when
// W(m, m') > 0), each sorted ascending, ordered by smallest member.
std::vector<std::vector<std::size_t>> closed_classes(const Eigen::MatrixXd& w);

double energy_current(const RateTable& rt, const PopulationVector& p, Terminal mu);

// J_p = -(J_l + J_r), with an exact cancellation reported as +0.
double pump_current(double j_left, double j_right);

CurrentReport currents(const RateTable& rt, const PopulationVector& p, Method method);

// Full pipeline for one parameter point: rotate, diagonalize, tabulate rates,
// solve, evaluate currents. `method` selects dqme or dme.
CurrentReport evaluate(const ModelSpec& model, const DriveSpec& d, const Reservoirs& reservoirs, Method method);

struct TruncationResult {
    CurrentReport report;
    ModelSpec model; // with the n_max actually used
};

// For Kerr models, raises n_max in steps of `step` until the currents change
// by less than `rel_tol` (relative to the largest current); other models pass
// through unchanged.
TruncationResult evaluate_converged(const ModelSpec& model, const DriveSpec& d, const Reservoirs& reservoirs,
                                    Method method, double rel_tol = 1e-8, std::size_t step = 8,
                                    std::size_t n_max_cap = 100);

} // namespace dqme
} // namespace dqt
