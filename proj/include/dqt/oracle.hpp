// oracle.hpp — Independent references for the dqme pipeline: the closed-form
// NESB solution and a brute-force integrator of the full master equation.

#pragma once

#include <functional>

#include "dqt/dqme.hpp"
#include "dqt/models.hpp"
#include "dqt/reservoir.hpp"

namespace dqt {

// Down/up rates of one channel for each reservoir.
struct ChannelRates {
    double down_left{0.0};
    double up_left{0.0};
    double down_right{0.0};
    double up_right{0.0};

    double down() const { return down_left + down_right; }
    double up() const { return up_left + up_right; }
};

// Closed-form NESB solution with mixing angle theta = atan2(eta, Delta),
// splitting Lambda = sqrt(Delta^2 + eta^2) and three channels:
//   omega_d + Lambda  (phi_+ -> phi_-, weight cos^4(theta/2))
//   omega_d - Lambda  (phi_- -> phi_+, weight sin^4(theta/2))
//   omega_d           (diagonal,      weight sin^2(theta)/4)
struct NesbAnalytic {
    double theta{0.0};
    double lambda{0.0};
    ChannelRates plus;     // at omega_d + Lambda
    ChannelRates minus;    // at omega_d - Lambda
    ChannelRates diagonal; // at omega_d
    double p_plus{0.0};
    double p_minus{1.0};
};

namespace oracle {

NesbAnalytic nesb_analytic(const NesbModel& m, const DriveSpec& d, const Reservoirs& reservoirs);

CurrentReport nesb_analytic_currents(const NesbModel& m, const DriveSpec& d, const Reservoirs& reservoirs);

// (P_-, P_+) = (gminus, gplus) / (gplus + gminus), lower state first.
// Throws ValidationError when both rates vanish.
PopulationVector two_level_balance(double gplus, double gminus);

using TrajectoryObserver = std::function<void(double t, const Eigen::MatrixXcd& rho)>;

// Fixed-step RK4 integration of
//   d rho/dt = -i[H, rho] + sum_{entries} Gamma_- D[|m><m'|] rho + Gamma_+ D[|m'><m|] rho
// in the model's own basis (rho0 and the result are bare-basis density
// matrices). The observer, if given, sees every `observe_every`-th step.
// Throws NumericalError when the trace drifts by more than 1e-10 or the state
// leaves the unit ball, which signals an unstable step.
Eigen::MatrixXcd evolve_full_master_equation(const RotatedSystem& sys, const RateTable& rt,
                                             const Eigen::MatrixXcd& rho0, double t_final, double dt,
                                             const TrajectoryObserver& observer = {},
                                             std::size_t observe_every = 1);

} // namespace oracle
} // namespace dqt
