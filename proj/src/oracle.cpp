// oracle.cpp — Closed-form NESB currents and a brute-force master-equation integrator

#include "dqt/oracle.hpp"

#include <cmath>
#include <string>

#include "dqt/errors.hpp"

namespace dqt::oracle {

namespace {

ChannelRates channel(double omega, double weight, const Reservoirs& r) {
    return {bath::rate_down(omega, r.left) * weight, bath::rate_up(omega, r.left) * weight,
            bath::rate_down(omega, r.right) * weight, bath::rate_up(omega, r.right) * weight};
}

double channel_current(double omega, double down, double up, double p_from, double p_to) {
    return omega * (down * p_from - up * p_to);
}

} // namespace

NesbAnalytic nesb_analytic(const NesbModel& m, const DriveSpec& d, const Reservoirs& reservoirs) {
    models::validate(m);
    d.validate();
    reservoirs.validate();

    const double detuning = m.epsilon - d.omega_d;
    NesbAnalytic a;
    a.theta = std::atan2(d.eta, detuning);
    a.lambda = std::hypot(detuning, d.eta);
    const double c = std::cos(0.5 * a.theta);
    const double s = std::sin(0.5 * a.theta);
    a.plus = channel(d.omega_d + a.lambda, c * c * c * c, reservoirs);
    a.minus = channel(d.omega_d - a.lambda, s * s * s * s, reservoirs);
    a.diagonal = channel(d.omega_d, s * s * c * c, reservoirs);

    // phi_- -> phi_+ : up on the (omega_d + Lambda) channel, down on (omega_d - Lambda).
    const double raise = a.plus.up() + a.minus.down();
    const double lower = a.plus.down() + a.minus.up();
    const PopulationVector p = two_level_balance(raise, lower);
    a.p_minus = p.p(0);
    a.p_plus = p.p(1);
    return a;
}

CurrentReport nesb_analytic_currents(const NesbModel& m, const DriveSpec& d, const Reservoirs& reservoirs) {
    const NesbAnalytic a = nesb_analytic(m, d, reservoirs);
    const double wp = d.omega_d + a.lambda;
    const double wm = d.omega_d - a.lambda;
    const double w0 = d.omega_d;
    CurrentReport r;
    r.method = Method::dqme;
    r.j_left = channel_current(wp, a.plus.down_left, a.plus.up_left, a.p_plus, a.p_minus) +
               channel_current(wm, a.minus.down_left, a.minus.up_left, a.p_minus, a.p_plus) +
               channel_current(w0, a.diagonal.down_left, a.diagonal.up_left, 1.0, 1.0);
    r.j_right = channel_current(wp, a.plus.down_right, a.plus.up_right, a.p_plus, a.p_minus) +
                channel_current(wm, a.minus.down_right, a.minus.up_right, a.p_minus, a.p_plus) +
                channel_current(w0, a.diagonal.down_right, a.diagonal.up_right, 1.0, 1.0);
    r.j_pump = dqme::pump_current(r.j_left, r.j_right);
    return r;
}

PopulationVector two_level_balance(double gplus, double gminus) {
    if (!(gplus >= 0.0) || !(gminus >= 0.0)) throw ValidationError("two_level_balance: rates must be >= 0");
    const double total = gplus + gminus;
    if (!(total > 0.0)) throw ValidationError("two_level_balance: both rates are zero");
    PopulationVector p;
    p.p.resize(2);
    p.p(0) = gminus / total;
    p.p(1) = gplus / total;
    return p;
}

namespace {

// Precomputed pieces of the Lindblad generator in the bare basis. With jump
// operators O = |phi_m><phi_m'| the dissipator reduces to
//   sum_m' <phi_m'|rho|phi_m'> G_m'  -  (K rho + rho K) / 2
// where G_m' = sum_m rate(m' -> m) |phi_m><phi_m| and K = sum_m' out(m') |phi_m'><phi_m'|.
struct Generator {
    Eigen::MatrixXcd hamiltonian;
    Eigen::MatrixXcd vectors;
    std::vector<Eigen::MatrixXcd> gain; // G_m'
    Eigen::MatrixXcd loss;              // K

    Eigen::MatrixXcd apply(const Eigen::MatrixXcd& rho) const {
        const cplx i{0.0, 1.0};
        Eigen::MatrixXcd out = -i * (hamiltonian * rho - rho * hamiltonian);
        out -= 0.5 * (loss * rho + rho * loss);
        const Eigen::MatrixXcd projected = vectors.adjoint() * rho * vectors;
        for (std::size_t mp = 0; mp < gain.size(); ++mp) {
            const cplx occupation = projected(static_cast<Eigen::Index>(mp), static_cast<Eigen::Index>(mp));
            out += occupation * gain[mp];
        }
        return out;
    }
};

Generator make_generator(const RotatedSystem& sys, const RateTable& rt) {
    const EigenSystem es = ops::hermitian_eigendecompose(sys.hamiltonian);
    const auto n = static_cast<Eigen::Index>(sys.dim);
    Eigen::MatrixXd rate = Eigen::MatrixXd::Zero(n, n); // rate(dst, src), diagonal kept
    for (const RateEntry& e : rt.entries) {
        const auto to = static_cast<Eigen::Index>(e.to);
        const auto from = static_cast<Eigen::Index>(e.from);
        rate(to, from) += e.rate_down;
        rate(from, to) += e.rate_up;
    }
    Generator g;
    g.hamiltonian = sys.hamiltonian;
    g.vectors = es.vectors;
    g.loss = Eigen::MatrixXcd::Zero(n, n);
    g.gain.assign(static_cast<std::size_t>(n), Eigen::MatrixXcd::Zero(n, n));
    for (Eigen::Index src = 0; src < n; ++src) {
        const Eigen::VectorXcd v_src = es.vectors.col(src);
        g.loss += rate.col(src).sum() * (v_src * v_src.adjoint());
        for (Eigen::Index dst = 0; dst < n; ++dst) {
            if (rate(dst, src) == 0.0) continue;
            const Eigen::VectorXcd v_dst = es.vectors.col(dst);
            g.gain[static_cast<std::size_t>(src)] += rate(dst, src) * (v_dst * v_dst.adjoint());
        }
    }
    return g;
}

} // namespace

Eigen::MatrixXcd evolve_full_master_equation(const RotatedSystem& sys, const RateTable& rt,
                                             const Eigen::MatrixXcd& rho0, double t_final, double dt,
                                             const TrajectoryObserver& observer, std::size_t observe_every) {
    const auto n = static_cast<Eigen::Index>(sys.dim);
    if (rho0.rows() != n || rho0.cols() != n) throw ValidationError("evolve: rho0 has the wrong dimension");
    if (rt.dim != sys.dim) throw ValidationError("evolve: rate table does not match system");
    if (!(dt > 0.0) || !(t_final >= 0.0)) throw ValidationError("evolve: need dt > 0 and t_final >= 0");
    if (!ops::is_hermitian(rho0, 1e-10)) throw ValidationError("evolve: rho0 must be Hermitian");
    if (std::abs(rho0.trace() - 1.0) > 1e-10) throw ValidationError("evolve: rho0 must have unit trace");
    if (Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(rho0, Eigen::EigenvaluesOnly).eigenvalues().minCoeff() <
        -1e-10) {
        throw ValidationError("evolve: rho0 must be positive semidefinite");
    }

    const Generator g = make_generator(sys, rt);
    const auto steps = static_cast<std::size_t>(std::ceil(t_final / dt - 1e-12));
    const double h = steps ? t_final / static_cast<double>(steps) : 0.0;

    Eigen::MatrixXcd rho = rho0;
    if (observer) observer(0.0, rho);
    for (std::size_t k = 1; k <= steps; ++k) {
        const Eigen::MatrixXcd k1 = g.apply(rho);
        const Eigen::MatrixXcd k2 = g.apply(rho + 0.5 * h * k1);
        const Eigen::MatrixXcd k3 = g.apply(rho + 0.5 * h * k2);
        const Eigen::MatrixXcd k4 = g.apply(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const double drift = std::abs(rho.trace() - 1.0);
        if (drift > 1e-10 || !(rho.cwiseAbs().maxCoeff() <= 1.0 + 1e-6)) {
            throw NumericalError("evolve: integration unstable at t = " + std::to_string(h * static_cast<double>(k)) +
                                 " (trace drift " + std::to_string(drift) + "); use a smaller dt than " +
                                 std::to_string(h));
        }
        if (observer && (k % observe_every == 0 || k == steps)) observer(h * static_cast<double>(k), rho);
    }
    return rho;
}

} // namespace dqt::oracle
