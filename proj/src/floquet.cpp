// floquet.cpp — Floquet master equation from the lab-frame Hamiltonian

#include "dqt/floquet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>

namespace dqt::floquet {

namespace {

constexpr double unitarity_tolerance = 1e-10;

double unitarity_defect(const Operator& u) {
    return (u.adjoint() * u - Operator::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Operator step_exponential(const Operator& h, double dt) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
    const Eigen::VectorXd& e = solver.eigenvalues();
    Eigen::VectorXcd phases(e.size());
    for (Eigen::Index k = 0; k < e.size(); ++k) phases(k) = std::polar(1.0, -e(k) * dt);
    return solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
}

void check_drive(const DriveSpec& d) {
    d.validate();
    if (!(d.omega_d > 0.0)) throw ValidationError("floquet: omega_d must be > 0 (a static drive has no period)");
}

} // namespace

PeriodSamples sample_one_period(const ModelSpec& m, const DriveSpec& d, std::size_t n_steps, std::size_t n_t) {
    check_drive(d);
    models::validate(m);
    if (n_steps < 256) throw ValidationError("floquet: n_steps must be >= 256");
    if (n_t == 0 || n_steps % n_t != 0) throw ValidationError("floquet: n_steps must be a positive multiple of n_t");

    const models::LabFrameHamiltonian hamiltonian(m, d);
    PeriodSamples out;
    out.omega = d.omega_d;
    out.period = 2.0 * std::numbers::pi / d.omega_d;
    const double dt = out.period / static_cast<double>(n_steps);
    const std::size_t per_sample = n_steps / n_t;

    const auto dim = static_cast<Eigen::Index>(hamiltonian.dim());
    Operator u = Operator::Identity(dim, dim);
    out.propagators.reserve(n_t + 1);
    out.propagators.push_back(u);
    for (std::size_t step = 0; step < n_steps; ++step) {
        const double t_mid = (static_cast<double>(step) + 0.5) * dt;
        u = step_exponential(hamiltonian(t_mid), dt) * u;
        if ((step + 1) % per_sample == 0) {
            if (unitarity_defect(u) > unitarity_tolerance) {
                throw NumericalError("floquet: propagator lost unitarity at t = " +
                                     std::to_string((static_cast<double>(step) + 1.0) * dt));
            }
            out.propagators.push_back(u);
        }
    }
    return out;
}

Operator propagate_one_period(const ModelSpec& m, const DriveSpec& d, std::size_t n_steps) {
    std::size_t n_t = 1;
    return sample_one_period(m, d, n_steps, n_t).propagators.back();
}

FloquetSystem floquet_decompose(const PeriodSamples& samples) {
    if (samples.propagators.size() < 2) throw ValidationError("floquet_decompose: need at least one period sample");
    const Operator& u_period = samples.propagators.back();
    if (unitarity_defect(u_period) > unitarity_tolerance) {
        throw ValidationError("floquet_decompose: one-period propagator is not unitary");
    }

    // U(T) is normal, so its Schur form is diagonal and the Schur vectors are
    // an orthonormal eigenbasis even for clustered eigenphases.
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(u_period);
    if (schur.info() != Eigen::Success) throw NumericalError("floquet_decompose: Schur decomposition failed");
    const Eigen::MatrixXcd& q = schur.matrixU();
    const Eigen::MatrixXcd& t = schur.matrixT();

    const double period = samples.period;
    const double omega = samples.omega;
    const Eigen::Index n = u_period.rows();

    Eigen::VectorXd eps(n);
    for (Eigen::Index a = 0; a < n; ++a) {
        double e = -std::arg(t(a, a)) / period;
        if (e <= -0.5 * omega) e += omega;
        eps(a) = e;
    }
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) { return eps(a) < eps(b); });

    FloquetSystem fs;
    fs.period = period;
    fs.omega = omega;
    fs.quasienergies.resize(n);
    Eigen::MatrixXcd initial(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        fs.quasienergies(k) = eps(src);
        Eigen::VectorXcd v = q.col(src);
        Eigen::Index peak = 0;
        v.cwiseAbs().maxCoeff(&peak);
        v *= std::conj(v(peak)) / std::abs(v(peak));
        initial.col(k) = v;
    }

    const std::size_t n_t = samples.propagators.size() - 1;
    fs.mode_samples.reserve(n_t + 1);
    for (std::size_t k = 0; k <= n_t; ++k) {
        const double time = period * static_cast<double>(k) / static_cast<double>(n_t);
        Eigen::VectorXcd phases(n);
        for (Eigen::Index a = 0; a < n; ++a) phases(a) = std::polar(1.0, fs.quasienergies(a) * time);
        fs.mode_samples.push_back(samples.propagators[k] * initial * phases.asDiagonal());
    }
    return fs;
}

FloquetSystem shift_quasienergy(const FloquetSystem& fs, std::size_t a, int k) {
    if (a >= fs.dim()) throw std::out_of_range("shift_quasienergy: mode index out of range");
    FloquetSystem out = fs;
    const auto col = static_cast<Eigen::Index>(a);
    out.quasienergies(col) += k * fs.omega;
    const std::size_t n_t = fs.n_t();
    for (std::size_t s = 0; s <= n_t; ++s) {
        const double time = fs.period * static_cast<double>(s) / static_cast<double>(n_t);
        out.mode_samples[s].col(col) *= std::polar(1.0, k * fs.omega * time);
    }
    return out;
}

namespace {

// <psi_a(t_k)|A|psi_b(t_k)> for k = 0 .. n_t - 1.
std::vector<Eigen::MatrixXcd> sampled_elements(const FloquetSystem& fs, const Operator& coupling) {
    std::vector<Eigen::MatrixXcd> out;
    out.reserve(fs.n_t());
    for (std::size_t k = 0; k < fs.n_t(); ++k) {
        const Eigen::MatrixXcd& modes = fs.mode_samples[k];
        out.push_back(modes.adjoint() * coupling * modes);
    }
    return out;
}

Eigen::MatrixXd parseval_tail(const std::vector<Eigen::MatrixXcd>& elements, const SidebandCoefficients& c,
                              Eigen::MatrixXd* mean_out) {
    const Eigen::Index n = elements.front().rows();
    Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : elements) mean += e.cwiseAbs2();
    mean /= static_cast<double>(elements.size());
    Eigen::MatrixXd kept = Eigen::MatrixXd::Zero(n, n);
    for (const auto& s : c.by_sideband) kept += s.cwiseAbs2();
    if (mean_out) *mean_out = mean;
    return mean - kept;
}

} // namespace

SidebandCoefficients fourier_components(const FloquetSystem& fs, const Operator& coupling, int m_max,
                                        double parseval_tol) {
    if (m_max < 0) throw ValidationError("fourier_components: m_max must be >= 0");
    const std::size_t n_t = fs.n_t();
    if (n_t < 4 * static_cast<std::size_t>(m_max) || n_t == 0) {
        throw ValidationError("fourier_components: n_t must be >= 4 m_max");
    }
    if (static_cast<std::size_t>(coupling.rows()) != fs.dim()) {
        throw ValidationError("fourier_components: coupling dimension does not match Floquet system");
    }

    const auto elements = sampled_elements(fs, coupling);
    const Eigen::Index n = coupling.rows();
    SidebandCoefficients c;
    c.m_max = m_max;
    c.by_sideband.assign(static_cast<std::size_t>(2 * m_max + 1), Eigen::MatrixXcd::Zero(n, n));
    const double inv = 1.0 / static_cast<double>(n_t);
    for (int m = -m_max; m <= m_max; ++m) {
        Eigen::MatrixXcd& acc = c.by_sideband[static_cast<std::size_t>(m + m_max)];
        for (std::size_t k = 0; k < n_t; ++k) {
            // Omega t_k = 2 pi k / n_t
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) * static_cast<double>(k) * inv;
            acc += std::polar(1.0, angle) * elements[k];
        }
        acc *= inv;
    }

    Eigen::MatrixXd mean;
    const Eigen::MatrixXd tail = parseval_tail(elements, c, &mean);
    for (Eigen::Index a = 0; a < n; ++a) {
        for (Eigen::Index b = 0; b < n; ++b) {
            if (tail(a, b) > parseval_tol * std::max(1.0, mean(a, b))) {
                throw SidebandTruncationError("fourier_components: sideband range |m| <= " + std::to_string(m_max) +
                                              " misses spectral weight " + std::to_string(tail(a, b)) +
                                              " for mode pair (" + std::to_string(a) + ", " + std::to_string(b) +
                                              ")");
            }
        }
    }
    return c;
}

double parseval_defect(const FloquetSystem& fs, const Operator& coupling, const SidebandCoefficients& c) {
    const auto elements = sampled_elements(fs, coupling);
    return parseval_tail(elements, c, nullptr).cwiseAbs().maxCoeff();
}

RateTable build_sideband_table(const FloquetSystem& fs, const SidebandCoefficients& left,
                               const SidebandCoefficients& right, const Reservoirs& reservoirs) {
    reservoirs.validate();
    const Eigen::Index n = fs.quasienergies.size();
    RateTable rt;
    rt.dim = fs.dim();
    for (Terminal u : terminals) {
        const Reservoir& bath = reservoirs[u];
        const SidebandCoefficients& c = u == Terminal::left ? left : right;
        for (int m = -c.m_max; m <= c.m_max; ++m) {
            const Eigen::MatrixXcd& sigma = c.at(m);
            for (Eigen::Index a = 0; a < n; ++a) {
                for (Eigen::Index b = 0; b < n; ++b) {
                    const double weight = std::norm(sigma(a, b));
                    if (weight == 0.0) continue;
                    RateEntry e;
                    e.reservoir = u;
                    e.to = static_cast<std::size_t>(a);
                    e.from = static_cast<std::size_t>(b);
                    e.sideband = m;
                    e.frequency = fs.quasienergies(b) - fs.quasienergies(a) - m * fs.omega;
                    e.weight = weight;
                    e.rate_down = bath::rate_down(e.frequency, bath) * weight;
                    e.rate_up = bath::rate_up(e.frequency, bath) * weight;
                    rt.entries.push_back(e);
                }
            }
        }
    }
    return rt;
}

CurrentReport fme_rates_and_currents(const RateTable& sideband_table) {
    const PopulationVector p = dqme::solve_steady_state(dqme::build_population_generator(sideband_table));
    return dqme::currents(sideband_table, p, Method::fme);
}

namespace {

void grow_sampling(FloquetControls& c) {
    c.n_t *= 2;
    if (c.n_steps < c.n_t) c.n_steps = c.n_t;
    if (c.n_steps % c.n_t != 0) c.n_steps = (c.n_steps / c.n_t + 1) * c.n_t;
}

constexpr std::size_t max_samples = 1u << 14;

} // namespace

CurrentReport evaluate_once(const ModelSpec& m, const DriveSpec& d, const Reservoirs& reservoirs,
                            FloquetControls& controls) {
    reservoirs.validate();
    const RotatedSystem couplings = models::build_rotated(m, DriveSpec{});
    while (true) {
        const FloquetSystem fs = floquet_decompose(sample_one_period(m, d, controls.n_steps, controls.n_t));
        while (true) {
            try {
                const SidebandCoefficients left =
                    fourier_components(fs, couplings.coupling_left, controls.m_max, controls.parseval_tol);
                const SidebandCoefficients right =
                    fourier_components(fs, couplings.coupling_right, controls.m_max, controls.parseval_tol);
                return fme_rates_and_currents(build_sideband_table(fs, left, right, reservoirs));
            } catch (const SidebandTruncationError&) {
                controls.m_max = std::max(1, 2 * controls.m_max);
                if (4 * static_cast<std::size_t>(controls.m_max) > controls.n_t) break;
            }
        }
        if (controls.n_t >= max_samples) {
            throw NumericalError("floquet: sideband expansion did not converge within n_t = " +
                                 std::to_string(max_samples));
        }
        grow_sampling(controls);
    }
}

FmeResult evaluate(const ModelSpec& m, const DriveSpec& d, const Reservoirs& reservoirs, FloquetControls controls) {
    if (controls.m_max < 1) controls.m_max = 1;
    FmeResult result;
    result.report = evaluate_once(m, d, reservoirs, controls);
    result.controls = controls;
    for (int r = 1; r <= controls.max_refinements; ++r) {
        FloquetControls finer = result.controls;
        finer.n_steps *= 2;
        finer.m_max += 2;
        grow_sampling(finer);
        const CurrentReport next = evaluate_once(m, d, reservoirs, finer);
        const double change = relative_difference(result.report, next);
        result.report = next;
        result.controls = finer;
        result.refinements = r;
        if (change < controls.rel_tol) return result;
    }
    throw NumericalError("floquet: currents did not converge to relative " + std::to_string(controls.rel_tol) +
                         " after " + std::to_string(controls.max_refinements) + " refinements");
}

} // namespace dqt::floquet
