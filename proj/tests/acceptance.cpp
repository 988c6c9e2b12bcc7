// acceptance.cpp — End-to-end acceptance checks. Prints one PASS/FAIL line per
// criterion and exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "dqt/dqme.hpp"
#include "dqt/floquet.hpp"
#include "dqt/oracle.hpp"
#include "dqt/sweep.hpp"

using namespace dqt;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double rel(double a, double ref) { return std::abs(a - ref) / std::abs(ref); }

// Largest per-flow relative difference.
double per_flow_rel(const CurrentReport& ref, const CurrentReport& x) {
    return std::max({rel(x.j_left, ref.j_left), rel(x.j_right, ref.j_right), rel(x.j_pump, ref.j_pump)});
}

const Reservoirs reservoirs{};

Outcome analytic_equivalence() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        for (int k = 0; k < 20; ++k) {
            const DriveSpec d{0.4 * k / 19.0, 0.95 * i / 19.0};
            const CurrentReport num = dqme::evaluate(NesbModel{1.0}, d, reservoirs, Method::dqme);
            const CurrentReport ref = oracle::nesb_analytic_currents(NesbModel{1.0}, d, reservoirs);
            worst = std::max(worst, relative_difference(ref, num));
        }
    }
    const double elapsed = seconds_since(t0);
    return {worst < 1e-12 && elapsed < 5.0, fmt("max rel diff %.2e over 400 points (tol 1e-12), %.2fs (limit 5s)",
                                                worst, elapsed)};
}

// Shared by the overlap and DME-deviation criteria.
struct NesbSweep {
    std::vector<CurrentReport> ddme, fme;
    double max_jr{0.0};
    double elapsed{0.0};
};

const NesbSweep& nesb_sweep() {
    static const NesbSweep s = [] {
        NesbSweep out;
        const auto t0 = Clock::now();
        for (int i = 1; i <= 9; ++i) {
            const DriveSpec d{0.1, 0.1 * i};
            out.ddme.push_back(dqme::evaluate(NesbModel{1.0}, d, reservoirs, Method::dqme));
            out.fme.push_back(floquet::evaluate(NesbModel{1.0}, d, reservoirs).report);
            out.max_jr = std::max(out.max_jr, std::abs(out.ddme.back().j_right));
        }
        out.elapsed = seconds_since(t0);
        return out;
    }();
    return s;
}

Outcome ddme_fme_overlap() {
    const NesbSweep& s = nesb_sweep();
    double worst = 0.0;
    for (std::size_t i = 0; i < s.ddme.size(); ++i)
        worst = std::max(worst, std::abs(s.fme[i].j_right - s.ddme[i].j_right));
    const double tol = 1e-2 * s.max_jr;
    return {worst < tol && s.elapsed < 120.0,
            fmt("max |dJ_r| %.3e < %.3e over omega_d = 0.1..0.9, %.1fs (limit 120s)", worst, tol, s.elapsed)};
}

Outcome dme_deviation() {
    const NesbSweep& s = nesb_sweep();
    const DriveSpec d{0.1, 0.7};
    const CurrentReport dme = dqme::evaluate(NesbModel{1.0}, d, reservoirs, Method::dme);
    const double dev = std::abs(dme.j_right - s.ddme[6].j_right);
    const double bound = 10.0 * 1e-2 * s.max_jr;
    return {dev > bound, fmt("|J_r(DME) - J_r(dDME)| = %.3e > %.3e at omega_d = 0.7", dev, bound)};
}

Outcome zero_frequency_limit() {
    double worst = 0.0;
    const ModelSpec specs[] = {NesbModel{1.0}, CoupledSpinsModel{1.0, 1.0, 0.2}, KerrModel{1.0, 0.4, 20}};
    for (const ModelSpec& m : specs) {
        for (double eta : {0.0, 0.05, 0.1, 0.2, 0.4}) {
            const DriveSpec d{eta, 0.0};
            const RotatedSystem sys = models::build_rotated(m, d);
            const EigenSystem es = ops::hermitian_eigendecompose(sys.hamiltonian);
            const RateTable a = dqme::build_rate_table(sys, es, reservoirs, d);
            const RateTable b = dqme::build_rate_table_traditional(sys, es, reservoirs, d);
            if (a.entries.size() != b.entries.size()) return {false, "rate tables differ in size"};
            for (std::size_t k = 0; k < a.entries.size(); ++k) {
                worst = std::max({worst, std::abs(a.entries[k].frequency - b.entries[k].frequency),
                                  std::abs(a.entries[k].rate_down - b.entries[k].rate_down),
                                  std::abs(a.entries[k].rate_up - b.entries[k].rate_up)});
            }
            const CurrentReport ca = dqme::evaluate(m, d, reservoirs, Method::dqme);
            const CurrentReport cb = dqme::evaluate(m, d, reservoirs, Method::dme);
            worst = std::max({worst, std::abs(ca.j_left - cb.j_left), std::abs(ca.j_right - cb.j_right),
                              std::abs(ca.j_pump - cb.j_pump)});
        }
    }
    return {worst <= 1e-15, fmt("max |dDME - DME| over rates and currents = %.2e (tol 1e-15), 3 models x 5 eta",
                                worst)};
}

Outcome pump_regimes() {
    const CurrentReport low = dqme::evaluate(NesbModel{1.0}, {0.1, 0.1}, reservoirs, Method::dqme);
    const CurrentReport high = dqme::evaluate(NesbModel{1.0}, {0.1, 0.95}, reservoirs, Method::dqme);
    const double ratio = std::abs(low.j_pump) / std::max(std::abs(low.j_left), std::abs(low.j_right));
    const bool ok = ratio < 0.05 && high.j_left > 0 && high.j_right > 0 && high.j_pump < 0;
    return {ok, fmt("omega_d=0.1: |J_p|/max = %.2e (< 0.05); omega_d=0.95: J_l=%.3e J_r=%.3e J_p=%.3e", ratio,
                    high.j_left, high.j_right, high.j_pump)};
}

// Near-resonance closed form, J_mu = 2 omega_d [Gamma_-^mu(omega_d) - Gamma_+^mu(omega_d)]
// with the rates of the omega_d channel.
Outcome near_resonance_at(const DriveSpec& d) {
    const CurrentReport num = dqme::evaluate(NesbModel{1.0}, d, reservoirs, Method::dqme);
    const NesbAnalytic a = oracle::nesb_analytic(NesbModel{1.0}, d, reservoirs);
    const double fl = 2.0 * d.omega_d * (a.diagonal.down_left - a.diagonal.up_left);
    const double fr = 2.0 * d.omega_d * (a.diagonal.down_right - a.diagonal.up_right);
    const double el = rel(num.j_left, fl);
    const double er = rel(num.j_right, fr);
    return {el < 0.05 && er < 0.05,
            fmt("omega_d=%.2f eta=%.2f: J_l %.4e vs %.4e (%.1f%%), J_r %.4e vs %.4e (%.1f%%), tol 5%%", d.omega_d,
                d.eta, num.j_left, fl, 100 * el, num.j_right, fr, 100 * er)};
}

Outcome near_resonance() { return near_resonance_at({0.02, 0.98}); }

Outcome coupled_spins() {
    const CoupledSpinsModel m{1.0, 1.0, 0.2};
    double worst = 0.0;
    for (double omega_d : {0.5, 0.7, 0.9}) {
        const DriveSpec d{0.2, omega_d};
        worst = std::max(worst, per_flow_rel(dqme::evaluate(m, d, reservoirs, Method::dqme),
                                             floquet::evaluate(m, d, reservoirs).report));
    }
    bool monotone = true;
    double prev_jr = -1e300, prev_jp = 0.0;
    std::string trail;
    for (double eta : {0.05, 0.1, 0.2, 0.3}) {
        const CurrentReport r = dqme::evaluate(m, {eta, 0.9}, reservoirs, Method::dqme);
        monotone = monotone && r.j_right > prev_jr && std::abs(r.j_pump) > prev_jp;
        prev_jr = r.j_right;
        prev_jp = std::abs(r.j_pump);
        trail += fmt(" %.3e/%.3e", r.j_right, std::abs(r.j_pump));
    }
    return {worst < 0.01 && monotone,
            fmt("dDME vs FME max rel %.2e (tol 1e-2); J_r/|J_p| vs eta:%s (%s)", worst, trail.c_str(),
                monotone ? "monotone" : "NOT monotone")};
}

Outcome kerr() {
    double overlap = 0.0;
    for (double eta : {0.05, 0.1, 0.2}) {
        const DriveSpec d{eta, 0.5};
        const auto conv = dqme::evaluate_converged(KerrModel{1.0, 0.4, 20}, d, reservoirs, Method::dqme);
        overlap = std::max(overlap, per_flow_rel(conv.report, floquet::evaluate(conv.model, d, reservoirs).report));
    }
    double truncation = 0.0;
    for (double eta : {0.05, 0.1, 0.2}) {
        const DriveSpec d{eta, 0.5};
        truncation = std::max(truncation, relative_difference(dqme::evaluate(KerrModel{1.0, 0.4, 20}, d, reservoirs, Method::dqme),
                                                              dqme::evaluate(KerrModel{1.0, 0.4, 28}, d, reservoirs, Method::dqme)));
    }
    const DriveSpec near{0.1, 0.95};
    const double weak = dqme::evaluate_converged(KerrModel{1.0, 0.1, 20}, near, reservoirs, Method::dqme).report.j_right;
    const double strong = dqme::evaluate_converged(KerrModel{1.0, 0.8, 20}, near, reservoirs, Method::dqme).report.j_right;
    const bool ok = overlap < 0.02 && truncation < 1e-8 && std::abs(strong) < std::abs(weak);
    return {ok, fmt("dDME vs FME max rel %.2e (tol 2e-2); n_max 20->28 change %.2e (tol 1e-8); "
                    "|J_r| chi=0.1 %.4e > chi=0.8 %.4e",
                    overlap, truncation, std::abs(weak), std::abs(strong))};
}

Outcome brute_force() {
    const auto t0 = Clock::now();
    const struct {
        const char* name;
        ModelSpec model;
        DriveSpec drive;
    } cases[] = {
        {"nesb", NesbModel{1.0}, {0.1, 0.7}},
        {"coupled_spins", CoupledSpinsModel{1.0, 1.0, 0.2}, {0.2, 0.9}},
        {"kerr(n_max=6)", KerrModel{1.0, 0.4, 6}, {0.1, 0.5}},
    };
    bool ok = true;
    std::string detail;
    for (const auto& c : cases) {
        const RotatedSystem sys = models::build_rotated(c.model, c.drive);
        const EigenSystem es = ops::hermitian_eigendecompose(sys.hamiltonian);
        const RateTable rt = dqme::build_rate_table(sys, es, reservoirs, c.drive);
        const Eigen::MatrixXd w = dqme::build_population_generator(rt);
        const PopulationVector p = dqme::solve_steady_state(w);

        // Slowest relaxation: the spectral gap of W or the slowest coherence decay.
        const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(w, false).eigenvalues();
        double slowest = 1e300;
        for (Eigen::Index i = 0; i < ev.size(); ++i)
            if (-ev(i).real() > 1e-14) slowest = std::min(slowest, -ev(i).real());
        for (Eigen::Index i = 0; i < w.rows(); ++i)
            for (Eigen::Index j = 0; j < i; ++j) slowest = std::min(slowest, -0.5 * (w(i, i) + w(j, j)));
        const double t_final = 40.0 / slowest;
        const double dt = std::min(0.5, 1.0 / es.energies.cwiseAbs().maxCoeff());

        const auto n = static_cast<Eigen::Index>(sys.dim);
        Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
        rho0(0, 0) = 1.0;
        const Eigen::MatrixXcd rho = oracle::evolve_full_master_equation(sys, rt, rho0, t_final, dt);
        const Eigen::VectorXd pops = (es.vectors.adjoint() * rho * es.vectors).diagonal().real();
        const double err = (pops - p.p).cwiseAbs().maxCoeff();
        ok = ok && err < 1e-8;
        detail += fmt("%s %.1e (t=%.0f); ", c.name, err, t_final);
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    return {ok, detail + fmt("max population error tol 1e-8, %.1fs (limit 60s)", elapsed)};
}

struct InvariantTally {
    double conservation{0.0};
    double detailed_balance{0.0};
    double unitarity{0.0};
    double gauge{0.0};
    double parseval{0.0};
    std::size_t points{0};
    std::size_t floquet_points{0};
    std::size_t underflow{0};
};

void floquet_invariants(const ModelSpec& model, const DriveSpec& d, InvariantTally& t) {
    FloquetControls controls;
    floquet::evaluate_once(model, d, reservoirs, controls); // settles m_max and n_t
    // Room for the relabelled modes, whose coefficients move by one sideband.
    const int m_max = controls.m_max + 2;
    while (controls.n_t < 4 * static_cast<std::size_t>(m_max)) controls.n_t *= 2;
    controls.n_steps = std::max(controls.n_steps, controls.n_t);
    const PeriodSamples samples = floquet::sample_one_period(model, d, controls.n_steps, controls.n_t);
    for (const Operator& u : samples.propagators) {
        const Operator defect = u.adjoint() * u - Operator::Identity(u.rows(), u.cols());
        t.unitarity = std::max(t.unitarity, defect.cwiseAbs().maxCoeff());
    }
    const FloquetSystem fs = floquet::floquet_decompose(samples);
    const RotatedSystem couplings = models::build_rotated(model, DriveSpec{});
    auto currents_for = [&](const FloquetSystem& f) {
        const auto l = floquet::fourier_components(f, couplings.coupling_left, m_max);
        const auto r = floquet::fourier_components(f, couplings.coupling_right, m_max);
        t.parseval = std::max({t.parseval, floquet::parseval_defect(f, couplings.coupling_left, l),
                               floquet::parseval_defect(f, couplings.coupling_right, r)});
        return floquet::fme_rates_and_currents(floquet::build_sideband_table(f, l, r, reservoirs));
    };
    const CurrentReport base = currents_for(fs);
    const FloquetSystem shifted = floquet::shift_quasienergy(floquet::shift_quasienergy(fs, 0, 1), fs.dim() - 1, -1);
    t.gauge = std::max(t.gauge, relative_difference(base, currents_for(shifted)));
    const double scale = std::max(1e-300, base.max_abs());
    t.conservation = std::max(t.conservation, std::abs(base.j_left + base.j_right + base.j_pump) / scale);
    ++t.floquet_points;
}

Outcome structural_invariants() {
    InvariantTally t;
    std::vector<std::filesystem::path> configs;
    for (const auto& e : std::filesystem::directory_iterator(DQT_CONFIG_DIR))
        if (e.path().extension() == ".json") configs.push_back(e.path());
    std::sort(configs.begin(), configs.end());

    for (const auto& path : configs) {
        const cli::SweepConfig cfg = cli::load_config(path);
        const std::vector<double> values = cfg.sweep.values();
        for (std::size_t i = 0; i < values.size(); ++i) {
            const cli::SweepPoint pt = cli::point_at(cfg, values[i]);
            const auto conv = dqme::evaluate_converged(pt.model, pt.drive, cfg.reservoirs, Method::dqme);
            for (Method method : {Method::dqme, Method::dme}) {
                const RotatedSystem sys = models::build_rotated(conv.model, pt.drive);
                const EigenSystem es = ops::hermitian_eigendecompose(sys.hamiltonian);
                const RateTable rt = method == Method::dqme
                                         ? dqme::build_rate_table(sys, es, cfg.reservoirs, pt.drive)
                                         : dqme::build_rate_table_traditional(sys, es, cfg.reservoirs, pt.drive);
                for (const RateEntry& e : rt.entries) {
                    if (e.rate_down > 0.0) {
                        const double expected = std::exp(-e.frequency / cfg.reservoirs[e.reservoir].temperature);
                        // Far-off-resonant Fock channels push the up rate below the
                        // normal double range; the ratio is meaningless there.
                        if (e.rate_down * expected < 1e-280) {
                            ++t.underflow;
                            continue;
                        }
                        t.detailed_balance = std::max(t.detailed_balance, rel(e.rate_up / e.rate_down, expected));
                    }
                }
                const CurrentReport r =
                    dqme::currents(rt, dqme::solve_steady_state(dqme::build_population_generator(rt)), method);
                const double scale = std::max(1e-300, r.max_abs());
                t.conservation = std::max(t.conservation, std::abs(r.j_left + r.j_right + r.j_pump) / scale);
            }
            ++t.points;
            // Floquet invariants on the first, middle and last point of each sweep.
            const bool sampled = i == 0 || i == values.size() / 2 || i + 1 == values.size();
            if (sampled && pt.drive.omega_d > 0.0) floquet_invariants(conv.model, pt.drive, t);
        }
    }
    const bool ok = t.conservation < 1e-12 && t.detailed_balance < 1e-12 && t.unitarity < 1e-10 && t.gauge < 1e-9 &&
                    t.parseval < 1e-8;
    return {ok, fmt("%zu configs, %zu points (%zu with Floquet checks): conservation %.1e, detailed balance %.1e "
                    "(%zu underflowed channels skipped), unitarity %.1e, gauge %.1e, Parseval %.1e",
                    configs.size(), t.points, t.floquet_points, t.conservation, t.detailed_balance, t.underflow, t.unitarity,
                    t.gauge, t.parseval)};
}

} // namespace

int main() {
    const struct {
        const char* name;
        std::function<Outcome()> run;
    } criteria[] = {
        {"nesb closed-form equivalence", analytic_equivalence},
        {"nesb dDME/FME overlap", ddme_fme_overlap},
        {"nesb DME deviation", dme_deviation},
        {"zero drive frequency limit", zero_frequency_limit},
        {"nesb pump regimes", pump_regimes},
        {"nesb near-resonance closed form", near_resonance},
        {"coupled spins overlap and eta growth", coupled_spins},
        {"kerr overlap, truncation and chi suppression", kerr},
        {"brute-force master equation", brute_force},
        {"structural invariants on bundled configs", structural_invariants},
    };

    int failures = 0;
    int index = 0;
    for (const auto& c : criteria) {
        ++index;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", index, c.name, o.detail.c_str());
        std::fflush(stdout);
    }

    // Not a criterion: the near-resonance closed form where its mixing-angle
    // assumption (theta close to pi/2) actually holds.
    const Outcome extra = near_resonance_at({0.1, 1.0});
    std::printf("INFO    near-resonance closed form at theta = pi/2 (%s): %s\n", extra.pass ? "holds" : "fails",
                extra.detail.c_str());

    std::printf("%d of %d criteria passed\n", index - failures, index);
    return failures == 0 ? 0 : 1;
}
