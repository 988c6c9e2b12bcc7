// dqme.cpp — Driven and traditional dressed master equations

#include "dqt/dqme.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <string>

#include "dqt/errors.hpp"

namespace dqt {

std::string_view to_string(Method m) {
    switch (m) {
    case Method::dqme: return "dqme";
    case Method::dme: return "dme";
    case Method::fme: return "fme";
    }
    return "?";
}

double CurrentReport::max_abs() const {
    return std::max({std::abs(j_left), std::abs(j_right), std::abs(j_pump)});
}

double relative_difference(const CurrentReport& a, const CurrentReport& b) {
    const double diff = std::max({std::abs(a.j_left - b.j_left), std::abs(a.j_right - b.j_right),
                                  std::abs(a.j_pump - b.j_pump)});
    const double scale = a.max_abs();
    return scale > 0.0 ? diff / scale : diff;
}

namespace dqme {

namespace {

RateTable tabulate(const RotatedSystem& sys, const EigenSystem& es, const Reservoirs& reservoirs,
                   double frequency_shift) {
    reservoirs.validate();
    if (es.dim() != sys.dim) throw ValidationError("rate table: eigensystem does not match system dimension");

    const auto n = static_cast<Eigen::Index>(sys.dim);
    RateTable rt;
    rt.dim = sys.dim;
    rt.entries.reserve(2 * sys.dim * sys.dim);
    for (Terminal mu : terminals) {
        const Reservoir& bath = reservoirs[mu];
        // Coupling operator in the eigenbasis: M(m, m') = <phi_m|A_mu|phi_m'>.
        const Eigen::MatrixXcd coupling = es.vectors.adjoint() * sys.coupling(mu == Terminal::left) * es.vectors;
        for (Eigen::Index m = 0; m < n; ++m) {
            for (Eigen::Index mp = 0; mp < n; ++mp) {
                RateEntry e;
                e.reservoir = mu;
                e.to = static_cast<std::size_t>(m);
                e.from = static_cast<std::size_t>(mp);
                e.frequency = frequency_shift + (es.energies(mp) - es.energies(m));
                e.weight = std::norm(coupling(m, mp));
                e.rate_down = bath::rate_down(e.frequency, bath) * e.weight;
                e.rate_up = bath::rate_up(e.frequency, bath) * e.weight;
                rt.entries.push_back(e);
            }
        }
    }
    return rt;
}

// Tarjan's algorithm on the graph with edge j -> i whenever w(i, j) > 0.
std::vector<std::vector<std::size_t>> strongly_connected(const Eigen::MatrixXd& w) {
    const auto n = static_cast<std::size_t>(w.rows());
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<bool> on_stack(n, false);
    std::vector<std::size_t> stack;
    std::vector<std::vector<std::size_t>> components;
    int counter = 0;

    std::function<void(std::size_t)> visit = [&](std::size_t v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = true;
        for (std::size_t u = 0; u < n; ++u) {
            if (u == v || !(w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > 0.0)) continue;
            if (index[u] < 0) {
                visit(u);
                low[v] = std::min(low[v], low[u]);
            } else if (on_stack[u]) {
                low[v] = std::min(low[v], index[u]);
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::size_t> comp;
            std::size_t u;
            do {
                u = stack.back();
                stack.pop_back();
                on_stack[u] = false;
                comp.push_back(u);
            } while (u != v);
            std::sort(comp.begin(), comp.end());
            components.push_back(std::move(comp));
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        if (index[v] < 0) visit(v);
    }
    return components;
}

// Grassmann-Taksar-Heyman elimination on an irreducible block. rates(i, j) is
// the i -> j transition rate; the diagonal is ignored.
Eigen::VectorXd gth_stationary(Eigen::MatrixXd rates) {
    const Eigen::Index n = rates.rows();
    Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
    if (n == 1) {
        x(0) = 1.0;
        return x;
    }
    for (Eigen::Index k = n - 1; k > 0; --k) {
        double outflow = 0.0;
        for (Eigen::Index j = 0; j < k; ++j) outflow += rates(k, j);
        if (!(outflow > 0.0)) throw NumericalError("solve_steady_state: elimination hit a state with no outflow");
        for (Eigen::Index i = 0; i < k; ++i) rates(i, k) /= outflow;
        for (Eigen::Index i = 0; i < k; ++i) {
            if (rates(i, k) == 0.0) continue;
            for (Eigen::Index j = 0; j < k; ++j) {
                if (i != j) rates(i, j) += rates(i, k) * rates(k, j);
            }
        }
    }
    x(0) = 1.0;
    for (Eigen::Index j = 1; j < n; ++j) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < j; ++i) acc += x(i) * rates(i, j);
        x(j) = acc;
    }
    return x / x.sum();
}

} // namespace

RateTable build_rate_table(const RotatedSystem& sys, const EigenSystem& es, const Reservoirs& reservoirs,
                           const DriveSpec& d) {
    return tabulate(sys, es, reservoirs, d.omega_d);
}

RateTable build_rate_table_traditional(const RotatedSystem& sys, const EigenSystem& es,
                                       const Reservoirs& reservoirs, const DriveSpec&) {
    return tabulate(sys, es, reservoirs, 0.0);
}

// Each dissipator D[|m><m'|] moves population m' -> m at unit weight, so the
// down process adds Gamma_- to W(to, from) and the up process adds Gamma_+ to
// W(from, to); the diagonal collects the matching losses.
Eigen::MatrixXd build_population_generator(const RateTable& rt) {
    const auto n = static_cast<Eigen::Index>(rt.dim);
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (const RateEntry& e : rt.entries) {
        if (e.to == e.from) continue;
        const auto to = static_cast<Eigen::Index>(e.to);
        const auto from = static_cast<Eigen::Index>(e.from);
        w(to, from) += e.rate_down;
        w(from, to) += e.rate_up;
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        double out = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i != j) out += w(i, j);
        }
        w(j, j) = -out;
    }
    return w;
}

std::vector<std::vector<std::size_t>> closed_classes(const Eigen::MatrixXd& w) {
    if (w.rows() != w.cols()) throw ValidationError("closed_classes: generator must be square");
    const auto components = strongly_connected(w);
    const auto n = static_cast<std::size_t>(w.rows());
    std::vector<std::size_t> owner(n, 0);
    for (std::size_t c = 0; c < components.size(); ++c) {
        for (std::size_t v : components[c]) owner[v] = c;
    }
    std::vector<std::vector<std::size_t>> closed;
    for (std::size_t c = 0; c < components.size(); ++c) {
        bool leaks = false;
        for (std::size_t v : components[c]) {
            for (std::size_t u = 0; u < n && !leaks; ++u) {
                if (owner[u] != c && w(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > 0.0) {
                    leaks = true;
                }
            }
        }
        if (!leaks) closed.push_back(components[c]);
    }
    std::sort(closed.begin(), closed.end());
    return closed;
}

PopulationVector solve_steady_state(const Eigen::MatrixXd& w) {
    if (w.rows() == 0 || w.rows() != w.cols()) {
        throw ValidationError("solve_steady_state: generator must be square with dim >= 1");
    }
    const auto classes = closed_classes(w);
    if (classes.size() != 1) {
        std::ostringstream msg;
        msg << "solve_steady_state: rate graph is reducible, " << classes.size() << " closed blocks:";
        for (const auto& block : classes) {
            msg << " {";
            for (std::size_t k = 0; k < block.size(); ++k) msg << (k ? "," : "") << block[k];
            msg << "}";
        }
        throw ReducibleGeneratorError(msg.str(), classes);
    }

    const auto& block = classes.front();
    const auto k = static_cast<Eigen::Index>(block.size());
    Eigen::MatrixXd rates(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            const auto src = static_cast<Eigen::Index>(block[static_cast<std::size_t>(i)]);
            const auto dst = static_cast<Eigen::Index>(block[static_cast<std::size_t>(j)]);
            rates(i, j) = (i == j) ? 0.0 : w(dst, src);
        }
    }
    const Eigen::VectorXd x = gth_stationary(std::move(rates));

    PopulationVector out;
    out.p = Eigen::VectorXd::Zero(w.rows());
    for (Eigen::Index i = 0; i < k; ++i) out.p(static_cast<Eigen::Index>(block[static_cast<std::size_t>(i)])) = x(i);
    return out;
}

double energy_current(const RateTable& rt, const PopulationVector& p, Terminal mu) {
    if (p.dim() != rt.dim) throw ValidationError("energy_current: population vector does not match rate table");
    double j = 0.0;
    for (const RateEntry& e : rt.entries) {
        if (e.reservoir != mu) continue;
        j += e.frequency * (e.rate_down * p.p(static_cast<Eigen::Index>(e.from)) -
                            e.rate_up * p.p(static_cast<Eigen::Index>(e.to)));
    }
    return j;
}

double pump_current(double j_left, double j_right) { return 0.0 - (j_left + j_right); }

CurrentReport currents(const RateTable& rt, const PopulationVector& p, Method method) {
    CurrentReport r;
    r.method = method;
    r.j_left = energy_current(rt, p, Terminal::left);
    r.j_right = energy_current(rt, p, Terminal::right);
    r.j_pump = pump_current(r.j_left, r.j_right);
    return r;
}

CurrentReport evaluate(const ModelSpec& model, const DriveSpec& d, const Reservoirs& reservoirs, Method method) {
    if (method == Method::fme) throw ValidationError("dqme::evaluate: use floquet::evaluate for the FME");
    models::validate(model);
    d.validate();
    const RotatedSystem sys = models::build_rotated(model, d);
    const EigenSystem es = ops::hermitian_eigendecompose(sys.hamiltonian);
    const RateTable rt = method == Method::dqme ? build_rate_table(sys, es, reservoirs, d)
                                                : build_rate_table_traditional(sys, es, reservoirs, d);
    const PopulationVector p = solve_steady_state(build_population_generator(rt));
    return currents(rt, p, method);
}

TruncationResult evaluate_converged(const ModelSpec& model, const DriveSpec& d, const Reservoirs& reservoirs,
                                    Method method, double rel_tol, std::size_t step, std::size_t n_max_cap) {
    const auto* kerr = std::get_if<KerrModel>(&model);
    if (kerr == nullptr) return {evaluate(model, d, reservoirs, method), model};

    KerrModel current = *kerr;
    CurrentReport report = evaluate(current, d, reservoirs, method);
    while (current.n_max + step <= n_max_cap) {
        KerrModel larger = current;
        larger.n_max += step;
        const CurrentReport next = evaluate(larger, d, reservoirs, method);
        if (relative_difference(report, next) < rel_tol) return {report, current};
        current = larger;
        report = next;
    }
    throw NumericalError("Kerr truncation did not converge below n_max = " + std::to_string(n_max_cap));
}

} // namespace dqme
} // namespace dqt
