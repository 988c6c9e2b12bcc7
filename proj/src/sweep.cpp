// sweep.cpp — JSON-configured parameter sweeps with CSV output

#include "dqt/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"

namespace dqt::cli {

using nlohmann::json;

std::string_view to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::omega_d: return "omega_d";
    case SweepVariable::eta: return "eta";
    case SweepVariable::chi: return "chi";
    }
    return "?";
}

std::vector<double> SweepRange::values() const {
    std::vector<double> out(points);
    const double span = stop - start;
    for (std::size_t i = 0; i < points; ++i) {
        out[i] = start + span * static_cast<double>(i) / static_cast<double>(points - 1);
    }
    out.back() = stop;
    return out;
}

namespace {

// Reads typed members of one JSON object and rejects unknown keys.
class ObjectReader {
public:
    ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
        if (!obj_.is_object()) fail(path_, "expected an object");
    }

    double number(const std::string& key, std::optional<double> fallback = std::nullopt) {
        const json* v = find(key);
        if (!v) return require(key, fallback);
        if (!v->is_number()) fail(where(key), "expected a number");
        return v->get<double>();
    }

    std::size_t count(const std::string& key, std::optional<std::size_t> fallback = std::nullopt) {
        const json* v = find(key);
        if (!v) return require(key, fallback);
        if (!v->is_number_integer() || v->get<long long>() < 0) fail(where(key), "expected a non-negative integer");
        return v->get<std::size_t>();
    }

    std::string text(const std::string& key, std::optional<std::string> fallback = std::nullopt) {
        const json* v = find(key);
        if (!v) return require(key, fallback);
        if (!v->is_string()) fail(where(key), "expected a string");
        return v->get<std::string>();
    }

    const json* child(const std::string& key) { return find(key); }

    std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    // Call once every expected key has been read.
    void finish() const {
        for (const auto& [key, value] : obj_.items()) {
            if (!seen_.count(key)) fail(where(key), "unknown key");
        }
    }

    [[noreturn]] static void fail(const std::string& key, const std::string& why) {
        throw ConfigError("config key '" + key + "': " + why);
    }

private:
    const json* find(const std::string& key) {
        seen_.insert(key);
        const auto it = obj_.find(key);
        return it == obj_.end() ? nullptr : &*it;
    }

    template <class T> T require(const std::string& key, const std::optional<T>& fallback) const {
        if (!fallback) fail(where(key), "missing required key");
        return *fallback;
    }

    const json& obj_;
    std::string path_;
    std::set<std::string> seen_;
};

ModelSpec read_model(const json& node) {
    ObjectReader r(node, "model");
    const std::string type = r.text("type");
    ModelSpec model;
    if (type == "nesb") {
        model = NesbModel{r.number("epsilon", 1.0)};
    } else if (type == "coupled_spins") {
        model = CoupledSpinsModel{r.number("epsilon_l", 1.0), r.number("epsilon_r", 1.0), r.number("hopping", 0.2)};
    } else if (type == "kerr") {
        model = KerrModel{r.number("epsilon", 1.0), r.number("chi", 0.4), r.count("n_max", 20)};
    } else {
        ObjectReader::fail("model.type", "expected one of nesb, coupled_spins, kerr");
    }
    r.finish();
    try {
        models::validate(model);
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("config key 'model': ") + e.what());
    }
    return model;
}

Reservoir read_reservoir(const json* node, Terminal label, double default_temperature) {
    Reservoir res{label, default_temperature, 0.001, 10.0};
    if (node) {
        ObjectReader r(*node, "reservoirs." + std::string(to_string(label)));
        res.temperature = r.number("temperature", default_temperature);
        res.alpha = r.number("alpha", 0.001);
        res.omega_c = r.number("omega_c", 10.0);
        r.finish();
    }
    try {
        res.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("config key 'reservoirs': ") + e.what());
    }
    return res;
}

SweepVariable read_variable(const std::string& name) {
    if (name == "omega_d") return SweepVariable::omega_d;
    if (name == "eta") return SweepVariable::eta;
    if (name == "chi") return SweepVariable::chi;
    ObjectReader::fail("sweep.variable", "expected one of omega_d, eta, chi");
}

Method read_method(std::string_view name, const std::string& key) {
    if (name == "dqme") return Method::dqme;
    if (name == "dme") return Method::dme;
    if (name == "fme") return Method::fme;
    ObjectReader::fail(key, "unknown method '" + std::string(name) + "' (expected dqme, dme or fme)");
}

std::vector<Method> normalize_methods(std::vector<Method> methods, const std::string& key) {
    if (methods.empty()) ObjectReader::fail(key, "methods list must not be empty");
    std::sort(methods.begin(), methods.end());
    methods.erase(std::unique(methods.begin(), methods.end()), methods.end());
    return methods;
}

} // namespace

std::vector<Method> parse_methods(std::string_view list) {
    std::vector<Method> out;
    std::size_t pos = 0;
    while (pos <= list.size() && !list.empty()) {
        const std::size_t comma = std::min(list.find(',', pos), list.size());
        const std::string_view item = list.substr(pos, comma - pos);
        if (!item.empty()) out.push_back(read_method(item, "--methods"));
        pos = comma + 1;
    }
    return normalize_methods(std::move(out), "--methods");
}

SweepConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }

    ObjectReader top(root, "");
    const std::size_t version = top.count("schema_version");
    if (version != static_cast<std::size_t>(schema_version)) {
        ObjectReader::fail("schema_version", "unsupported version " + std::to_string(version));
    }

    SweepConfig cfg;
    const json* model = top.child("model");
    if (!model) ObjectReader::fail("model", "missing required key");
    cfg.model = read_model(*model);

    if (const json* drive = top.child("drive")) {
        ObjectReader r(*drive, "drive");
        cfg.drive.eta = r.number("eta", 0.0);
        cfg.drive.omega_d = r.number("omega_d", 0.0);
        r.finish();
    }
    if (!(cfg.drive.eta >= 0.0)) ObjectReader::fail("drive.eta", "must be >= 0");
    if (!(cfg.drive.omega_d >= 0.0)) ObjectReader::fail("drive.omega_d", "must be >= 0");

    const json* reservoirs = top.child("reservoirs");
    const json* left = nullptr;
    const json* right = nullptr;
    if (reservoirs) {
        ObjectReader r(*reservoirs, "reservoirs");
        left = r.child("left");
        right = r.child("right");
        r.finish();
    }
    cfg.reservoirs.left = read_reservoir(left, Terminal::left, 1.2);
    cfg.reservoirs.right = read_reservoir(right, Terminal::right, 0.4);

    const json* sweep = top.child("sweep");
    if (!sweep) ObjectReader::fail("sweep", "missing required key");
    {
        ObjectReader r(*sweep, "sweep");
        cfg.sweep.variable = read_variable(r.text("variable"));
        cfg.sweep.start = r.number("start");
        cfg.sweep.stop = r.number("stop");
        cfg.sweep.points = r.count("points");
        r.finish();
    }
    if (!(cfg.sweep.start < cfg.sweep.stop)) ObjectReader::fail("sweep.start", "must be < sweep.stop");
    if (cfg.sweep.points < 2) ObjectReader::fail("sweep.points", "must be >= 2");
    if (cfg.sweep.variable == SweepVariable::chi && !std::holds_alternative<KerrModel>(cfg.model)) {
        ObjectReader::fail("sweep.variable", "chi sweeps require the kerr model");
    }
    if (!(cfg.sweep.start >= 0.0)) ObjectReader::fail("sweep.start", "must be >= 0");

    if (const json* methods = top.child("methods")) {
        if (!methods->is_array()) ObjectReader::fail("methods", "expected an array of strings");
        std::vector<Method> list;
        for (std::size_t i = 0; i < methods->size(); ++i) {
            const json& item = (*methods)[i];
            const std::string key = "methods[" + std::to_string(i) + "]";
            if (!item.is_string()) ObjectReader::fail(key, "expected a string");
            list.push_back(read_method(item.get<std::string>(), key));
        }
        cfg.methods = normalize_methods(std::move(list), "methods");
    }

    if (const json* floquet = top.child("floquet")) {
        ObjectReader r(*floquet, "floquet");
        cfg.floquet.n_steps = r.count("n_steps", cfg.floquet.n_steps);
        cfg.floquet.n_t = r.count("n_t", cfg.floquet.n_t);
        cfg.floquet.m_max = static_cast<int>(r.count("m_max", static_cast<std::size_t>(cfg.floquet.m_max)));
        r.finish();
        if (cfg.floquet.n_steps < 256) ObjectReader::fail("floquet.n_steps", "must be >= 256");
        if (cfg.floquet.n_t == 0 || cfg.floquet.n_steps % cfg.floquet.n_t != 0) {
            ObjectReader::fail("floquet.n_t", "must divide floquet.n_steps");
        }
        if (cfg.floquet.n_t < 4 * static_cast<std::size_t>(cfg.floquet.m_max)) {
            ObjectReader::fail("floquet.m_max", "needs floquet.n_t >= 4 m_max");
        }
    }

    cfg.output = top.text("output", std::string{});
    top.finish();
    validate_methods(cfg);
    return cfg;
}

void validate_methods(const SweepConfig& cfg) {
    if (std::find(cfg.methods.begin(), cfg.methods.end(), Method::fme) == cfg.methods.end()) return;
    if (cfg.sweep.variable == SweepVariable::omega_d) {
        if (!(cfg.sweep.start > 0.0)) ObjectReader::fail("sweep.start", "fme needs omega_d > 0 at every point");
    } else if (!(cfg.drive.omega_d > 0.0)) {
        ObjectReader::fail("drive.omega_d", "fme needs omega_d > 0");
    }
}

SweepConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

SweepPoint point_at(const SweepConfig& cfg, double value) {
    SweepPoint pt{cfg.model, cfg.drive};
    switch (cfg.sweep.variable) {
    case SweepVariable::omega_d: pt.drive.omega_d = value; break;
    case SweepVariable::eta: pt.drive.eta = value; break;
    case SweepVariable::chi: std::get<KerrModel>(pt.model).chi = value; break;
    }
    return pt;
}

namespace {

std::vector<SweepRow> evaluate_point(const SweepConfig& cfg, double value) {
    const SweepPoint pt = point_at(cfg, value);
    std::vector<SweepRow> rows;
    ModelSpec truncated = pt.model;
    bool truncation_known = !std::holds_alternative<KerrModel>(pt.model);
    for (Method method : cfg.methods) {
        CurrentReport report;
        try {
            if (method == Method::fme) {
                if (!truncation_known) {
                    truncated = dqme::evaluate_converged(pt.model, pt.drive, cfg.reservoirs, Method::dqme).model;
                }
                report = floquet::evaluate(truncated, pt.drive, cfg.reservoirs, cfg.floquet).report;
            } else {
                const auto result = dqme::evaluate_converged(pt.model, pt.drive, cfg.reservoirs, method);
                report = result.report;
                if (method == Method::dqme) {
                    truncated = result.model;
                    truncation_known = true;
                }
            }
        } catch (const std::exception& e) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", value);
            throw SweepError(std::string(to_string(cfg.sweep.variable)) + "=" + buf + " [" +
                             std::string(to_string(method)) + "]: " + e.what());
        }
        rows.push_back({cfg.sweep.variable, value, method, report.j_left, report.j_right, report.j_pump});
    }
    return rows;
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::size_t threads) {
    const std::vector<double> values = cfg.sweep.values();
    std::vector<std::vector<SweepRow>> per_point(values.size());
    std::vector<std::optional<SweepError>> errors(values.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < values.size(); i = next++) {
            try {
                per_point[i] = evaluate_point(cfg, values[i]);
            } catch (const SweepError& e) {
                errors[i] = e;
            }
        }
    };
    const std::size_t n_workers = std::clamp<std::size_t>(threads, 1, values.size());
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t k = 0; k < n_workers; ++k) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    for (const auto& e : errors) {
        if (e) throw *e;
    }
    std::vector<SweepRow> rows;
    for (auto& chunk : per_point) rows.insert(rows.end(), chunk.begin(), chunk.end());
    std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return a.value != b.value ? a.value < b.value : a.method < b.method;
    });
    return rows;
}

std::string format_csv(const std::vector<SweepRow>& rows) {
    std::string out = "sweep_var,value,method,j_left,j_right,j_pump\n";
    char buf[160];
    for (const SweepRow& r : rows) {
        std::snprintf(buf, sizeof buf, "%s,%.16e,%s,%.16e,%.16e,%.16e\n", std::string(to_string(r.variable)).c_str(),
                      r.value, std::string(to_string(r.method)).c_str(), r.j_left, r.j_right, r.j_pump);
        out += buf;
    }
    return out;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path) {
    if (rows.empty()) throw ValidationError("emit_csv: no rows to write");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("emit_csv: cannot open " + path.string() + " for writing");
    out << format_csv(rows);
    if (!out.flush()) throw std::runtime_error("emit_csv: write to " + path.string() + " failed");
}

} // namespace dqt::cli
