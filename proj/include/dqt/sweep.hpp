// sweep.hpp — JSON-configured parameter sweeps over dDME, DME and FME with CSV output.
//
// Config schema (schema_version 1):
//
//   {
//     "schema_version": 1,
//     "model": {"type": "nesb", "epsilon": 1.0}
//            | {"type": "coupled_spins", "epsilon_l": 1.0, "epsilon_r": 1.0, "hopping": 0.2}
//            | {"type": "kerr", "epsilon": 1.0, "chi": 0.4, "n_max": 20},
//     "drive": {"eta": 0.1, "omega_d": 0.7},
//     "reservoirs": {"left":  {"temperature": 1.2, "alpha": 0.001, "omega_c": 10.0},
//                    "right": {"temperature": 0.4, "alpha": 0.001, "omega_c": 10.0}},
//     "sweep": {"variable": "omega_d" | "eta" | "chi", "start": 0.05, "stop": 0.95, "points": 50},
//     "methods": ["dqme", "dme", "fme"],
//     "floquet": {"n_steps": 4096, "n_t": 512, "m_max": 8},
//     "output": "fig2a.csv"
//   }
//
// Everything except schema_version, model.type and sweep may be omitted.

#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dqt/dqme.hpp"
#include "dqt/errors.hpp"
#include "dqt/floquet.hpp"
#include "dqt/models.hpp"
#include "dqt/reservoir.hpp"

namespace dqt::cli {

inline constexpr int schema_version = 1;

class ConfigError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

class SweepError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

enum class SweepVariable { omega_d, eta, chi };

std::string_view to_string(SweepVariable v);

struct SweepRange {
    SweepVariable variable{SweepVariable::omega_d};
    double start{0.0};
    double stop{1.0};
    std::size_t points{2};

    // start + (stop - start) i / (points - 1), exact at both ends.
    std::vector<double> values() const;
};

struct SweepConfig {
    ModelSpec model{NesbModel{}};
    DriveSpec drive{};
    Reservoirs reservoirs{};
    SweepRange sweep{};
    std::vector<Method> methods{Method::dqme};
    FloquetControls floquet{};
    std::string output;
};

// Throws ConfigError naming the offending key.
SweepConfig parse_config(std::string_view text);

SweepConfig load_config(const std::filesystem::path& path);

// The FME needs a nonzero drive period at every sweep point. parse_config
// calls this; call it again after overriding the method list.
void validate_methods(const SweepConfig& cfg);

// Parses "dqme,dme,fme". Throws ConfigError on unknown names or an empty list.
std::vector<Method> parse_methods(std::string_view list);

struct SweepRow {
    SweepVariable variable{SweepVariable::omega_d};
    double value{0.0};
    Method method{Method::dqme};
    double j_left{0.0};
    double j_right{0.0};
    double j_pump{0.0};
};

// Model and drive at one sweep value.
struct SweepPoint {
    ModelSpec model;
    DriveSpec drive;
};

SweepPoint point_at(const SweepConfig& cfg, double value);

// Rows sorted by value, then by method (dqme, dme, fme). Points are evaluated
// independently on up to `threads` workers. A failing point raises SweepError
// carrying the sweep value and method.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, std::size_t threads = 1);

// Header plus one line per row, 17 significant digits, '\n' line endings.
std::string format_csv(const std::vector<SweepRow>& rows);

// Throws ValidationError for empty rows, std::runtime_error for unwritable paths.
void emit_csv(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

} // namespace dqt::cli
