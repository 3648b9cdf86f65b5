#pragma once

// Batch front end: single runs, parameter sweeps, the algebra identity table
// and cross-model comparisons. Each cmd_* returns a process exit code:
//   0 success, 1 config error, 2 I/O, 3 numerical abort, 4 unsupported comparison.

#include "dlatom/algebra.hpp"
#include "dlatom/config.hpp"
#include "dlatom/dynamics.hpp"
#include "dlatom/errors.hpp"
#include "dlatom/model.hpp"
#include "dlatom/observables.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace dlatom {

enum ExitCode : int {
    kExitOk = 0,
    kExitConfig = 1,
    kExitIo = 2,
    kExitNumerical = 3,
    kExitUnsupported = 4,
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnsupportedComparison : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CommandOptions {
    std::filesystem::path output_dir = ".";
    /// 0 selects std::thread::hardware_concurrency().
    unsigned jobs = 0;
    bool quiet = false;
    std::ostream* out = &std::cout;
    std::ostream* err = &std::cerr;
};

/// 17 significant digits, scientific notation.
inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

inline std::string csv_header(int components) {
    if (components == 2) return "t,norm,pop_upper,pop_lower,dx,dy,dz";
    return "t,norm,pop1,pop2,pop3,pop4,pop_radiant,pop_absorptive,dx,dy,dz";
}

inline std::string csv_row(const ObservableRecord& r) {
    std::string line = format_number(r.t) + "," + format_number(r.norm);
    const int pops = r.components == 2 ? 2 : 4;
    for (int i = 0; i < pops; ++i) line += "," + format_number(r.pops[static_cast<std::size_t>(i)]);
    if (r.components == 4)
        line += "," + format_number(r.pop_radiant) + "," + format_number(r.pop_absorptive);
    for (int i = 0; i < 3; ++i) line += "," + format_number(r.dipole(i));
    return line;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw IoError("failed writing '" + path.string() + "'");
}

inline void write_csv(const std::filesystem::path& path, const std::vector<ObservableRecord>& rows,
                      int components) {
    std::string text = csv_header(components) + "\n";
    for (const auto& r : rows) text += csv_row(r) + "\n";
    write_text(path, text);
}

inline void ensure_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

struct RunResult {
    nlohmann::json summary;
    std::optional<double> frequency;
    double norm_drift = 0.0;
};

/// Evolves one configuration and writes <prefix>.csv and <prefix>.json into
/// `dir`. Throws IoError / NumericalError.
inline RunResult execute_run(const RunConfig& cfg, const std::filesystem::path& dir) {
    using nlohmann::json;
    const EvolutionProblem& p = cfg.problem;
    ensure_directory(dir);

    std::optional<double> ratio;
    if (p.params.gamma) ratio = validate_weak_field(p.params, p.field, p.t0, p.t1);

    const auto start = std::chrono::steady_clock::now();
    const Trajectory traj = evolve(p);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::int64_t steps = make_step_grid(p.t0, p.t1, p.dt).total_steps();

    const std::vector<ObservableRecord> rows = observe(traj);
    const int components = component_count(p.model_kind);
    write_csv(dir / (cfg.output_prefix + ".csv"), rows, components);

    RunResult result;
    result.norm_drift = std::abs(rows.back().norm - rows.front().norm);
    const Signal signal = dominant_signal(traj);
    try {
        result.frequency = oscillation_frequency(traj, signal);
    } catch (const NoOscillation&) {
    } catch (const InvalidArgument&) {
        // Too few samples for a spectral estimate.
    }

    json s;
    s["config"] = to_json(cfg);
    s["weak_field_ratio"] = ratio ? json(*ratio) : json(nullptr);
    s["weak_field_ok"] = ratio ? json(*ratio < 1.0) : json(nullptr);
    s["final_norm_drift"] = result.norm_drift;
    s["oscillation_frequency"] = result.frequency ? json(*result.frequency) : json(nullptr);
    s["oscillation_signal"] = to_string(signal);
    s["wall_time_s"] = wall;
    s["steps_per_second"] = wall > 0.0 ? static_cast<double>(steps) / wall : 0.0;
    write_text(dir / (cfg.output_prefix + ".json"), s.dump(2) + "\n");
    result.summary = std::move(s);
    return result;
}

namespace detail {

template <typename Fn>
int guarded(const CommandOptions& opts, Fn&& fn) {
    try {
        return fn();
    } catch (const ConfigError& e) {
        *opts.err << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const IoError& e) {
        *opts.err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    } catch (const NumericalError& e) {
        *opts.err << "numerical abort: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const UnsupportedComparison& e) {
        *opts.err << "unsupported comparison: " << e.what() << "\n";
        return kExitUnsupported;
    } catch (const InvalidArgument& e) {
        *opts.err << "config error: " << e.what() << "\n";
        return kExitConfig;
    }
}

}  // namespace detail

inline int cmd_run(const RunConfig& cfg, const CommandOptions& opts = {}) {
    return detail::guarded(opts, [&] {
        const RunResult r = execute_run(cfg, opts.output_dir);
        if (!opts.quiet) {
            *opts.out << "wrote " << (opts.output_dir / (cfg.output_prefix + ".csv")).string()
                      << "\n";
            if (r.summary["weak_field_ok"] == false)
                *opts.out << "warning: weak-field ratio "
                          << r.summary["weak_field_ratio"].get<double>() << " >= 1\n";
        }
        return static_cast<int>(kExitOk);
    });
}

struct SweepRow {
    double value = 0.0;
    std::optional<double> frequency;
    double norm_drift = 0.0;
    std::string status = "ok";
};

inline std::string csv_text_field(std::string s) {
    std::replace(s.begin(), s.end(), '"', '\'');
    return "\"" + s + "\"";
}

/// Runs every sweep point (concurrently, up to `jobs` at a time) and writes
/// <prefix>_<index>.csv/json plus <prefix>_sweep.csv in values order.
inline int cmd_sweep(const SweepConfig& sweep, const CommandOptions& opts = {}) {
    return detail::guarded(opts, [&] {
        ensure_directory(opts.output_dir);
        const std::size_t n = sweep.values.size();
        std::vector<SweepRow> rows(n);
        std::vector<int> codes(n, kExitOk);

        auto work = [&](std::size_t i) {
            SweepRow& row = rows[i];
            row.value = sweep.values[i];
            try {
                RunConfig cfg = sweep_point(sweep, row.value);
                cfg.output_prefix = sweep.base.output_prefix + "_" + std::to_string(i);
                const RunResult r = execute_run(cfg, opts.output_dir);
                row.frequency = r.frequency;
                row.norm_drift = r.norm_drift;
            } catch (const ConfigError& e) {
                row.status = e.what();
                codes[i] = kExitConfig;
            } catch (const InvalidArgument& e) {
                row.status = e.what();
                codes[i] = kExitConfig;
            } catch (const IoError& e) {
                row.status = e.what();
                codes[i] = kExitIo;
            } catch (const NumericalError& e) {
                row.status = e.what();
                codes[i] = kExitNumerical;
            }
        };

        unsigned jobs = opts.jobs != 0 ? opts.jobs : std::max(1u, std::thread::hardware_concurrency());
        jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
        std::atomic<std::size_t> next{0};
        {
            std::vector<std::jthread> workers;
            for (unsigned w = 0; w < jobs; ++w) {
                workers.emplace_back([&] {
                    for (std::size_t i = next++; i < n; i = next++) work(i);
                });
            }
        }

        std::string text = "index,value,oscillation_frequency,final_norm_drift,status\n";
        for (std::size_t i = 0; i < n; ++i) {
            const SweepRow& r = rows[i];
            text += std::to_string(i) + "," + format_number(r.value) + "," +
                    (r.frequency ? format_number(*r.frequency) : std::string()) + "," +
                    (r.status == "ok" ? format_number(r.norm_drift) : std::string()) + "," +
                    csv_text_field(r.status) + "\n";
        }
        write_text(opts.output_dir / (sweep.base.output_prefix + "_sweep.csv"), text);

        int code = kExitOk;
        for (int c : codes)
            if (c != kExitOk) code = c;
        if (!opts.quiet) {
            for (std::size_t i = 0; i < n; ++i) {
                if (codes[i] != kExitOk)
                    *opts.err << "sweep point " << i << " failed: " << rows[i].status << "\n";
            }
            *opts.out << "wrote " << (opts.output_dir / (sweep.base.output_prefix + "_sweep.csv")).string()
                      << "\n";
        }
        return code;
    });
}

/// Prints the identity table; exit 0 iff every row passes.
inline int cmd_algebra_check(const CommandOptions& opts = {}) {
    const std::vector<IdentityCheck> rows = algebra_identities();
    std::size_t width = 8;
    for (const auto& r : rows) width = std::max(width, r.name.size());
    bool all = true;
    std::ostream& out = *opts.out;
    char line[256];
    std::snprintf(line, sizeof line, "%-*s  %-12s  %s\n", static_cast<int>(width), "identity",
                  "max_dev", "result");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%-*s  %-12.3e  %s\n", static_cast<int>(width),
                      r.name.c_str(), r.deviation, r.pass ? "pass" : "FAIL");
        out << line;
        all = all && r.pass;
    }
    out << (all ? "all identities pass\n" : "identity check FAILED\n");
    return all ? kExitOk : kExitNumerical;
}

/// Max |pop_i(a) - pop_i(b)| over samples whose times coincide.
template <int N, int M>
double max_population_deviation(const BasicTrajectory<N>& a, const BasicTrajectory<M>& b,
                                 const std::vector<std::pair<int, int>>& components) {
    double dev = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double tol = 1e-9 * std::max(1.0, std::abs(a.times[i]));
        while (j < b.times.size() && b.times[j] < a.times[i] - tol) ++j;
        if (j == b.times.size()) break;
        if (std::abs(b.times[j] - a.times[i]) > tol) continue;
        for (const auto& [ca, cb] : components)
            dev = std::max(dev, std::abs(std::norm(a.states[i](ca)) - std::norm(b.states[j](cb))));
    }
    return dev;
}

/// Max |psi_a - psi_b| entry over samples whose times coincide.
inline double max_state_deviation(const Trajectory4& a, const Trajectory4& b) {
    double dev = 0.0;
    std::size_t j = 0;
    for (std::size_t i = 0; i < a.times.size(); ++i) {
        const double tol = 1e-9 * std::max(1.0, std::abs(a.times[i]));
        while (j < b.times.size() && b.times[j] < a.times[i] - tol) ++j;
        if (j == b.times.size()) break;
        if (std::abs(b.times[j] - a.times[i]) > tol) continue;
        dev = std::max(dev, (a.states[i] - b.states[j]).cwiseAbs().maxCoeff());
    }
    return dev;
}

inline const std::vector<std::pair<int, int>> kAllFour{{0, 0}, {1, 1}, {2, 2}, {3, 3}};

struct ComparisonReport {
    double baseline_deviation = 0.0;
    double literal_vs_exact_deviation = 0.0;
    double full_vs_exact_deviation = 0.0;
    double full_vs_exact_state_deviation = 0.0;
    double convergence_error = 0.0;
};

/// Throws UnsupportedComparison unless the problem is a p = 0, z-polarized,
/// alpha-coupled Full or TransformedLiteral run.
inline void require_comparable(const EvolutionProblem& p) {
    if (p.model_kind != ModelKind::Full && p.model_kind != ModelKind::TransformedLiteral)
        throw UnsupportedComparison("model_kind must be Full or TransformedLiteral");
    if (p.coupling != CouplingKind::AlphaE) throw UnsupportedComparison("coupling must be AlphaE");
    if (p.params.momentum.cwiseAbs().maxCoeff() != 0.0)
        throw UnsupportedComparison("momentum must be zero");
    const Vec3 a = field_amplitude(p.field);
    if (a(0) != 0.0 || a(1) != 0.0) throw UnsupportedComparison("field must be z-polarized");
}

/// The three cross-model comparisons:
///  (a) {1,3} block of TransformedLiteral vs Baseline2 with omega_a = 2 omega,
///      the z field driving sigma_x of the baseline;
///  (b) TransformedLiteral vs TransformedExact;
///  (c) Full followed by remove_rest vs TransformedExact, with the
///      convergence error taken from dt vs dt/2 runs of both.
inline ComparisonReport compare_models(const EvolutionProblem& base) {
    require_comparable(base);
    ComparisonReport rep;

    const Spinor4 psi0 = std::get<Spinor4>(base.initial_state);
    {
        Spinor4 block(psi0(0), 0.0, psi0(2), 0.0);
        if (block.squaredNorm() == 0.0) block = Spinor4(0.0, 0.0, 1.0, 0.0);
        EvolutionProblem lit = base;
        lit.model_kind = ModelKind::TransformedLiteral;
        lit.initial_state = block;
        EvolutionProblem b2 = base;
        b2.model_kind = ModelKind::Baseline2;
        b2.params.omega_a = 2.0 * base.params.omega;
        b2.polarization_axis = Axis::x;
        b2.field = std::visit(
            [](auto f) -> FieldModel {
                if constexpr (!std::is_same_v<decltype(f), ZeroField>)
                    f.amplitude = Vec3(f.amplitude(2), 0.0, 0.0);
                return f;
            },
            base.field);
        b2.initial_state = State2(block(0), block(2));
        rep.baseline_deviation =
            max_population_deviation(evolve_as<4>(lit), evolve_as<2>(b2), {{0, 0}, {2, 1}});
    }

    EvolutionProblem lit = base;
    lit.model_kind = ModelKind::TransformedLiteral;
    EvolutionProblem exact = base;
    exact.model_kind = ModelKind::TransformedExact;
    EvolutionProblem full = base;
    full.model_kind = ModelKind::Full;

    const Trajectory4 exact_traj = evolve_as<4>(exact);
    rep.literal_vs_exact_deviation = max_population_deviation(evolve_as<4>(lit), exact_traj, kAllFour);

    const Trajectory4 full_traj =
        transform_trajectory(evolve_as<4>(full), base.params, TransformDirection::remove_rest);
    rep.full_vs_exact_deviation = max_population_deviation(full_traj, exact_traj, kAllFour);
    rep.full_vs_exact_state_deviation = max_state_deviation(full_traj, exact_traj);

    auto halved = [](EvolutionProblem p) {
        p.dt *= 0.5;
        p.sample_stride *= 2;
        return p;
    };
    const Trajectory4 exact_half = evolve_as<4>(halved(exact));
    const Trajectory4 full_half = transform_trajectory(evolve_as<4>(halved(full)), base.params,
                                                       TransformDirection::remove_rest);
    rep.convergence_error = std::max(max_state_deviation(exact_traj, exact_half),
                                     max_state_deviation(full_traj, full_half));
    return rep;
}

inline constexpr double kBaselineTol = 1e-8;
inline constexpr double kConvergenceFactor = 10.0;
/// Absolute floor under the 10x convergence bound for runs whose
/// discretisation error is at round-off level.
inline constexpr double kConvergenceFloor = 1e-12;

inline int cmd_compare(const RunConfig& cfg, const CommandOptions& opts = {}) {
    return detail::guarded(opts, [&] {
        using nlohmann::json;
        ensure_directory(opts.output_dir);
        const ComparisonReport r = compare_models(cfg.problem);
        const double bound = kConvergenceFactor * r.convergence_error + kConvergenceFloor;
        json j;
        j["config"] = to_json(cfg);
        j["baseline_deviation"] = r.baseline_deviation;
        j["baseline_equivalent"] = r.baseline_deviation <= kBaselineTol;
        j["literal_vs_exact_deviation"] = r.literal_vs_exact_deviation;
        j["full_vs_exact_deviation"] = r.full_vs_exact_deviation;
        j["full_vs_exact_state_deviation"] = r.full_vs_exact_state_deviation;
        j["convergence_error"] = r.convergence_error;
        j["transform_exact"] = r.full_vs_exact_state_deviation <= bound;
        const auto path = opts.output_dir / (cfg.output_prefix + "_compare.json");
        write_text(path, j.dump(2) + "\n");
        if (!opts.quiet) *opts.out << j.dump(2) << "\n";
        return static_cast<int>(kExitOk);
    });
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot read '" + path.string() + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

/// Reads a config file and runs `command` (run, sweep or compare).
inline int dispatch(std::string_view command, const std::filesystem::path& config_path,
                    const CommandOptions& opts = {}) {
    std::string text;
    try {
        text = read_file(config_path);
    } catch (const IoError& e) {
        *opts.err << "I/O error: " << e.what() << "\n";
        return kExitIo;
    }
    std::optional<AnyConfig> parsed;
    const int code = detail::guarded(opts, [&] {
        parsed = parse_config(text);
        return static_cast<int>(kExitOk);
    });
    if (code != kExitOk) return code;

    if (command == "sweep") {
        if (!std::holds_alternative<SweepConfig>(*parsed)) {
            *opts.err << "config error: sweep requires a 'sweep' section\n";
            return kExitConfig;
        }
        return cmd_sweep(std::get<SweepConfig>(*parsed), opts);
    }
    if (!std::holds_alternative<RunConfig>(*parsed)) {
        *opts.err << "config error: '" << command << "' does not accept a 'sweep' section\n";
        return kExitConfig;
    }
    if (command == "run") return cmd_run(std::get<RunConfig>(*parsed), opts);
    if (command == "compare") return cmd_compare(std::get<RunConfig>(*parsed), opts);
    *opts.err << "unknown command '" << command << "'\n";
    return kExitConfig;
}

}  // namespace dlatom
