#include "nirgas/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

namespace nirgas {

using nlohmann::json;
using nlohmann::ordered_json;

std::vector<double> RunConfig::delta_values() const {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(std::max(sweep.count, 0)));
    if (sweep.count == 1) {
        v.push_back(sweep.min);
        return v;
    }
    const double step = (sweep.max - sweep.min) / (sweep.count - 1);
    for (int i = 0; i < sweep.count; ++i) v.push_back(sweep.min + i * step);
    return v;
}

void RunConfig::validate() const {
    sys.validate();
    solver.validate();
    if (sweep.count < 1) throw ConfigError("sweep.count must be at least 1");
    if (!(sweep.min <= sweep.max))
        throw ConfigError("sweep.min must not exceed sweep.max");
    if (pump_rates.empty()) throw ConfigError("pump_rates must not be empty");
    for (size_t k = 0; k < pump_rates.size(); ++k) {
        if (pump_rates[k] < 0.0)
            throw ConfigError("pump_rates must be non-negative");
        if (k > 0 && !(pump_rates[k] > pump_rates[k - 1]))
            throw ConfigError("pump_rates must be strictly ascending");
    }
    if (phases < 1) throw ConfigError("phases must be at least 1");
    if (workers < 0) throw ConfigError("workers must be non-negative");
    if (output.format != "csv" && output.format != "json")
        throw ConfigError("output.format must be \"csv\" or \"json\"");
}

RunConfig default_config() { return RunConfig{}; }

namespace {

void check_keys(const json& j, const std::string& scope,
                std::initializer_list<const char*> allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* a : allowed)
            if (it.key() == a) {
                known = true;
                break;
            }
        if (!known)
            throw ConfigError("unknown configuration key \"" +
                              (scope.empty() ? it.key() : scope + "." + it.key()) +
                              "\"");
    }
}

complexd get_complex(const json& j, const std::string& name) {
    if (j.is_number()) return complexd(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return complexd(j[0].get<double>(), j[1].get<double>());
    throw ConfigError(name + " must be a number or a [re, im] pair");
}

template <typename T>
void assign(const json& j, const char* key, T& dst) {
    if (j.contains(key)) dst = j.at(key).get<T>();
}

} // namespace

RunConfig parse_config(const json& j) {
    RunConfig cfg = default_config();
    if (j.is_null()) return cfg;
    if (!j.is_object())
        throw ConfigError("configuration root must be a JSON object");
    check_keys(j, "", {"levels", "drive", "decay", "medium", "probe", "sweep",
                       "pump_rates", "solver", "phases", "workers", "output",
                       "seed"});
    try {
        if (j.contains("levels")) {
            const auto& s = j.at("levels");
            check_keys(s, "levels", {"Delta"});
            assign(s, "Delta", cfg.sys.levels.Delta);
        }
        if (j.contains("drive")) {
            const auto& s = j.at("drive");
            check_keys(s, "drive",
                       {"Omega31", "Omega42", "DeltaPrime", "delta31", "delta54",
                        "phi", "polarization", "omega_a_minus_omega_c"});
            if (s.contains("Omega31"))
                cfg.sys.drive.Omega31 = get_complex(s.at("Omega31"), "drive.Omega31");
            if (s.contains("Omega42"))
                cfg.sys.drive.Omega42 = get_complex(s.at("Omega42"), "drive.Omega42");
            assign(s, "DeltaPrime", cfg.sys.drive.DeltaPrime);
            assign(s, "delta31", cfg.sys.drive.delta31);
            assign(s, "delta54", cfg.sys.drive.delta54);
            assign(s, "phi", cfg.sys.drive.phi);
            assign(s, "omega_a_minus_omega_c", cfg.sys.drive.omega_a_minus_omega_c);
            if (s.contains("polarization")) {
                const auto p = s.at("polarization").get<std::string>();
                if (p == "sigma_minus")
                    cfg.sys.drive.pol = Polarization::sigma_minus;
                else if (p == "sigma_plus")
                    cfg.sys.drive.pol = Polarization::sigma_plus;
                else
                    throw ConfigError(
                        "drive.polarization must be \"sigma_minus\" or \"sigma_plus\"");
            }
        }
        if (j.contains("decay")) {
            const auto& s = j.at("decay");
            check_keys(s, "decay", {"gamma", "gamma_C"});
            if (s.contains("gamma")) {
                const auto& rows = s.at("gamma");
                if (!rows.is_array() || rows.size() != 5)
                    throw ConfigError("decay.gamma must be a 5x5 array");
                for (int a = 0; a < 5; ++a) {
                    const auto& row = rows[a];
                    if (!row.is_array() || row.size() != 5)
                        throw ConfigError("decay.gamma must be a 5x5 array");
                    for (int b = 0; b < 5; ++b)
                        cfg.sys.decay.gamma(a, b) = row[b].get<double>();
                }
            }
            assign(s, "gamma_C", cfg.sys.decay.gamma_C);
        }
        if (j.contains("medium")) {
            const auto& s = j.at("medium");
            check_keys(s, "medium", {"N", "lambda_um", "gamma_abs"});
            assign(s, "N", cfg.sys.medium.N);
            assign(s, "lambda_um", cfg.sys.medium.lambda_um);
            assign(s, "gamma_abs", cfg.sys.medium.gamma_abs);
        }
        if (j.contains("probe")) {
            const auto& s = j.at("probe");
            check_keys(s, "probe", {"w_E_grid", "w_B"});
            assign(s, "w_E_grid", cfg.sys.probe.w_E_grid);
            assign(s, "w_B", cfg.sys.probe.w_B);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            check_keys(s, "sweep", {"min", "max", "count"});
            assign(s, "min", cfg.sweep.min);
            assign(s, "max", cfg.sweep.max);
            assign(s, "count", cfg.sweep.count);
        }
        assign(j, "pump_rates", cfg.pump_rates);
        if (j.contains("solver")) {
            const auto& s = j.at("solver");
            check_keys(s, "solver",
                       {"method", "algorithm", "atol", "eta", "t_max",
                        "max_iterations", "damping"});
            if (s.contains("method")) {
                const auto m = s.at("method").get<std::string>();
                if (m == "integrate")
                    cfg.solver.method = SteadyMethod::time_integration;
                else if (m == "scf")
                    cfg.solver.method = SteadyMethod::self_consistent;
                else
                    throw ConfigError(
                        "solver.method must be \"integrate\" or \"scf\"");
            }
            if (s.contains("algorithm")) {
                const auto a = s.at("algorithm").get<std::string>();
                if (a == "newton")
                    cfg.solver.scf_algorithm = ScfAlgorithm::newton;
                else if (a == "damped_picard")
                    cfg.solver.scf_algorithm = ScfAlgorithm::damped_picard;
                else
                    throw ConfigError(
                        "solver.algorithm must be \"newton\" or \"damped_picard\"");
            }
            assign(s, "atol", cfg.solver.atol);
            assign(s, "eta", cfg.solver.eta);
            assign(s, "t_max", cfg.solver.t_max);
            assign(s, "max_iterations", cfg.solver.max_iterations);
            assign(s, "damping", cfg.solver.damping);
        }
        assign(j, "phases", cfg.phases);
        assign(j, "workers", cfg.workers);
        assign(j, "seed", cfg.seed);
        if (j.contains("output")) {
            const auto& s = j.at("output");
            check_keys(s, "output", {"path", "format"});
            assign(s, "path", cfg.output.path);
            assign(s, "format", cfg.output.format);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid configuration value: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json config_to_json(const RunConfig& cfg) {
    auto cpx = [](complexd z) -> ordered_json {
        if (z.imag() == 0.0) return z.real();
        return ordered_json::array({z.real(), z.imag()});
    };
    ordered_json j;
    j["levels"] = {{"Delta", cfg.sys.levels.Delta}};
    j["drive"] = {
        {"Omega31", cpx(cfg.sys.drive.Omega31)},
        {"Omega42", cpx(cfg.sys.drive.Omega42)},
        {"DeltaPrime", cfg.sys.drive.DeltaPrime},
        {"delta31", cfg.sys.drive.delta31},
        {"delta54", cfg.sys.drive.delta54},
        {"phi", cfg.sys.drive.phi},
        {"polarization", cfg.sys.drive.pol == Polarization::sigma_minus
                             ? "sigma_minus"
                             : "sigma_plus"},
        {"omega_a_minus_omega_c", cfg.sys.drive.omega_a_minus_omega_c},
    };
    ordered_json gm = ordered_json::array();
    for (int a = 0; a < 5; ++a) {
        ordered_json row = ordered_json::array();
        for (int b = 0; b < 5; ++b) row.push_back(cfg.sys.decay.gamma(a, b));
        gm.push_back(row);
    }
    j["decay"] = {{"gamma", gm}, {"gamma_C", cfg.sys.decay.gamma_C}};
    j["medium"] = {{"N", cfg.sys.medium.N},
                   {"lambda_um", cfg.sys.medium.lambda_um},
                   {"gamma_abs", cfg.sys.medium.gamma_abs}};
    j["probe"] = {{"w_E_grid", cfg.sys.probe.w_E_grid},
                  {"w_B", cfg.sys.probe.w_B}};
    j["sweep"] = {{"min", cfg.sweep.min},
                  {"max", cfg.sweep.max},
                  {"count", cfg.sweep.count}};
    j["pump_rates"] = cfg.pump_rates;
    j["solver"] = {
        {"method", cfg.solver.method == SteadyMethod::time_integration
                       ? "integrate"
                       : "scf"},
        {"algorithm", cfg.solver.scf_algorithm == ScfAlgorithm::newton
                          ? "newton"
                          : "damped_picard"},
        {"atol", cfg.solver.atol},
        {"eta", cfg.solver.eta},
        {"t_max", cfg.solver.t_max},
        {"max_iterations", cfg.solver.max_iterations},
        {"damping", cfg.solver.damping},
    };
    j["phases"] = cfg.phases;
    j["workers"] = cfg.workers;
    j["output"] = {{"path", cfg.output.path}, {"format", cfg.output.format}};
    j["seed"] = cfg.seed;
    return j;
}

SweepResult run_sweep(const RunConfig& cfg) {
    cfg.validate();
    const auto deltas = cfg.delta_values();
    const size_t ncols = deltas.size();
    const size_t nrates = cfg.pump_rates.size();

    std::vector<std::vector<SweepRow>> cols(ncols);
    std::atomic<size_t> next{0};
    std::atomic<bool> flagged{false};

    auto column_job = [&]() {
        for (size_t i = next.fetch_add(1); i < ncols; i = next.fetch_add(1)) {
            const double delta = deltas[i];
            auto& rows = cols[i];
            rows.reserve(nrates);
            // Collect the converged points of this column, then thread the
            // branch along the ascending pump rates in one pass.
            std::vector<std::pair<double, ResponseCoefficients>> path;
            std::vector<size_t> path_rows;
            for (double r : cfg.pump_rates) {
                SweepRow row;
                row.delta21 = delta;
                row.r = r;
                SystemConfig sc = cfg.sys;
                sc.drive.delta21 = delta;
                sc.decay.r = r;
                try {
                    row.rc = phase_averaged_response(sc, cfg.phases, cfg.solver);
                    row.converged = true;
                    path.emplace_back(r, row.rc);
                    path_rows.push_back(rows.size());
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                rows.push_back(std::move(row));
            }
            if (path.empty()) continue;
            const BranchPath bp = track_branch(path, cfg.sys.drive.pol);
            for (size_t k = 0; k < bp.steps.size(); ++k) {
                auto& row = rows[path_rows[k]];
                row.pt = bp.steps[k].pt;
                row.pt.delta21 = delta;
                row.pt.r = row.r;
                if (bp.steps[k].flagged || row.pt.branch_point_warning)
                    flagged.store(true, std::memory_order_relaxed);
            }
        }
    };

    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    unsigned nworkers =
        cfg.workers > 0 ? static_cast<unsigned>(cfg.workers) : hw;
    nworkers = std::min<unsigned>(nworkers,
                                  static_cast<unsigned>(std::max<size_t>(ncols, 1)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < nworkers; ++t) pool.emplace_back(column_job);
    column_job();
    for (auto& th : pool) th.join();

    SweepResult res;
    res.any_flagged = flagged.load();
    for (auto& c : cols)
        for (auto& row : c) res.rows.push_back(std::move(row));
    std::stable_sort(res.rows.begin(), res.rows.end(),
                     [](const SweepRow& a, const SweepRow& b) {
                         if (a.r != b.r) return a.r < b.r;
                         return a.delta21 < b.delta21;
                     });

    size_t converged = 0;
    for (const auto& row : res.rows) converged += row.converged ? 1 : 0;
    res.metadata["tool"] = "nirgas";
    res.metadata["version"] = tool_version;
    res.metadata["config"] = config_to_json(cfg);
    res.metadata["rows"] = res.rows.size();
    res.metadata["converged_rows"] = converged;
    res.metadata["flagged"] = res.any_flagged;
    return res;
}

namespace {

std::string fmt_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_fom(double v) {
    return std::isinf(v) ? "inf" : fmt_num(v);
}

const char* branch_name(Branch b) {
    return b == Branch::principal ? "principal" : "negated";
}

} // namespace

void export_csv(const SweepResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << "# nirgas " << tool_version << "\n";
    if (res.metadata.contains("config"))
        out << "# config: " << res.metadata.at("config").dump() << "\n";
    out << "# flagged: " << (res.any_flagged ? "true" : "false") << "\n";
    out << csv_header << "\n";
    for (const auto& row : res.rows) {
        std::array<std::string, 17> f{};
        f[0] = fmt_num(row.delta21);
        f[1] = fmt_num(row.r);
        if (row.converged) {
            const complexd eps = row.rc.eps(), mu = row.rc.mu();
            f[2] = fmt_num(eps.real());
            f[3] = fmt_num(eps.imag());
            f[4] = fmt_num(mu.real());
            f[5] = fmt_num(mu.imag());
            f[6] = fmt_num(row.rc.xiEH.real());
            f[7] = fmt_num(row.rc.xiEH.imag());
            f[8] = fmt_num(row.rc.xiHE.real());
            f[9] = fmt_num(row.rc.xiHE.imag());
            f[10] = fmt_num(row.pt.n.real());
            f[11] = fmt_num(row.pt.n.imag());
            f[12] = fmt_fom(row.pt.fom);
            f[13] = branch_name(row.pt.branch);
            f[14] = fmt_num(row.rc.r2E);
            f[15] = fmt_num(row.rc.r2M);
        }
        f[16] = row.converged ? "1" : "0";
        for (size_t k = 0; k < f.size(); ++k)
            out << f[k] << (k + 1 < f.size() ? "," : "\n");
    }
    if (!out) throw std::runtime_error("write failed: " + path);
}

void export_json(const SweepResult& res, const std::string& path) {
    ordered_json doc;
    doc["metadata"] = res.metadata;
    ordered_json rows = ordered_json::array();
    for (const auto& row : res.rows) {
        ordered_json r;
        r["delta21"] = row.delta21;
        r["r"] = row.r;
        r["converged"] = row.converged;
        if (row.converged) {
            auto cpx = [](complexd z) {
                return ordered_json::array({z.real(), z.imag()});
            };
            r["eps"] = cpx(row.rc.eps());
            r["mu"] = cpx(row.rc.mu());
            r["xiEH"] = cpx(row.rc.xiEH);
            r["xiHE"] = cpx(row.rc.xiHE);
            r["n"] = cpx(row.pt.n);
            if (std::isinf(row.pt.fom))
                r["fom"] = "inf"; // JSON has no infinity literal
            else
                r["fom"] = row.pt.fom;
            r["branch"] = branch_name(row.pt.branch);
            r["r2_e"] = row.rc.r2E;
            r["r2_m"] = row.rc.r2M;
        } else {
            r["error"] = row.error;
        }
        rows.push_back(std::move(r));
    }
    doc["rows"] = std::move(rows);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << doc.dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

} // namespace nirgas
