#include "cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "loewner/errors.hpp"
#include "loewner/evolution.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/recovery.hpp"
#include "loewner/serialize.hpp"
#include "loewner/solver.hpp"
#include "loewner/variational.hpp"

namespace loewner::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitAdvisory = 2;
constexpr int kExitInput = 3;

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << content;
}

CVector cvector_from_json(const json& j) {
    CVector v;
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2) throw SchemaError("point: expected [re, im] entries");
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    if (v.empty()) throw SchemaError("point: empty");
    return v;
}

SolverConfig solver_from_json(const json& j) {
    SolverConfig cfg;
    if (!j.is_object()) return cfg;
    cfg.rel_tol = j.value("rel_tol", cfg.rel_tol);
    cfg.abs_tol = j.value("abs_tol", cfg.abs_tol);
    cfg.max_step = j.value("max_step", cfg.max_step);
    cfg.escape_margin = j.value("escape_margin", cfg.escape_margin);
    cfg.escape_kobayashi_threshold =
        j.value("escape_kobayashi_threshold", cfg.escape_kobayashi_threshold);
    if (j.contains("singularity_policy")) {
        const std::string policy = j.at("singularity_policy").get<std::string>();
        if (policy == "substitute")
            cfg.singularity_policy = SingularityPolicy::substitute;
        else if (policy == "offset")
            cfg.singularity_policy = SingularityPolicy::offset;
        else
            throw SchemaError("solver.singularity_policy: expected 'substitute' or 'offset'");
    }
    return cfg;
}

// named closed-form families on the unit disc used as verifier controls
EvolutionFamilyHandle closed_form_by_name(const std::string& name) {
    const Domain disc = Domain::unit_disc();
    auto make = [&](std::function<CVector(double, double, const CVector&)> map) {
        return EvolutionFamilyHandle::closed_form(disc, std::move(map));
    };
    if (name == "identity") return make([](double, double, const CVector& z) { return z; });
    if (name == "radial_exp")
        return make([](double s, double t, const CVector& z) {
            return CVector{z[0] * std::exp(-(t - s))};
        });
    if (name == "tanh")
        return make([](double s, double t, const CVector& z) {
            return CVector{std::tanh(Complex(t - s, 0.0) + std::atanh(z[0]))};
        });
    if (name == "broken_composition")
        return make([](double s, double t, const CVector& z) {
            return CVector{z[0] * std::exp(-(t - s) * (t - s))};
        });
    if (name == "expanding")
        return make([](double s, double t, const CVector& z) {
            return CVector{z[0] * std::exp(t - s)};
        });
    if (name == "square")
        return make([](double s, double t, const CVector& z) {
            return CVector{z[0] * z[0] * std::exp(-(t - s))};
        });
    if (name == "real_part")
        return make([](double s, double t, const CVector& z) {
            return CVector{Complex(z[0].real() * std::exp(-(t - s)), 0.0)};
        });
    throw SchemaError("family: unknown closed-form name '" + name + "'");
}

EvolutionFamilyHandle family_from_json(const json& j, const SolverConfig& cfg) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "field_backed")
        return EvolutionFamilyHandle::field_backed(field_from_json(j.at("field").dump()), cfg);
    if (type == "closed_form") return closed_form_by_name(j.at("name").get<std::string>());
    throw SchemaError("family.type: expected 'field_backed' or 'closed_form'");
}

struct Context {
    json config;
    fs::path out;
    std::uint64_t seed = kDefaultSeed;
    std::optional<double> tol_override;

    double tol_or(double fallback) const { return tol_override.value_or(fallback); }
    FieldSpec field() const { return field_from_json(config.at("field").dump()); }
    SolverConfig solver() const {
        return config.contains("solver") ? solver_from_json(config.at("solver")) : SolverConfig{};
    }
};

int cmd_solve(const Context& ctx) {
    const FieldSpec field = ctx.field();
    const double s = ctx.config.value("s", 0.0);
    const double t_end = ctx.config.at("t_end").get<double>();
    const CVector z0 = cvector_from_json(ctx.config.at("z0"));
    const Trajectory traj = integrate(field, field.domain(), s, z0, t_end, ctx.solver());
    write_file(ctx.out / "trajectory.csv", trajectory_to_csv(traj));
    write_file(ctx.out / "trajectory_meta.json", trajectory_meta_to_json(traj));
    // escape is a result, not an error
    return kExitPass;
}

int cmd_picard(const Context& ctx) {
    const FieldSpec field = ctx.field();
    const double s = ctx.config.value("s", 0.0);
    const CVector z0 = cvector_from_json(ctx.config.at("z0"));
    const json jp = ctx.config.value("picard", json::object());
    const double delta = jp.value("delta", 0.25);
    const std::size_t n_max = jp.value("n_max", std::size_t{64});
    const double tol = ctx.tol_or(jp.value("tol", 1e-12));

    const Trajectory fixed_point = picard_iterate(field, s, z0, delta, n_max, tol);
    write_file(ctx.out / "picard.csv", trajectory_to_csv(fixed_point));
    write_file(ctx.out / "picard_meta.json", trajectory_meta_to_json(fixed_point));

    const Trajectory reference = integrate(field, field.domain(), s, z0, s + delta, ctx.solver());
    double sup = 0.0;
    for (const auto& [t, x] : fixed_point.samples) sup = std::max(sup, distance(x, reference.eval(t)));
    json agreement{{"sup_difference", sup}, {"delta", delta}};
    write_file(ctx.out / "agreement.json", agreement.dump(2));
    return kExitPass;
}

int cmd_herglotz(const Context& ctx) {
    const FieldSpec field = ctx.field();
    const Domain domain = field.domain();
    const json js = ctx.config.value("samples", json::object());
    const std::size_t n_pairs = js.value("n_pairs", std::size_t{64});
    const double horizon = js.value("horizon", 1.0);
    const double tol = ctx.tol_or(1e-9);
    std::vector<double> times;
    if (js.contains("times"))
        times = js.at("times").get<std::vector<double>>();
    else
        times = herglotz_time_samples(field, horizon);
    const HerglotzReport report = check_herglotz(field, domain, n_pairs, times, tol, ctx.seed);
    write_file(ctx.out / "herglotz_report.json", herglotz_report_to_json(report));
    if (report.verdict == Verdict::fail) return kExitFail;
    if (report.verdict == Verdict::advisory) return kExitAdvisory;
    return kExitPass;
}

int cmd_verify_family(const Context& ctx) {
    const SolverConfig cfg = ctx.solver();
    const EvolutionFamilyHandle handle = family_from_json(ctx.config.at("family"), cfg);
    const json js = ctx.config.value("samples", json::object());
    const double horizon = js.value("horizon", 1.0);
    const double tol = ctx.tol_or(1e-6);
    const double radius = js.value("radius", 0.6);
    const std::size_t grid_n = js.value("grid", std::size_t{12});

    const auto grid = sample_interior_points(handle.domain(), grid_n, radius, ctx.seed % 101);
    std::vector<TimeTriple> triples;
    if (js.contains("triples")) {
        for (const auto& e : js.at("triples")) {
            if (!e.is_array() || e.size() != 3) throw SchemaError("samples.triples: expected [s,u,t]");
            triples.push_back({e[0].get<double>(), e[1].get<double>(), e[2].get<double>()});
        }
    } else {
        for (int i = 1; i <= 5; ++i) {
            const double t = horizon * i / 5.0;
            triples.push_back({0.0, 0.5 * t, t});
        }
    }

    VerificationReport report =
        verify_axioms(handle, grid, triples, horizon, CompactSet::ball(radius), tol);

    std::vector<PointPair> pairs;
    for (std::size_t i = 0; i + 1 < grid.size(); i += 2) pairs.push_back({grid[i], grid[i + 1]});
    if (!pairs.empty()) {
        const VerificationReport contraction =
            verify_contraction(handle, pairs, 0.0, horizon, ctx.tol_or(1e-9));
        for (const auto& c : contraction.checks) report.checks.push_back(c);
    }
    const VerificationReport univalence = verify_univalence(handle, grid, 0.0, horizon);
    for (const auto& c : univalence.checks) report.checks.push_back(c);

    write_file(ctx.out / "verification_report.json", verification_report_to_json(report));
    return report.overall() ? kExitPass : kExitFail;
}

int cmd_variational(const Context& ctx) {
    const FieldSpec field = ctx.field();
    const double s = ctx.config.value("s", 0.0);
    const double t_end = ctx.config.at("t_end").get<double>();
    const CVector z0 = cvector_from_json(ctx.config.at("z0"));
    const TransportState state = transport_matrix(field, field.domain(), s, t_end, z0, ctx.solver());
    write_file(ctx.out / "transport.json", transport_to_json(state));
    const FlowDerivative deriv = flow_derivative(state, t_end);
    json jd;
    jd["t"] = t_end;
    jd["ill_conditioned"] = deriv.ill_conditioned;
    jd["condition"] = deriv.condition;
    json rows = json::array();
    for (std::size_t i = 0; i < deriv.matrix.dim(); ++i) {
        json row = json::array();
        for (std::size_t c = 0; c < deriv.matrix.dim(); ++c)
            row.push_back(json::array({deriv.matrix(i, c).real(), deriv.matrix(i, c).imag()}));
        rows.push_back(std::move(row));
    }
    jd["matrix"] = std::move(rows);
    write_file(ctx.out / "flow_derivative.json", jd.dump(2));
    return kExitPass;
}

int cmd_recover(const Context& ctx) {
    const SolverConfig cfg = ctx.solver();
    const EvolutionFamilyHandle handle = family_from_json(ctx.config.at("family"), cfg);
    const json jr = ctx.config.value("recover", json::object());
    const double h_max = jr.value("h_max", 1e-2);
    const int length = jr.value("length", 6);
    const auto hs = default_h_sequence(h_max, length);

    std::vector<CVector> zs;
    if (jr.contains("z_grid"))
        for (const auto& e : jr.at("z_grid")) zs.push_back(cvector_from_json(e));
    else
        zs = sample_interior_points(handle.domain(), 5, 0.6, ctx.seed % 103);
    std::vector<double> ts = jr.value("t_grid", std::vector<double>{0.1, 0.3, 0.5, 0.7, 0.9});

    const RecoveredField recovered = recover_on_grid(handle, zs, ts, hs);
    write_file(ctx.out / "recovered.csv", recovered_field_to_csv(recovered));
    write_file(ctx.out / "recovered.json", recovered_field_to_json(recovered));

    if (jr.contains("candidate")) {
        const FieldSpec candidate = field_from_json(jr.at("candidate").dump());
        std::vector<std::pair<CVector, double>> samples;
        for (const auto& z : zs)
            for (double t : ts) samples.emplace_back(z, t);
        const VerificationReport report =
            uniqueness_crosscheck(handle, candidate, samples, ctx.tol_or(1e-4));
        write_file(ctx.out / "uniqueness_report.json", verification_report_to_json(report));
        return report.overall() ? kExitPass : kExitFail;
    }
    return kExitPass;
}

int cmd_demo(const Context& ctx) {
    // radial end-to-end pipeline: solve, verify, recover
    const FieldSpec field = FieldSpec::radial(Domain::unit_disc(), TimeFunction::constant(1.0));
    const SolverConfig cfg;
    std::ostringstream table;
    table << "step                     result\n";
    table << "-----------------------  ------\n";
    bool all_ok = true;

    const Trajectory traj = integrate(field, field.domain(), 0.0, {Complex(0.5, 0.0)}, 1.0, cfg);
    write_file(ctx.out / "trajectory.csv", trajectory_to_csv(traj));
    write_file(ctx.out / "trajectory_meta.json", trajectory_meta_to_json(traj));
    const double solve_err = std::abs(traj.end_point()[0] - 0.5 * std::exp(-1.0));
    const bool solve_ok = traj.status == IntegrationStatus::completed && solve_err < 1e-8;
    all_ok = all_ok && solve_ok;
    table << "solve x'=-x, x(0)=0.5    " << (solve_ok ? "ok" : "FAIL") << " (|err| = "
          << solve_err << ")\n";

    const EvolutionFamilyHandle handle = EvolutionFamilyHandle::field_backed(field, cfg);
    const auto grid = sample_interior_points(field.domain(), 8, 0.6);
    std::vector<TimeTriple> triples{{0.0, 0.3, 1.0}, {0.0, 0.5, 0.8}, {0.2, 0.4, 0.9}};
    VerificationReport report = verify_axioms(handle, grid, triples, 1.0, CompactSet::ball(0.6), 1e-6);
    std::vector<PointPair> pairs;
    for (std::size_t i = 0; i + 1 < grid.size(); i += 2) pairs.push_back({grid[i], grid[i + 1]});
    const VerificationReport contraction = verify_contraction(handle, pairs, 0.0, 1.0, 1e-9);
    for (const auto& c : contraction.checks) report.checks.push_back(c);
    const VerificationReport univalence = verify_univalence(handle, grid, 0.0, 1.0);
    for (const auto& c : univalence.checks) report.checks.push_back(c);
    write_file(ctx.out / "verification_report.json", verification_report_to_json(report));
    all_ok = all_ok && report.overall();
    table << "verify evolution family  " << (report.overall() ? "ok" : "FAIL") << "\n";

    const HerglotzReport herglotz =
        check_herglotz(field, field.domain(), 32, herglotz_time_samples(field, 1.0), 1e-9, ctx.seed);
    write_file(ctx.out / "herglotz_report.json", herglotz_report_to_json(herglotz));
    all_ok = all_ok && herglotz.verdict == Verdict::pass;
    table << "herglotz classification  " << (herglotz.verdict == Verdict::pass ? "ok" : "FAIL")
          << " (worst dk = " << herglotz.worst_value << ")\n";

    std::vector<CVector> zs{{Complex(0.3, 0.0)}, {Complex(0.0, 0.4)}, {Complex(-0.2, 0.2)}};
    std::vector<double> ts{0.2, 0.5, 0.8};
    const RecoveredField recovered = recover_on_grid(handle, zs, ts, default_h_sequence());
    write_file(ctx.out / "recovered.csv", recovered_field_to_csv(recovered));
    std::vector<std::pair<CVector, double>> samples;
    for (const auto& z : zs)
        for (double t : ts) samples.emplace_back(z, t);
    const VerificationReport uniqueness = uniqueness_crosscheck(handle, field, samples, 1e-4);
    write_file(ctx.out / "uniqueness_report.json", verification_report_to_json(uniqueness));
    all_ok = all_ok && uniqueness.overall();
    table << "recover generating field " << (uniqueness.overall() ? "ok" : "FAIL") << "\n";

    std::cout << table.str();
    return all_ok ? kExitPass : kExitFail;
}

} // namespace

int run(const Options& options) {
    try {
        Context ctx;
        if (!options.config_path.empty()) {
            std::ifstream is(options.config_path);
            if (!is) {
                std::cerr << "error: cannot open config '" << options.config_path << "'\n";
                return kExitInput;
            }
            try {
                ctx.config = json::parse(is);
            } catch (const json::exception& e) {
                std::cerr << "error: config parse: " << e.what() << "\n";
                return kExitInput;
            }
            if (ctx.config.value("version", 0) != 1) {
                std::cerr << "error: config.version: expected 1\n";
                return kExitInput;
            }
        }
        std::string command = options.command;
        if (command.empty()) command = ctx.config.value("command", "");
        if (command.empty()) {
            std::cerr << "error: no command given (flag or config.command)\n";
            return kExitInput;
        }
        if (command != "demo" && ctx.config.is_null()) {
            std::cerr << "error: command '" << command << "' requires --config\n";
            return kExitInput;
        }

        ctx.out = fs::path(options.out_dir);
        fs::create_directories(ctx.out);
        const bool has_config = ctx.config.is_object();
        ctx.seed = options.seed.value_or(has_config ? ctx.config.value("seed", kDefaultSeed)
                                                    : kDefaultSeed);
        ctx.tol_override = options.tol;
        if (!ctx.tol_override && has_config && ctx.config.contains("tol"))
            ctx.tol_override = ctx.config.at("tol").get<double>();

        if (command == "solve") return cmd_solve(ctx);
        if (command == "picard") return cmd_picard(ctx);
        if (command == "herglotz-check") return cmd_herglotz(ctx);
        if (command == "verify-family") return cmd_verify_family(ctx);
        if (command == "variational") return cmd_variational(ctx);
        if (command == "recover") return cmd_recover(ctx);
        if (command == "demo") return cmd_demo(ctx);
        std::cerr << "error: unknown command '" << command << "'\n";
        return kExitInput;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const json::exception& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    }
}

} // namespace loewner::cli
