#include "convspec/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "convspec/character.hpp"
#include "convspec/fourier.hpp"
#include "convspec/measure.hpp"
#include "convspec/semidirect.hpp"
#include "convspec/serialize.hpp"
#include "convspec/spectral.hpp"

namespace convspec {
namespace {

using Json = nlohmann::ordered_json;

std::string fnv1a_hex(const std::string& text) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Json complex_exact(const ComplexRational& z) {
    return Json{{"re", format_rational(z.re)}, {"im", format_rational(z.im)}};
}

const char* tristate_str(Tristate t) {
    switch (t) {
        case Tristate::True: return "true";
        case Tristate::False: return "false";
        default: return "unknown";
    }
}

// Everything a finished task contributes to the report. `checks` holds the
// named booleans that a config's `required` list can reference; certificates
// stay exact (strings and bools only), heuristics may carry floats.
struct TaskRun {
    Json certificates = Json::object();
    Json heuristics = Json::object();
    std::map<std::string, bool> checks;
    std::string error;
    bool cap_hit = false;
};

struct RunContext {
    const AnalysisConfig& cfg;
    Parameters params;  // config parameters with CLI overrides applied
    std::filesystem::path outdir;
    bool write_files = false;
    std::vector<std::string> written;

    // Snapshots for the `report` task.
    struct Done {
        std::string name;
        std::string type;
        std::map<std::string, bool> checks;
        std::string error;
    };
    std::vector<Done> done;

    const Measure& measure_or_throw(const std::string& name, const char* field) const {
        const Measure* m = cfg.find_measure(name);
        if (m == nullptr) {
            throw ValidationError(std::string(field) + " names no declared measure: " + name);
        }
        return *m;
    }

    void write_text(const std::string& relpath, const std::string& content, TaskRun& out) {
        if (!write_files) return;
        std::filesystem::path full = outdir / relpath;
        std::filesystem::create_directories(full.parent_path());
        std::ofstream os(full);
        if (!os) throw Error("cannot write " + full.string());
        os << content;
        written.push_back(full.string());
        out.heuristics["files"].push_back(relpath);
    }
};

// ---------------------------------------------------------------------------
// check: exact structural certificates for one measure.

void run_check_task(RunContext& ctx, const TaskSpec& task, TaskRun& out) {
    const Measure& mu = ctx.measure_or_throw(task.measure, "measure");
    out.certificates["measure"] = task.measure;

    bool sa = is_selfadjoint(mu);
    bool central = is_central(mu);
    out.certificates["selfadjoint"] = sa;
    out.certificates["central"] = central;
    out.checks["selfadjoint"] = sa;
    out.checks["central"] = central;

    const auto& chars = ctx.cfg.characters;
    bool all_semi = true;
    bool all_adapted = true;
    bool all_ac = !chars.empty();
    Json char_rows = Json::array();
    for (const RealCharacter& phi : chars) {
        Json row;
        Json w = Json::array();
        for (const mpq_class& q : phi.weights()) w.push_back(format_rational(q));
        row["weights"] = std::move(w);
        bool semi = is_semi_adapted(phi, mu);
        bool adapted = semi && is_adapted(phi, mu);
        row["semi_adapted"] = semi;
        row["adapted"] = adapted;
        all_semi = all_semi && semi;
        all_adapted = all_adapted && adapted;
        if (adapted) {
            AcCriterionResult res = purely_ac_criterion(phi, mu);
            Json rj;
            rj["applicable"] = res.applicable;
            if (res.applicable) rj["constant"] = format_rational(res.constant);
            rj["conclusion"] = res.conclusion;
            row["purely_ac"] = std::move(rj);
            all_ac = all_ac && res.applicable;
        } else {
            row["purely_ac"] = Json{{"applicable", false},
                                    {"conclusion", "needs an adapted character"}};
            all_ac = false;
        }
        char_rows.push_back(std::move(row));
    }
    out.certificates["characters"] = std::move(char_rows);
    out.checks["semi_adapted"] = all_semi;
    out.checks["adapted"] = all_adapted;
    out.checks["purely_ac"] = all_ac;

    if (!task.eigenvector.empty()) {
        const Measure& f = ctx.measure_or_throw(task.eigenvector, "eigenvector");
        Json ev;
        ev["measure"] = task.eigenvector;
        try {
            KernelChainReport rep = kernel_chain_witness(mu, f, chars);
            ev["lambda"] = complex_exact(rep.lambda);
            Json ann = Json::array();
            for (bool b : rep.annihilated) ann.push_back(b);
            ev["annihilated"] = std::move(ann);
            ev["all_annihilated"] = rep.all_annihilated;
            out.checks["eigenvector_annihilated"] = rep.all_annihilated;
        } catch (const Error& e) {
            ev["error"] = e.what();
            out.checks["eigenvector_annihilated"] = false;
        }
        out.certificates["eigenvector"] = std::move(ev);
    }
}

// ---------------------------------------------------------------------------
// semidirect: symmetric-set diagnostics and the two a.c.-component routes.

void run_semidirect_task(RunContext& ctx, const TaskSpec& task, TaskRun& out) {
    const Measure* named = nullptr;
    if (!task.measure.empty()) named = &ctx.measure_or_throw(task.measure, "measure");

    if (ctx.cfg.symmetric_set) {
        const SymmetricSetData& data = *ctx.cfg.symmetric_set;
        SymmetricSetDiagnostics diag = symmetric_set_validate(data);
        Json dj;
        dj["g0_symmetric"] = diag.g0_symmetric;
        dj["tau_compatible"] = diag.tau_compatible;
        dj["counting_condition"] = diag.counting_condition;
        dj["noncompact_reach"] = tristate_str(diag.noncompact_reach);
        dj["all_pass"] = diag.all_pass;
        if (!diag.failure.empty()) dj["failure"] = diag.failure;
        out.certificates["symmetric_set"] = std::move(dj);
        out.checks["set_valid"] = diag.all_pass;
        out.checks["pair_counts"] = diag.counting_condition;
        if (named != nullptr && diag.g0_symmetric && diag.tau_compatible) {
            bool match = (symmetric_set_indicator(data) == *named);
            out.certificates["indicator_matches_measure"] = match;
        }
    }

    Measure a0 = Measure::zero(ctx.cfg.group);
    if (named != nullptr) {
        a0 = *named;
        out.certificates["measure"] = task.measure;
    } else if (ctx.cfg.symmetric_set) {
        a0 = symmetric_set_indicator(*ctx.cfg.symmetric_set);
        out.certificates["measure"] = "(symmetric set indicator)";
    } else {
        throw ValidationError("semidirect task needs a measure or a symmetric_set block");
    }

    AcRoute route;
    if (task.route == "central") {
        route = AcRoute::Central;
    } else if (task.route == "commutation") {
        route = AcRoute::Semidirect;
    } else {
        route = ctx.cfg.group.kind() == GroupKind::Semidirect ? AcRoute::Semidirect
                                                                    : AcRoute::Central;
    }
    out.certificates["route"] = route == AcRoute::Semidirect ? "commutation" : "central";

    Measure a1 = task.perturbation.empty()
                     ? Measure::zero(ctx.cfg.group)
                     : ctx.measure_or_throw(task.perturbation, "perturbation");
    if (!task.perturbation.empty()) out.certificates["perturbation"] = task.perturbation;

    AcComponentReport rep = ac_component_report(a0, a1, route);
    Json rj;
    rj["a0_selfadjoint"] = rep.a0_selfadjoint;
    rj["a1_selfadjoint"] = rep.a1_selfadjoint;
    if (route == AcRoute::Semidirect) {
        rj["commutation_condition"] = rep.commutation_condition;
        rj["a1_commutes_with_a0"] = rep.a1_commutes_with_a0;
    } else {
        rj["a0_central"] = rep.a0_central;
    }
    rj["a1_torsion_supported"] = tristate_str(rep.a1_torsion_supported);
    rj["hypotheses_pass"] = rep.hypotheses_pass;
    Json dirs = Json::array();
    for (std::size_t i : rep.nonzero_directions) dirs.push_back(i);
    rj["nonzero_directions"] = std::move(dirs);
    rj["ac_component_guaranteed"] = rep.ac_component_guaranteed;
    if (!rep.failures.empty()) {
        Json fj = Json::array();
        for (const std::string& f : rep.failures) fj.push_back(f);
        rj["failures"] = std::move(fj);
    }
    out.certificates["component"] = std::move(rj);

    out.checks["hypotheses"] = rep.hypotheses_pass;
    out.checks["ac_component"] = rep.ac_component_guaranteed;
    if (route == AcRoute::Semidirect) {
        out.checks["commutation"] = rep.commutation_condition;
    } else {
        out.checks["central"] = rep.a0_central;
    }
}

// ---------------------------------------------------------------------------
// spectrum: truncation eigendata across the radius schedule.

void run_spectrum_task(RunContext& ctx, const TaskSpec& task, TaskRun& out) {
    const Measure& mu = ctx.measure_or_throw(task.measure, "measure");
    SpectralOptions so;
    so.radii = task.radii.empty() ? ctx.params.radii : task.radii;
    so.ball_cap = ctx.params.ball_cap;
    so.dense_cap = ctx.params.dense_cap;
    so.cluster_tol = ctx.params.cluster_tol;
    so.kernel_tol = ctx.params.kernel_tol;
    SpectralReport rep = run_spectral_analysis(mu, so);

    out.heuristics["measure"] = task.measure;
    Json slices = Json::array();
    bool weights_ok = true;
    for (std::size_t i = 0; i < rep.slices.size(); ++i) {
        const RadiusSlice& s = rep.slices[i];
        Json sj;
        sj["radius"] = s.radius;
        sj["ball_size"] = s.ball_size;
        sj["weight_sum"] = rep.weight_sum_per_radius[i];
        sj["kernel_weight"] = rep.kernel_weight_per_radius[i];
        if (!s.eigen.eigenvalues.empty()) {
            sj["min_eigenvalue"] = s.eigen.eigenvalues.front();
            sj["max_eigenvalue"] = s.eigen.eigenvalues.back();
        }
        weights_ok = weights_ok && std::abs(rep.weight_sum_per_radius[i] - 1.0) <= 1e-10;
        slices.push_back(std::move(sj));
    }
    out.heuristics["slices"] = std::move(slices);
    out.heuristics["hull"] = Json{{"min", rep.hull_min},
                                  {"max", rep.hull_max},
                                  {"norm_l1", rep.norm_l1},
                                  {"within_norm", rep.hull_within_norm}};
    Json pm;
    pm["label"] = rep.point_masses.label;
    pm["max_weight_per_radius"] = rep.point_masses.max_weight_per_radius;
    pm["max_weight_decreasing"] = rep.point_masses.max_weight_decreasing;
    Json clusters = Json::array();
    for (const PointMassCluster& c : rep.point_masses.clusters) {
        clusters.push_back(Json{{"location", c.location},
                                {"weight_per_radius", c.weight_per_radius},
                                {"present_in_all", c.present_in_all},
                                {"decreasing", c.decreasing}});
    }
    pm["clusters"] = std::move(clusters);
    out.heuristics["point_masses"] = std::move(pm);
    out.heuristics["kernel"] = Json{{"tol", rep.kernel_tol},
                                    {"weight_at_largest", rep.kernel_weight_at_largest}};

    bool moments_ok = true;
    Json mtab = Json::array();
    for (std::size_t i = 0; i < rep.moments.size(); ++i) {
        for (const MomentRow& r : rep.moments[i]) {
            mtab.push_back(Json{{"radius", rep.slices[i].radius},
                                {"n", r.n},
                                {"exact", r.exact_value},
                                {"matrix", r.matrix_value},
                                {"rel_diff", r.rel_diff}});
            moments_ok = moments_ok && r.rel_diff <= 1e-8;
        }
    }
    out.heuristics["moments"] = std::move(mtab);

    out.checks["hull"] = rep.hull_within_norm;
    out.checks["weights"] = weights_ok;
    out.checks["moments"] = moments_ok;

    if (ctx.cfg.output.csv) {
        for (const RadiusSlice& s : rep.slices) {
            std::ostringstream os;
            os << "eigenvalue,weight\n" << std::setprecision(17);
            for (std::size_t j = 0; j < s.eigen.eigenvalues.size(); ++j) {
                os << s.eigen.eigenvalues[j] << "," << s.eigen.weights[j] << "\n";
            }
            ctx.write_text(task.name + "_r" + std::to_string(s.radius) + ".csv", os.str(), out);
        }
    }
}

// ---------------------------------------------------------------------------
// moments: exact return values, plus the matrix crosscheck inside the window.

void run_moments_task(RunContext& ctx, const TaskSpec& task, TaskRun& out) {
    const Measure& mu = ctx.measure_or_throw(task.measure, "measure");
    const std::vector<int>& radii = task.radii.empty() ? ctx.params.radii : task.radii;
    int rmax = 0;
    for (int r : radii) rmax = std::max(rmax, r);
    int nmax = task.nmax >= 0 ? task.nmax : std::min(rmax, 8);
    rmax = std::max(rmax, nmax);

    out.certificates["measure"] = task.measure;
    Json exact_rows = Json::array();
    GroupElement e = identity(mu.spec());
    Measure power = Measure::delta(e);
    for (int n = 0; n <= nmax; ++n) {
        exact_rows.push_back(Json{{"n", n}, {"value", complex_exact(power.at(e))}});
        if (n < nmax) power = convolve(mu, power, ctx.params.support_cap);
    }
    out.certificates["values"] = std::move(exact_rows);

    if (is_selfadjoint(mu)) {
        TruncatedOperator op = build_truncation(mu, rmax, ctx.params.ball_cap);
        std::vector<MomentRow> rows = moment_crosscheck(op, nmax, ctx.params.support_cap);
        bool ok = true;
        Json tab = Json::array();
        for (const MomentRow& r : rows) {
            tab.push_back(Json{{"n", r.n},
                               {"exact", r.exact_value},
                               {"matrix", r.matrix_value},
                               {"abs_diff", r.abs_diff},
                               {"rel_diff", r.rel_diff}});
            ok = ok && r.rel_diff <= 1e-8;
        }
        out.heuristics["radius"] = rmax;
        out.heuristics["crosscheck"] = std::move(tab);
        out.checks["window"] = ok;
    } else {
        out.heuristics["note"] = "matrix crosscheck skipped: the measure is not self-adjoint";
    }
}

// ---------------------------------------------------------------------------
// fourier: dual symbol, derivative identity at random duals, value scan.

DualPoint random_dual_point(const DualStructure& dual, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uni(0.0, 2.0 * 3.14159265358979323846);
    DualPoint xi;
    xi.angles.reserve(dual.moduli.size());
    for (long long m : dual.moduli) {
        if (m == 0) {
            xi.angles.push_back(uni(rng));
        } else {
            long long residue = static_cast<long long>(rng() % static_cast<std::uint64_t>(m));
            xi.angles.push_back(2.0 * 3.14159265358979323846 *
                                static_cast<double>(residue) / static_cast<double>(m));
        }
    }
    return xi;
}

void run_fourier_task(RunContext& ctx, const TaskSpec& task, TaskRun& out) {
    const Measure& m0 = ctx.measure_or_throw(task.measure, "measure");
    Measure m1 = task.perturbation.empty()
                     ? Measure::zero(ctx.cfg.group)
                     : ctx.measure_or_throw(task.perturbation, "perturbation");
    DualStructure dual = dual_structure(ctx.cfg.group);

    out.certificates["measure"] = task.measure;
    if (!task.perturbation.empty()) out.certificates["perturbation"] = task.perturbation;
    Json moduli = Json::array();
    for (long long m : dual.moduli) moduli.push_back(m);
    out.certificates["dual_moduli"] = std::move(moduli);

    DualSpectrumReport rep = dual_spectrum_report(m0, m1);
    Json rj;
    rj["m0_selfadjoint"] = rep.m0_selfadjoint;
    rj["m1_selfadjoint"] = rep.m1_selfadjoint;
    rj["torsion_hypothesis"] = rep.torsion_hypothesis;
    rj["hypotheses_pass"] = rep.hypotheses_pass;
    Json dirs = Json::array();
    for (std::size_t i : rep.nonzero_directions) dirs.push_back(i);
    rj["nonzero_directions"] = std::move(dirs);
    rj["constraint_available"] = rep.constraint_available;
    rj["conclusion"] = rep.conclusion;
    if (!rep.failures.empty()) {
        Json fj = Json::array();
        for (const std::string& f : rep.failures) fj.push_back(f);
        rj["failures"] = std::move(fj);
    }
    out.certificates["dual_report"] = std::move(rj);
    out.checks["dual_hypotheses"] = rep.hypotheses_pass;
    out.checks["nonzero_direction"] = rep.constraint_available;

    std::mt19937_64 rng(ctx.params.seed);
    int points = std::max(task.dual_points, 0);
    int runs = 0;
    int confirmed = 0;
    double min_slope = std::numeric_limits<double>::infinity();
    bool any_slope = false;
    for (int p = 0; p < points; ++p) {
        DualPoint xi = random_dual_point(dual, rng);
        for (const RealCharacter& phi : ctx.cfg.characters) {
            DerivativeReport dr = derivative_identity_check(m0, phi, xi);
            ++runs;
            if (dr.order_confirmed) ++confirmed;
            if (!dr.rows.empty()) {
                min_slope = std::min(min_slope, dr.slope);
                any_slope = true;
            }
        }
    }
    Json der;
    der["points"] = points;
    der["runs"] = runs;
    der["confirmed"] = confirmed;
    der["all_confirmed"] = (confirmed == runs);
    if (any_slope) der["min_slope"] = min_slope;
    out.heuristics["derivative_identity"] = std::move(der);
    out.checks["derivative"] = (confirmed == runs);

    if (task.scan) {
        ScanOptions sc;
        sc.grid = ctx.params.grid;
        sc.dual_cap = ctx.params.ball_cap;
        ScanFindings sf = point_spectrum_scan(m0, sc);
        Json vj = Json::array();
        for (const PointSpectrumValue& v : sf.values) {
            vj.push_back(Json{{"re", v.value.real()},
                              {"im", v.value.imag()},
                              {"multiplicity", v.multiplicity},
                              {"exact", v.exact}});
        }
        out.heuristics["scan"] =
            Json{{"exact", sf.exact}, {"note", sf.note}, {"values", std::move(vj)}};
    }

    if (ctx.cfg.output.csv && dual.torus_dimensions() == 1) {
        std::size_t slot = 0;
        while (slot < dual.moduli.size() && dual.moduli[slot] != 0) ++slot;
        std::ostringstream os;
        os << "theta,re,im\n" << std::setprecision(17);
        const int samples = 512;
        for (int k = 0; k < samples; ++k) {
            double theta = 2.0 * 3.14159265358979323846 * k / samples;
            DualPoint xi;
            xi.angles.assign(dual.moduli.size(), 0.0);
            xi.angles[slot] = theta;
            std::complex<double> val = symbol_eval(m0, xi);
            os << theta << "," << val.real() << "," << val.imag() << "\n";
        }
        ctx.write_text(task.name + "_symbol.csv", os.str(), out);
    }
}

// ---------------------------------------------------------------------------
// report: roll-up of everything that ran before this task.

void run_report_task(RunContext& ctx, const TaskSpec&, TaskRun& out) {
    Json rows = Json::array();
    int passed = 0;
    int failed = 0;
    for (const RunContext::Done& d : ctx.done) {
        Json checks = Json::object();
        for (const auto& [key, ok] : d.checks) {
            checks[key] = ok;
            (ok ? passed : failed) += 1;
        }
        Json row;
        row["name"] = d.name;
        row["type"] = d.type;
        row["status"] = d.error.empty() ? "ok" : "error";
        if (!d.error.empty()) row["error"] = d.error;
        row["checks"] = std::move(checks);
        rows.push_back(std::move(row));
    }
    out.heuristics["tasks"] = std::move(rows);
    out.heuristics["checks_passed"] = passed;
    out.heuristics["checks_failed"] = failed;
}

void dispatch(RunContext& ctx, const TaskSpec& task, TaskRun& out) {
    if (task.type == "check") {
        run_check_task(ctx, task, out);
    } else if (task.type == "semidirect") {
        run_semidirect_task(ctx, task, out);
    } else if (task.type == "spectrum") {
        run_spectrum_task(ctx, task, out);
    } else if (task.type == "moments") {
        run_moments_task(ctx, task, out);
    } else if (task.type == "fourier") {
        run_fourier_task(ctx, task, out);
    } else if (task.type == "report") {
        run_report_task(ctx, task, out);
    } else {
        throw ValidationError("unknown task type: " + task.type);
    }
}

}  // namespace

RunResult run(const AnalysisConfig& cfg, const RunOptions& opts) {
    RunContext ctx{cfg, cfg.parameters, {}, opts.write_files, {}, {}};
    if (!opts.radii_override.empty()) ctx.params.radii = opts.radii_override;
    if (opts.cap_override > 0) ctx.params.ball_cap = opts.cap_override;
    ctx.outdir = opts.out_override.empty() ? cfg.output.directory : opts.out_override;

    RunResult result;
    Json& report = result.report;
    report["schema"] = "convspec-report/1";
    report["provenance"] = Json{{"config_hash", fnv1a_hex(cfg.source_text)},
                                {"version", "0.1.0"},
                                {"timestamp", utc_timestamp()}};
    report["group"] = cfg.group.describe();
    Json task_rows = Json::array();
    Json certificates = Json::object();
    Json heuristics = Json::object();

    bool cap_hit = false;
    bool aborted = false;
    for (const TaskSpec& task : cfg.tasks) {
        if (aborted) {
            task_rows.push_back(Json{{"name", task.name}, {"type", task.type},
                                     {"status", "skipped"}});
            for (const std::string& key : task.required) {
                result.required_failures.push_back(task.name + ":" + key);
            }
            continue;
        }
        auto t0 = std::chrono::steady_clock::now();
        TaskRun tr;
        try {
            dispatch(ctx, task, tr);
        } catch (const CapExceededError& e) {
            tr.error = e.what();
            tr.cap_hit = true;
        } catch (const std::exception& e) {
            tr.error = e.what();
        }
        auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
        std::cerr << "[convspec] " << task.type << " task '" << task.name << "' finished in "
                  << ms << " ms" << (tr.error.empty() ? "" : " (error)") << "\n";

        Json row;
        row["name"] = task.name;
        row["type"] = task.type;
        row["status"] = tr.error.empty() ? "ok" : "error";
        if (!tr.error.empty()) row["error"] = tr.error;
        task_rows.push_back(std::move(row));
        if (!tr.certificates.empty()) certificates[task.name] = std::move(tr.certificates);
        if (!tr.heuristics.empty()) heuristics[task.name] = std::move(tr.heuristics);

        for (const std::string& key : task.required) {
            auto it = tr.checks.find(key);
            if (it == tr.checks.end() || !it->second) {
                result.required_failures.push_back(task.name + ":" + key);
            }
        }
        cap_hit = cap_hit || tr.cap_hit;
        ctx.done.push_back({task.name, task.type, std::move(tr.checks), tr.error});
        if (!tr.error.empty() && opts.fail_fast) aborted = true;
    }

    report["tasks"] = std::move(task_rows);
    report["certificates"] = std::move(certificates);
    report["heuristics"] = std::move(heuristics);
    Json failed = Json::array();
    for (const std::string& f : result.required_failures) failed.push_back(f);
    report["required"] = Json{{"failed", std::move(failed)},
                              {"all_passed", result.required_failures.empty()}};

    if (!result.required_failures.empty()) {
        result.exit_code = kExitRequired;
    } else if (cap_hit) {
        result.exit_code = kExitCap;
    } else {
        result.exit_code = kExitOk;
    }
    report["exit_code"] = result.exit_code;

    result.written_files = ctx.written;
    if (opts.write_files && cfg.output.json) {
        std::filesystem::create_directories(ctx.outdir);
        std::filesystem::path path = ctx.outdir / "report.json";
        std::ofstream os(path);
        if (!os) throw Error("cannot write " + path.string());
        os << report.dump(2) << "\n";
        result.written_files.push_back(path.string());
    }
    return result;
}

}  // namespace convspec
