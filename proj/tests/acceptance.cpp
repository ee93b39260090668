// Acceptance battery: nine end-to-end checks, one summary line each, exit
// status = number of failures. Tolerances are pinned next to each check.
#include <chrono>
#include <cmath>
#include <complex>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "convspec/config.hpp"
#include "convspec/fourier.hpp"
#include "convspec/runner.hpp"
#include "convspec/semidirect.hpp"
#include "convspec/spectral.hpp"
#include "test_util.hpp"

using namespace convspec;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kMomentRelTol = 1e-8;
constexpr double kEigenTol = 1e-8;
constexpr double kSymbolTol = 1e-8;
constexpr double kPersistentMassTol = 1e-6;
constexpr double kMaxWeightCeiling = 0.2;

int g_failures = 0;

// Runs one criterion, enforcing an optional wall-clock budget.
template <typename Fn>
void criterion(int num, const std::string& label, double time_limit_s, Fn&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string detail;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (ok && time_limit_s > 0.0 && secs >= time_limit_s) {
        ok = false;
        std::ostringstream os;
        os << "over time budget (" << secs << " s >= " << time_limit_s << " s)";
        detail = os.str();
    }
    std::ostringstream line;
    line << (ok ? "[PASS]" : "[FAIL]") << " criterion " << num << ": " << label << " ("
         << std::fixed << std::setprecision(2) << secs << " s)";
    std::cout << line.str() << "\n";
    if (!ok) {
        if (!detail.empty()) std::cout << "       " << detail << "\n";
        ++g_failures;
    }
}

Measure lattice_walk() {
    GroupSpec z = GroupSpec::int_lattice(1);
    return Measure::indicator(z, {make_lattice_element(z, {1}), make_lattice_element(z, {-1})});
}

Measure free_adjacency() {
    GroupSpec f2 = GroupSpec::free_group(2);
    std::vector<GroupElement> sym;
    for (const GroupElement& g : generators(f2)) {
        sym.push_back(g);
        sym.push_back(inverse(g));
    }
    return Measure::indicator(f2, sym);
}

GroupSpec torsion_line() {
    return GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::int_lattice(1));
}

GroupSpec twisted_s3_z() {
    GroupSpec s3 = GroupSpec::symmetric(3);
    return GroupSpec::semidirect(s3, GroupSpec::int_lattice(1),
                                 ActionSpec::conjugation_by(parse_element(s3, "a")));
}

SymmetricSetData reference_set(const GroupSpec& spec) {
    GroupSpec s3 = GroupSpec::symmetric(3);
    GroupSpec z = GroupSpec::int_lattice(1);
    SymmetricSetData data;
    data.xspec = spec;
    data.g0 = {make_lattice_element(z, {-1}), make_lattice_element(z, {1})};
    data.families = {{parse_element(s3, "a"), parse_element(s3, "a b a")},
                     {parse_element(s3, "a"), parse_element(s3, "b")}};
    return data;
}

bool exact_algebra_suite(std::string& detail) {
    const std::vector<GroupSpec>& zoo = testutil::spec_zoo();
    long assoc = 0, involution = 0, norm_law = 0, derivation = 0;

    for (const GroupSpec& spec : zoo) {
        for (int it = 0; it < 46; ++it) {
            Measure a = testutil::random_measure(spec, 3, 2);
            Measure b = testutil::random_measure(spec, 3, 2);
            Measure c = testutil::random_measure(spec, 3, 2);
            if (!(convolve(convolve(a, b), c) == convolve(a, convolve(b, c)))) {
                detail = "associativity failed on " + spec.describe();
                return false;
            }
            ++assoc;
            if (!(adjoint(adjoint(a)) == a)) {
                detail = "adjoint involution failed on " + spec.describe();
                return false;
            }
            ++involution;

            Measure ra = testutil::random_rational_measure(spec, 3, 2);
            Measure rb = testutil::random_rational_measure(spec, 3, 2);
            auto na = norm_l1_exact(ra);
            auto nb = norm_l1_exact(rb);
            auto nab = norm_l1_exact(convolve(ra, rb));
            if (!na || !nb || !nab) {
                detail = "rational l1 norm unavailable on " + spec.describe();
                return false;
            }
            if (*nab > *na * *nb) {
                detail = "convolution broke the l1 norm bound on " + spec.describe();
                return false;
            }
            ++norm_law;
        }
    }

    for (const GroupSpec& spec : zoo) {
        CharacterSpace space = character_space(spec);
        if (space.basis.empty()) continue;
        for (int it = 0; it < 70; ++it) {
            const RealCharacter& phi =
                space.basis[static_cast<std::size_t>(testutil::pick(
                    0, static_cast<int>(space.basis.size()) - 1))];
            Measure mu = testutil::random_measure(spec, 3, 2);
            Measure f = testutil::random_measure(spec, 3, 2);
            if (!derivation_identity_check(phi, mu, f)) {
                detail = "derivation identity failed on " + spec.describe();
                return false;
            }
            ++derivation;
        }
    }

    if (assoc < 500 || involution < 500 || norm_law < 500 || derivation < 500) {
        std::ostringstream os;
        os << "case counts too low: " << assoc << "/" << involution << "/" << norm_law << "/"
           << derivation;
        detail = os.str();
        return false;
    }
    return true;
}

bool reference_set_certificates(std::string& detail) {
    GroupSpec spec = twisted_s3_z();
    SymmetricSetData data = reference_set(spec);

    SymmetricSetDiagnostics diag = symmetric_set_validate(data);
    if (!diag.all_pass || diag.noncompact_reach != Tristate::True) {
        detail = "set diagnostics failed: " + diag.failure;
        return false;
    }
    Measure chi = symmetric_set_indicator(data);
    Measure explicit_chi = Measure::indicator(
        spec, {parse_element(spec, "(a|-1)"), parse_element(spec, "(a b a|-1)"),
               parse_element(spec, "(a|1)"), parse_element(spec, "(b|1)")});
    if (!(chi == explicit_chi)) {
        detail = "indicator differs from the four listed atoms";
        return false;
    }
    if (!is_selfadjoint(chi)) {
        detail = "indicator is not self-adjoint";
        return false;
    }
    if (!semidirect_commutation_check(chi)) {
        detail = "weighted commutation condition failed";
        return false;
    }
    if (!pair_count_check(data)) {
        detail = "factorization counting condition failed";
        return false;
    }
    CharacterSpace space = character_space(spec);
    if (space.basis.size() != 1) {
        detail = "expected one base character";
        return false;
    }
    const RealCharacter& phi = space.basis[0];
    if (!is_semi_adapted(phi, chi) || !is_adapted(phi, chi)) {
        detail = "base character is not adapted to the indicator";
        return false;
    }
    AcCriterionResult acr = purely_ac_criterion(phi, chi);
    if (!acr.applicable || acr.constant != mpq_class(1)) {
        detail = "squared-character criterion not applicable with constant 1: " + acr.conclusion;
        return false;
    }
    return true;
}

bool central_route_certificates(std::string& detail) {
    GroupSpec prod = GroupSpec::direct_product(GroupSpec::symmetric(3), GroupSpec::int_lattice(1));
    Measure e2 = conjugacy_class_indicator(parse_element(prod, "(a|0)"));
    Measure e3 = conjugacy_class_indicator(parse_element(prod, "(a b|0)"));
    if (!is_central(e2) || !is_central(e3)) {
        detail = "class sums are not central";
        return false;
    }
    CharacterSpace space = character_space(prod);
    if (space.basis.empty()) {
        detail = "expected at least one character";
        return false;
    }
    for (const RealCharacter& phi : space.basis) {
        if (!is_adapted(phi, e2) || !is_adapted(phi, e3)) {
            detail = "a class sum is not adapted for a basis character";
            return false;
        }
    }
    return true;
}

bool eigenvector_reproduction(std::string& detail) {
    GroupSpec spec = torsion_line();
    Measure mu = Measure::delta(parse_element(spec, "(1|0)"));
    Measure chi_y = Measure::indicator(
        spec, {parse_element(spec, "(0|0)"), parse_element(spec, "(1|0)")});
    if (!(apply(mu, chi_y) == chi_y)) {
        detail = "the subgroup indicator is not a fixed vector";
        return false;
    }
    CharacterSpace space = character_space(spec);
    const RealCharacter& phi = space.basis[0];
    Measure weighted = multiply_by_character(phi, 1, mu);
    if (!convolve(weighted, chi_y).is_zero()) {
        detail = "the weighted measure does not annihilate the fixed vector";
        return false;
    }
    KernelChainReport report = kernel_chain_witness(mu, chi_y, space.basis);
    if (!(report.lambda == ComplexRational(1)) || !report.all_annihilated) {
        detail = "kernel chain witness disagrees";
        return false;
    }
    return true;
}

bool moment_window(std::string& detail) {
    struct Expect {
        Measure mu;
        ComplexRational m2;
        ComplexRational m4;
        const char* label;
    };
    std::vector<Expect> cases;
    cases.push_back({lattice_walk(), ComplexRational(2), ComplexRational(6), "lattice walk"});
    cases.push_back({free_adjacency(), ComplexRational(4), ComplexRational(28),
                     "free-group adjacency"});
    for (const Expect& c : cases) {
        if (!(moment_at_identity(c.mu, 2) == c.m2) || !(moment_at_identity(c.mu, 4) == c.m4) ||
            !(moment_at_identity(c.mu, 1) == ComplexRational(0)) ||
            !(moment_at_identity(c.mu, 3) == ComplexRational(0))) {
            detail = std::string("exact moments wrong for the ") + c.label;
            return false;
        }
        for (int r : {4, 6, 8}) {
            TruncatedOperator op = build_truncation(c.mu, r);
            for (const MomentRow& row : moment_crosscheck(op, r)) {
                if (row.rel_diff > kMomentRelTol) {
                    std::ostringstream os;
                    os << "moment " << row.n << " of the " << c.label << " off by "
                       << row.rel_diff << " at radius " << r;
                    detail = os.str();
                    return false;
                }
            }
        }
    }
    return true;
}

bool tridiagonal_oracle(std::string& detail) {
    Measure walk = lattice_walk();
    for (int r : {4, 6, 8}) {
        TruncatedOperator op = build_truncation(walk, r);
        EigenDecomposition eig = eigendecompose(op);
        const std::size_t n = op.size();
        if (n != static_cast<std::size_t>(2 * r + 1) || eig.eigenvalues.size() != n) {
            detail = "unexpected truncation size";
            return false;
        }
        for (std::size_t k = 0; k < n; ++k) {
            const double expect =
                2.0 * std::cos(static_cast<double>(n - k) * kPi / (2.0 * r + 2.0));
            if (std::abs(eig.eigenvalues[k] - expect) > kEigenTol) {
                std::ostringstream os;
                os << "eigenvalue " << k << " at radius " << r << " off by "
                   << std::abs(eig.eigenvalues[k] - expect);
                detail = os.str();
                return false;
            }
        }
    }
    return true;
}

bool fourier_identity(std::string& detail) {
    std::mt19937_64 rng(20240817);
    auto uniform_angle = [&]() {
        return 2.0 * kPi * static_cast<double>(rng() % 100000) / 100000.0;
    };

    struct Probe {
        Measure mu;
        const char* label;
    };
    GroupSpec z = GroupSpec::int_lattice(1);
    GroupSpec c2z = torsion_line();
    std::vector<Probe> probes;
    probes.push_back({lattice_walk(), "lattice walk"});
    probes.push_back({Measure::delta(identity(z)), "identity unit"});
    probes.push_back({Measure::delta(parse_element(c2z, "(1|0)")), "torsion shift"});

    for (const Probe& p : probes) {
        DualStructure dual = dual_structure(p.mu.spec());
        CharacterSpace space = character_space(p.mu.spec());
        const RealCharacter& phi = space.basis[0];
        for (int k = 0; k < 20; ++k) {
            DualPoint xi;
            for (long long m : dual.moduli) {
                if (m == 0) {
                    xi.angles.push_back(uniform_angle());
                } else {
                    const auto residue = rng() % static_cast<unsigned long long>(m);
                    xi.angles.push_back(2.0 * kPi * static_cast<double>(residue) /
                                        static_cast<double>(m));
                }
            }
            DerivativeReport rep = derivative_identity_check(p.mu, phi, xi);
            if (!rep.order_confirmed) {
                std::ostringstream os;
                os << "finite differences below second order for the " << p.label
                   << " (slope " << rep.slope << ")";
                detail = os.str();
                return false;
            }
        }
    }

    struct Finite {
        GroupSpec spec;
        std::vector<std::string> support;
        const char* label;
    };
    std::vector<Finite> finites;
    finites.push_back({GroupSpec::cyclic(4), {"1", "3"}, "4-cycle"});
    finites.push_back({GroupSpec::direct_product(GroupSpec::cyclic(2), GroupSpec::cyclic(3)),
                       {"(1|0)", "(0|1)", "(0|2)"},
                       "order-6 product"});
    for (const Finite& f : finites) {
        std::vector<GroupElement> elems;
        for (const std::string& lit : f.support) elems.push_back(parse_element(f.spec, lit));
        Measure mu = Measure::indicator(f.spec, elems);
        DualStructure dual = dual_structure(f.spec);
        std::vector<double> via_dual;
        for (const auto& residues : enumerate_finite_duals(dual)) {
            via_dual.push_back(symbol_eval(mu, dual_point_from_residues(dual, residues)).real());
        }
        std::sort(via_dual.begin(), via_dual.end());
        const std::size_t order = enumerate_group(f.spec, 100).size();
        EigenDecomposition eig =
            eigendecompose(build_truncation(mu, static_cast<int>(order)));
        if (eig.eigenvalues.size() != via_dual.size()) {
            detail = std::string("dual count differs from matrix size on the ") + f.label;
            return false;
        }
        for (std::size_t i = 0; i < via_dual.size(); ++i) {
            if (std::abs(via_dual[i] - eig.eigenvalues[i]) > kSymbolTol) {
                detail = std::string("symbol multiset differs from eigenvalues on the ") +
                         f.label;
                return false;
            }
        }
    }
    return true;
}

// Trend assertions on truncation eigendata; these probe consistency with the
// expected spectral picture and are heuristics, not proofs.
bool trend_probes(std::string& detail) {
    SpectralOptions opts;  // radii {4, 6, 8}

    SpectralReport walk = run_spectral_analysis(lattice_walk(), opts);
    if (!walk.point_masses.max_weight_decreasing) {
        detail = "trend probe a: max point weight is not decreasing for the lattice walk";
        return false;
    }
    if (walk.point_masses.max_weight_per_radius.back() >= kMaxWeightCeiling) {
        detail = "trend probe a: max point weight did not drop below the ceiling";
        return false;
    }

    GroupSpec c2z = torsion_line();
    SpectralReport shift =
        run_spectral_analysis(Measure::delta(parse_element(c2z, "(1|0)")), opts);
    for (double loc : {-1.0, 1.0}) {
        bool found = false;
        for (const PointMassCluster& c : shift.point_masses.clusters) {
            if (std::abs(c.location - loc) > kPersistentMassTol) continue;
            found = c.present_in_all;
            for (double w : c.weight_per_radius) {
                if (std::abs(w - 0.5) > kPersistentMassTol) found = false;
            }
        }
        if (!found) {
            std::ostringstream os;
            os << "trend probe b: no persistent half mass at " << loc;
            detail = os.str();
            return false;
        }
    }

    Measure chi = symmetric_set_indicator(reference_set(twisted_s3_z()));
    SpectralReport twisted = run_spectral_analysis(chi, opts);
    const std::vector<double>& kw = twisted.kernel_weight_per_radius;
    if (kw.size() != 3 || !(kw[0] > kw[1] && kw[1] > kw[2])) {
        detail = "trend probe c: kernel weight is not decreasing across radii";
        return false;
    }
    return true;
}

bool certificates_float_free(const nlohmann::ordered_json& node) {
    if (node.is_number_float()) return false;
    if (node.is_object() || node.is_array()) {
        for (const auto& child : node) {
            if (!certificates_float_free(child)) return false;
        }
    }
    return true;
}

bool cli_integration(std::string& detail) {
    for (const BundledExample& ex : bundled_examples()) {
        AnalysisConfig cfg = parse_config_text(ex.config_text);
        RunOptions opts;
        opts.write_files = false;
        RunResult first = run(cfg, opts);
        if (first.exit_code != kExitOk) {
            detail = "example '" + ex.name + "' exited with code " +
                     std::to_string(first.exit_code);
            return false;
        }
        RunResult second = run(cfg, opts);
        nlohmann::ordered_json a = first.report;
        nlohmann::ordered_json b = second.report;
        a["provenance"].erase("timestamp");
        b["provenance"].erase("timestamp");
        if (a.dump(2) != b.dump(2)) {
            detail = "example '" + ex.name + "' is not deterministic";
            return false;
        }
        for (const auto& task : first.report["tasks"]) {
            if (task.contains("certificates") &&
                !certificates_float_free(task["certificates"])) {
                detail = "example '" + ex.name + "' leaked a float into the certificates";
                return false;
            }
        }
    }
    return true;
}

}  // namespace

int main() {
    criterion(1, "exact algebra laws on 500+ randomized cases per law", 30.0,
              exact_algebra_suite);
    criterion(2, "reference four-atom set earns every exact certificate", 5.0,
              reference_set_certificates);
    criterion(3, "class sums are central and adapted for all basis characters", 0.0,
              central_route_certificates);
    criterion(4, "subgroup indicator is an exactly reproduced fixed vector", 0.0,
              eigenvector_reproduction);
    criterion(5, "matrix moments match exact moments inside the window", 60.0, moment_window);
    criterion(6, "lattice truncation eigenvalues match the cosine formula", 0.0,
              tridiagonal_oracle);
    criterion(7, "symbol derivatives confirmed at order 2; finite duals exact", 0.0,
              fourier_identity);
    criterion(8, "point-mass and kernel-weight trend probes (heuristic)", 0.0, trend_probes);
    criterion(9, "bundled examples exit 0 with deterministic float-free certificates", 0.0,
              cli_integration);

    if (g_failures == 0) {
        std::cout << "all 9 acceptance criteria passed\n";
    } else {
        std::cout << g_failures << " acceptance criteria failed\n";
    }
    return g_failures;
}
