#include "convspec/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include "convspec/serialize.hpp"

namespace convspec {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kValueClusterTol = 1e-9;

std::complex<double> to_complex(const ComplexRational& c) {
    return {c.re_double(), c.im_double()};
}

// Cyclic flat-run detector: marks every position covered by some window of
// `window` consecutive samples (wrapping) that all stay within tol of the
// window's first sample.
std::vector<char> flat_run_marks(const std::vector<std::complex<double>>& v, int window,
                                 double tol) {
    const std::size_t n = v.size();
    std::vector<char> marks(n, 0);
    if (n < static_cast<std::size_t>(window)) return marks;
    for (std::size_t s = 0; s < n; ++s) {
        bool flat = true;
        for (int k = 1; k < window; ++k) {
            if (std::abs(v[(s + static_cast<std::size_t>(k)) % n] - v[s]) > tol) {
                flat = false;
                break;
            }
        }
        if (flat) {
            for (int k = 0; k < window; ++k) {
                marks[(s + static_cast<std::size_t>(k)) % n] = 1;
            }
        }
    }
    return marks;
}

struct ValueClusters {
    std::vector<std::pair<std::complex<double>, long long>> items;

    void add(std::complex<double> v, long long count = 1) {
        for (auto& [c, n] : items) {
            if (std::abs(v - c) <= kValueClusterTol) {
                n += count;
                return;
            }
        }
        items.emplace_back(v, count);
    }
};

std::vector<PointSpectrumValue> sorted_findings(ValueClusters& clusters, bool exact) {
    std::sort(clusters.items.begin(), clusters.items.end(), [](const auto& a, const auto& b) {
        if (a.first.real() != b.first.real()) return a.first.real() < b.first.real();
        return a.first.imag() < b.first.imag();
    });
    std::vector<PointSpectrumValue> out;
    out.reserve(clusters.items.size());
    for (const auto& [v, n] : clusters.items) {
        out.push_back({v, n, exact});
    }
    return out;
}

// Odometer over the cyclic slots only; torus slots stay fixed at the given
// base angles. Calls fn once per residue assignment.
template <typename Fn>
void for_each_cyclic_assignment(const DualStructure& dual, std::vector<double>& angles,
                                std::size_t cap, Fn&& fn) {
    std::vector<std::size_t> cyclic_slots;
    unsigned long long total = 1;
    for (std::size_t s = 0; s < dual.moduli.size(); ++s) {
        if (dual.moduli[s] > 0) {
            cyclic_slots.push_back(s);
            total *= static_cast<unsigned long long>(dual.moduli[s]);
            if (total > cap) {
                std::ostringstream os;
                os << "finite dual enumeration exceeds the cap " << cap;
                throw CapExceededError(os.str());
            }
        }
    }
    std::vector<long long> residues(cyclic_slots.size(), 0);
    for (unsigned long long it = 0; it < total; ++it) {
        for (std::size_t k = 0; k < cyclic_slots.size(); ++k) {
            const std::size_t s = cyclic_slots[k];
            angles[s] = kTwoPi * static_cast<double>(residues[k]) /
                        static_cast<double>(dual.moduli[s]);
        }
        fn();
        for (std::size_t k = cyclic_slots.size(); k-- > 0;) {
            if (++residues[k] < dual.moduli[cyclic_slots[k]]) break;
            residues[k] = 0;
        }
    }
}

}  // namespace

std::size_t DualStructure::torus_dimensions() const {
    std::size_t d = 0;
    for (long long m : moduli) {
        if (m == 0) ++d;
    }
    return d;
}

bool DualStructure::finite() const { return torus_dimensions() == 0; }

DualStructure dual_structure(const GroupSpec& spec) {
    DualStructure out;
    out.spec = spec;
    out.moduli = abelian_slot_moduli(spec);
    return out;
}

DualPoint dual_point_from_residues(const DualStructure& dual,
                                   const std::vector<long long>& residues) {
    if (residues.size() != dual.moduli.size()) {
        throw ValidationError("residue tuple length does not match the slot count");
    }
    DualPoint xi;
    xi.angles.resize(dual.moduli.size(), 0.0);
    for (std::size_t s = 0; s < dual.moduli.size(); ++s) {
        if (dual.moduli[s] == 0) {
            if (residues[s] != 0) {
                throw ValidationError("torus slots take angles, not residues");
            }
            continue;
        }
        long long r = residues[s] % dual.moduli[s];
        if (r < 0) r += dual.moduli[s];
        xi.angles[s] = kTwoPi * static_cast<double>(r) / static_cast<double>(dual.moduli[s]);
    }
    return xi;
}

std::vector<std::vector<long long>> enumerate_finite_duals(const DualStructure& dual,
                                                           std::size_t cap) {
    if (!dual.finite()) {
        throw ValidationError("the dual is infinite; only cyclic slots can be enumerated");
    }
    unsigned long long total = 1;
    for (long long m : dual.moduli) {
        total *= static_cast<unsigned long long>(m);
        if (total > cap) {
            std::ostringstream os;
            os << "dual size exceeds the cap " << cap;
            throw CapExceededError(os.str());
        }
    }
    std::vector<std::vector<long long>> out;
    out.reserve(total);
    std::vector<long long> cur(dual.moduli.size(), 0);
    for (unsigned long long it = 0; it < total; ++it) {
        out.push_back(cur);
        for (std::size_t s = dual.moduli.size(); s-- > 0;) {
            if (++cur[s] < dual.moduli[s]) break;
            cur[s] = 0;
        }
    }
    return out;
}

std::complex<double> symbol_eval(const Measure& mu, const DualPoint& xi) {
    const std::vector<long long> moduli = abelian_slot_moduli(mu.spec());
    if (xi.angles.size() != moduli.size()) {
        throw ValidationError("dual point has the wrong number of slots");
    }
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [x, c] : mu.coeffs()) {
        const std::vector<long long> coords = abelian_coordinates(x);
        double phase = 0.0;
        for (std::size_t s = 0; s < coords.size(); ++s) {
            phase += static_cast<double>(coords[s]) * xi.angles[s];
        }
        acc += to_complex(c) * std::polar(1.0, -phase);
    }
    return acc;
}

std::vector<double> character_direction(const DualStructure& dual, const RealCharacter& phi) {
    if (!phi.spec().same_as(dual.spec)) {
        throw SpecMismatchError("the character lives on a different group");
    }
    std::vector<double> dir(dual.moduli.size(), 0.0);
    std::size_t w = 0;
    for (std::size_t s = 0; s < dual.moduli.size(); ++s) {
        if (dual.moduli[s] == 0) {
            dir[s] = mpq_get_d(phi.weights()[w].get_mpq_t());
            ++w;
        }
    }
    return dir;
}

DerivativeReport derivative_identity_check(const Measure& mu, const RealCharacter& phi,
                                           const DualPoint& xi, std::vector<double> h_schedule) {
    const DualStructure dual = dual_structure(mu.spec());
    if (xi.angles.size() != dual.moduli.size()) {
        throw ValidationError("dual point has the wrong number of slots");
    }
    if (h_schedule.empty()) {
        double h = 0.1;
        for (int k = 0; k < 6; ++k) {
            h_schedule.push_back(h);
            h /= 2.0;
        }
    }
    const std::vector<double> dir = character_direction(dual, phi);

    DerivativeReport rep;
    const Measure pm = multiply_by_character(phi, 1, mu);
    rep.target = std::complex<double>(0.0, -1.0) * symbol_eval(pm, xi);

    auto shifted = [&](double t) {
        DualPoint p = xi;
        for (std::size_t s = 0; s < p.angles.size(); ++s) {
            p.angles[s] += t * dir[s];
        }
        return symbol_eval(mu, p);
    };

    bool all_tiny = true;
    std::vector<std::pair<double, double>> logs;
    for (double h : h_schedule) {
        if (h <= 0) throw ValidationError("step sizes must be positive");
        DerivativeRow row;
        row.h = h;
        row.fd = (shifted(h) - shifted(-h)) / (2.0 * h);
        row.err = std::abs(row.fd - rep.target);
        if (row.err >= 1e-12) all_tiny = false;
        if (row.err > 1e-15) logs.emplace_back(std::log(h), std::log(row.err));
        rep.rows.push_back(row);
    }

    if (logs.size() >= 2) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (const auto& [x, y] : logs) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(logs.size());
        const double denom = n * sxx - sx * sx;
        if (denom != 0) rep.slope = (n * sxy - sx * sy) / denom;
    }
    rep.order_confirmed = all_tiny || (logs.size() >= 2 && rep.slope >= 1.9);
    return rep;
}

ScanFindings point_spectrum_scan(const Measure& mu, const ScanOptions& opts) {
    const DualStructure dual = dual_structure(mu.spec());
    ScanFindings out;

    if (dual.finite()) {
        ValueClusters clusters;
        std::vector<double> angles(dual.moduli.size(), 0.0);
        unsigned long long count = 0;
        for_each_cyclic_assignment(dual, angles, opts.dual_cap, [&] {
            clusters.add(symbol_eval(mu, DualPoint{angles}));
            ++count;
        });
        out.exact = true;
        out.values = sorted_findings(clusters, true);
        std::ostringstream note;
        note << "exact: symbol evaluated at all " << count << " dual characters";
        out.note = note.str();
        return out;
    }

    const std::size_t d = dual.torus_dimensions();
    if (d > 2) {
        throw ValidationError("grid scans support at most two torus dimensions");
    }
    if (opts.grid < static_cast<std::size_t>(opts.flat_window) || opts.flat_window < 2) {
        throw ValidationError("the grid must be at least one flat window long");
    }

    std::vector<std::size_t> torus_slots;
    for (std::size_t s = 0; s < dual.moduli.size(); ++s) {
        if (dual.moduli[s] == 0) torus_slots.push_back(s);
    }

    ValueClusters clusters;
    long long marked_total = 0;
    std::vector<double> angles(dual.moduli.size(), 0.0);
    const double step = kTwoPi / static_cast<double>(opts.grid);

    for_each_cyclic_assignment(dual, angles, opts.dual_cap, [&] {
        if (d == 1) {
            std::vector<std::complex<double>> line(opts.grid);
            for (std::size_t k = 0; k < opts.grid; ++k) {
                angles[torus_slots[0]] = static_cast<double>(k) * step;
                line[k] = symbol_eval(mu, DualPoint{angles});
            }
            std::vector<char> marks = flat_run_marks(line, opts.flat_window, opts.flat_tol);
            for (std::size_t k = 0; k < opts.grid; ++k) {
                if (marks[k]) {
                    clusters.add(line[k]);
                    ++marked_total;
                }
            }
            angles[torus_slots[0]] = 0.0;
        } else {
            // Two passes keep memory flat: rows mark horizontal runs,
            // columns mark vertical ones. A sample marked both ways is
            // deduplicated through the bitmap.
            std::vector<char> marked(opts.grid * opts.grid, 0);
            std::vector<std::complex<double>> line(opts.grid);
            for (int pass = 0; pass < 2; ++pass) {
                for (std::size_t a = 0; a < opts.grid; ++a) {
                    for (std::size_t b = 0; b < opts.grid; ++b) {
                        const std::size_t i = pass == 0 ? a : b;
                        const std::size_t j = pass == 0 ? b : a;
                        angles[torus_slots[0]] = static_cast<double>(i) * step;
                        angles[torus_slots[1]] = static_cast<double>(j) * step;
                        line[b] = symbol_eval(mu, DualPoint{angles});
                    }
                    std::vector<char> marks =
                        flat_run_marks(line, opts.flat_window, opts.flat_tol);
                    for (std::size_t b = 0; b < opts.grid; ++b) {
                        if (!marks[b]) continue;
                        const std::size_t i = pass == 0 ? a : b;
                        const std::size_t j = pass == 0 ? b : a;
                        if (!marked[i * opts.grid + j]) {
                            marked[i * opts.grid + j] = 1;
                            clusters.add(line[b]);
                            ++marked_total;
                        }
                    }
                }
            }
            angles[torus_slots[0]] = 0.0;
            angles[torus_slots[1]] = 0.0;
        }
    });

    out.exact = false;
    out.values = sorted_findings(clusters, false);
    std::ostringstream note;
    if (out.values.empty()) {
        note << "heuristic: no flat patches on a " << opts.grid << "-point grid per dimension";
    } else {
        note << "heuristic: " << marked_total << " samples lie in flat patches on a " << opts.grid
             << "-point grid per dimension";
    }
    out.note = note.str();
    return out;
}

DualSpectrumReport dual_spectrum_report(const Measure& m0, const Measure& m1) {
    if (!m0.spec().same_as(m1.spec())) {
        throw SpecMismatchError("the two measures must live on the same group");
    }
    dual_structure(m0.spec());  // rejects non-abelian constructors

    DualSpectrumReport rep;
    rep.m0_selfadjoint = is_selfadjoint(m0);
    rep.m1_selfadjoint = is_selfadjoint(m1);
    if (!rep.m0_selfadjoint) rep.failures.push_back("the main measure is not self-adjoint");
    if (!rep.m1_selfadjoint) rep.failures.push_back("the perturbation is not self-adjoint");

    rep.torsion_hypothesis = true;
    for (const auto& [x, c] : m1.coeffs()) {
        (void)c;
        if (in_compact_part(x) != Tristate::True) {
            rep.torsion_hypothesis = false;
            rep.failures.push_back("the perturbation charges " + format_element(x) +
                                   ", which lies outside the torsion part");
            break;
        }
    }
    rep.hypotheses_pass = rep.m0_selfadjoint && rep.m1_selfadjoint && rep.torsion_hypothesis;

    const CharacterSpace space = character_space(m0.spec());
    for (std::size_t i = 0; i < space.basis.size(); ++i) {
        if (!multiply_by_character(space.basis[i], 1, m0).is_zero()) {
            rep.nonzero_directions.push_back(i);
        }
    }
    rep.constraint_available = rep.hypotheses_pass && !rep.nonzero_directions.empty();

    std::ostringstream conclusion;
    if (!rep.hypotheses_pass) {
        conclusion << "no conclusion: hypotheses not verified";
    } else if (rep.nonzero_directions.empty()) {
        conclusion << "no conclusion: every directional derivative of the main symbol vanishes";
    } else {
        conclusion << "point eigenvectors of the sum are annihilated by the directional "
                   << "derivative of the main symbol along " << rep.nonzero_directions.size()
                   << " of " << space.basis.size() << " basis directions";
    }
    rep.conclusion = conclusion.str();
    return rep;
}

}  // namespace convspec
