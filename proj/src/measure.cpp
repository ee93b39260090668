#include "convspec/measure.hpp"

#include <cmath>
#include <unordered_set>

namespace convspec {

Measure Measure::delta(const GroupElement& x, ComplexRational c) {
    Measure m(x.spec);
    m.set(x, std::move(c));
    return m;
}

Measure Measure::indicator(const GroupSpec& spec, const std::vector<GroupElement>& elems) {
    Measure m(spec);
    for (const auto& x : elems) {
        if (!x.spec.same_as(spec))
            throw SpecMismatchError("indicator: element from a different group");
        if (!m.at(x).is_zero()) throw ValidationError("indicator: repeated element");
        m.set(x, ComplexRational(1));
    }
    return m;
}

ComplexRational Measure::at(const GroupElement& x) const {
    auto it = coeffs_.find(x);
    return it == coeffs_.end() ? ComplexRational() : it->second;
}

void Measure::set(const GroupElement& x, ComplexRational c) {
    if (c.is_zero())
        coeffs_.erase(x);
    else
        coeffs_[x] = std::move(c);
}

void Measure::add_to(const GroupElement& x, const ComplexRational& c) {
    auto it = coeffs_.find(x);
    if (it == coeffs_.end()) {
        if (!c.is_zero()) coeffs_.emplace(x, c);
        return;
    }
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
}

bool operator==(const Measure& a, const Measure& b) {
    if (!a.spec_.same_as(b.spec_)) return false;
    if (a.coeffs_.size() != b.coeffs_.size()) return false;
    auto ia = a.coeffs_.begin();
    auto ib = b.coeffs_.begin();
    for (; ia != a.coeffs_.end(); ++ia, ++ib) {
        if (!(ia->first == ib->first) || ia->second != ib->second) return false;
    }
    return true;
}

Measure convolve(const Measure& mu, const Measure& nu, std::size_t support_cap) {
    if (!mu.spec().same_as(nu.spec()))
        throw SpecMismatchError("convolve: measures on different groups");
    Measure out(mu.spec());
    for (const auto& [y, c] : mu.coeffs()) {
        for (const auto& [z, d] : nu.coeffs()) {
            out.add_to(multiply(y, z), c * d);
            if (out.support_size() > support_cap)
                throw CapExceededError("convolution support exceeds cap " +
                                       std::to_string(support_cap));
        }
    }
    return out;
}

Measure apply(const Measure& mu, const Measure& f, std::size_t support_cap) {
    return convolve(mu, f, support_cap);
}

Measure adjoint(const Measure& mu) {
    Measure out(mu.spec());
    for (const auto& [x, c] : mu.coeffs()) out.set(inverse(x), c.conj());
    return out;
}

bool is_selfadjoint(const Measure& mu) { return adjoint(mu) == mu; }

bool is_central(const Measure& mu) {
    std::vector<GroupElement> gens = generators(mu.spec());
    for (const auto& g : gens) {
        for (const auto& [x, c] : mu.coeffs()) {
            if (mu.at(conjugate(g, x)) != c) return false;
        }
    }
    return true;
}

Measure convolution_power(const Measure& mu, int n, std::size_t support_cap) {
    if (n < 0) throw ValidationError("convolution_power needs n >= 0");
    Measure acc = Measure::delta(identity(mu.spec()));
    for (int i = 0; i < n; ++i) acc = convolve(acc, mu, support_cap);
    return acc;
}

ComplexRational moment_at_identity(const Measure& mu, int n, std::size_t support_cap) {
    return convolution_power(mu, n, support_cap).at(identity(mu.spec()));
}

Measure operator+(const Measure& a, const Measure& b) {
    if (!a.spec().same_as(b.spec()))
        throw SpecMismatchError("measure sum: measures on different groups");
    Measure out = a;
    for (const auto& [x, c] : b.coeffs()) out.add_to(x, c);
    return out;
}

Measure operator-(const Measure& a, const Measure& b) { return a + (-b); }

Measure operator-(const Measure& a) {
    Measure out(a.spec());
    for (const auto& [x, c] : a.coeffs()) out.set(x, -c);
    return out;
}

Measure scale(const ComplexRational& c, const Measure& mu) {
    Measure out(mu.spec());
    if (c.is_zero()) return out;
    for (const auto& [x, v] : mu.coeffs()) out.set(x, c * v);
    return out;
}

std::optional<mpq_class> norm_l1_exact(const Measure& mu) {
    mpq_class total = 0;
    for (const auto& [x, c] : mu.coeffs()) {
        auto m = exact_modulus(c);
        if (!m) return std::nullopt;
        total += *m;
    }
    return total;
}

double norm_l1_double(const Measure& mu) {
    double total = 0;
    for (const auto& [x, c] : mu.coeffs())
        total += std::sqrt(c.squared_modulus().get_d());
    return total;
}

Measure conjugacy_class_indicator(const GroupElement& x, std::size_t cap) {
    std::vector<GroupElement> gens;
    for (auto& g : generators(x.spec)) {
        gens.push_back(g);
        gens.push_back(inverse(g));
    }
    std::unordered_set<GroupElement, ElementHash, ElementEq> seen{x};
    std::vector<GroupElement> frontier{x};
    while (!frontier.empty()) {
        std::vector<GroupElement> next;
        for (const auto& y : frontier) {
            for (const auto& g : gens) {
                GroupElement z = conjugate(g, y);
                if (seen.insert(z).second) {
                    next.push_back(std::move(z));
                    if (seen.size() > cap)
                        throw CapExceededError("conjugacy class exceeds cap " +
                                               std::to_string(cap));
                }
            }
        }
        frontier = std::move(next);
    }
    Measure out(x.spec);
    for (const auto& y : seen) out.set(y, ComplexRational(1));
    return out;
}

}  // namespace convspec
