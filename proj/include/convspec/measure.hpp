#pragma once

#include <map>
#include <optional>
#include <vector>

#include "convspec/group.hpp"
#include "convspec/rational.hpp"

namespace convspec {

inline constexpr std::size_t kDefaultSupportCap = 500000;

// Finitely supported complex-rational function on a group. Coefficients are
// stored in canonical element order with no zero entries, so structural
// equality is measure equality.
class Measure {
  public:
    using CoeffMap = std::map<GroupElement, ComplexRational, ElementLess>;

    Measure() = default;
    explicit Measure(GroupSpec spec) : spec_(std::move(spec)) {}

    static Measure zero(GroupSpec spec) { return Measure(std::move(spec)); }
    static Measure delta(const GroupElement& x, ComplexRational c = ComplexRational(1));
    static Measure indicator(const GroupSpec& spec, const std::vector<GroupElement>& elems);

    const GroupSpec& spec() const { return spec_; }
    const CoeffMap& coeffs() const { return coeffs_; }
    std::size_t support_size() const { return coeffs_.size(); }
    bool is_zero() const { return coeffs_.empty(); }

    ComplexRational at(const GroupElement& x) const;
    void set(const GroupElement& x, ComplexRational c);
    void add_to(const GroupElement& x, const ComplexRational& c);

    friend bool operator==(const Measure& a, const Measure& b);
    friend bool operator!=(const Measure& a, const Measure& b) { return !(a == b); }

  private:
    GroupSpec spec_;
    CoeffMap coeffs_;
};

Measure convolve(const Measure& mu, const Measure& nu,
                 std::size_t support_cap = kDefaultSupportCap);
// Alias for convolve in operator position: the image of f under mu * (.).
Measure apply(const Measure& mu, const Measure& f, std::size_t support_cap = kDefaultSupportCap);
Measure adjoint(const Measure& mu);
bool is_selfadjoint(const Measure& mu);

// Conjugation invariance, decided by checking the support against every
// constructor generator; invariance under generators extends to the whole
// group by induction on word length.
bool is_central(const Measure& mu);

Measure convolution_power(const Measure& mu, int n,
                          std::size_t support_cap = kDefaultSupportCap);
ComplexRational moment_at_identity(const Measure& mu, int n,
                                   std::size_t support_cap = kDefaultSupportCap);

Measure operator+(const Measure& a, const Measure& b);
Measure operator-(const Measure& a, const Measure& b);
Measure operator-(const Measure& a);
Measure scale(const ComplexRational& c, const Measure& mu);

// Exact L1 norm, available when every coefficient has a rational modulus.
std::optional<mpq_class> norm_l1_exact(const Measure& mu);
double norm_l1_double(const Measure& mu);

// Indicator of the conjugacy class of x, computed by closure under
// generator conjugation.
Measure conjugacy_class_indicator(const GroupElement& x, std::size_t cap = kDefaultBallCap);

}  // namespace convspec
