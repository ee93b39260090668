#include "convspec/group.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace convspec {

namespace {

constexpr std::size_t kActionTableCap = 100000;

[[noreturn]] void mismatch(const std::string& what) { throw SpecMismatchError(what); }

long long mod_reduce(long long k, long long n) {
    long long r = k % n;
    if (r < 0) r += n;
    return r;
}

bool mul_overflows(unsigned long long a, unsigned long long b, unsigned long long& out) {
    if (a != 0 && b > (~0ULL) / a) return true;
    out = a * b;
    return false;
}

unsigned long long lcm_saturating(unsigned long long a, unsigned long long b, bool& ok) {
    unsigned long long g = std::gcd(a, b);
    unsigned long long out = 0;
    if (mul_overflows(a / g, b, out)) {
        ok = false;
        return 0;
    }
    return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// ActionSpec

struct ActionSpec::Data {
    ActionKind kind = ActionKind::Trivial;
    GroupElement conj;
    std::vector<std::vector<GroupElement>> images;
    std::vector<std::vector<int>> perms;
};

ActionSpec ActionSpec::trivial() {
    ActionSpec a;
    auto d = std::make_shared<Data>();
    d->kind = ActionKind::Trivial;
    a.data_ = std::move(d);
    return a;
}

ActionSpec ActionSpec::conjugation_by(GroupElement c) {
    ActionSpec a;
    auto d = std::make_shared<Data>();
    d->kind = ActionKind::ConjugationBy;
    d->conj = std::move(c);
    a.data_ = std::move(d);
    return a;
}

ActionSpec ActionSpec::generator_images(std::vector<std::vector<GroupElement>> images) {
    ActionSpec a;
    auto d = std::make_shared<Data>();
    d->kind = ActionKind::GeneratorImages;
    d->images = std::move(images);
    a.data_ = std::move(d);
    return a;
}

ActionSpec ActionSpec::index_permutations(std::vector<std::vector<int>> perms) {
    ActionSpec a;
    auto d = std::make_shared<Data>();
    d->kind = ActionKind::IndexPermutation;
    d->perms = std::move(perms);
    a.data_ = std::move(d);
    return a;
}

ActionKind ActionSpec::kind() const { return data_ ? data_->kind : ActionKind::Trivial; }
const GroupElement& ActionSpec::conjugator() const { return data_->conj; }
const std::vector<std::vector<GroupElement>>& ActionSpec::images() const { return data_->images; }
const std::vector<std::vector<int>>& ActionSpec::perms() const { return data_->perms; }

// ---------------------------------------------------------------------------
// Compiled actions

// One automorphism of the fiber per base generator, in a form that supports
// applying an arbitrary (possibly negative) power exactly.
struct CompiledAutomorphism {
    enum class Kind { Identity, Table, Matrix, SignedPerm, Block, IndexPerm };
    Kind kind = Kind::Identity;

    // Table: permutation of the enumerated finite fiber, with cycle
    // decomposition so that powers are cycle jumps.
    std::shared_ptr<const std::vector<GroupElement>> elems;
    std::shared_ptr<const std::unordered_map<GroupElement, std::size_t, ElementHash, ElementEq>>
        elem_index;
    std::vector<std::vector<std::size_t>> cycles;
    std::vector<std::size_t> cycle_of;   // element index -> cycle number
    std::vector<std::size_t> cycle_pos;  // element index -> position in its cycle

    // Matrix: integer matrix with determinant +-1 acting on lattice coords.
    std::vector<std::vector<long long>> mat, mat_inv;

    // SignedPerm: free-group letter i maps to letter_map[i].first with
    // exponent sign letter_map[i].second.
    std::vector<std::pair<int, int>> letter_map;
    unsigned long long letter_order = 1;

    // Block: componentwise on a direct product.
    std::shared_ptr<CompiledAutomorphism> block_left, block_right;

    // IndexPerm: permutation of the copies of a chain fiber.
    std::vector<int> slot_perm;
    unsigned long long slot_order = 1;
};

struct GroupSpecNode {
    GroupKind kind;
    int dim = 0;          // IntLattice
    long long modulus = 0;  // Cyclic
    int degree = 0;       // Symmetric
    int rank = 0;         // FreeGroup
    GroupSpec left, right;   // DirectProduct
    GroupSpec fiber, base;   // Semidirect
    ActionSpec action;
    std::vector<CompiledAutomorphism> compiled;  // Semidirect, per base generator
    GroupElement conj_c, conj_c_inv;             // Semidirect, ConjugationBy
    int chain_len = 0;                           // Semidirect, IndexPerm fiber copies
};

// ---------------------------------------------------------------------------
// GroupSpec accessors

struct GroupSpecAccess {
    static GroupSpec make(std::shared_ptr<const GroupSpecNode> n) {
        return GroupSpec(std::move(n));
    }
};

GroupKind GroupSpec::kind() const {
    if (!node_) throw Error("empty GroupSpec");
    return node_->kind;
}
int GroupSpec::lattice_dim() const { return node_->dim; }
long long GroupSpec::cyclic_modulus() const { return node_->modulus; }
int GroupSpec::symmetric_degree() const { return node_->degree; }
int GroupSpec::free_rank() const { return node_->rank; }
const GroupSpec& GroupSpec::left() const { return node_->left; }
const GroupSpec& GroupSpec::right() const { return node_->right; }
const GroupSpec& GroupSpec::fiber() const { return node_->fiber; }
const GroupSpec& GroupSpec::base() const { return node_->base; }
const ActionSpec& GroupSpec::action() const { return node_->action; }

bool GroupSpec::same_as(const GroupSpec& other) const {
    if (node_ == other.node_) return true;
    if (!node_ || !other.node_) return false;
    if (node_->kind != other.node_->kind) return false;
    switch (node_->kind) {
        case GroupKind::IntLattice:
            return node_->dim == other.node_->dim;
        case GroupKind::Cyclic:
            return node_->modulus == other.node_->modulus;
        case GroupKind::Symmetric:
            return node_->degree == other.node_->degree;
        case GroupKind::FreeGroup:
            return node_->rank == other.node_->rank;
        case GroupKind::DirectProduct:
            return node_->left.same_as(other.node_->left) && node_->right.same_as(other.node_->right);
        case GroupKind::Semidirect: {
            if (!node_->fiber.same_as(other.node_->fiber) || !node_->base.same_as(other.node_->base))
                return false;
            const ActionSpec& a = node_->action;
            const ActionSpec& b = other.node_->action;
            if (a.kind() != b.kind()) return false;
            switch (a.kind()) {
                case ActionKind::Trivial:
                    return true;
                case ActionKind::ConjugationBy:
                    return a.conjugator() == b.conjugator();
                case ActionKind::GeneratorImages: {
                    if (a.images().size() != b.images().size()) return false;
                    for (std::size_t i = 0; i < a.images().size(); ++i) {
                        if (a.images()[i].size() != b.images()[i].size()) return false;
                        for (std::size_t j = 0; j < a.images()[i].size(); ++j)
                            if (!(a.images()[i][j] == b.images()[i][j])) return false;
                    }
                    return true;
                }
                case ActionKind::IndexPermutation:
                    return a.perms() == b.perms();
            }
            return false;
        }
    }
    return false;
}

bool GroupSpec::is_abelian() const {
    switch (kind()) {
        case GroupKind::IntLattice:
        case GroupKind::Cyclic:
            return true;
        case GroupKind::Symmetric:
            return node_->degree <= 2;
        case GroupKind::FreeGroup:
            return node_->rank == 1;
        case GroupKind::DirectProduct:
            return node_->left.is_abelian() && node_->right.is_abelian();
        case GroupKind::Semidirect:
            return node_->action.kind() == ActionKind::Trivial && node_->fiber.is_abelian() &&
                   node_->base.is_abelian();
    }
    return false;
}

bool GroupSpec::is_finite() const {
    switch (kind()) {
        case GroupKind::IntLattice:
            return false;
        case GroupKind::Cyclic:
        case GroupKind::Symmetric:
            return true;
        case GroupKind::FreeGroup:
            return false;
        case GroupKind::DirectProduct:
            return node_->left.is_finite() && node_->right.is_finite();
        case GroupKind::Semidirect:
            return node_->fiber.is_finite() && node_->base.is_finite();
    }
    return false;
}

std::optional<unsigned long long> GroupSpec::finite_order() const {
    if (!is_finite()) return std::nullopt;
    switch (kind()) {
        case GroupKind::Cyclic:
            return static_cast<unsigned long long>(node_->modulus);
        case GroupKind::Symmetric: {
            unsigned long long f = 1;
            for (int i = 2; i <= node_->degree; ++i) {
                unsigned long long out;
                if (mul_overflows(f, static_cast<unsigned long long>(i), out)) return std::nullopt;
                f = out;
            }
            return f;
        }
        case GroupKind::DirectProduct: {
            auto a = node_->left.finite_order(), b = node_->right.finite_order();
            if (!a || !b) return std::nullopt;
            unsigned long long out;
            if (mul_overflows(*a, *b, out)) return std::nullopt;
            return out;
        }
        case GroupKind::Semidirect: {
            auto a = node_->fiber.finite_order(), b = node_->base.finite_order();
            if (!a || !b) return std::nullopt;
            unsigned long long out;
            if (mul_overflows(*a, *b, out)) return std::nullopt;
            return out;
        }
        default:
            return std::nullopt;
    }
}

std::string GroupSpec::describe() const {
    std::ostringstream os;
    switch (kind()) {
        case GroupKind::IntLattice:
            os << "int_lattice(" << node_->dim << ")";
            break;
        case GroupKind::Cyclic:
            os << "cyclic(" << node_->modulus << ")";
            break;
        case GroupKind::Symmetric:
            os << "symmetric(" << node_->degree << ")";
            break;
        case GroupKind::FreeGroup:
            os << "free_group(" << node_->rank << ")";
            break;
        case GroupKind::DirectProduct:
            os << "direct_product(" << node_->left.describe() << ", " << node_->right.describe()
               << ")";
            break;
        case GroupKind::Semidirect: {
            const char* an = "trivial";
            switch (node_->action.kind()) {
                case ActionKind::Trivial:
                    an = "trivial";
                    break;
                case ActionKind::ConjugationBy:
                    an = "conjugation_by";
                    break;
                case ActionKind::GeneratorImages:
                    an = "generator_images";
                    break;
                case ActionKind::IndexPermutation:
                    an = "index_permutations";
                    break;
            }
            os << "semidirect(" << node_->fiber.describe() << ", " << node_->base.describe() << ", "
               << an << ")";
            break;
        }
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Element payload accessors

const std::vector<long long>& GroupElement::coords() const {
    return std::get<std::vector<long long>>(payload);
}
long long GroupElement::residue() const { return std::get<long long>(payload); }
const std::vector<int>& GroupElement::perm() const { return std::get<std::vector<int>>(payload); }
const GroupElement::Word& GroupElement::word() const { return std::get<Word>(payload); }
const GroupElement& GroupElement::pair_left() const {
    return std::get<std::shared_ptr<const ElementPair>>(payload)->left;
}
const GroupElement& GroupElement::pair_right() const {
    return std::get<std::shared_ptr<const ElementPair>>(payload)->right;
}

GroupElement make_lattice_element(const GroupSpec& spec, std::vector<long long> coords) {
    if (spec.kind() != GroupKind::IntLattice) mismatch("make_lattice_element: " + spec.describe());
    if (static_cast<int>(coords.size()) != spec.lattice_dim())
        throw ValidationError("lattice element needs " + std::to_string(spec.lattice_dim()) +
                              " coordinates, got " + std::to_string(coords.size()));
    return {spec, std::move(coords)};
}

GroupElement make_cyclic_element(const GroupSpec& spec, long long k) {
    if (spec.kind() != GroupKind::Cyclic) mismatch("make_cyclic_element: " + spec.describe());
    return {spec, mod_reduce(k, spec.cyclic_modulus())};
}

GroupElement make_perm_element(const GroupSpec& spec, std::vector<int> one_line) {
    if (spec.kind() != GroupKind::Symmetric) mismatch("make_perm_element: " + spec.describe());
    int n = spec.symmetric_degree();
    if (static_cast<int>(one_line.size()) != n)
        throw ValidationError("permutation needs " + std::to_string(n) + " entries");
    std::vector<bool> seen(n, false);
    for (int v : one_line) {
        if (v < 0 || v >= n || seen[v]) throw ValidationError("not a permutation");
        seen[v] = true;
    }
    return {spec, std::move(one_line)};
}

namespace {
void word_push(GroupElement::Word& w, int letter, long long exp) {
    if (exp == 0) return;
    if (!w.empty() && w.back().first == letter) {
        w.back().second += exp;
        if (w.back().second == 0) w.pop_back();
        return;
    }
    w.emplace_back(letter, exp);
}
}  // namespace

GroupElement make_word_element(const GroupSpec& spec, const GroupElement::Word& word) {
    if (spec.kind() != GroupKind::FreeGroup) mismatch("make_word_element: " + spec.describe());
    GroupElement::Word r;
    for (const auto& [letter, exp] : word) {
        if (letter < 0 || letter >= spec.free_rank())
            throw ValidationError("word letter out of range for " + spec.describe());
        word_push(r, letter, exp);
    }
    return {spec, std::move(r)};
}

GroupElement make_pair_element(const GroupSpec& spec, GroupElement left, GroupElement right) {
    GroupKind k = spec.kind();
    if (k != GroupKind::DirectProduct && k != GroupKind::Semidirect)
        mismatch("make_pair_element: " + spec.describe());
    const GroupSpec& ls = (k == GroupKind::DirectProduct) ? spec.left() : spec.fiber();
    const GroupSpec& rs = (k == GroupKind::DirectProduct) ? spec.right() : spec.base();
    if (!left.spec.same_as(ls) || !right.spec.same_as(rs))
        mismatch("pair element components do not match " + spec.describe());
    auto p = std::make_shared<GroupElement::ElementPair>(
        GroupElement::ElementPair{std::move(left), std::move(right)});
    return {spec, std::shared_ptr<const GroupElement::ElementPair>(std::move(p))};
}

// ---------------------------------------------------------------------------
// Core arithmetic

GroupElement identity(const GroupSpec& spec) {
    switch (spec.kind()) {
        case GroupKind::IntLattice:
            return {spec, std::vector<long long>(spec.lattice_dim(), 0)};
        case GroupKind::Cyclic:
            return {spec, 0LL};
        case GroupKind::Symmetric: {
            std::vector<int> p(spec.symmetric_degree());
            std::iota(p.begin(), p.end(), 0);
            return {spec, std::move(p)};
        }
        case GroupKind::FreeGroup:
            return {spec, GroupElement::Word{}};
        case GroupKind::DirectProduct:
            return make_pair_element(spec, identity(spec.left()), identity(spec.right()));
        case GroupKind::Semidirect:
            return make_pair_element(spec, identity(spec.fiber()), identity(spec.base()));
    }
    throw Error("identity: bad spec");
}

namespace {
GroupElement apply_action_node(const GroupSpecNode* node, const GroupElement& g,
                               const GroupElement& n);
}

GroupElement multiply(const GroupElement& x, const GroupElement& y) {
    if (!x.spec.same_as(y.spec))
        mismatch("multiply: " + x.spec.describe() + " vs " + y.spec.describe());
    const GroupSpec& spec = x.spec;
    switch (spec.kind()) {
        case GroupKind::IntLattice: {
            std::vector<long long> c = x.coords();
            const auto& d = y.coords();
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += d[i];
            return {spec, std::move(c)};
        }
        case GroupKind::Cyclic:
            return {spec, mod_reduce(x.residue() + y.residue(), spec.cyclic_modulus())};
        case GroupKind::Symmetric: {
            const auto& a = x.perm();
            const auto& b = y.perm();
            std::vector<int> c(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) c[i] = a[b[i]];
            return {spec, std::move(c)};
        }
        case GroupKind::FreeGroup: {
            GroupElement::Word w = x.word();
            for (const auto& [letter, exp] : y.word()) word_push(w, letter, exp);
            return {spec, std::move(w)};
        }
        case GroupKind::DirectProduct:
            return make_pair_element(spec, multiply(x.pair_left(), y.pair_left()),
                                     multiply(x.pair_right(), y.pair_right()));
        case GroupKind::Semidirect: {
            // (n1, g1)(n2, g2) = (n1 * tau_{g1}(n2), g1 g2)
            GroupElement twisted = apply_action_node(spec.node(), x.pair_right(), y.pair_left());
            return make_pair_element(spec, multiply(x.pair_left(), twisted),
                                     multiply(x.pair_right(), y.pair_right()));
        }
    }
    throw Error("multiply: bad spec");
}

GroupElement inverse(const GroupElement& x) {
    const GroupSpec& spec = x.spec;
    switch (spec.kind()) {
        case GroupKind::IntLattice: {
            std::vector<long long> c = x.coords();
            for (auto& v : c) v = -v;
            return {spec, std::move(c)};
        }
        case GroupKind::Cyclic:
            return {spec, mod_reduce(-x.residue(), spec.cyclic_modulus())};
        case GroupKind::Symmetric: {
            const auto& a = x.perm();
            std::vector<int> c(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) c[a[i]] = static_cast<int>(i);
            return {spec, std::move(c)};
        }
        case GroupKind::FreeGroup: {
            const auto& w = x.word();
            GroupElement::Word r;
            r.reserve(w.size());
            for (auto it = w.rbegin(); it != w.rend(); ++it) r.emplace_back(it->first, -it->second);
            return {spec, std::move(r)};
        }
        case GroupKind::DirectProduct:
            return make_pair_element(spec, inverse(x.pair_left()), inverse(x.pair_right()));
        case GroupKind::Semidirect: {
            // (n, g)^{-1} = (tau_{g^{-1}}(n^{-1}), g^{-1})
            GroupElement gi = inverse(x.pair_right());
            GroupElement ni = apply_action_node(spec.node(), gi, inverse(x.pair_left()));
            return make_pair_element(spec, std::move(ni), std::move(gi));
        }
    }
    throw Error("inverse: bad spec");
}

GroupElement conjugate(const GroupElement& y, const GroupElement& x) {
    return multiply(multiply(y, x), inverse(y));
}

GroupElement power(const GroupElement& x, long long k) {
    if (k < 0) return power(inverse(x), -k);
    GroupElement acc = identity(x.spec);
    GroupElement base = x;
    while (k > 0) {
        if (k & 1) acc = multiply(acc, base);
        k >>= 1;
        if (k > 0) base = multiply(base, base);
    }
    return acc;
}

int compare(const GroupElement& a, const GroupElement& b) {
    if (a.payload.index() != b.payload.index())
        return a.payload.index() < b.payload.index() ? -1 : 1;
    switch (a.payload.index()) {
        case 0:
            return 0;
        case 1: {  // lattice
            const auto& x = a.coords();
            const auto& y = b.coords();
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
            return 0;
        }
        case 2: {  // cyclic
            long long x = a.residue(), y = b.residue();
            return x == y ? 0 : (x < y ? -1 : 1);
        }
        case 3: {  // permutation
            const auto& x = a.perm();
            const auto& y = b.perm();
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            for (std::size_t i = 0; i < x.size(); ++i)
                if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
            return 0;
        }
        case 4: {  // word
            const auto& x = a.word();
            const auto& y = b.word();
            std::size_t m = std::min(x.size(), y.size());
            for (std::size_t i = 0; i < m; ++i) {
                if (x[i].first != y[i].first) return x[i].first < y[i].first ? -1 : 1;
                if (x[i].second != y[i].second) return x[i].second < y[i].second ? -1 : 1;
            }
            if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
            return 0;
        }
        case 5: {  // pair
            int c = compare(a.pair_left(), b.pair_left());
            if (c != 0) return c;
            return compare(a.pair_right(), b.pair_right());
        }
    }
    return 0;
}

bool operator==(const GroupElement& a, const GroupElement& b) { return compare(a, b) == 0; }

namespace {
void hash_mix(std::size_t& h, std::size_t v) {
    h ^= v;
    h *= 1099511628211ULL;
}
}  // namespace

std::size_t element_hash(const GroupElement& x) {
    std::size_t h = 14695981039346656037ULL;
    hash_mix(h, x.payload.index());
    switch (x.payload.index()) {
        case 1:
            for (long long v : x.coords()) hash_mix(h, static_cast<std::size_t>(v));
            break;
        case 2:
            hash_mix(h, static_cast<std::size_t>(x.residue()));
            break;
        case 3:
            for (int v : x.perm()) hash_mix(h, static_cast<std::size_t>(v));
            break;
        case 4:
            for (const auto& [l, e] : x.word()) {
                hash_mix(h, static_cast<std::size_t>(l));
                hash_mix(h, static_cast<std::size_t>(e));
            }
            break;
        case 5:
            hash_mix(h, element_hash(x.pair_left()));
            hash_mix(h, element_hash(x.pair_right()));
            break;
        default:
            break;
    }
    return h;
}

// ---------------------------------------------------------------------------
// Order and compact part

namespace {

// Exact order from structure, with no cap truncation. Unknown only on
// arithmetic overflow or the undecidable semidirect corner.
OrderResult structural_order(const GroupElement& x) {
    const GroupSpec& spec = x.spec;
    switch (spec.kind()) {
        case GroupKind::IntLattice: {
            for (long long v : x.coords())
                if (v != 0) return OrderResult::infinite();
            return OrderResult::finite(1);
        }
        case GroupKind::Cyclic: {
            long long n = spec.cyclic_modulus();
            long long k = x.residue();
            if (k == 0) return OrderResult::finite(1);
            return OrderResult::finite(static_cast<unsigned long long>(n / std::gcd(n, k)));
        }
        case GroupKind::Symmetric: {
            const auto& p = x.perm();
            std::vector<bool> seen(p.size(), false);
            unsigned long long ord = 1;
            bool ok = true;
            for (std::size_t i = 0; i < p.size(); ++i) {
                if (seen[i]) continue;
                unsigned long long len = 0;
                std::size_t j = i;
                while (!seen[j]) {
                    seen[j] = true;
                    j = static_cast<std::size_t>(p[j]);
                    ++len;
                }
                ord = lcm_saturating(ord, len, ok);
                if (!ok) return OrderResult::unknown();
            }
            return OrderResult::finite(ord);
        }
        case GroupKind::FreeGroup:
            return x.word().empty() ? OrderResult::finite(1) : OrderResult::infinite();
        case GroupKind::DirectProduct: {
            OrderResult a = structural_order(x.pair_left());
            OrderResult b = structural_order(x.pair_right());
            if (a.kind == OrderResult::Kind::Infinite || b.kind == OrderResult::Kind::Infinite)
                return OrderResult::infinite();
            if (a.kind == OrderResult::Kind::Finite && b.kind == OrderResult::Kind::Finite) {
                bool ok = true;
                unsigned long long l = lcm_saturating(a.value, b.value, ok);
                return ok ? OrderResult::finite(l) : OrderResult::unknown();
            }
            return OrderResult::unknown();
        }
        case GroupKind::Semidirect: {
            OrderResult og = structural_order(x.pair_right());
            if (og.kind == OrderResult::Kind::Infinite) return OrderResult::infinite();
            if (og.kind == OrderResult::Kind::Unknown) return OrderResult::unknown();
            if (og.value > static_cast<unsigned long long>(INT64_MAX))
                return OrderResult::unknown();
            // x^m has trivial base part, so its fiber part powers untwisted.
            GroupElement y = power(x, static_cast<long long>(og.value));
            OrderResult on = structural_order(y.pair_left());
            if (on.kind != OrderResult::Kind::Finite) return on;
            unsigned long long out;
            if (mul_overflows(og.value, on.value, out)) return OrderResult::unknown();
            return OrderResult::finite(out);
        }
    }
    return OrderResult::unknown();
}

bool torsion_free_constructor(const GroupSpec& spec) {
    switch (spec.kind()) {
        case GroupKind::IntLattice:
            return true;
        case GroupKind::Cyclic:
            return spec.cyclic_modulus() == 1;
        case GroupKind::DirectProduct:
            return torsion_free_constructor(spec.left()) && torsion_free_constructor(spec.right());
        default:
            return false;
    }
}

}  // namespace

OrderResult element_order(const GroupElement& x, unsigned long long cap) {
    OrderResult r = structural_order(x);
    if (r.kind == OrderResult::Kind::Finite && r.value > cap) return OrderResult::unknown();
    return r;
}

Tristate in_compact_part(const GroupElement& x) {
    const GroupSpec& spec = x.spec;
    switch (spec.kind()) {
        case GroupKind::IntLattice: {
            for (long long v : x.coords())
                if (v != 0) return Tristate::False;
            return Tristate::True;
        }
        case GroupKind::Cyclic:
        case GroupKind::Symmetric:
            return Tristate::True;
        case GroupKind::FreeGroup:
            return x.word().empty() ? Tristate::True : Tristate::False;
        case GroupKind::DirectProduct: {
            Tristate a = in_compact_part(x.pair_left());
            Tristate b = in_compact_part(x.pair_right());
            if (a == Tristate::False || b == Tristate::False) return Tristate::False;
            if (a == Tristate::True && b == Tristate::True) return Tristate::True;
            return Tristate::Unknown;
        }
        case GroupKind::Semidirect: {
            // The torsion-generated subgroup projects into the torsion part of
            // the base, so a non-torsion base part rules membership out.
            OrderResult og = structural_order(x.pair_right());
            if (og.kind == OrderResult::Kind::Infinite) return Tristate::False;
            if (og.kind == OrderResult::Kind::Unknown) return Tristate::Unknown;
            if (torsion_free_constructor(spec.base())) {
                // Torsion lives entirely in the fiber slice here.
                return in_compact_part(x.pair_left());
            }
            if (spec.fiber().is_finite()) return Tristate::True;
            // (n, t) = (n, e)(e, t) with (e, t) torsion, so fiber membership
            // in its own torsion subgroup suffices; beyond that the twisted
            // products are not decided structurally.
            if (in_compact_part(x.pair_left()) == Tristate::True) return Tristate::True;
            if (structural_order(x).kind == OrderResult::Kind::Finite) return Tristate::True;
            return Tristate::Unknown;
        }
    }
    return Tristate::Unknown;
}

// ---------------------------------------------------------------------------
// Generators, balls, enumeration

std::vector<GroupElement> generators(const GroupSpec& spec) {
    std::vector<GroupElement> g;
    switch (spec.kind()) {
        case GroupKind::IntLattice: {
            for (int i = 0; i < spec.lattice_dim(); ++i) {
                std::vector<long long> c(spec.lattice_dim(), 0);
                c[i] = 1;
                g.push_back({spec, std::move(c)});
            }
            break;
        }
        case GroupKind::Cyclic:
            if (spec.cyclic_modulus() > 1) g.push_back({spec, 1LL});
            break;
        case GroupKind::Symmetric: {
            int n = spec.symmetric_degree();
            for (int i = 0; i + 1 < n; ++i) {
                std::vector<int> p(n);
                std::iota(p.begin(), p.end(), 0);
                std::swap(p[i], p[i + 1]);
                g.push_back({spec, std::move(p)});
            }
            break;
        }
        case GroupKind::FreeGroup:
            for (int i = 0; i < spec.free_rank(); ++i)
                g.push_back({spec, GroupElement::Word{{i, 1}}});
            break;
        case GroupKind::DirectProduct: {
            GroupElement el = identity(spec.left());
            GroupElement er = identity(spec.right());
            for (auto& gl : generators(spec.left())) g.push_back(make_pair_element(spec, gl, er));
            for (auto& gr : generators(spec.right())) g.push_back(make_pair_element(spec, el, gr));
            break;
        }
        case GroupKind::Semidirect: {
            GroupElement en = identity(spec.fiber());
            GroupElement eg = identity(spec.base());
            for (auto& gn : generators(spec.fiber())) g.push_back(make_pair_element(spec, gn, eg));
            for (auto& gg : generators(spec.base())) g.push_back(make_pair_element(spec, en, gg));
            break;
        }
    }
    return g;
}

std::vector<GroupElement> ball(const GroupSpec& spec, std::vector<GroupElement> gens, int radius,
                               std::size_t cap) {
    if (radius < 0) throw ValidationError("ball radius must be >= 0");
    GroupElement e = identity(spec);
    std::vector<GroupElement> sym;
    for (auto& g : gens) {
        if (!g.spec.same_as(spec)) mismatch("ball: generator from a different group");
        sym.push_back(g);
        sym.push_back(inverse(g));
    }
    // Dedupe the symmetrized set and drop the identity.
    std::unordered_set<GroupElement, ElementHash, ElementEq> gset;
    std::vector<GroupElement> use;
    for (auto& g : sym) {
        if (g == e) continue;
        if (gset.insert(g).second) use.push_back(g);
    }

    std::vector<GroupElement> result{e};
    std::unordered_set<GroupElement, ElementHash, ElementEq> seen{e};
    std::vector<GroupElement> frontier{e};
    for (int layer = 1; layer <= radius && !frontier.empty(); ++layer) {
        std::vector<GroupElement> next;
        for (const auto& x : frontier) {
            for (const auto& s : use) {
                GroupElement y = multiply(x, s);
                if (seen.insert(y).second) {
                    next.push_back(std::move(y));
                    if (seen.size() > cap)
                        throw CapExceededError("ball size exceeds cap " + std::to_string(cap));
                }
            }
        }
        std::sort(next.begin(), next.end(), ElementLess{});
        result.insert(result.end(), next.begin(), next.end());
        frontier = std::move(next);
    }
    return result;
}

std::vector<GroupElement> enumerate_group(const GroupSpec& spec, std::size_t cap) {
    if (!spec.is_finite())
        throw ValidationError("enumerate_group: " + spec.describe() + " is infinite");
    GroupElement e = identity(spec);
    std::vector<GroupElement> gens;
    for (auto& g : generators(spec)) {
        gens.push_back(g);
        gens.push_back(inverse(g));
    }
    std::unordered_set<GroupElement, ElementHash, ElementEq> seen{e};
    std::vector<GroupElement> frontier{e};
    while (!frontier.empty()) {
        std::vector<GroupElement> next;
        for (const auto& x : frontier) {
            for (const auto& s : gens) {
                GroupElement y = multiply(x, s);
                if (seen.insert(y).second) {
                    next.push_back(std::move(y));
                    if (seen.size() > cap)
                        throw CapExceededError("enumeration exceeds cap " + std::to_string(cap));
                }
            }
        }
        frontier = std::move(next);
    }
    std::vector<GroupElement> all(seen.begin(), seen.end());
    std::sort(all.begin(), all.end(), ElementLess{});
    return all;
}

// ---------------------------------------------------------------------------
// Action compilation and application

namespace {

GroupElement apply_aut(const CompiledAutomorphism& A, const GroupSpec& nspec, const GroupElement& x,
                       long long exp);

// Composite permutation power by cycle jump; perm[i] is the image of i.
std::vector<int> perm_power(const std::vector<int>& perm, long long exp) {
    int n = static_cast<int>(perm.size());
    std::vector<int> out(n);
    std::vector<bool> seen(n, false);
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        std::vector<int> cyc;
        int j = i;
        while (!seen[j]) {
            seen[j] = true;
            cyc.push_back(j);
            j = perm[j];
        }
        long long len = static_cast<long long>(cyc.size());
        long long off = ((exp % len) + len) % len;
        for (std::size_t p = 0; p < cyc.size(); ++p)
            out[cyc[p]] = cyc[(p + static_cast<std::size_t>(off)) % cyc.size()];
    }
    return out;
}

std::vector<GroupElement> flatten_chain(const GroupElement& x, int count) {
    std::vector<GroupElement> parts;
    GroupElement cur = x;
    for (int i = 0; i + 1 < count; ++i) {
        parts.push_back(cur.pair_left());
        cur = cur.pair_right();
    }
    parts.push_back(cur);
    return parts;
}

GroupElement rebuild_chain(const GroupSpec& spec, const std::vector<GroupElement>& parts,
                           std::size_t i) {
    if (i + 1 == parts.size()) return parts[i];
    return make_pair_element(spec, parts[i], rebuild_chain(spec.right(), parts, i + 1));
}

std::vector<std::vector<long long>> mat_mul(const std::vector<std::vector<long long>>& a,
                                            const std::vector<std::vector<long long>>& b) {
    std::size_t n = a.size();
    std::vector<std::vector<long long>> c(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (a[i][k] == 0) continue;
            for (std::size_t j = 0; j < n; ++j) {
                __int128 v = static_cast<__int128>(c[i][j]) +
                             static_cast<__int128>(a[i][k]) * static_cast<__int128>(b[k][j]);
                if (v > INT64_MAX || v < INT64_MIN)
                    throw CapExceededError("lattice action power exceeds integer range");
                c[i][j] = static_cast<long long>(v);
            }
        }
    return c;
}

std::vector<std::vector<long long>> mat_power(std::vector<std::vector<long long>> a,
                                              unsigned long long exp) {
    std::size_t n = a.size();
    std::vector<std::vector<long long>> r(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i) r[i][i] = 1;
    while (exp > 0) {
        if (exp & 1) r = mat_mul(r, a);
        exp >>= 1;
        if (exp > 0) a = mat_mul(a, a);
    }
    return r;
}

GroupElement apply_matrix(const std::vector<std::vector<long long>>& m, const GroupSpec& nspec,
                          const GroupElement& x) {
    const auto& c = x.coords();
    std::size_t n = c.size();
    std::vector<long long> out(n, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            __int128 v = static_cast<__int128>(out[i]) +
                         static_cast<__int128>(m[i][j]) * static_cast<__int128>(c[j]);
            if (v > INT64_MAX || v < INT64_MIN)
                throw CapExceededError("lattice action value exceeds integer range");
            out[i] = static_cast<long long>(v);
        }
    return make_lattice_element(nspec, std::move(out));
}

// Signed letter map composition: (b after a)(i) = b applied to a(i).
std::vector<std::pair<int, int>> signed_compose(const std::vector<std::pair<int, int>>& b,
                                                const std::vector<std::pair<int, int>>& a) {
    std::vector<std::pair<int, int>> c(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        auto [j, s] = a[i];
        auto [k, t] = b[static_cast<std::size_t>(j)];
        c[i] = {k, s * t};
    }
    return c;
}

GroupElement apply_aut(const CompiledAutomorphism& A, const GroupSpec& nspec, const GroupElement& x,
                       long long exp) {
    if (exp == 0 || A.kind == CompiledAutomorphism::Kind::Identity) return x;
    switch (A.kind) {
        case CompiledAutomorphism::Kind::Table: {
            auto it = A.elem_index->find(x);
            if (it == A.elem_index->end()) throw Error("action table: element not enumerated");
            std::size_t idx = it->second;
            const auto& cyc = A.cycles[A.cycle_of[idx]];
            long long len = static_cast<long long>(cyc.size());
            long long off = ((exp % len) + len) % len;
            std::size_t pos = (A.cycle_pos[idx] + static_cast<std::size_t>(off)) % cyc.size();
            return (*A.elems)[cyc[pos]];
        }
        case CompiledAutomorphism::Kind::Matrix: {
            const auto& base = exp > 0 ? A.mat : A.mat_inv;
            unsigned long long e = exp > 0 ? static_cast<unsigned long long>(exp)
                                           : static_cast<unsigned long long>(-(exp + 1)) + 1;
            return apply_matrix(mat_power(base, e), nspec, x);
        }
        case CompiledAutomorphism::Kind::SignedPerm: {
            long long ord = static_cast<long long>(A.letter_order);
            long long e = ((exp % ord) + ord) % ord;
            std::vector<std::pair<int, int>> m(A.letter_map.size());
            for (std::size_t i = 0; i < m.size(); ++i) m[i] = {static_cast<int>(i), 1};
            for (long long i = 0; i < e; ++i) m = signed_compose(A.letter_map, m);
            GroupElement::Word w;
            for (const auto& [letter, p] : x.word()) {
                auto [j, s] = m[static_cast<std::size_t>(letter)];
                word_push(w, j, s * p);
            }
            return make_word_element(nspec, w);
        }
        case CompiledAutomorphism::Kind::Block: {
            GroupElement l = apply_aut(*A.block_left, nspec.left(), x.pair_left(), exp);
            GroupElement r = apply_aut(*A.block_right, nspec.right(), x.pair_right(), exp);
            return make_pair_element(nspec, std::move(l), std::move(r));
        }
        case CompiledAutomorphism::Kind::IndexPerm: {
            long long ord = static_cast<long long>(A.slot_order);
            long long e = ((exp % ord) + ord) % ord;
            std::vector<int> sigma = perm_power(A.slot_perm, e);
            std::vector<GroupElement> parts =
                flatten_chain(x, static_cast<int>(A.slot_perm.size()));
            std::vector<GroupElement> out(parts.size());
            for (std::size_t j = 0; j < parts.size(); ++j)
                out[j] = parts[static_cast<std::size_t>(sigma[j])];
            return rebuild_chain(nspec, out, 0);
        }
        default:
            return x;
    }
}

// Per-slot integer coordinates of an element of an abelian constructor
// (lattice coordinates and cyclic residues, constructor-tree pre-order).
void abelian_coordinates(const GroupElement& g, std::vector<long long>& out) {
    switch (g.spec.kind()) {
        case GroupKind::IntLattice:
            for (long long v : g.coords()) out.push_back(v);
            break;
        case GroupKind::Cyclic:
            out.push_back(g.residue());
            break;
        case GroupKind::DirectProduct:
            abelian_coordinates(g.pair_left(), out);
            abelian_coordinates(g.pair_right(), out);
            break;
        default:
            throw Error("abelian_coordinates: unsupported base constructor");
    }
}

// Slot moduli of an abelian constructor: 0 for a free (lattice) slot, n for
// a cyclic slot. The order matches abelian_coordinates and generators().
void abelian_slot_moduli(const GroupSpec& spec, std::vector<long long>& out) {
    switch (spec.kind()) {
        case GroupKind::IntLattice:
            for (int i = 0; i < spec.lattice_dim(); ++i) out.push_back(0);
            break;
        case GroupKind::Cyclic:
            out.push_back(spec.cyclic_modulus());
            break;
        case GroupKind::DirectProduct:
            abelian_slot_moduli(spec.left(), out);
            abelian_slot_moduli(spec.right(), out);
            break;
        default:
            throw Error("abelian_slot_moduli: unsupported base constructor");
    }
}

GroupElement apply_action_node(const GroupSpecNode* node, const GroupElement& g,
                               const GroupElement& n) {
    switch (node->action.kind()) {
        case ActionKind::Trivial:
            return n;
        case ActionKind::ConjugationBy: {
            long long e = g.coords()[0];
            if (e == 0) return n;
            GroupElement cg = power(node->conj_c, e);
            return multiply(multiply(cg, n), inverse(cg));
        }
        case ActionKind::GeneratorImages:
        case ActionKind::IndexPermutation: {
            std::vector<long long> coords;
            abelian_coordinates(g, coords);
            GroupElement x = n;
            for (std::size_t i = 0; i < coords.size(); ++i) {
                if (coords[i] == 0) continue;
                x = apply_aut(node->compiled[i], node->fiber, x, coords[i]);
            }
            return x;
        }
    }
    return n;
}

bool abelian_constructor(const GroupSpec& spec) {
    switch (spec.kind()) {
        case GroupKind::IntLattice:
        case GroupKind::Cyclic:
            return true;
        case GroupKind::DirectProduct:
            return abelian_constructor(spec.left()) && abelian_constructor(spec.right());
        default:
            return false;
    }
}

mpz_class det_bareiss(std::vector<std::vector<mpz_class>> m) {
    std::size_t n = m.size();
    mpz_class prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return n == 0 ? mpz_class(1) : sign * m[n - 1][n - 1];
}

// Exact inverse of an integer matrix with det +-1.
std::vector<std::vector<long long>> unimodular_inverse(
    const std::vector<std::vector<long long>>& a) {
    std::size_t n = a.size();
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(2 * n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) m[i][j] = mpq_class(static_cast<long>(a[i][j]));
        m[i][n + i] = 1;
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) throw ValidationError("lattice action matrix is singular");
        std::swap(m[col], m[piv]);
        mpq_class d = m[col][col];
        for (std::size_t j = 0; j < 2 * n; ++j) m[col][j] /= d;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == col || m[i][col] == 0) continue;
            mpq_class f = m[i][col];
            for (std::size_t j = 0; j < 2 * n; ++j) m[i][j] -= f * m[col][j];
        }
    }
    std::vector<std::vector<long long>> inv(n, std::vector<long long>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            mpq_class v = m[i][n + j];
            v.canonicalize();
            if (v.get_den() != 1) throw ValidationError("lattice action inverse is not integral");
            if (!v.get_num().fits_slong_p())
                throw ValidationError("lattice action inverse entry out of range");
            inv[i][j] = v.get_num().get_si();
        }
    return inv;
}

CompiledAutomorphism compile_images_for(const GroupSpec& fiber,
                                        const std::vector<GroupElement>& images);

CompiledAutomorphism compile_table(const GroupSpec& fiber, const std::vector<GroupElement>& gens,
                                   const std::vector<GroupElement>& images) {
    auto elems = std::make_shared<std::vector<GroupElement>>(
        enumerate_group(fiber, kActionTableCap));
    auto index = std::make_shared<
        std::unordered_map<GroupElement, std::size_t, ElementHash, ElementEq>>();
    for (std::size_t i = 0; i < elems->size(); ++i) (*index)[(*elems)[i]] = i;

    // Symmetrized generator list with images; phi(s^{-1}) = phi(s)^{-1}.
    std::vector<GroupElement> sg, si;
    for (std::size_t i = 0; i < gens.size(); ++i) {
        sg.push_back(gens[i]);
        si.push_back(images[i]);
        sg.push_back(inverse(gens[i]));
        si.push_back(inverse(images[i]));
    }

    GroupElement e = identity(fiber);
    std::vector<bool> known(elems->size(), false);
    std::vector<GroupElement> phi(elems->size(), e);
    std::size_t eidx = index->at(e);
    known[eidx] = true;
    std::vector<std::size_t> frontier{eidx};
    while (!frontier.empty()) {
        std::vector<std::size_t> next;
        for (std::size_t xi : frontier) {
            for (std::size_t s = 0; s < sg.size(); ++s) {
                GroupElement y = multiply((*elems)[xi], sg[s]);
                std::size_t yi = index->at(y);
                if (!known[yi]) {
                    known[yi] = true;
                    phi[yi] = multiply(phi[xi], si[s]);
                    next.push_back(yi);
                }
            }
        }
        frontier = std::move(next);
    }
    for (bool k : known)
        if (!k) throw ValidationError("action images: generators do not generate the fiber");

    // Homomorphism check on every (element, generator) edge, which extends
    // to all pairs by induction on word length.
    for (std::size_t xi = 0; xi < elems->size(); ++xi) {
        for (std::size_t s = 0; s < sg.size(); ++s) {
            GroupElement lhs = phi[index->at(multiply((*elems)[xi], sg[s]))];
            GroupElement rhs = multiply(phi[xi], si[s]);
            if (!(lhs == rhs))
                throw ValidationError("action images do not extend to a homomorphism");
        }
    }
    std::unordered_set<GroupElement, ElementHash, ElementEq> image_set(phi.begin(), phi.end());
    if (image_set.size() != elems->size())
        throw ValidationError("action images do not define a bijection");

    CompiledAutomorphism A;
    A.kind = CompiledAutomorphism::Kind::Table;
    A.elems = elems;
    A.elem_index = index;
    std::vector<std::size_t> perm(elems->size());
    for (std::size_t i = 0; i < elems->size(); ++i) perm[i] = index->at(phi[i]);
    A.cycle_of.assign(elems->size(), 0);
    A.cycle_pos.assign(elems->size(), 0);
    std::vector<bool> seen(elems->size(), false);
    for (std::size_t i = 0; i < elems->size(); ++i) {
        if (seen[i]) continue;
        std::vector<std::size_t> cyc;
        std::size_t j = i;
        while (!seen[j]) {
            seen[j] = true;
            A.cycle_of[j] = A.cycles.size();
            A.cycle_pos[j] = cyc.size();
            cyc.push_back(j);
            j = perm[j];
        }
        A.cycles.push_back(std::move(cyc));
    }
    return A;
}

CompiledAutomorphism compile_matrix(const GroupSpec& fiber,
                                    const std::vector<GroupElement>& images) {
    int d = fiber.lattice_dim();
    if (d > 16) throw ValidationError("lattice action supported up to dimension 16");
    std::vector<std::vector<long long>> a(d, std::vector<long long>(d, 0));
    for (int j = 0; j < d; ++j) {
        const auto& img = images[static_cast<std::size_t>(j)].coords();
        for (int i = 0; i < d; ++i) a[i][j] = img[static_cast<std::size_t>(i)];
    }
    std::vector<std::vector<mpz_class>> z(d, std::vector<mpz_class>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) z[i][j] = mpz_class(static_cast<long>(a[i][j]));
    mpz_class det = det_bareiss(z);
    if (det != 1 && det != -1)
        throw ValidationError("lattice action matrix must have determinant +1 or -1");
    CompiledAutomorphism A;
    A.kind = CompiledAutomorphism::Kind::Matrix;
    A.mat = a;
    A.mat_inv = unimodular_inverse(a);
    return A;
}

CompiledAutomorphism compile_signed_perm(const GroupSpec& fiber,
                                         const std::vector<GroupElement>& images) {
    int k = fiber.free_rank();
    std::vector<std::pair<int, int>> map(static_cast<std::size_t>(k));
    std::vector<bool> hit(static_cast<std::size_t>(k), false);
    for (int i = 0; i < k; ++i) {
        const auto& w = images[static_cast<std::size_t>(i)].word();
        if (w.size() != 1 || (w[0].second != 1 && w[0].second != -1))
            throw ValidationError(
                "free-group action images must be single letters with exponent +1 or -1");
        int j = w[0].first;
        if (hit[static_cast<std::size_t>(j)])
            throw ValidationError("free-group action images must permute the letters");
        hit[static_cast<std::size_t>(j)] = true;
        map[static_cast<std::size_t>(i)] = {j, static_cast<int>(w[0].second)};
    }
    CompiledAutomorphism A;
    A.kind = CompiledAutomorphism::Kind::SignedPerm;
    A.letter_map = map;
    // Order of the signed permutation: compose until identity.
    std::vector<std::pair<int, int>> cur = map;
    unsigned long long ord = 1;
    auto is_id = [&](const std::vector<std::pair<int, int>>& m) {
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i].first != static_cast<int>(i) || m[i].second != 1) return false;
        return true;
    };
    while (!is_id(cur)) {
        cur = signed_compose(map, cur);
        ++ord;
        if (ord > 1000000) throw ValidationError("free-group action order too large");
    }
    A.letter_order = ord;
    return A;
}

CompiledAutomorphism compile_block(const GroupSpec& fiber,
                                   const std::vector<GroupElement>& images) {
    std::size_t nl = generators(fiber.left()).size();
    GroupElement el = identity(fiber.left());
    GroupElement er = identity(fiber.right());
    std::vector<GroupElement> li, ri;
    for (std::size_t i = 0; i < images.size(); ++i) {
        const GroupElement& img = images[i];
        if (i < nl) {
            if (!(img.pair_right() == er))
                throw ValidationError(
                    "product-fiber action must map left-factor generators into the left factor");
            li.push_back(img.pair_left());
        } else {
            if (!(img.pair_left() == el))
                throw ValidationError(
                    "product-fiber action must map right-factor generators into the right factor");
            ri.push_back(img.pair_right());
        }
    }
    CompiledAutomorphism A;
    A.kind = CompiledAutomorphism::Kind::Block;
    A.block_left =
        std::make_shared<CompiledAutomorphism>(compile_images_for(fiber.left(), li));
    A.block_right =
        std::make_shared<CompiledAutomorphism>(compile_images_for(fiber.right(), ri));
    return A;
}

CompiledAutomorphism compile_images_for(const GroupSpec& fiber,
                                        const std::vector<GroupElement>& images) {
    std::vector<GroupElement> gens = generators(fiber);
    if (images.size() != gens.size())
        throw ValidationError("action needs one image per fiber generator (" +
                              std::to_string(gens.size()) + "), got " +
                              std::to_string(images.size()));
    for (const auto& img : images)
        if (!img.spec.same_as(fiber)) mismatch("action image from a different group");
    bool as_identity = true;
    for (std::size_t i = 0; i < gens.size(); ++i)
        if (!(images[i] == gens[i])) as_identity = false;
    if (as_identity) {
        CompiledAutomorphism A;
        A.kind = CompiledAutomorphism::Kind::Identity;
        return A;
    }
    auto order = fiber.finite_order();
    if (fiber.is_finite() && order && *order <= kActionTableCap)
        return compile_table(fiber, gens, images);
    switch (fiber.kind()) {
        case GroupKind::IntLattice:
            return compile_matrix(fiber, images);
        case GroupKind::FreeGroup:
            return compile_signed_perm(fiber, images);
        case GroupKind::DirectProduct:
            return compile_block(fiber, images);
        default:
            throw ValidationError("unsupported fiber for generator-image actions: " +
                                  fiber.describe());
    }
}

int detect_chain(const GroupSpec& fiber) {
    std::vector<GroupSpec> factors;
    GroupSpec t = fiber;
    while (t.kind() == GroupKind::DirectProduct) {
        factors.push_back(t.left());
        t = t.right();
    }
    factors.push_back(t);
    for (const auto& f : factors)
        if (!f.same_as(factors[0])) return 0;
    return static_cast<int>(factors.size());
}

void compile_action(GroupSpecNode& node) {
    const GroupSpec& fiber = node.fiber;
    const GroupSpec& base = node.base;
    std::vector<long long> moduli;
    abelian_slot_moduli(base, moduli);
    // One automorphism per constructor slot of the base, trivial slots
    // included (their coordinate is always zero, so the entry is unused).
    std::size_t slot_count = moduli.size();

    switch (node.action.kind()) {
        case ActionKind::Trivial:
            return;
        case ActionKind::ConjugationBy: {
            if (base.kind() != GroupKind::IntLattice || base.lattice_dim() != 1)
                throw ValidationError(
                    "conjugation actions need a rank-1 lattice base, got " + base.describe());
            const GroupElement& c = node.action.conjugator();
            if (!c.spec.same_as(fiber))
                mismatch("conjugator must lie in the fiber " + fiber.describe());
            node.conj_c = c;
            node.conj_c_inv = inverse(c);
            return;
        }
        case ActionKind::GeneratorImages: {
            const auto& images = node.action.images();
            if (images.size() != slot_count)
                throw ValidationError("action needs one automorphism per base generator (" +
                                      std::to_string(slot_count) + "), got " +
                                      std::to_string(images.size()));
            node.compiled.reserve(slot_count);
            for (const auto& im : images) node.compiled.push_back(compile_images_for(fiber, im));
            break;
        }
        case ActionKind::IndexPermutation: {
            int count = detect_chain(fiber);
            if (count == 0)
                throw ValidationError(
                    "index-permutation actions need a fiber that is a chain of equal factors");
            node.chain_len = count;
            const auto& perms = node.action.perms();
            if (perms.size() != slot_count)
                throw ValidationError("action needs one index permutation per base generator (" +
                                      std::to_string(slot_count) + "), got " +
                                      std::to_string(perms.size()));
            node.compiled.reserve(slot_count);
            for (const auto& p : perms) {
                if (static_cast<int>(p.size()) != count)
                    throw ValidationError("index permutation must have length " +
                                          std::to_string(count));
                std::vector<bool> seen(p.size(), false);
                for (int v : p) {
                    if (v < 0 || v >= count || seen[static_cast<std::size_t>(v)])
                        throw ValidationError("index permutation entries must be a permutation");
                    seen[static_cast<std::size_t>(v)] = true;
                }
                CompiledAutomorphism A;
                bool is_id = true;
                for (int i = 0; i < count; ++i)
                    if (p[static_cast<std::size_t>(i)] != i) is_id = false;
                if (is_id) {
                    A.kind = CompiledAutomorphism::Kind::Identity;
                } else {
                    A.kind = CompiledAutomorphism::Kind::IndexPerm;
                    A.slot_perm = p;
                    bool ok = true;
                    unsigned long long ord = 1;
                    std::vector<bool> vis(p.size(), false);
                    for (std::size_t i = 0; i < p.size(); ++i) {
                        if (vis[i]) continue;
                        unsigned long long len = 0;
                        std::size_t j = i;
                        while (!vis[j]) {
                            vis[j] = true;
                            j = static_cast<std::size_t>(p[j]);
                            ++len;
                        }
                        ord = lcm_saturating(ord, len, ok);
                    }
                    A.slot_order = ok ? ord : 1;
                }
                node.compiled.push_back(std::move(A));
            }
            break;
        }
    }

    // Per-slot torsion compatibility: for a cyclic slot of modulus m the
    // automorphism's m-th power must fix every fiber generator.
    std::vector<GroupElement> fgens = generators(fiber);
    for (std::size_t i = 0; i < node.compiled.size(); ++i) {
        long long m = moduli[i];
        if (m <= 1) continue;
        for (const auto& s : fgens) {
            if (!(apply_aut(node.compiled[i], fiber, s, m) == s))
                throw ValidationError(
                    "action is incompatible with the cyclic base slot of order " +
                    std::to_string(m));
        }
    }
    // Base is abelian, so the slot automorphisms must commute.
    for (std::size_t i = 0; i < node.compiled.size(); ++i)
        for (std::size_t j = i + 1; j < node.compiled.size(); ++j)
            for (const auto& s : fgens) {
                GroupElement ij = apply_aut(node.compiled[i], fiber,
                                            apply_aut(node.compiled[j], fiber, s, 1), 1);
                GroupElement ji = apply_aut(node.compiled[j], fiber,
                                            apply_aut(node.compiled[i], fiber, s, 1), 1);
                if (!(ij == ji))
                    throw ValidationError("base generators must act by commuting automorphisms");
            }
}

}  // namespace

GroupElement apply_action(const GroupSpec& semidirect_spec, const GroupElement& g,
                          const GroupElement& n) {
    if (semidirect_spec.kind() != GroupKind::Semidirect)
        throw ValidationError("apply_action: " + semidirect_spec.describe() +
                              " is not a semidirect product");
    if (!g.spec.same_as(semidirect_spec.base()) || !n.spec.same_as(semidirect_spec.fiber()))
        mismatch("apply_action: arguments from the wrong factors");
    return apply_action_node(semidirect_spec.node(), g, n);
}

// ---------------------------------------------------------------------------
// GroupSpec factories

namespace {
GroupSpec finish(std::shared_ptr<GroupSpecNode> node) {
    return GroupSpecAccess::make(std::shared_ptr<const GroupSpecNode>(std::move(node)));
}
}  // namespace

GroupSpec GroupSpec::int_lattice(int d) {
    if (d < 1) throw ValidationError("int_lattice dimension must be >= 1");
    auto n = std::make_shared<GroupSpecNode>();
    n->kind = GroupKind::IntLattice;
    n->dim = d;
    return finish(std::move(n));
}

GroupSpec GroupSpec::cyclic(long long m) {
    if (m < 1) throw ValidationError("cyclic modulus must be >= 1");
    auto n = std::make_shared<GroupSpecNode>();
    n->kind = GroupKind::Cyclic;
    n->modulus = m;
    return finish(std::move(n));
}

GroupSpec GroupSpec::symmetric(int deg) {
    if (deg < 1) throw ValidationError("symmetric degree must be >= 1");
    auto n = std::make_shared<GroupSpecNode>();
    n->kind = GroupKind::Symmetric;
    n->degree = deg;
    return finish(std::move(n));
}

GroupSpec GroupSpec::free_group(int rank) {
    if (rank < 1) throw ValidationError("free_group rank must be >= 1");
    if (rank > 26) throw ValidationError("free_group rank at most 26 supported");
    auto n = std::make_shared<GroupSpecNode>();
    n->kind = GroupKind::FreeGroup;
    n->rank = rank;
    return finish(std::move(n));
}

GroupSpec GroupSpec::direct_product(GroupSpec left, GroupSpec right) {
    if (!left.valid() || !right.valid()) throw ValidationError("direct_product: empty factor");
    auto n = std::make_shared<GroupSpecNode>();
    n->kind = GroupKind::DirectProduct;
    n->left = std::move(left);
    n->right = std::move(right);
    return finish(std::move(n));
}

GroupSpec GroupSpec::semidirect(GroupSpec fiber, GroupSpec base, ActionSpec action) {
    if (!fiber.valid() || !base.valid()) throw ValidationError("semidirect: empty factor");
    if (!abelian_constructor(base))
        throw ValidationError(
            "semidirect base must be built from int_lattice, cyclic, and direct_product; got " +
            base.describe());
    auto n = std::make_shared<GroupSpecNode>();
    n->kind = GroupKind::Semidirect;
    n->fiber = std::move(fiber);
    n->base = std::move(base);
    n->action = std::move(action);
    compile_action(*n);
    return finish(std::move(n));
}

GroupSpec GroupSpec::wreath_lite(const GroupSpec& r, int j, GroupSpec base,
                                 std::vector<std::vector<int>> perms) {
    if (j < 1) throw ValidationError("wreath_lite needs at least one copy");
    GroupSpec chain = r;
    for (int i = 1; i < j; ++i) chain = direct_product(r, chain);
    return semidirect(std::move(chain), std::move(base),
                      ActionSpec::index_permutations(std::move(perms)));
}

std::vector<long long> abelian_coordinates(const GroupElement& x) {
    if (!abelian_constructor(x.spec)) {
        throw SpecMismatchError("coordinates exist only for abelian constructors, not " +
                                x.spec.describe());
    }
    std::vector<long long> out;
    abelian_coordinates(x, out);
    return out;
}

std::vector<long long> abelian_slot_moduli(const GroupSpec& spec) {
    if (!abelian_constructor(spec)) {
        throw SpecMismatchError("slot moduli exist only for abelian constructors, not " +
                                spec.describe());
    }
    std::vector<long long> out;
    abelian_slot_moduli(spec, out);
    return out;
}

}  // namespace convspec
