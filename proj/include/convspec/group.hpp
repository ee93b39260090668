#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace convspec {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Two elements or measures from different groups were combined.
struct SpecMismatchError : Error {
    using Error::Error;
};
// A constructor argument or action failed its validity check.
struct ValidationError : Error {
    using Error::Error;
};
// A configured resource cap (ball size, support size, enumeration) was hit.
struct CapExceededError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};

enum class GroupKind { IntLattice, Cyclic, Symmetric, FreeGroup, DirectProduct, Semidirect };

enum class ActionKind { Trivial, ConjugationBy, GeneratorImages, IndexPermutation };

enum class Tristate { True, False, Unknown };

inline constexpr std::size_t kDefaultBallCap = 200000;

class GroupSpec;
struct GroupSpecNode;
struct GroupElement;

// Description of how the abelian base acts on the fiber of a semidirect
// product. Validation happens when the enclosing group is constructed,
// because it needs both factor groups.
class ActionSpec {
  public:
    static ActionSpec trivial();
    // tau_g(n) = c^g n c^{-g}; requires the base to be the rank-1 lattice.
    static ActionSpec conjugation_by(GroupElement c);
    // One automorphism per base generator, each given by images of the
    // fiber's generators (in constructor-generator order).
    static ActionSpec generator_images(std::vector<std::vector<GroupElement>> images);
    // One permutation of the J copy indices per base generator; only valid
    // when the fiber is a right-nested chain of J equal factors.
    static ActionSpec index_permutations(std::vector<std::vector<int>> perms);

    ActionKind kind() const;
    const GroupElement& conjugator() const;
    const std::vector<std::vector<GroupElement>>& images() const;
    const std::vector<std::vector<int>>& perms() const;

  private:
    struct Data;
    std::shared_ptr<const Data> data_;
};

// Immutable handle to a group constructor tree. Copies share the node.
class GroupSpec {
  public:
    GroupSpec() = default;

    static GroupSpec int_lattice(int d);
    static GroupSpec cyclic(long long n);
    static GroupSpec symmetric(int n);
    static GroupSpec free_group(int rank);
    static GroupSpec direct_product(GroupSpec left, GroupSpec right);
    static GroupSpec semidirect(GroupSpec fiber, GroupSpec base, ActionSpec action);
    // Sugar: fiber = chain of j copies of r, base acting by permuting copies.
    static GroupSpec wreath_lite(const GroupSpec& r, int j, GroupSpec base,
                                 std::vector<std::vector<int>> perms);

    bool valid() const { return node_ != nullptr; }
    GroupKind kind() const;
    int lattice_dim() const;
    long long cyclic_modulus() const;
    int symmetric_degree() const;
    int free_rank() const;
    const GroupSpec& left() const;
    const GroupSpec& right() const;
    const GroupSpec& fiber() const;
    const GroupSpec& base() const;
    const ActionSpec& action() const;

    bool same_as(const GroupSpec& other) const;
    bool is_abelian() const;
    bool is_finite() const;
    // Group order when finite and representable, nullopt otherwise.
    std::optional<unsigned long long> finite_order() const;
    std::string describe() const;

    const GroupSpecNode* node() const { return node_.get(); }

  private:
    friend struct GroupSpecAccess;
    explicit GroupSpec(std::shared_ptr<const GroupSpecNode> node) : node_(std::move(node)) {}
    std::shared_ptr<const GroupSpecNode> node_;
};

// Canonical element forms per constructor:
//   IntLattice      coordinate vector
//   Cyclic          residue in [0, n)
//   Symmetric       one-line permutation, 0-based (perm[i] = image of i)
//   FreeGroup       reduced word, run-length encoded (letter, nonzero power),
//                   adjacent letters distinct
//   products        pair of canonical elements
struct GroupElement {
    using Word = std::vector<std::pair<int, long long>>;
    struct ElementPair;
    using Payload = std::variant<std::monostate, std::vector<long long>, long long,
                                 std::vector<int>, Word, std::shared_ptr<const ElementPair>>;

    GroupSpec spec;
    Payload payload;

    const std::vector<long long>& coords() const;
    long long residue() const;
    const std::vector<int>& perm() const;
    const Word& word() const;
    const GroupElement& pair_left() const;
    const GroupElement& pair_right() const;
};

struct GroupElement::ElementPair {
    GroupElement left;
    GroupElement right;
};

// Checked raw constructors, used by parsing and by tests.
GroupElement make_lattice_element(const GroupSpec& spec, std::vector<long long> coords);
GroupElement make_cyclic_element(const GroupSpec& spec, long long k);  // reduces mod n
GroupElement make_perm_element(const GroupSpec& spec, std::vector<int> one_line_0based);
GroupElement make_word_element(const GroupSpec& spec, const GroupElement::Word& word);  // reduces
GroupElement make_pair_element(const GroupSpec& spec, GroupElement left, GroupElement right);

GroupElement identity(const GroupSpec& spec);
GroupElement multiply(const GroupElement& x, const GroupElement& y);
GroupElement inverse(const GroupElement& x);
// y x y^{-1}
GroupElement conjugate(const GroupElement& y, const GroupElement& x);
GroupElement power(const GroupElement& x, long long k);

// Total order on canonical forms of one group; used for deterministic
// enumeration and as the map key order in measures.
int compare(const GroupElement& a, const GroupElement& b);
bool operator==(const GroupElement& a, const GroupElement& b);
inline bool operator!=(const GroupElement& a, const GroupElement& b) { return !(a == b); }
std::size_t element_hash(const GroupElement& x);

struct ElementHash {
    std::size_t operator()(const GroupElement& x) const { return element_hash(x); }
};
struct ElementEq {
    bool operator()(const GroupElement& a, const GroupElement& b) const { return a == b; }
};
struct ElementLess {
    bool operator()(const GroupElement& a, const GroupElement& b) const {
        return compare(a, b) < 0;
    }
};

struct OrderResult {
    enum class Kind { Finite, Infinite, Unknown } kind;
    unsigned long long value = 0;  // set when kind == Finite

    static OrderResult finite(unsigned long long n) { return {Kind::Finite, n}; }
    static OrderResult infinite() { return {Kind::Infinite, 0}; }
    static OrderResult unknown() { return {Kind::Unknown, 0}; }
};

// Smallest n >= 1 with x^n = e when that n is <= cap; Infinite when the
// constructor proves it (nonzero free coordinate, nonempty reduced word,
// non-torsion base part); Unknown otherwise, including exact orders > cap.
OrderResult element_order(const GroupElement& x, unsigned long long cap);

// Membership in the subgroup generated by the torsion elements. Exact for
// every constructor except semidirect products that mix an infinite fiber
// with torsion in the base, where some elements come back Unknown.
Tristate in_compact_part(const GroupElement& x);

// Constructor generating set (not symmetrized): lattice unit vectors,
// residue 1, adjacent transpositions, free letters, embedded factor
// generators for products.
std::vector<GroupElement> generators(const GroupSpec& spec);

// All products of <= radius factors from gens (symmetrized internally),
// identity first, then by BFS layer and canonical order within each layer.
std::vector<GroupElement> ball(const GroupSpec& spec, std::vector<GroupElement> gens, int radius,
                               std::size_t cap = kDefaultBallCap);

// Every element of a finite group, in canonical order.
std::vector<GroupElement> enumerate_group(const GroupSpec& spec, std::size_t cap = kDefaultBallCap);

// tau_g(n) for a semidirect spec: g from the base, n from the fiber.
GroupElement apply_action(const GroupSpec& semidirect_spec, const GroupElement& g,
                          const GroupElement& n);

// Integer coordinates of an element of an abelian constructor (lattice
// coordinates and cyclic residues), leaf slots in constructor-tree
// pre-order. Throws for non-abelian constructors.
std::vector<long long> abelian_coordinates(const GroupElement& x);

// Slot moduli matching abelian_coordinates: 0 for each lattice slot, n for
// a Cyclic(n) slot.
std::vector<long long> abelian_slot_moduli(const GroupSpec& spec);

}  // namespace convspec
