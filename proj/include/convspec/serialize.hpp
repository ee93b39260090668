#pragma once

#include <string>

#include "convspec/group.hpp"

namespace convspec {

// Canonical text forms: lattice "(i1,...,id)", cyclic "k", permutation
// one-line "[2,1,3]", free word "a b^-1 a^2" (identity "e"), pairs
// "(<left>|<right>)". parse_element additionally accepts "e" for any
// identity, a bare integer for the rank-1 lattice, and generator words
// ("a b a") for permutation groups.
std::string format_element(const GroupElement& x);
GroupElement parse_element(const GroupSpec& spec, const std::string& text);

}  // namespace convspec
