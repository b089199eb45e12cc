#pragma once

// Text syntax for group ring elements.
//
//   expr    := [+|-] term { (+|-) term }
//   term    := factor { [*] factor }
//   factor  := primary [ ^ [+|-] integer ]
//   primary := integer | generator | e | ( expr )
//
// Integers denote multiples of the identity, so "x - 1" is x - e. Negative
// powers are allowed only for units +-g, e.g. "x^-1" or "(a*b)^-2".
// Examples: "x^-1 + 2 - x" over Z, "a*b - 1" over F_2.

#include <string_view>

#include "soficrank/group_ring.hpp"

namespace soficrank {

/// Throws ParseError with the offending byte offset.
GroupRingElement parse_element(const GroupPtr& group, std::string_view text);

/// Parses a single group element (a unit monomial with coefficient 1).
GroupElement parse_group_element(const GroupPtr& group, std::string_view text);

}  // namespace soficrank
