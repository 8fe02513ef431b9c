#pragma once

#include <string>

#include "mfwave/contfrac.hpp"
#include "mfwave/modforms.hpp"

namespace mfwave {

/// Point-spec mini-grammar:
///   sqrt:<d>            square root of a positive non-square integer
///   phi | e             named constants
///   sqrt2m1             sqrt(2) - 1 = [0; 2, 2, ...]
///   dec:<digits>        decimal literal, e.g. dec:0.1234
///   <p>/<q>             rational
///   cf:[a0;a1,a2,...]   explicit partial quotients; a repeating tail goes in
///                       parentheses at the end, e.g. cf:[0;(7)] or
///                       cf:[1;2,(3,4)]
///   liouville:<kappa>:<depth>  prescribed approximation exponent
/// Throws std::invalid_argument on malformed specs.
RealPoint parse_point(const std::string& spec);

/// Form-spec grammar: eisenstein:<k> (k = 2 or even >= 4) | delta | e2.
/// N is the number of stored q-expansion coefficients.
ModularForm parse_form(const std::string& spec, int N = 600);

} // namespace mfwave
