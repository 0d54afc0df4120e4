#pragma once

#include <cstddef>
#include <string_view>

#include "smoothcert/funcs.hpp"

namespace smoothcert {

// Function-spec mini-grammar (whitespace-insensitive):
//
//   SPEC := NAME
//         | NAME '(' REAL (',' REAL)* ')'
//         | 'scale' '(' REAL ',' SPEC ')'
//         | 'sum' '(' SPEC ',' SPEC ')'
//         | 'compose' '(' SPEC1D ',' SPEC ')'
//
// Built-in names:
//   square, sqpos, quartic            one-dimensional only
//   norm (eu_norm), norm2 (norm_sq), neg_norm2 (neg_norm_sq)
//   const | const(c)                  c defaults to 1337
//   affine | affine(g1..gn, b)        bare form: g = (1, ..., 1), b = 0
//   diagq(d1..dn)                     one coefficient per dimension, d >= 0
//
// Every FunctionHandle::name() produced by the library parses back to an
// equivalent handle. Errors are ParseError with the offending column.
FunctionHandle parse_fn_spec(std::string_view text, std::size_t dim);

}  // namespace smoothcert
