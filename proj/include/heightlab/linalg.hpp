#pragma once

#include <vector>

#include "heightlab/numeric.hpp"

namespace heightlab {

using RationalVector = std::vector<Rational>;
using RationalMatrix = std::vector<RationalVector>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<size_t> rref(RationalMatrix& m);
size_t rank(RationalMatrix m);
/// Basis of {x : m x = 0}, one vector per free column, in RREF-canonical form.
RationalMatrix nullspace(RationalMatrix m, size_t columns);
Rational determinant(RationalMatrix m);

/// Canonical representative of the row space of `rows`: nonzero rows of the RREF.
RationalMatrix row_space_key(RationalMatrix rows);

}  // namespace heightlab
