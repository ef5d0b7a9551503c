#pragma once

#include "tabalg/algebra.hpp"
#include "tabalg/deduction.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace tabalg {

/// "1 + 3 b5 + c8": terms separated by '+', each "<int>? <name>" or a bare
/// integer meaning a multiple of the identity. Repeated names add up.
Element parse_expression(const TableBasis& basis, std::string_view text);

/// Canonical form: constituents by index, identity as a bare integer,
/// unit coefficients omitted. The zero element formats as "0".
std::string format_expression(const TableBasis& basis, const Element& x);

/// Parses an "algebra" file, completing each product by commutativity and
/// the involution. Throws ParseError (with line), UnknownName or
/// InvalidBasis.
Algebra parse_algebra(std::string_view text);

/// Canonical text: notes, header, flags, elements in order, then one product
/// line per pair orbit representative in ascending order.
std::string serialize(const Algebra& a);

/// Parses a "partial" file. Product right-hand sides may end with
/// "+ ?name", an unknown remainder; such lines become pending constraints.
PartialTable parse_partial(std::string_view text);

std::string serialize(const PartialTable& p);

/// Names of the bundled algebras: C7, D17, B22, B32.
std::vector<std::string> bundled_names();

/// The bundled algebras, verified when the library was built.
const std::vector<Algebra>& bundled();

/// Throws UnknownName.
const Algebra& bundled(std::string_view name);

/// Canonical file text of a bundled algebra. Throws UnknownName.
const std::string& bundled_text(std::string_view name);

/// "bundled:<name>" or a file path. For bundled names, a file
/// $TABALG_DATA_DIR/<lowercase name>.tab takes precedence when present.
Algebra load_algebra(std::string_view uri);

PartialTable load_partial(std::string_view path);

std::string read_file(std::string_view path);
void write_file(std::string_view path, std::string_view text);

}  // namespace tabalg
