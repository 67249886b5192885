#pragma once

#include "lrgrade/bspline.hpp"
#include "lrgrade/mesh.hpp"

#include <stdexcept>
#include <string>

namespace lrg {

/// Rejected input; line() is the 1-based offender within the parsed text
/// (0 when the problem is not tied to a single line).
class ParseError : public std::runtime_error {
public:
    ParseError(int line_no, const std::string& message);
    int line() const { return line_no_; }

private:
    int line_no_;
};

/// "LRMESH v1" text: magic, `domain <a> <b>`, `degree <p1> <p2>`, then one
/// `line <H|V> <fixed> <lo> <hi> <mult>` per meshline in canonical order.
/// All coordinates are exact finite decimals, so serialize -> parse ->
/// serialize is byte-identical.
std::string format_mesh(const LRMesh& mesh);

/// Inverse of format_mesh. Blank lines are skipped; anything else
/// unexpected, including non-dyadic decimals like 0.2, raises ParseError.
LRMesh parse_mesh(const std::string& text);

/// "LRSET v1" text: magic, then one record per member in the set's
/// (lexicographic) order: `bspline x: <p1+2 coords> y: <p2+2 coords> w:
/// <weight>`. Weights use the shortest decimal that converts back to the
/// same double, so round trips are byte-identical here too.
std::string format_set(const LRSet& set);

/// Inverse of format_set, binding the members to the given mesh. Knot
/// counts are checked against the mesh bidegree per record; set-level
/// violations (duplicates, decreasing knots) surface as ParseError as well.
LRSet parse_set(const std::string& text, MeshPtr mesh);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace lrg
