#pragma once

// JSON wire formats for the toolkit's object types.  Shape problems throw
// parse errors; semantic validation is left to the library constructors,
// which throw invalid-input errors of their own.

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"
#include "obkit/circular.hpp"
#include "obkit/group.hpp"
#include "obkit/metric.hpp"
#include "obkit/tower.hpp"
#include "obkit/tree.hpp"
#include "obkit/unitary.hpp"
#include "obkit/urysohn.hpp"

namespace obkit::io {

using json = nlohmann::json;

json parse_text(const std::string& text);
json load_file(const std::string& path);

// Rationals travel as strings "p/q" (or "p"); plain JSON integers are also
// accepted on input.
Rat rat_from(const json& j);
json rat_to(const Rat& r);

// Distance matrices: {"n": 3, "entries": [["0","1/2",...], ...]}.  "n" is
// optional and cross-checked when present.  entries_from returns the raw
// grid without validation (the validate verb reports violations instead of
// throwing).
std::vector<std::vector<Rat>> entries_from(const json& j);
metric::DistanceMatrix matrix_from(const json& j);
json matrix_to(const metric::DistanceMatrix& m);

// Spaces add optional "strict" and "labels" to the matrix format.
metric::RationalMetricSpace space_from(const json& j);
json space_to(const metric::RationalMetricSpace& s);

// Partial isometries: {"map": [[0,2],[1,3]]} (or the bare pair list).
urysohn::PartialIsometry partial_from(const json& j);
json partial_to(const urysohn::PartialIsometry& p);

// Isometry actions: a space plus {"elements": [[perm], ...]}.
urysohn::IsometryAction action_from(const json& j);

// Trees: {"vertices": 5, "edges": [[0,1],[1,2],...]}.
tree::SimplicialTree tree_from(const json& j);

// Vertex permutations: {"perm": [...]} or the bare list.
std::vector<std::size_t> perm_from(const json& j);
// Free-group words: {"word": "ab A"} or the bare string.
bool holds_word(const json& j);
tree::FreeWord word_from(const json& j);

// Groups: {"order": n, "table": [[...], ...]} ("order" optional).
group::FiniteGroup group_from(const json& j);

// Index subsets: [0, 2, 5] or {"set": [...]}; lists of subsets likewise.
std::vector<std::size_t> indices_from(const json& j);
std::vector<std::vector<std::size_t>> index_lists_from(const json& j);

// Circle configurations: {"points": ["0","1/4",...]} or the bare list.
std::vector<Rat> points_from(const json& j);
// Piecewise linear circle maps: {"breakpoints": [["0","1/4"], ...]}.
circular::PLCircleMap plmap_from(const json& j);
json plmap_to(const circular::PLCircleMap& m);

// Quadratic towers are described by their radicand list, one entry per
// level: a rational string for a rational radicand, or a coordinate list
// over the prefix tower for a nested one.  Levels must genuinely extend
// (a radicand that is already a square is rejected).
tower::TowerPtr tower_from(const json& j);
json tower_to(const tower::TowerPtr& t);

// Elements of a given tower: a rational string or a coordinate list of
// length dim.  Output carries coordinates and a display string.
tower::Elem elem_from(const json& j, const tower::TowerPtr& t);
json elem_to(const tower::Elem& x);

// Vector files: {"tower": [...], "offset": 1, "vectors": [[e, e, ...], ...]},
// each vector dense from the offset index.  Pair files replace "vectors"
// with "pairs": [[[...],[...]], ...].
unitary::FinVector vector_from(const json& j, const tower::TowerPtr& t,
                               long offset);
json vector_to(const unitary::FinVector& v);
std::vector<unitary::FinVector> vectors_from(const json& j);
std::vector<unitary::VectorPair> pairs_from(const json& j);

// Operators: {"tower": [...], "offset": 1, "block": [[e, ...], ...]} where
// "block" lists the columns; column j holds the image of basis vector
// offset + j, dense from the offset.
unitary::FinitaryOperator operator_from(const json& j);
json operator_to(const unitary::FinitaryOperator& op);

}  // namespace obkit::io
