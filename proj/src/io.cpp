#include "obkit/io.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "obkit/error.hpp"

namespace obkit::io {

namespace {

[[noreturn]] void bad(const std::string& msg) {
  throw Error(ErrorKind::Parse, msg);
}

// Unwraps {"field": value} while also accepting the bare value.
const json& field_or_self(const json& j, const char* field) {
  if (j.is_object()) {
    auto it = j.find(field);
    if (it == j.end()) bad(std::string("expected field \"") + field + "\"");
    return *it;
  }
  return j;
}

std::size_t index_from(const json& j) {
  if (!j.is_number_integer() || j.get<long long>() < 0)
    bad("expected a nonnegative integer index");
  return (std::size_t)j.get<long long>();
}

long long_from(const json& j, const char* what) {
  if (!j.is_number_integer()) bad(std::string("expected an integer ") + what);
  return (long)j.get<long long>();
}

}  // namespace

json parse_text(const std::string& text) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) bad("malformed json");
  return j;
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) bad("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

Rat rat_from(const json& j) {
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  if (j.is_number_integer()) return Rat((long)j.get<long long>());
  bad("expected a rational as a string \"p/q\" or an integer");
}

json rat_to(const Rat& r) { return json(r.str()); }

std::vector<std::vector<Rat>> entries_from(const json& j) {
  const json& rows = field_or_self(j, "entries");
  if (!rows.is_array()) bad("matrix entries must be a list of rows");
  std::vector<std::vector<Rat>> e;
  for (const json& row : rows) {
    if (!row.is_array()) bad("matrix rows must be lists");
    std::vector<Rat> r;
    for (const json& v : row) r.push_back(rat_from(v));
    e.push_back(std::move(r));
  }
  if (j.is_object() && j.contains("n") &&
      index_from(j.at("n")) != e.size())
    bad("matrix field \"n\" disagrees with the number of rows");
  return e;
}

metric::DistanceMatrix matrix_from(const json& j) {
  return metric::DistanceMatrix::validated(entries_from(j));
}

json matrix_to(const metric::DistanceMatrix& m) {
  json rows = json::array();
  for (const auto& row : m.entries()) {
    json r = json::array();
    for (const Rat& v : row) r.push_back(v.str());
    rows.push_back(std::move(r));
  }
  return json{{"n", m.size()}, {"entries", std::move(rows)}};
}

metric::RationalMetricSpace space_from(const json& j) {
  metric::DistanceMatrix m = matrix_from(j);
  bool strict = m.strict();
  if (j.is_object() && j.contains("strict")) {
    if (!j.at("strict").is_boolean()) bad("field \"strict\" must be a boolean");
    strict = j.at("strict").get<bool>();
  }
  std::vector<std::string> labels;
  if (j.is_object() && j.contains("labels")) {
    const json& ls = j.at("labels");
    if (!ls.is_array()) bad("field \"labels\" must be a list of strings");
    for (const json& l : ls) {
      if (!l.is_string()) bad("labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  }
  return metric::RationalMetricSpace::make(std::move(m), strict,
                                           std::move(labels));
}

json space_to(const metric::RationalMetricSpace& s) {
  json j = matrix_to(s.d);
  j["strict"] = s.strict;
  if (!s.labels.empty()) j["labels"] = s.labels;
  return j;
}

urysohn::PartialIsometry partial_from(const json& j) {
  const json& pairs = field_or_self(j, "map");
  if (!pairs.is_array()) bad("a partial isometry is a list of index pairs");
  urysohn::PartialIsometry p;
  for (const json& pr : pairs) {
    if (!pr.is_array() || pr.size() != 2)
      bad("each assignment must be a pair [from, to]");
    p.map.emplace_back(index_from(pr[0]), index_from(pr[1]));
  }
  return p;
}

json partial_to(const urysohn::PartialIsometry& p) {
  json pairs = json::array();
  for (const auto& [a, b] : p.map) pairs.push_back(json::array({a, b}));
  return json{{"map", std::move(pairs)}};
}

urysohn::IsometryAction action_from(const json& j) {
  if (!j.is_object()) bad("an action needs a space and its element list");
  urysohn::IsometryAction a{space_from(j), {}};
  const json& els = field_or_self(j, "elements");
  if (!els.is_array()) bad("field \"elements\" must be a list of permutations");
  for (const json& e : els) a.elements.push_back(perm_from(e));
  return a;
}

tree::SimplicialTree tree_from(const json& j) {
  if (!j.is_object()) bad("a tree needs \"vertices\" and \"edges\"");
  if (!j.contains("vertices")) bad("expected field \"vertices\"");
  std::size_t n = index_from(j.at("vertices"));
  const json& es = field_or_self(j, "edges");
  if (!es.is_array()) bad("field \"edges\" must be a list of pairs");
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (const json& e : es) {
    if (!e.is_array() || e.size() != 2) bad("each edge must be a pair [u, v]");
    edges.emplace_back(index_from(e[0]), index_from(e[1]));
  }
  return tree::SimplicialTree::validated(n, std::move(edges));
}

std::vector<std::size_t> perm_from(const json& j) {
  const json& ps = field_or_self(j, "perm");
  if (!ps.is_array()) bad("a permutation is a list of indices");
  std::vector<std::size_t> p;
  for (const json& v : ps) p.push_back(index_from(v));
  return p;
}

bool holds_word(const json& j) {
  return j.is_string() || (j.is_object() && j.contains("word"));
}

tree::FreeWord word_from(const json& j) {
  const json& w = field_or_self(j, "word");
  if (!w.is_string()) bad("a word is a string over a..z with capitals inverse");
  return tree::FreeWord::parse(w.get<std::string>());
}

group::FiniteGroup group_from(const json& j) {
  const json& rows = field_or_self(j, "table");
  if (!rows.is_array()) bad("a group table is a list of rows");
  std::vector<std::vector<std::size_t>> table;
  for (const json& row : rows) {
    if (!row.is_array()) bad("group table rows must be lists");
    std::vector<std::size_t> r;
    for (const json& v : row) r.push_back(index_from(v));
    table.push_back(std::move(r));
  }
  if (j.is_object() && j.contains("order") &&
      index_from(j.at("order")) != table.size())
    bad("group field \"order\" disagrees with the table size");
  return group::FiniteGroup::validated(std::move(table));
}

std::vector<std::size_t> indices_from(const json& j) {
  const json& xs = field_or_self(j, "set");
  if (!xs.is_array()) bad("expected a list of indices");
  std::vector<std::size_t> out;
  for (const json& v : xs) out.push_back(index_from(v));
  return out;
}

std::vector<std::vector<std::size_t>> index_lists_from(const json& j) {
  const json& xs = field_or_self(j, "sets");
  if (!xs.is_array()) bad("expected a list of index lists");
  std::vector<std::vector<std::size_t>> out;
  for (const json& v : xs) out.push_back(indices_from(v));
  return out;
}

std::vector<Rat> points_from(const json& j) {
  const json& ps = field_or_self(j, "points");
  if (!ps.is_array()) bad("expected a list of circle points");
  std::vector<Rat> out;
  for (const json& v : ps) out.push_back(rat_from(v));
  return out;
}

circular::PLCircleMap plmap_from(const json& j) {
  const json& bs = field_or_self(j, "breakpoints");
  if (!bs.is_array()) bad("a circle map is a list of breakpoint pairs");
  std::vector<std::pair<Rat, Rat>> pairs;
  for (const json& b : bs) {
    if (!b.is_array() || b.size() != 2)
      bad("each breakpoint must be a pair [input, output]");
    pairs.emplace_back(rat_from(b[0]), rat_from(b[1]));
  }
  return circular::PLCircleMap::validated(std::move(pairs));
}

json plmap_to(const circular::PLCircleMap& m) {
  json bs = json::array();
  for (const auto& [a, b] : m.breakpoints)
    bs.push_back(json::array({a.str(), b.str()}));
  return json{{"breakpoints", std::move(bs)}};
}

tower::TowerPtr tower_from(const json& j) {
  const json& rads = field_or_self(j, "tower");
  if (!rads.is_array()) bad("a tower is a list of radicands");
  tower::TowerPtr t = tower::Tower::rational();
  for (const json& r : rads) {
    tower::Elem root = tower::sqrt(elem_from(r, t));
    if (root.tower()->depth() == t->depth())
      throw Error(ErrorKind::Invalid,
                  "tower radicand is already a square at its level");
    t = root.tower();
  }
  return t;
}

json tower_to(const tower::TowerPtr& t) {
  json rads = json::array();
  for (const auto& coords : t->radicands()) {
    if (coords.size() == 1) {
      rads.push_back(coords[0].str());
    } else {
      json c = json::array();
      for (const Rat& v : coords) c.push_back(v.str());
      rads.push_back(std::move(c));
    }
  }
  return rads;
}

tower::Elem elem_from(const json& j, const tower::TowerPtr& t) {
  if (j.is_string() || j.is_number_integer()) {
    std::vector<Rat> coords(t->dim(), Rat(0));
    coords[0] = rat_from(j);
    return tower::Elem(t, std::move(coords));
  }
  if (j.is_array()) {
    if (j.size() != t->dim())
      bad("element coordinate list does not match the tower dimension");
    std::vector<Rat> coords;
    for (const json& v : j) coords.push_back(rat_from(v));
    return tower::Elem(t, std::move(coords));
  }
  bad("expected a tower element as a rational or a coordinate list");
}

json elem_to(const tower::Elem& x) {
  json coords = json::array();
  for (const Rat& v : x.coords()) coords.push_back(v.str());
  return json{{"tower", tower_to(x.tower())},
              {"coords", std::move(coords)},
              {"display", x.str()}};
}

unitary::FinVector vector_from(const json& j, const tower::TowerPtr& t,
                               long offset) {
  if (!j.is_array()) bad("a vector is a dense list of entries");
  unitary::FinVector v;
  long i = offset;
  for (const json& e : j) v.set(i++, elem_from(e, t));
  return v;
}

json vector_to(const unitary::FinVector& v) {
  json supp = json::array();
  for (const auto& [i, e] : v.entries())
    supp.push_back(json::array({i, e.str()}));
  return json{{"support", std::move(supp)}};
}

namespace {

struct VectorFileHeader {
  tower::TowerPtr t;
  long offset;
};

VectorFileHeader vector_header(const json& j) {
  if (!j.is_object()) bad("expected an object with a tower and an offset");
  VectorFileHeader h{tower::Tower::rational(), 1};
  if (j.contains("tower")) h.t = tower_from(j.at("tower"));
  if (j.contains("offset")) h.offset = long_from(j.at("offset"), "offset");
  return h;
}

}  // namespace

std::vector<unitary::FinVector> vectors_from(const json& j) {
  VectorFileHeader h = vector_header(j);
  const json& vs = field_or_self(j, "vectors");
  if (!vs.is_array()) bad("field \"vectors\" must be a list of vectors");
  std::vector<unitary::FinVector> out;
  for (const json& v : vs) out.push_back(vector_from(v, h.t, h.offset));
  return out;
}

std::vector<unitary::VectorPair> pairs_from(const json& j) {
  VectorFileHeader h = vector_header(j);
  const json& ps = field_or_self(j, "pairs");
  if (!ps.is_array()) bad("field \"pairs\" must be a list of vector pairs");
  std::vector<unitary::VectorPair> out;
  for (const json& p : ps) {
    if (!p.is_array() || p.size() != 2)
      bad("each pair must hold two vectors [x, y]");
    out.push_back({vector_from(p[0], h.t, h.offset),
                   vector_from(p[1], h.t, h.offset)});
  }
  return out;
}

unitary::FinitaryOperator operator_from(const json& j) {
  VectorFileHeader h = vector_header(j);
  const json& block = field_or_self(j, "block");
  if (!block.is_array()) bad("field \"block\" must be a list of columns");
  std::size_t n = block.size();
  std::vector<std::vector<tower::Elem>> cols;
  for (const json& col : block) {
    if (!col.is_array() || col.size() != n)
      bad("operator block columns must be dense lists matching the size");
    std::vector<tower::Elem> c;
    for (const json& e : col) c.push_back(elem_from(e, h.t));
    cols.push_back(std::move(c));
  }
  return unitary::FinitaryOperator::from_columns(h.offset, std::move(cols));
}

json operator_to(const unitary::FinitaryOperator& op) {
  json block = json::array();
  for (const auto& col : op.columns()) {
    json c = json::array();
    for (const tower::Elem& e : col) c.push_back(e.str());
    block.push_back(std::move(c));
  }
  return json{{"offset", op.lo()},
              {"size", op.size()},
              {"block", std::move(block)}};
}

}  // namespace obkit::io
