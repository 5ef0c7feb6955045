#include "obkit/checks.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <utility>
#include <vector>

#include "obkit/circular.hpp"
#include "obkit/error.hpp"
#include "obkit/group.hpp"
#include "obkit/io.hpp"
#include "obkit/metric.hpp"
#include "obkit/tower.hpp"
#include "obkit/tree.hpp"
#include "obkit/unitary.hpp"
#include "obkit/urysohn.hpp"

namespace obkit::checks {

namespace {

template <class... Ts>
std::string cat(Ts&&... parts) {
  std::ostringstream o;
  (o << ... << parts);
  return o.str();
}

const json& need(const json& req, const char* field) {
  auto it = req.find(field);
  if (it == req.end())
    throw Error(ErrorKind::Parse,
                cat("request is missing field \"", field, "\""));
  return *it;
}

long opt_long(const json& req, const char* field, long def) {
  auto it = req.find(field);
  if (it == req.end()) return def;
  if (!it->is_number_integer())
    throw Error(ErrorKind::Parse, cat("field \"", field, "\" must be an integer"));
  return (long)it->get<long long>();
}

std::size_t opt_index(const json& req, const char* field) {
  long v = opt_long(req, field, -1);
  if (v < 0)
    throw Error(ErrorKind::Parse,
                cat("field \"", field, "\" must be a nonnegative integer"));
  return (std::size_t)v;
}

// Unwraps {"field": value} while also accepting the bare value.
const json& unwrap(const json& j, const char* field) {
  if (j.is_object() && j.contains(field)) return j.at(field);
  return j;
}

struct Report {
  std::vector<CheckResult> rows;
  json data = json::object();

  void add(std::string name, std::string lemma, bool ok, std::string witness) {
    rows.push_back({std::move(name), std::move(lemma),
                    ok ? "pass" : "fail", std::move(witness), 0});
  }
  void note(std::string name, std::string lemma, std::string reason) {
    rows.push_back({std::move(name), std::move(lemma), "inapplicable",
                    std::move(reason), 0});
  }
};

std::optional<std::size_t> papply(const urysohn::PartialIsometry& p,
                                  std::size_t i) {
  for (const auto& [a, b] : p.map)
    if (a == i) return b;
  return std::nullopt;
}

// ---------------------------------------------------------------- metric --

void op_metric_validate(const json& req, Report& r) {
  const json& sj = need(req, "space");
  auto e = io::entries_from(sj);
  auto v = metric::DistanceMatrix::find_violation(e);
  if (!v) {
    auto m = metric::DistanceMatrix::validated(std::move(e));
    r.add("metric.validate.axioms", "triangle inequality", true,
          cat("all axioms hold on ", m.size(), " points"));
    if (sj.is_object() && sj.contains("strict")) {
      bool claim = sj.at("strict").is_boolean() && sj.at("strict").get<bool>();
      r.add("metric.validate.strict", "triangle inequality",
            claim == m.strict(),
            cat("claimed ", claim ? "strict" : "loose", ", matrix is ",
                m.strict() ? "strict" : "loose"));
    }
    r.data["n"] = m.size();
    r.data["strict"] = m.strict();
  } else {
    r.add("metric.validate.axioms", "triangle inequality", false,
          cat(v->kind, " violation: ", v->detail));
    r.data["violation"] = json{{"kind", v->kind},
                               {"idx", json::array({v->idx[0], v->idx[1], v->idx[2]})},
                               {"detail", v->detail}};
  }
}

void op_metric_d1(const json& req, Report& r) {
  auto a = io::matrix_from(need(req, "a"));
  auto b = io::matrix_from(need(req, "b"));
  auto res = metric::d1_distance(a, b);
  Rat sup = metric::sup_distance(a, b);
  int n = a.size();

  bool bounds = sup <= res.value && Rat(2) * res.value <= Rat(n) * sup;
  r.add("metric.d1.bounds", "Kantorovich duality", bounds,
        cat("sup=", sup.str(), " d1=", res.value.str(), " n=", n));

  bool cert = true;
  std::string cw = "coupling matrix validates and its trace equals the value";
  try {
    metric::coupled_matrix(a, b, res.coupling);
    Rat trace(0);
    for (int i = 0; i < n; ++i) trace += res.coupling[(std::size_t)i][(std::size_t)i];
    if (trace != res.value) {
      cert = false;
      cw = cat("trace ", trace.str(), " differs from value ", res.value.str());
    }
  } catch (const Error& err) {
    cert = false;
    cw = cat("coupling does not validate: ", err.what());
  }
  r.add("metric.d1.coupling", "Kantorovich duality", cert, cw);

  r.data["value"] = res.value.str();
  r.data["sup"] = sup.str();
  json cp = json::array();
  for (const auto& row : res.coupling) {
    json jr = json::array();
    for (const Rat& v : row) jr.push_back(v.str());
    cp.push_back(std::move(jr));
  }
  r.data["coupling"] = std::move(cp);
}

void op_metric_net(const json& req, Report& r) {
  auto m = io::matrix_from(need(req, "space"));
  Rat eps = io::rat_from(need(req, "eps"));
  auto rd = metric::round_to_net(m, eps);

  bool ok = true;
  std::string w = cat("covered within ", eps.str());
  for (int i = 0; i < m.size() && ok; ++i)
    for (int j = i + 1; j < m.size() && ok; ++j) {
      const Rat& orig = m.at(i, j);
      const Rat& got = rd.at(i, j);
      if (got < orig || got - orig > eps) {
        ok = false;
        w = cat("entry (", i, ",", j, "): ", orig.str(), " rounds to ",
                got.str());
      }
    }
  r.add("metric.net.rounding", "epsilon-net rounding", ok, w);

  auto again = metric::round_to_net(rd, eps);
  r.add("metric.net.idempotent", "epsilon-net rounding", again == rd,
        "rounding a rounded matrix changes nothing");
  r.data["rounded"] = io::matrix_to(rd);
}

void op_metric_glue(const json& req, Report& r) {
  auto a = io::matrix_from(need(req, "a"));
  auto b = io::matrix_from(need(req, "b"));
  Rat delta = metric::sup_distance(a, b);
  auto g = metric::glue_premetric(a, b, delta);
  Rat trace = metric::glue_trace(g);
  int n = a.size();

  auto v = metric::DistanceMatrix::find_violation(g.entries());
  r.add("metric.glue.premetric", "premetric gluing", !v,
        !v ? cat("glued matrix on ", 2 * n, " points validates")
           : cat(v->kind, " violation: ", v->detail));

  Rat expect = Rat(n) * delta / Rat(2);
  r.add("metric.glue.trace", "premetric gluing", trace == expect,
        cat("delta=", delta.str(), " trace=", trace.str(), " expected ",
            expect.str()));

  bool corners = true;
  for (int i = 0; i < n && corners; ++i)
    for (int j = 0; j < n && corners; ++j)
      corners = g.at(i, j) == a.at(i, j) && g.at(n + i, n + j) == b.at(i, j);
  r.add("metric.glue.restriction", "premetric gluing", corners,
        "both blocks keep their original distances");

  r.data["delta"] = delta.str();
  r.data["trace"] = trace.str();
  r.data["glued"] = io::matrix_to(g);
}

metric::GeodesicPoint gpoint_from(const json& j,
                                  const metric::DistanceMatrix& m) {
  if (j.is_number_integer()) {
    long i = j.get<long long>();
    if (i < 0 || i >= m.size())
      throw Error(ErrorKind::Invalid, "geodesic point index out of range");
    return metric::GeodesicPoint::original((int)i);
  }
  if (!j.is_object())
    throw Error(ErrorKind::Parse,
                "a geodesic point is an index or {\"x\",\"y\",\"t\"}");
  long x = opt_long(j, "x", -1);
  long y = opt_long(j, "y", x);
  if (x < 0 || x >= m.size() || y < 0 || y >= m.size())
    throw Error(ErrorKind::Invalid, "geodesic point index out of range");
  if (x == y || !j.contains("t"))
    return metric::GeodesicPoint::original((int)x);
  Rat t = io::rat_from(j.at("t"));
  return metric::GeodesicPoint::interior(m, (int)x, (int)y, t);
}

void op_metric_geodesic(const json& req, Report& r) {
  auto m = io::matrix_from(need(req, "space"));
  auto p = gpoint_from(need(req, "p"), m);
  auto q = gpoint_from(need(req, "q"), m);
  Rat d = metric::geodesic_distance(m, p, q);

  r.add("metric.geodesic.symmetry", "Menger convexity",
        metric::geodesic_distance(m, q, p) == d,
        cat("d(p,q)=", d.str(), " both ways"));

  bool ends = true;
  for (const auto& gp : {p, q}) {
    if (gp.is_original()) continue;
    Rat span = m.at(gp.x, gp.y);
    auto ox = metric::GeodesicPoint::original(gp.x);
    auto oy = metric::GeodesicPoint::original(gp.y);
    if (metric::geodesic_distance(m, ox, gp) != gp.t ||
        metric::geodesic_distance(m, gp, oy) != span - gp.t)
      ends = false;
  }
  r.add("metric.geodesic.endpoints", "Menger convexity", ends,
        "interior points sit at exact arclength from both endpoints");

  if (req.contains("r")) {
    auto mid = gpoint_from(req.at("r"), m);
    Rat via = metric::geodesic_distance(m, p, mid) +
              metric::geodesic_distance(m, mid, q);
    r.add("metric.geodesic.triangle", "Menger convexity", d <= via,
          cat("d(p,q)=", d.str(), " detour=", via.str()));
  }
  r.data["distance"] = d.str();
}

// --------------------------------------------------------------- urysohn --

void op_urysohn_katetov(const json& req, Report& r) {
  auto x = io::space_from(need(req, "space"));
  long denom = opt_long(req, "denom", 2);
  int n = x.d.size();
  double work = 1;
  for (int i = 0; i < n; ++i) {
    work *= (double)(denom + 1);
    if (work > 2e5)
      throw Error(ErrorKind::Budget,
                  cat("profile enumeration too large: (denom+1)^n exceeds ",
                      200000, " for denom=", denom, " n=", n));
  }
  auto fs = urysohn::katetov_extensions(x, denom);

  bool ok = true;
  std::string w = cat(fs.size(), " admissible profiles, each extension validates");
  std::size_t verified = 0;
  for (const auto& f : fs) {
    if (verified >= 500) break;
    ++verified;
    try {
      urysohn::extend_with(x, f);
    } catch (const Error& err) {
      ok = false;
      w = cat("profile ", verified - 1, " fails to extend: ", err.what());
      break;
    }
  }
  r.add("urysohn.katetov.extensions", "Katetov extension", ok, w);
  r.add("urysohn.katetov.nonempty", "Katetov extension", !fs.empty(),
        "the constant-1 profile always qualifies");

  r.data["count"] = fs.size();
  json sample = json::array();
  for (std::size_t i = 0; i < fs.size() && i < 10; ++i) {
    json prof = json::array();
    for (const Rat& v : fs[i].values) prof.push_back(v.str());
    sample.push_back(std::move(prof));
  }
  r.data["profiles"] = std::move(sample);
}

void op_urysohn_amalgam(const json& req, Report& r) {
  auto x = io::space_from(need(req, "space"));
  auto xb = io::indices_from(need(req, "xbar"));
  auto zb = io::indices_from(need(req, "zbar"));
  auto yb = io::indices_from(need(req, "ybar"));
  auto am = urysohn::amalgamate_over(x, xb, zb, yb);

  auto v = metric::DistanceMatrix::find_violation(am.space.d.entries());
  r.add("urysohn.amalgam.premetric", "Urysohn amalgamation", !v,
        !v ? cat("amalgam on ", am.space.d.size(), " points validates")
           : cat(v->kind, " violation: ", v->detail));

  bool iso = true;
  for (std::size_t i = 0; i < xb.size() && iso; ++i) {
    for (std::size_t j = 0; j < xb.size() && iso; ++j)
      iso = am.space.d.at((int)am.xprime[i], (int)am.xprime[j]) ==
            x.d.at((int)xb[i], (int)xb[j]);
    for (std::size_t j = 0; j < zb.size() && iso; ++j)
      iso = am.space.d.at((int)am.xprime[i], (int)am.zprime[j]) ==
            x.d.at((int)xb[i], (int)zb[j]);
    for (std::size_t l = 0; l < yb.size() && iso; ++l)
      iso = am.space.d.at((int)am.xprime[i], (int)yb[l]) ==
            x.d.at((int)xb[i], (int)yb[l]);
  }
  for (std::size_t i = 0; i < zb.size() && iso; ++i) {
    for (std::size_t j = 0; j < zb.size() && iso; ++j)
      iso = am.space.d.at((int)am.zprime[i], (int)am.zprime[j]) ==
            x.d.at((int)zb[i], (int)zb[j]);
    for (std::size_t l = 0; l < yb.size() && iso; ++l)
      iso = am.space.d.at((int)am.zprime[i], (int)yb[l]) ==
            x.d.at((int)zb[i], (int)yb[l]);
  }
  r.add("urysohn.amalgam.isometric", "Urysohn amalgamation", iso,
        "the adjoined copies repeat the source geometry over the anchors");

  r.data["space"] = io::space_to(am.space);
  r.data["xprime"] = am.xprime;
  r.data["zprime"] = am.zprime;
}

void op_urysohn_factor4(const json& req, Report& r) {
  auto x = io::space_from(need(req, "space"));
  auto xb = io::indices_from(need(req, "xbar"));
  auto g = io::partial_from(need(req, "map"));
  auto ff = urysohn::four_factor_decomposition(x, xb, g);

  bool fixes = true;
  std::string w = "k.f.h.g returns every anchor to itself";
  for (std::size_t xi : ff.xbar) {
    auto step = papply(ff.g, xi);
    if (step) step = papply(ff.h, *step);
    if (step) step = papply(ff.f, *step);
    if (step) step = papply(ff.k, *step);
    if (!step || *step != xi) {
      fixes = false;
      w = cat("anchor ", xi, " is not returned by the composite");
      break;
    }
  }
  r.add("urysohn.factor4.composite", "four-factor stabilizer width", fixes, w);

  bool stab = true;
  for (std::size_t y : ff.ybar) {
    auto hy = papply(ff.h, y);
    auto ky = papply(ff.k, y);
    if (hy != y || ky != y) stab = false;
  }
  for (std::size_t xi : ff.xbar)
    if (papply(ff.f, xi) != xi) stab = false;
  r.add("urysohn.factor4.stabilizers", "four-factor stabilizer width", stab,
        "h and k fix the fresh anchors, f fixes the moved tuple");

  bool valid = true;
  try {
    urysohn::validate_partial_isometry(ff.space, ff.h);
    urysohn::validate_partial_isometry(ff.space, ff.f);
    urysohn::validate_partial_isometry(ff.space, ff.k);
  } catch (const Error&) {
    valid = false;
  }
  r.add("urysohn.factor4.isometries", "four-factor stabilizer width", valid,
        "all three factors preserve distances on the amalgam");

  r.data["size"] = ff.space.d.size();
  r.data["ybar"] = ff.ybar;
  r.data["xprime"] = ff.xprime;
  r.data["zprime"] = ff.zprime;
  r.data["h"] = io::partial_to(ff.h);
  r.data["f"] = io::partial_to(ff.f);
  r.data["k"] = io::partial_to(ff.k);
}

void op_urysohn_extend(const json& req, Report& r) {
  auto x = io::space_from(need(req, "space"));
  auto p = io::partial_from(need(req, "map"));
  long denom = opt_long(req, "denom", 4);
  long budget = opt_long(req, "budget", 40);
  if (budget < 0) throw Error(ErrorKind::Parse, "budget must be nonnegative");
  auto res = urysohn::extend_partial_isometry(x, p, denom, (std::size_t)budget);

  std::size_t rn = (std::size_t)res.space.d.size();
  bool iso = res.map.size() == rn;
  std::set<std::size_t> image(res.map.begin(), res.map.end());
  iso = iso && image.size() == rn;
  for (std::size_t i = 0; i < rn && iso; ++i)
    for (std::size_t j = 0; j < rn && iso; ++j)
      iso = res.space.d.at((int)i, (int)j) ==
            res.space.d.at((int)res.map[i], (int)res.map[j]);
  r.add("urysohn.extend.isometry", "Solecki finite extension", iso,
        cat("total isometry of the ", rn, " point extension"));

  bool restr = true;
  for (const auto& [a, b] : p.map)
    if (a >= res.map.size() || res.map[a] != b) restr = false;
  int n = x.d.size();
  for (int i = 0; i < n && restr; ++i)
    for (int j = 0; j < n && restr; ++j)
      restr = res.space.d.at(i, j) == x.d.at(i, j);
  r.add("urysohn.extend.restriction", "Solecki finite extension", restr,
        "the extension preserves the base space and the given assignments");

  r.data["space"] = io::space_to(res.space);
  r.data["map"] = res.map;
  r.data["added"] = rn - (std::size_t)n;
}

void op_urysohn_width(const json& req, Report& r) {
  auto act = io::action_from(need(req, "action"));
  auto xb = io::indices_from(need(req, "xbar"));
  Rat eps = io::rat_from(need(req, "eps"));
  auto wd = urysohn::width_decomposition(act, xb, eps);

  std::set<std::size_t> uset(wd.u.begin(), wd.u.end());
  std::set<std::size_t> hset(wd.h.begin(), wd.h.end());

  bool moves = true;
  for (std::size_t u : wd.u) {
    for (std::size_t xi : xb) {
      Rat d = act.space.d.at((int)xi, (int)act.elements[u][xi]);
      if (d >= eps) moves = false;
    }
  }
  r.add("urysohn.width.stabilizer", "Bergman width", moves,
        cat(wd.u.size(), " elements move every anchor less than ", eps.str()));

  bool cert = wd.certificate.size() == act.elements.size();
  std::set<std::size_t> covered;
  for (const auto& c : wd.certificate) {
    if (!uset.count(c.u1) || !uset.count(c.u2) || !uset.count(c.u3) ||
        !hset.count(c.h)) {
      cert = false;
      break;
    }
    auto recon = tree::perm_compose(
        act.elements[c.u1],
        tree::perm_compose(
            tree::perm_inverse(act.elements[c.u2]),
            tree::perm_compose(act.elements[c.h],
                               tree::perm_inverse(act.elements[c.u3]))));
    if (recon != act.elements[c.f]) {
      cert = false;
      break;
    }
    covered.insert(c.f);
  }
  cert = cert && covered.size() == act.elements.size();
  r.add("urysohn.width.certificate", "Bergman width", cert,
        "every element factors as u1 u2^-1 h u3^-1 with verified memberships");

  r.data["u"] = wd.u;
  r.data["h"] = wd.h;
}

// ------------------------------------------------------------------ tree --

std::string kind_name(tree::CharKind k) {
  switch (k) {
    case tree::CharKind::FixedSet: return "elliptic";
    case tree::CharKind::InvertedEdge: return "inversion";
    default: return "hyperbolic";
  }
}

long brute_norm(const tree::SimplicialTree& t,
                const std::vector<std::size_t>& g) {
  long best = -1;
  for (std::size_t v = 0; v < t.size(); ++v) {
    long d = tree::vertex_distance(t, v, g[v]);
    if (best < 0 || d < best) best = d;
  }
  return best;
}

void op_tree_classify(const json& req, Report& r) {
  const json& gj = need(req, "auto");
  if (io::holds_word(gj)) {
    auto w = io::word_from(gj);
    auto wc = tree::classify_word(w);
    bool structure;
    std::string detail;
    if (wc.kind == tree::CharKind::FixedSet) {
      structure = w.empty() && wc.norm == 0;
      detail = "identity translation fixes the whole tree";
    } else {
      auto recon = tree::wmul(tree::wmul(wc.base, wc.direction),
                              tree::winv(wc.base));
      structure = recon == w && wc.norm == wc.direction.length() && wc.norm > 0;
      detail = cat("axis through ", wc.base.str().empty() ? "e" : wc.base.str(),
                   " with direction ", wc.direction.str());
    }
    r.add("tree.classify.structure", "Serre dichotomy", structure, detail);
    r.add("tree.classify.norm", "Serre dichotomy",
          wc.norm == tree::wdist(tree::FreeWord{}, w) -
                         2 * wc.base.length() ||
              wc.kind == tree::CharKind::FixedSet,
          cat("translation length ", wc.norm));
    r.data["kind"] = kind_name(wc.kind);
    r.data["base"] = wc.base.str();
    r.data["direction"] = wc.direction.str();
    r.data["norm"] = wc.norm;
    return;
  }

  auto t = io::tree_from(need(req, "tree"));
  auto g = io::perm_from(gj);
  tree::validate_automorphism(t, g);
  auto pc = tree::classify_perm(t, g);

  bool structure = true;
  std::string detail;
  if (pc.kind == tree::CharKind::FixedSet) {
    for (std::size_t v : pc.fixed)
      if (g[v] != v) structure = false;
    structure = structure && !pc.fixed.empty() && pc.norm == 0;
    detail = cat(pc.fixed.size(), " fixed vertices");
  } else if (pc.kind == tree::CharKind::InvertedEdge) {
    structure = g[pc.edge.first] == pc.edge.second &&
                g[pc.edge.second] == pc.edge.first && pc.norm == 1;
    detail = cat("inverts edge (", pc.edge.first, ",", pc.edge.second, ")");
  } else {
    structure = pc.norm > 0;
    detail = cat("hyperbolic with translation length ", pc.norm);
  }
  r.add("tree.classify.structure", "Serre dichotomy", structure, detail);
  r.add("tree.classify.norm", "Serre dichotomy", pc.norm == brute_norm(t, g),
        cat("norm ", pc.norm, " equals the minimal vertex displacement"));
  r.data["kind"] = kind_name(pc.kind);
  r.data["norm"] = pc.norm;
  if (pc.kind == tree::CharKind::FixedSet) r.data["fixed"] = pc.fixed;
  if (pc.kind == tree::CharKind::InvertedEdge)
    r.data["edge"] = json::array({pc.edge.first, pc.edge.second});
}

void op_tree_cm1(const json& req, Report& r) {
  const json& gj = need(req, "g");
  const json& hj = need(req, "h");
  tree::CmDisjoint res{false, "", 0, 0, 0, 0};
  bool word_route = io::holds_word(gj);
  long product_norm = 0;
  if (word_route) {
    auto g = io::word_from(gj);
    auto h = io::word_from(hj);
    res = tree::cm_disjoint_identity(g, h);
    if (res.applicable)
      product_norm = tree::classify_word(tree::wmul(g, h)).norm;
  } else {
    auto t = io::tree_from(need(req, "tree"));
    auto g = io::perm_from(gj);
    auto h = io::perm_from(hj);
    res = tree::cm_disjoint_identity(t, g, h);
    product_norm = res.norm_product;
  }
  if (!res.applicable) {
    r.note("tree.cm1.identity", "Culler-Morgan disjoint axes", res.reason);
    r.data["applicable"] = false;
    r.data["reason"] = res.reason;
    return;
  }
  bool ok = res.norm_product == res.norm_g + res.norm_h + 2 * res.distance &&
            res.norm_product == product_norm;
  r.add("tree.cm1.identity", "Culler-Morgan disjoint axes", ok,
        cat("|g|=", res.norm_g, " |h|=", res.norm_h, " gap=", res.distance,
            " |gh|=", res.norm_product));
  r.data["applicable"] = true;
  r.data["norm_g"] = res.norm_g;
  r.data["norm_h"] = res.norm_h;
  r.data["norm_product"] = res.norm_product;
  r.data["distance"] = res.distance;
}

void op_tree_cm2(const json& req, Report& r) {
  const json& gj = need(req, "g");
  const json& hj = need(req, "h");
  tree::CmMax res{false, "", 0, 0, 0, 0};
  long np = 0, npi = 0;
  if (io::holds_word(gj)) {
    auto g = io::word_from(gj);
    auto h = io::word_from(hj);
    res = tree::cm_max_identity(g, h);
    if (res.applicable) {
      np = tree::classify_word(tree::wmul(g, h)).norm;
      npi = tree::classify_word(tree::wmul(g, tree::winv(h))).norm;
    }
  } else {
    auto t = io::tree_from(need(req, "tree"));
    auto g = io::perm_from(gj);
    auto h = io::perm_from(hj);
    res = tree::cm_max_identity(t, g, h);
    np = res.norm_product;
    npi = res.norm_product_inv;
  }
  if (!res.applicable) {
    r.note("tree.cm2.identity", "Culler-Morgan crossing axes", res.reason);
    r.data["applicable"] = false;
    r.data["reason"] = res.reason;
    return;
  }
  long got = std::max(res.norm_product, res.norm_product_inv);
  bool ok = got == res.norm_g + res.norm_h && res.norm_product == np &&
            res.norm_product_inv == npi;
  r.add("tree.cm2.identity", "Culler-Morgan crossing axes", ok,
        cat("|g|=", res.norm_g, " |h|=", res.norm_h, " |gh|=",
            res.norm_product, " |gh^-1|=", res.norm_product_inv));
  r.data["applicable"] = true;
  r.data["norm_g"] = res.norm_g;
  r.data["norm_h"] = res.norm_h;
  r.data["norm_product"] = res.norm_product;
  r.data["norm_product_inv"] = res.norm_product_inv;
}

void op_tree_serre(const json& req, Report& r) {
  auto t = io::tree_from(need(req, "tree"));
  auto g = io::perm_from(need(req, "g"));
  auto h = io::perm_from(need(req, "h"));
  auto res = tree::serre_common_vertex(t, g, h);
  if (!res.applicable) {
    r.note("tree.serre.common", "Serre common fixed point", res.reason);
    r.data["applicable"] = false;
    r.data["reason"] = res.reason;
    return;
  }
  bool ok = g[res.common] == res.common && h[res.common] == res.common;
  r.add("tree.serre.common", "Serre common fixed point", ok,
        cat("vertex ", res.common, " is fixed by both"));
  r.data["applicable"] = true;
  r.data["common"] = res.common;
}

void op_tree_macpherson(const json& req, Report& r) {
  auto t = io::tree_from(need(req, "tree"));
  auto k0 = io::perm_from(need(req, "k0"));
  auto k1 = io::perm_from(need(req, "k1"));
  auto k2 = io::perm_from(need(req, "k2"));
  auto res = tree::macpherson_fixed_point(t, k0, k1, k2);
  if (!res.applicable) {
    r.note("tree.macpherson.fixed", "MacPherson triple intersection",
           res.reason);
    r.data["applicable"] = false;
    r.data["reason"] = res.reason;
    return;
  }
  auto prod = tree::perm_compose(
      k0, tree::perm_compose(k1, tree::perm_compose(k0, k2)));
  bool ok = prod[res.vertex] == res.vertex;
  r.add("tree.macpherson.fixed", "MacPherson triple intersection", ok,
        cat("k0 k1 k0 k2 fixes vertex ", res.vertex));
  r.data["applicable"] = true;
  r.data["vertex"] = res.vertex;
}

// --------------------------------------------------------------- unitary --

bool is_identity(const unitary::FinitaryOperator& q) {
  return q == unitary::FinitaryOperator::identity();
}

void op_unitary_gs(const json& req, Report& r) {
  auto vs = io::vectors_from(need(req, "vectors"));
  std::vector<unitary::FinVector> prefix;
  if (req.contains("prefix")) prefix = io::vectors_from(req.at("prefix"));
  auto basis = unitary::gram_schmidt(vs, prefix);

  bool gram = true;
  tower::Elem one{Rat(1)}, zero{Rat(0)};
  for (std::size_t i = 0; i < basis.size() && gram; ++i)
    for (std::size_t j = i; j < basis.size() && gram; ++j)
      gram = inner(basis[i], basis[j]) == (i == j ? one : zero);
  r.add("unitary.gs.orthonormal", "Gram-Schmidt", gram,
        cat(basis.size(), " vectors with exact identity Gram matrix"));

  bool span = true;
  for (const auto& v : vs) {
    unitary::FinVector resid = v;
    for (const auto& b : basis) resid = resid - b.scaled(inner(v, b));
    if (!resid.is_zero()) span = false;
  }
  r.add("unitary.gs.span", "Gram-Schmidt", span,
        "every input reconstructs exactly from its projections");

  json out = json::array();
  for (const auto& b : basis) out.push_back(io::vector_to(b));
  r.data["basis"] = std::move(out);
  r.data["count"] = basis.size();
}

void op_unitary_extend(const json& req, Report& r) {
  auto pairs = io::pairs_from(need(req, "pairs"));
  auto q = unitary::extend_partial_isometry(pairs);

  bool maps = true;
  for (const auto& pr : pairs)
    if (q.apply(pr.x) != pr.y) maps = false;
  r.add("unitary.extend.mapping", "isometry extension", maps,
        cat("all ", pairs.size(), " prescribed images match exactly"));

  r.add("unitary.extend.orthogonal", "isometry extension",
        is_identity(unitary::compose(q.inverse(), q)),
        "the inverse is a two-sided inverse");
  r.data["operator"] = io::operator_to(q);
}

void op_unitary_paste(const json& req, Report& r) {
  const json& bj = unwrap(need(req, "blocks"), "blocks");
  if (!bj.is_array() || bj.empty())
    throw Error(ErrorKind::Parse, "field \"blocks\" must list operators");
  std::vector<unitary::FinitaryOperator> blocks;
  for (const json& b : bj) blocks.push_back(io::operator_from(b));
  auto pasted = unitary::block_paste(blocks);

  bool restr = true;
  long slot = blocks[0].lo();
  for (const auto& b : blocks) {
    for (long j = 0; j < b.size() && restr; ++j) {
      auto col = b.column(b.lo() + j);
      unitary::FinVector expect;
      for (const auto& [i, e] : col.entries())
        expect.set(i - b.lo() + slot, e);
      restr = pasted.apply(unitary::FinVector::basis(slot + j)) == expect;
    }
    slot += b.size();
  }
  r.add("unitary.paste.blocks", "block pasting", restr,
        "each block acts unchanged on its slot");

  r.add("unitary.paste.orthogonal", "block pasting",
        is_identity(unitary::compose(pasted.inverse(), pasted)),
        "the pasted operator stays orthogonal");
  r.data["operator"] = io::operator_to(pasted);
}

unitary::BlockSchedule schedule_from(const json& j) {
  const json& ts = unwrap(j, "tuples");
  if (!ts.is_array())
    throw Error(ErrorKind::Parse, "a schedule is a list of operator tuples");
  unitary::BlockSchedule h;
  for (const json& tup : ts) {
    if (!tup.is_array())
      throw Error(ErrorKind::Parse, "each schedule slot is a list of operators");
    std::vector<unitary::FinitaryOperator> row;
    for (const json& b : tup) row.push_back(io::operator_from(b));
    h.tuples.push_back(std::move(row));
  }
  return h;
}

void op_unitary_shiftwin(const json& req, Report& r) {
  auto h = schedule_from(need(req, "schedule"));
  const json& tj = unwrap(need(req, "targets"), "targets");
  if (!tj.is_array())
    throw Error(ErrorKind::Parse, "field \"targets\" must list operators");
  std::vector<unitary::FinitaryOperator> targets;
  for (const json& b : tj) targets.push_back(io::operator_from(b));
  long k = opt_long(req, "k", 1);

  long n = unitary::shift_conjugate_window(h, targets, k);
  r.add("unitary.shiftwin.match", "bilateral shift window",
        unitary::shift_conjugate_matches(h, targets, k, n),
        cat("conjugating by the shift power ", n,
            " matches all targets on the window"));
  r.data["n"] = n;
}

void op_unitary_bergman(const json& req, Report& r) {
  auto t = io::operator_from(need(req, "op"));
  long k = opt_long(req, "k", 1);
  auto bf = unitary::bergman_factorization(t, k);

  auto recon = unitary::compose(
      bf.r0.inverse(), unitary::compose(bf.r1.inverse(), bf.residual));
  r.add("unitary.bergman.product", "Bergman factorization", recon == t,
        "r0^-1 r1^-1 (r1 r0 t) recomposes to t exactly");

  bool stab = bf.r0.fixes_pointwise(1, k) && bf.residual.fixes_pointwise(1, k) &&
              bf.r1.fixes_pointwise(k + 1, 2 * k);
  r.add("unitary.bergman.stabilizers", "Bergman factorization", stab,
        cat("r0 and the residual fix e_1..e_", k, ", r1 fixes e_", k + 1,
            "..e_", 2 * k));

  r.data["m"] = io::operator_to(bf.m);
  r.data["r0"] = io::operator_to(bf.r0);
  r.data["r1"] = io::operator_to(bf.r1);
  r.data["residual"] = io::operator_to(bf.residual);
}

// ----------------------------------------------------------------- group --

void op_group_chain(const json& req, Report& r) {
  auto g = io::group_from(need(req, "group"));
  auto chain = group::SubsetChain::validated(
      g, io::index_lists_from(need(req, "levels")));
  std::size_t f = opt_index(req, "f");
  std::size_t h = opt_index(req, "h");
  if (f >= g.size() || h >= g.size())
    throw Error(ErrorKind::Invalid, "element index out of range");
  auto cd = group::chain_metric(g, chain, f, h);

  r.add("group.chain.symmetry", "Birkhoff-Kakutani chain",
        group::chain_metric(g, chain, h, f).distance == cd.distance,
        cat("d(f,h)=", cd.distance.str(), " both ways"));

  bool inv = true;
  std::size_t limit = g.size() <= 16 ? g.size() : 16;
  for (std::size_t a = 0; a < limit && inv; ++a)
    inv = group::chain_metric(g, chain, g.op(a, f), g.op(a, h)).distance ==
          cd.distance;
  r.add("group.chain.invariance", "Birkhoff-Kakutani chain", inv,
        cat("left translation by ", limit, " elements preserves the distance"));

  r.data["distance"] = cd.distance.str();
  r.data["gen_level"] = cd.gen_level;
  r.data["gen_power"] = cd.gen_power;
}

void op_group_birkhoff(const json& req, Report& r) {
  auto g = io::group_from(need(req, "group"));
  const json& fj = need(req, "filtration");
  long first = fj.is_object() ? opt_long(fj, "first", 0) : 0;
  auto filt = group::Filtration::validated(g, first, io::index_lists_from(fj));
  std::size_t g1 = opt_index(req, "g1");
  std::size_t g2 = opt_index(req, "g2");
  if (g1 >= g.size() || g2 >= g.size())
    throw Error(ErrorKind::Invalid, "element index out of range");
  auto bd = group::birkhoff_metric(g, filt, g1, g2);

  bool ok = g1 == g2 ? bd.delta.is_zero() && bd.d.is_zero()
                     : bd.delta <= Rat(2) * bd.d && bd.d <= bd.delta;
  r.add("group.birkhoff.sandwich", "Birkhoff-Kakutani sandwich", ok,
        cat("delta=", bd.delta.str(), " d=", bd.d.str()));

  r.add("group.birkhoff.symmetry", "Birkhoff-Kakutani sandwich",
        group::birkhoff_metric(g, filt, g2, g1).d == bd.d,
        "the chained metric is symmetric");

  r.data["delta"] = bd.delta.str();
  r.data["d"] = bd.d.str();
}

void op_group_width(const json& req, Report& r) {
  auto g = io::group_from(need(req, "group"));
  auto e = io::indices_from(need(req, "set"));
  std::size_t w = group::cayley_width(g, e);

  std::set<std::size_t> ball(e.begin(), e.end());
  std::size_t steps = 1;
  while (ball.size() < g.size() && steps < g.size() + 2) {
    std::set<std::size_t> next = ball;
    for (std::size_t a : ball)
      for (std::size_t b : e) next.insert(g.op(a, b));
    if (next == ball) break;
    ball = std::move(next);
    ++steps;
  }
  bool cover = ball.size() == g.size() && steps == w;
  r.add("group.width.cover", "Cayley eccentricity", cover,
        cat("the set's ", w, "-fold product covers all ", g.size(),
            " elements, and no smaller power does"));
  r.data["width"] = w;
}

void op_group_square(const json& req, Report& r) {
  auto g = io::group_from(need(req, "group"));
  auto b = io::indices_from(need(req, "set"));
  auto sc = group::large_subset_square(g, b);

  r.add("group.square.pigeonhole", "Pettis pigeonhole",
        !(sc.majority && !sc.square),
        sc.majority ? "majority subset squares to the whole group"
                    : "subset below half, no covering claim");

  std::set<std::size_t> bs(b.begin(), b.end());
  bool cert = true;
  std::string w = "every covered element carries a verified factor pair";
  for (std::size_t x = 0; x < g.size(); ++x) {
    auto [p, q] = sc.factors[x];
    if (p < 0) {
      if (sc.square) {
        cert = false;
        w = cat("element ", x, " lacks factors despite full coverage");
        break;
      }
      continue;
    }
    if (!bs.count((std::size_t)p) || !bs.count((std::size_t)q) ||
        g.op((std::size_t)p, (std::size_t)q) != x) {
      cert = false;
      w = cat("factor pair for element ", x, " does not check out");
      break;
    }
  }
  r.add("group.square.certificate", "Pettis pigeonhole", cert, w);

  r.data["majority"] = sc.majority;
  r.data["square"] = sc.square;
  if (!sc.square) r.data["missing"] = sc.missing;
}

void op_group_induce(const json& req, Report& r) {
  auto g = io::group_from(need(req, "group"));
  auto sub = io::indices_from(need(req, "subgroup"));
  std::vector<std::size_t> trans;
  if (req.contains("transversal"))
    trans = io::indices_from(req.at("transversal"));
  else
    trans = group::left_transversal(g, sub);
  auto x = io::space_from(need(req, "space"));
  auto act = io::index_lists_from(need(req, "action"));
  auto ia = group::induce_action(g, sub, trans, x, act);

  std::size_t pts = ia.points.size();
  bool iso = true;
  std::size_t alimit = g.size() <= 24 ? g.size() : 24;
  std::size_t plimit = pts <= 40 ? pts : 40;
  for (std::size_t a = 0; a < alimit && iso; ++a) {
    const auto& pa = ia.action[a];
    for (std::size_t p = 0; p < plimit && iso; ++p)
      for (std::size_t q = p + 1; q < plimit && iso; ++q)
        iso = ia.space.d.at((int)pa[p], (int)pa[q]) ==
              ia.space.d.at((int)p, (int)q);
  }
  r.add("group.induce.isometry", "finite-index induction", iso,
        cat("the full group acts by isometries on ", pts, " induced points"));

  bool orbit = true;
  for (std::size_t p = 0; p < plimit && orbit; ++p)
    for (std::size_t a = 0; a < alimit && orbit; ++a)
      orbit = ia.space.d.at((int)p, (int)ia.action[a][p]) <=
              ia.orbit_diameter[p];
  r.add("group.induce.orbit", "finite-index induction", orbit,
        "every displacement stays within the recorded orbit diameter");

  r.data["points"] = pts;
  json od = json::array();
  for (const Rat& v : ia.orbit_diameter) od.push_back(v.str());
  r.data["orbit_diameter"] = std::move(od);
}

// -------------------------------------------------------------- circular --

void op_circular_between(const json& req, Report& r) {
  Rat x = io::rat_from(need(req, "x"));
  Rat y = io::rat_from(need(req, "y"));
  Rat z = io::rat_from(need(req, "z"));
  bool b = circular::betweenness(x, y, z);

  bool invariant = true;
  for (const char* off : {"1/7", "1/3", "2/5", "5/8", "9/11", "1/2"}) {
    Rat t = Rat::parse(off);
    if (circular::betweenness(x + t, y + t, z + t) != b) invariant = false;
  }
  r.add("circular.between.invariance", "cyclic betweenness", invariant,
        cat("betweenness(", x.str(), ",", y.str(), ",", z.str(), ") = ",
            b ? "true" : "false", " under all probed rotations"));
  r.data["between"] = b;
}

void op_circular_config(const json& req, Report& r) {
  auto pts = io::points_from(need(req, "points"));
  bool ok = circular::is_circular_config(pts);
  std::string w = cat(pts.size(), " points in strictly increasing cyclic order");
  if (!ok) {
    for (std::size_t i = 0; i < pts.size() && ok == false; ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        for (std::size_t k = j + 1; k < pts.size(); ++k)
          if (!circular::betweenness(pts[i], pts[j], pts[k])) {
            w = cat("triple (", i, ",", j, ",", k, ") = (", pts[i].str(), ",",
                    pts[j].str(), ",", pts[k].str(),
                    ") breaks the cyclic order");
            i = pts.size();
            j = pts.size();
            break;
          }
  }
  r.add("circular.config.order", "cyclic order axioms", ok, w);
  r.data["config"] = ok;
  r.data["count"] = pts.size();
}

void op_circular_produkt(const json& req, Report& r) {
  auto xs = io::points_from(need(req, "moved"));
  auto ys = io::points_from(need(req, "fixed"));
  auto gs = io::points_from(need(req, "image"));
  auto res = circular::produkt_factorization(xs, ys, gs);

  r.data["feasible"] = res.feasible;
  if (!res.feasible) {
    r.note("circular.produkt.factorization", "stabilizer product width",
           res.reason);
    r.data["reason"] = res.reason;
    return;
  }

  bool cert = true;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (circular::mod1(res.h.eval(res.f.eval(xs[i]))) !=
        circular::mod1(gs[i]))
      cert = false;
  r.add("circular.produkt.certificate", "stabilizer product width", cert,
        cat("h(f(x_i)) lands on every prescribed image, ",
            res.pinned ? "pinned" : "generic", " route"));

  bool stab = true;
  for (const Rat& y : ys)
    if (circular::mod1(res.f.eval(y)) != circular::mod1(y)) stab = false;
  for (const Rat& x : xs)
    if (circular::mod1(res.h.eval(x)) != circular::mod1(x)) stab = false;
  r.add("circular.produkt.stabilizers", "stabilizer product width", stab,
        "f fixes the anchor tuple, h fixes the moved tuple");

  r.data["pinned"] = res.pinned;
  r.data["interval"] = res.interval;
  r.data["f"] = io::plmap_to(res.f);
  r.data["h"] = io::plmap_to(res.h);
}

using Handler = std::function<void(const json&, Report&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table = {
      {"metric.validate", op_metric_validate},
      {"metric.d1", op_metric_d1},
      {"metric.net", op_metric_net},
      {"metric.glue", op_metric_glue},
      {"metric.geodesic", op_metric_geodesic},
      {"urysohn.katetov", op_urysohn_katetov},
      {"urysohn.amalgam", op_urysohn_amalgam},
      {"urysohn.factor4", op_urysohn_factor4},
      {"urysohn.extend", op_urysohn_extend},
      {"urysohn.width", op_urysohn_width},
      {"tree.classify", op_tree_classify},
      {"tree.cm1", op_tree_cm1},
      {"tree.cm2", op_tree_cm2},
      {"tree.serre", op_tree_serre},
      {"tree.macpherson", op_tree_macpherson},
      {"unitary.gs", op_unitary_gs},
      {"unitary.extend", op_unitary_extend},
      {"unitary.paste", op_unitary_paste},
      {"unitary.shiftwin", op_unitary_shiftwin},
      {"unitary.bergman", op_unitary_bergman},
      {"group.chain", op_group_chain},
      {"group.birkhoff", op_group_birkhoff},
      {"group.width", op_group_width},
      {"group.square", op_group_square},
      {"group.induce", op_group_induce},
      {"circular.between", op_circular_between},
      {"circular.config", op_circular_config},
      {"circular.produkt", op_circular_produkt},
  };
  return table;
}

}  // namespace

json make_report(const std::string& op, std::vector<CheckResult> rows,
                 json data) {
  std::sort(rows.begin(), rows.end(),
            [](const CheckResult& a, const CheckResult& b) {
              return a.name < b.name;
            });
  json checks = json::array();
  std::size_t failed = 0;
  for (const auto& c : rows) {
    if (c.status == "fail") ++failed;
    checks.push_back(json{{"name", c.name},
                          {"lemma", c.lemma},
                          {"status", c.status},
                          {"witness", c.witness},
                          {"micros", c.micros}});
  }
  return json{{"op", op},
              {"failed", failed},
              {"checks", std::move(checks)},
              {"data", std::move(data)}};
}

const std::vector<std::string>& operation_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& [name, fn] : handlers()) v.push_back(name);
    for (const char* m :
         {"all", "circular", "group", "metric", "tree", "unitary", "urysohn"})
      v.push_back(std::string("suite.") + m);
    std::sort(v.begin(), v.end());
    return v;
  }();
  return names;
}

json run_op(const std::string& op, const json& request) {
  if (!request.is_object())
    throw Error(ErrorKind::Parse, "request must be a json object");
  if (op.rfind("suite.", 0) == 0) return run_suite(op.substr(6), request);
  const auto& table = handlers();
  auto it = table.find(op);
  if (it == table.end())
    throw Error(ErrorKind::Parse, "unknown operation: " + op);
  Report r;
  it->second(request, r);
  return make_report(op, std::move(r.rows), std::move(r.data));
}

bool any_failed(const json& report) {
  auto it = report.find("checks");
  if (it == report.end() || !it->is_array()) return false;
  for (const json& c : *it)
    if (c.value("status", "") == "fail") return true;
  return false;
}

}  // namespace obkit::checks
