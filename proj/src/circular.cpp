#include "obkit/circular.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "obkit/error.hpp"

namespace obkit::circular {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorKind::Invalid, msg); }

[[noreturn]] void internal(const std::string& msg) { throw Error(ErrorKind::Internal, msg); }

// Open arc (s, e) walked in the increasing direction; s == e encodes
// the full circle minus the point s.
bool in_arc(const Rat& t, const Rat& s, const Rat& e) {
  Rat off = mod1(t - s);
  if (off.is_zero()) return false;
  Rat span = mod1(e - s);
  if (span.is_zero()) return true;
  return off < span;
}

}  // namespace

Rat mod1(const Rat& x) { return x - x.floor(); }

bool betweenness(const Rat& x, const Rat& y, const Rat& z) {
  Rat a = mod1(y - x);
  Rat b = mod1(z - x);
  if (a.is_zero() || b.is_zero() || a == b) return false;
  return a < b;
}

bool is_circular_config(const std::vector<Rat>& pts) {
  std::vector<Rat> p;
  p.reserve(pts.size());
  for (const Rat& q : pts) p.push_back(mod1(q));
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j)
      for (std::size_t l = j + 1; l < p.size(); ++l)
        if (!betweenness(p[i], p[j], p[l])) return false;
  return true;
}

PLCircleMap PLCircleMap::validated(std::vector<std::pair<Rat, Rat>> pairs) {
  for (auto& pr : pairs) {
    pr.first = mod1(pr.first);
    pr.second = mod1(pr.second);
  }
  std::sort(pairs.begin(), pairs.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t k = 0; k + 1 < pairs.size(); ++k)
    if (pairs[k].first == pairs[k + 1].first)
      invalid("two breakpoints share the input point " + pairs[k].first.str());
  std::size_t n = pairs.size();
  if (n >= 2) {
    // outputs must be distinct and keep the inputs' cyclic order:
    // exactly one descent around the closed loop of outputs
    std::size_t descents = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const Rat& cur = pairs[k].second;
      const Rat& nxt = pairs[(k + 1) % n].second;
      if (cur == nxt) invalid("two breakpoints share the output point " + cur.str());
      if (nxt < cur) ++descents;
    }
    if (descents != 1)
      invalid("the output points do not follow the input points' cyclic order");
  }
  PLCircleMap m;
  m.breakpoints = std::move(pairs);
  return m;
}

Rat PLCircleMap::eval(const Rat& t) const {
  Rat u = mod1(t);
  std::size_t n = breakpoints.size();
  if (n == 0) return u;
  if (n == 1) return mod1(u - breakpoints[0].first + breakpoints[0].second);
  std::size_t k = n - 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (breakpoints[i].first <= u)
      k = i;
    else
      break;
  }
  const auto& cur = breakpoints[k];
  const auto& nxt = breakpoints[(k + 1) % n];
  Rat la = mod1(nxt.first - cur.first);
  Rat lb = mod1(nxt.second - cur.second);
  Rat off = mod1(u - cur.first);
  return mod1(cur.second + off * lb / la);
}

PLCircleMap PLCircleMap::inverse() const {
  std::vector<std::pair<Rat, Rat>> swapped;
  swapped.reserve(breakpoints.size());
  for (const auto& pr : breakpoints) swapped.emplace_back(pr.second, pr.first);
  return validated(std::move(swapped));
}

ProduktResult produkt_factorization(const std::vector<Rat>& xbar,
                                    const std::vector<Rat>& ybar,
                                    const std::vector<Rat>& gimg) {
  std::size_t n = xbar.size();
  std::size_t m = ybar.size();
  if (n == 0 || m == 0) invalid("both anchor tuples must be nonempty");
  if (gimg.size() != n) invalid("the image list must have one point per moved anchor");

  std::vector<Rat> xs, ys, gs;
  xs.reserve(n);
  ys.reserve(m);
  gs.reserve(n);
  for (const Rat& t : xbar) xs.push_back(mod1(t));
  for (const Rat& t : ybar) ys.push_back(mod1(t));
  for (const Rat& t : gimg) gs.push_back(mod1(t));

  std::vector<Rat> config = xs;
  config.insert(config.end(), ys.begin(), ys.end());
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j)
      if (config[i] == config[j]) invalid("the anchor points are not distinct");
  if (!is_circular_config(config)) invalid("the anchors are not in cyclic order");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (gs[i] == gs[j]) invalid("the image points are not distinct");
  if (!is_circular_config(gs)) invalid("the image tuple is not in cyclic order");

  // indices whose image already sits in the open arc from the last
  // fixed anchor to the first one (with one fixed anchor the
  // betweenness test degenerates and the set is empty)
  std::vector<std::size_t> interval;
  for (std::size_t i = 0; i < n; ++i)
    if (betweenness(ys.back(), gs[i], ys.front())) interval.push_back(i);

  if (gs == xs) {
    std::vector<std::pair<Rat, Rat>> idp;
    for (const Rat& p : config) idp.emplace_back(p, p);
    PLCircleMap idm = PLCircleMap::validated(std::move(idp));
    return {true, "", interval, true, idm, idm};
  }

  // feasibility: a replacement spot for the fixed anchors must exist in
  // both gaps, the one after the moved anchors and the one after their
  // images; scan the arcs cut out by all named points
  std::vector<Rat> special = config;
  special.insert(special.end(), gs.begin(), gs.end());
  std::sort(special.begin(), special.end());
  special.erase(std::unique(special.begin(), special.end()), special.end());
  std::optional<std::pair<Rat, Rat>> room;  // (start, span)
  for (std::size_t k = 0; k < special.size(); ++k) {
    Rat lo = special[k];
    Rat span = mod1(special[(k + 1) % special.size()] - lo);
    Rat mid = mod1(lo + span / Rat(2));
    if (in_arc(mid, xs.back(), xs.front()) && in_arc(mid, gs.back(), gs.front())) {
      room = std::make_pair(lo, span);
      break;
    }
  }
  if (!room) {
    ProduktResult res;
    res.feasible = false;
    res.reason = "the gap after the moved anchors (" + xs.back().str() + " to " +
                 xs.front().str() + ") and the gap after their images (" + gs.back().str() +
                 " to " + gs.front().str() +
                 ") do not overlap, so no map fixing the moved anchors can finish the job";
    res.interval = interval;
    res.pinned = false;
    return res;
  }

  // positions along the gap that holds the moved anchors, measured from
  // the last fixed anchor
  auto apos = [&ys](const Rat& t) { return mod1(t - ys.back()); };

  bool contiguous =
      interval.empty() || interval.back() - interval.front() + 1 == interval.size();
  bool pinnable = contiguous;
  for (std::size_t t = 0; pinnable && t + 1 < interval.size(); ++t)
    if (!(apos(gs[interval[t]]) < apos(gs[interval[t + 1]]))) pinnable = false;

  PLCircleMap fmap, hmap;
  bool built = false;
  bool pinned = false;
  if (pinnable) {
    // direct route: keep the images already in the gap, slot the rest
    // beside the blocks they must avoid
    std::vector<Rat> v(n, Rat(0));
    for (std::size_t idx : interval) v[idx] = gs[idx];
    std::size_t pre = interval.empty() ? n : interval.front();
    {
      Rat start = ys.back();
      Rat end = xs.front();
      if (!interval.empty() && apos(gs[interval.front()]) < apos(end))
        end = gs[interval.front()];
      Rat span = mod1(end - start);
      for (std::size_t i = 0; i < pre; ++i)
        v[i] = mod1(start + span * Rat(static_cast<long>(i + 1)) /
                                Rat(static_cast<long>(pre + 1)));
    }
    if (!interval.empty()) {
      Rat start = xs.back();
      if (apos(gs[interval.back()]) > apos(start)) start = gs[interval.back()];
      Rat span = mod1(ys.front() - start);
      std::size_t post = n - 1 - interval.back();
      for (std::size_t i = interval.back() + 1; i < n; ++i)
        v[i] = mod1(start + span * Rat(static_cast<long>(i - interval.back())) /
                                Rat(static_cast<long>(post + 1)));
    }
    std::map<Rat, Rat> hpairs;
    bool consistent = true;
    auto add = [&hpairs, &consistent](const Rat& a, const Rat& b) {
      auto it = hpairs.find(a);
      if (it == hpairs.end())
        hpairs.emplace(a, b);
      else if (!(it->second == b))
        consistent = false;
    };
    for (const Rat& x : xs) add(x, x);
    for (std::size_t i = 0; i < n; ++i) {
      bool in_int = !interval.empty() && interval.front() <= i && i <= interval.back();
      add(v[i], in_int ? v[i] : gs[i]);
    }
    if (consistent) {
      try {
        std::vector<std::pair<Rat, Rat>> fp;
        for (std::size_t i = 0; i < n; ++i) fp.emplace_back(xs[i], v[i]);
        for (const Rat& y : ys) fp.emplace_back(y, y);
        PLCircleMap fc = PLCircleMap::validated(std::move(fp));
        std::vector<std::pair<Rat, Rat>> hp(hpairs.begin(), hpairs.end());
        PLCircleMap hc = PLCircleMap::validated(std::move(hp));
        bool cert = true;
        for (std::size_t i = 0; cert && i < n; ++i)
          cert = hc.eval(fc.eval(xs[i])) == gs[i];
        for (std::size_t j = 0; cert && j < m; ++j) cert = fc.eval(ys[j]) == ys[j];
        for (std::size_t i = 0; cert && i < n; ++i) cert = hc.eval(xs[i]) == xs[i];
        if (cert) {
          fmap = fc;
          hmap = hc;
          built = true;
          pinned = true;
        }
      } catch (const Error&) {
        // the direct placement has no valid correction map; derive one
      }
    }
  }

  if (!built) {
    // derived route: move the fixed anchors into the shared gap first,
    // then read the middle images off the corrected targets
    const Rat& lo = room->first;
    const Rat& span = room->second;
    std::vector<std::pair<Rat, Rat>> hp;
    for (const Rat& x : xs) hp.emplace_back(x, x);
    for (std::size_t j = 0; j < m; ++j)
      hp.emplace_back(ys[j], mod1(lo + span * Rat(static_cast<long>(j + 1)) /
                                           Rat(static_cast<long>(m + 1))));
    try {
      hmap = PLCircleMap::validated(std::move(hp));
      PLCircleMap hinv = hmap.inverse();
      std::vector<std::pair<Rat, Rat>> fp;
      for (std::size_t i = 0; i < n; ++i) fp.emplace_back(xs[i], hinv.eval(gs[i]));
      for (const Rat& y : ys) fp.emplace_back(y, y);
      fmap = PLCircleMap::validated(std::move(fp));
    } catch (const Error&) {
      internal("the derived factor maps failed to validate");
    }
    for (std::size_t i = 0; i < n; ++i)
      if (!(hmap.eval(fmap.eval(xs[i])) == gs[i]))
        internal("the factoring certificate failed to verify");
    for (std::size_t j = 0; j < m; ++j)
      if (!(fmap.eval(ys[j]) == ys[j])) internal("the middle factor moved a fixed anchor");
    for (std::size_t i = 0; i < n; ++i)
      if (!(hmap.eval(xs[i]) == xs[i])) internal("the correction factor moved a fixed anchor");
  }

  ProduktResult res;
  res.feasible = true;
  res.interval = interval;
  res.pinned = pinned;
  res.f = fmap;
  res.h = hmap;
  return res;
}

}  // namespace obkit::circular
