#pragma once
// The Boolean algebra of clopen subsets of [0, lambda]. Every clopen set is
// a finite union of half-open intervals (a, b]; an interval with no lower
// endpoint stands for [0, b]. Sets are kept normalized (sorted, disjoint,
// non-adjacent components), which makes equality structural.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cbrank/ordinal.hpp"
#include "cbrank/space.hpp"

namespace cbrank {

struct Interval {
  std::optional<Ordinal> low;  // absent: the interval is [0, high]
  Ordinal high;                // inclusive upper endpoint

  friend bool operator==(const Interval&, const Interval&) = default;
  friend auto operator<=>(const Interval&, const Interval&) = default;
};

class ClopenSet {
 public:
  static ClopenSet empty_set(const Space& space) { return ClopenSet(space.top, {}); }

  static ClopenSet whole(const Space& space) {
    return ClopenSet(space.top, {Interval{std::nullopt, space.top}});
  }

  // [0, high]: the initial segment up to and including high.
  static ClopenSet initial_segment(const Space& space, Ordinal high) {
    return from_intervals(space, {Interval{std::nullopt, std::move(high)}});
  }

  static ClopenSet interval(const Space& space, Ordinal low, Ordinal high) {
    return from_intervals(space, {Interval{std::move(low), std::move(high)}});
  }

  // Accepts any interval list (overlapping, unsorted), validates endpoints
  // against the space, and normalizes.
  static ClopenSet from_intervals(const Space& space, std::vector<Interval> parts) {
    for (const Interval& iv : parts) {
      if (iv.low && compare(*iv.low, iv.high) != std::strong_ordering::less)
        throw Error("interval_invalid: lower endpoint " + to_string(*iv.low) +
                    " not below upper endpoint " + to_string(iv.high));
      if (compare(iv.high, space.top) == std::strong_ordering::greater)
        throw Error("interval_outside_space: upper endpoint " + to_string(iv.high) +
                    " exceeds " + to_string(space.top));
    }
    std::sort(parts.begin(), parts.end());
    std::vector<Interval> merged;
    for (Interval& iv : parts) {
      // Overlapping or touching components fuse: (a,b] followed by (c,d]
      // with c <= b gives (a, max(b,d)].
      if (!merged.empty() &&
          (!iv.low || compare(*iv.low, merged.back().high) != std::strong_ordering::greater)) {
        if (compare(iv.high, merged.back().high) == std::strong_ordering::greater)
          merged.back().high = std::move(iv.high);
      } else {
        merged.push_back(std::move(iv));
      }
    }
    return ClopenSet(space.top, std::move(merged));
  }

  const Ordinal& top() const { return top_; }
  const std::vector<Interval>& intervals() const { return parts_; }
  bool empty() const { return parts_.empty(); }

  bool contains(const Ordinal& p) const {
    for (const Interval& iv : parts_) {
      if (compare(p, iv.high) == std::strong_ordering::greater) continue;
      return !iv.low || compare(*iv.low, p) == std::strong_ordering::less;
    }
    return false;
  }

  friend bool operator==(const ClopenSet&, const ClopenSet&) = default;
  friend auto operator<=>(const ClopenSet&, const ClopenSet&) = default;

 private:
  ClopenSet(Ordinal top, std::vector<Interval> parts)
      : top_(std::move(top)), parts_(std::move(parts)) {}

  Ordinal top_;                   // the space is [0, top_]
  std::vector<Interval> parts_;   // normalized components
};

inline void require_same_space(const ClopenSet& a, const ClopenSet& b) {
  if (a.top() != b.top())
    throw Error("space_mismatch: [0," + to_string(a.top()) + "] vs [0," +
                to_string(b.top()) + "]");
}

inline ClopenSet unite(const ClopenSet& a, const ClopenSet& b) {
  require_same_space(a, b);
  std::vector<Interval> parts = a.intervals();
  parts.insert(parts.end(), b.intervals().begin(), b.intervals().end());
  return ClopenSet::from_intervals(Space(a.top()), std::move(parts));
}

inline ClopenSet intersect(const ClopenSet& a, const ClopenSet& b) {
  require_same_space(a, b);
  std::vector<Interval> parts;
  std::size_t i = 0, j = 0;
  const auto& xs = a.intervals();
  const auto& ys = b.intervals();
  while (i < xs.size() && j < ys.size()) {
    // Overlap of (p,q] and (r,s] is (max(p,r), min(q,s)] when nonempty.
    const std::optional<Ordinal>& xl = xs[i].low;
    const std::optional<Ordinal>& yl = ys[j].low;
    std::optional<Ordinal> low =
        !xl ? yl : !yl ? xl : (compare(*xl, *yl) == std::strong_ordering::less ? yl : xl);
    const Ordinal& high =
        compare(xs[i].high, ys[j].high) == std::strong_ordering::less ? xs[i].high : ys[j].high;
    if (!low || compare(*low, high) == std::strong_ordering::less)
      parts.push_back(Interval{low, high});
    if (compare(xs[i].high, ys[j].high) == std::strong_ordering::less)
      ++i;
    else
      ++j;
  }
  return ClopenSet::from_intervals(Space(a.top()), std::move(parts));
}

inline ClopenSet complement(const ClopenSet& s) {
  Space space{s.top()};
  const auto& parts = s.intervals();
  if (parts.empty()) return ClopenSet::whole(space);
  std::vector<Interval> out;
  if (parts.front().low) out.push_back(Interval{std::nullopt, *parts.front().low});
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    out.push_back(Interval{parts[i].high, *parts[i + 1].low});
  if (compare(parts.back().high, s.top()) == std::strong_ordering::less)
    out.push_back(Interval{parts.back().high, s.top()});
  return ClopenSet::from_intervals(space, std::move(out));
}

inline ClopenSet operator|(const ClopenSet& a, const ClopenSet& b) { return unite(a, b); }
inline ClopenSet operator&(const ClopenSet& a, const ClopenSet& b) { return intersect(a, b); }
inline ClopenSet operator~(const ClopenSet& s) { return complement(s); }
inline ClopenSet operator-(const ClopenSet& a, const ClopenSet& b) { return a & ~b; }

inline std::string to_string(const ClopenSet& s) {
  if (s.empty()) return "{}";
  std::string out;
  for (const Interval& iv : s.intervals()) {
    if (!out.empty()) out += " , ";
    if (iv.low)
      out += "(" + to_string(*iv.low) + ", " + to_string(iv.high) + "]";
    else
      out += "[0," + to_string(iv.high) + "]";
  }
  return out;
}

// Parses the rendering produced by to_string: comma-separated intervals
// "[0,b]" or "(a, b]" with ordinal literals for endpoints; "{}" or a blank
// string is the empty set. Input need not be normalized.
inline ClopenSet parse_clopen(const Space& space, std::string_view text) {
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto endpoint_until = [&](char stop) {
    std::size_t start = pos;
    while (pos < text.size() && text[pos] != stop) ++pos;
    if (pos == text.size())
      throw ParseError(pos, "expected '" + std::string(1, stop) + "'");
    std::string_view literal = text.substr(start, pos - start);
    ++pos;  // consume the delimiter
    try {
      return parse_ordinal(literal);
    } catch (const ParseError& e) {
      throw ParseError(start + e.position, std::string("bad interval endpoint: ") + e.what());
    }
  };

  skip_ws();
  if (pos + 2 <= text.size() && text.substr(pos, 2) == "{}") {
    pos += 2;
    skip_ws();
    if (pos != text.size()) throw ParseError(pos, "trailing input after '{}'");
    return ClopenSet::empty_set(space);
  }
  std::vector<Interval> parts;
  while (true) {
    skip_ws();
    if (pos == text.size()) {
      if (parts.empty()) return ClopenSet::empty_set(space);
      throw ParseError(pos, "expected an interval after ','");
    }
    if (text[pos] == '[') {
      ++pos;
      Ordinal low = endpoint_until(',');
      if (!low.is_zero())
        throw ParseError(pos, "a closed lower endpoint must be 0");
      parts.push_back(Interval{std::nullopt, endpoint_until(']')});
    } else if (text[pos] == '(') {
      ++pos;
      Ordinal low = endpoint_until(',');
      parts.push_back(Interval{std::move(low), endpoint_until(']')});
    } else {
      throw ParseError(pos, "expected '[' or '('");
    }
    skip_ws();
    if (pos == text.size()) break;
    if (text[pos] != ',') throw ParseError(pos, "expected ',' between intervals");
    ++pos;
  }
  return ClopenSet::from_intervals(space, std::move(parts));
}

// A finite subalgebra of the clopen algebra, described by generators; its
// atoms (the nonempty Boolean cells of the generators) partition the space.
struct FiniteAlgebra {
  std::vector<ClopenSet> generators;
  std::vector<ClopenSet> atoms;
};

// Atoms computed by refining the one-piece partition with each generator in
// turn; atoms end up sorted by their leftmost component.
inline FiniteAlgebra algebra_from_generators(const Space& space,
                                             std::vector<ClopenSet> generators) {
  std::vector<ClopenSet> atoms{ClopenSet::whole(space)};
  for (const ClopenSet& g : generators) {
    std::vector<ClopenSet> next;
    for (const ClopenSet& piece : atoms) {
      ClopenSet in = piece & g;
      ClopenSet out = piece - g;
      if (!in.empty()) next.push_back(std::move(in));
      if (!out.empty()) next.push_back(std::move(out));
    }
    atoms = std::move(next);
  }
  std::sort(atoms.begin(), atoms.end());
  return FiniteAlgebra{std::move(generators), std::move(atoms)};
}

// The algebra generated by the initial segments [0, x] for the given points;
// any two distinct points land in different atoms. Initial segments are
// nested, so the atoms are exactly the gaps between consecutive points (plus
// the tail above the last one) and can be written down directly instead of
// going through iterated refinement — that keeps large separating algebras
// linear instead of quadratic in the point count.
inline FiniteAlgebra separating_algebra(const Space& space, std::vector<Ordinal> points) {
  if (points.empty()) throw Error("empty_point_set");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  FiniteAlgebra out;
  out.generators.reserve(points.size());
  out.atoms.reserve(points.size() + 1);
  for (const Ordinal& x : points) {
    if (compare(x, space.top) == std::strong_ordering::greater)
      throw Error("point_outside_space: " + to_string(x) + " > " + to_string(space.top));
    out.generators.push_back(ClopenSet::initial_segment(space, x));
    out.atoms.push_back(out.atoms.empty()
                            ? out.generators.back()
                            : ClopenSet::interval(space, points[out.atoms.size() - 1], x));
  }
  if (compare(points.back(), space.top) == std::strong_ordering::less)
    out.atoms.push_back(ClopenSet::interval(space, points.back(), space.top));
  return out;
}

// Restriction of a clopen set to a finite ordered witness set: bit i is set
// iff witness[i] lies in s.
inline boost::dynamic_bitset<> trace(const ClopenSet& s, const std::vector<Ordinal>& witness) {
  boost::dynamic_bitset<> bits(witness.size());
  for (std::size_t i = 0; i < witness.size(); ++i)
    if (s.contains(witness[i])) bits.set(i);
  return bits;
}

struct HittingResult {
  bool ok = true;
  std::optional<ClopenSet> missed_cell;  // a nonempty cell with no witness

  explicit operator bool() const { return ok; }
};

// Whether every nonempty Boolean cell of the combined generators of the
// given algebras contains a witness point. When this holds, tracing onto
// the witness set loses nothing: the trace map is injective on the algebra
// the generators generate.
inline HittingResult cell_hitting_check(const Space& space,
                                        const std::vector<FiniteAlgebra>& algebras,
                                        const std::vector<Ordinal>& witness) {
  std::vector<ClopenSet> combined;
  for (const FiniteAlgebra& a : algebras)
    combined.insert(combined.end(), a.generators.begin(), a.generators.end());
  FiniteAlgebra joint = algebra_from_generators(space, std::move(combined));
  for (const ClopenSet& cell : joint.atoms) {
    bool hit = false;
    for (const Ordinal& w : witness)
      if (cell.contains(w)) {
        hit = true;
        break;
      }
    if (!hit) return HittingResult{false, cell};
  }
  return HittingResult{};
}

}  // namespace cbrank
