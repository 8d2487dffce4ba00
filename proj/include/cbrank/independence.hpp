#pragma once
// Independence of finite set sequences: <K_0, ..., K_{n-1}> is independent
// when every one of the 2^n cells (intersections picking each K_i or its
// complement) is nonempty; the empty sequence is independent. The set
// operations come from a backend so the same definitions serve bitsets over
// a finite universe and clopen subsets of an ordinal interval.

#include <algorithm>
#include <concepts>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cbrank/clopen.hpp"
#include "cbrank/ordinal.hpp"
#include "cbrank/space.hpp"

namespace cbrank {

template <typename O>
concept SetOps = requires(const O& ops, const typename O::Set& s) {
  { ops.whole() } -> std::same_as<typename O::Set>;
  { ops.intersect(s, s) } -> std::same_as<typename O::Set>;
  { ops.complement(s) } -> std::same_as<typename O::Set>;
  { ops.is_empty(s) } -> std::same_as<bool>;
  ops.validate(s);
};

struct BitsetOps {
  using Set = boost::dynamic_bitset<>;
  std::size_t universe_size;

  Set whole() const {
    Set s(universe_size);
    s.set();
    return s;
  }
  Set intersect(const Set& a, const Set& b) const { return a & b; }
  Set complement(const Set& s) const { return ~s; }
  bool is_empty(const Set& s) const { return s.none(); }
  void validate(const Set& s) const {
    if (s.size() != universe_size)
      throw Error("universe_mismatch: bitset of size " + std::to_string(s.size()) +
                  " in universe of size " + std::to_string(universe_size));
  }
};

struct ClopenOps {
  using Set = ClopenSet;
  Space space;

  Set whole() const { return ClopenSet::whole(space); }
  Set intersect(const Set& a, const Set& b) const { return a & b; }
  Set complement(const Set& s) const { return ~s; }
  bool is_empty(const Set& s) const { return s.empty(); }
  void validate(const Set& s) const {
    if (s.top() != space.top)
      throw Error("space_mismatch: member over [0," + to_string(s.top()) +
                  "] in space [0," + to_string(space.top) + "]");
  }
};

// Splits every part by k; succeeds (returning the doubled list) only if each
// part meets both k and its complement. Starting from {whole} and feeding
// members one by one, success at every step is exactly independence, and the
// resulting list holds the nonempty cells.
template <SetOps O>
std::optional<std::vector<typename O::Set>> try_extend_cells(
    const O& ops, const std::vector<typename O::Set>& parts, const typename O::Set& k) {
  typename O::Set nk = ops.complement(k);
  std::vector<typename O::Set> next;
  next.reserve(parts.size() * 2);
  for (const auto& c : parts) {
    typename O::Set in = ops.intersect(c, k);
    if (ops.is_empty(in)) return std::nullopt;
    typename O::Set out = ops.intersect(c, nk);
    if (ops.is_empty(out)) return std::nullopt;
    next.push_back(std::move(in));
    next.push_back(std::move(out));
  }
  return next;
}

template <SetOps O>
bool is_independent(const O& ops, const std::vector<typename O::Set>& members) {
  for (const auto& m : members) ops.validate(m);
  std::vector<typename O::Set> parts{ops.whole()};
  for (const auto& k : members) {
    auto next = try_extend_cells(ops, parts, k);
    if (!next) return false;
    parts = std::move(*next);
  }
  return true;
}

// All 2^n cells, empty ones included, indexed by sign pattern: bit i of the
// index set means the complement of members[i] was taken.
template <SetOps O>
std::vector<typename O::Set> cells(const O& ops, const std::vector<typename O::Set>& members) {
  for (const auto& m : members) ops.validate(m);
  std::vector<typename O::Set> out{ops.whole()};
  for (std::size_t i = 0; i < members.size(); ++i) {
    typename O::Set nk = ops.complement(members[i]);
    std::vector<typename O::Set> next(out.size() * 2, ops.whole());
    for (std::size_t pattern = 0; pattern < out.size(); ++pattern) {
      next[pattern] = ops.intersect(out[pattern], members[i]);
      next[pattern | (std::size_t{1} << i)] = ops.intersect(out[pattern], nk);
    }
    out = std::move(next);
  }
  return out;
}

// Refinement of parts by k keeping nonempty pieces; the result of folding a
// whole family this way is its list of generated-algebra atoms.
template <SetOps O>
std::vector<typename O::Set> refine_nonempty(const O& ops,
                                             const std::vector<typename O::Set>& parts,
                                             const typename O::Set& k) {
  typename O::Set nk = ops.complement(k);
  std::vector<typename O::Set> next;
  next.reserve(parts.size() * 2);
  for (const auto& c : parts) {
    typename O::Set in = ops.intersect(c, k);
    typename O::Set out = ops.intersect(c, nk);
    if (!ops.is_empty(in)) next.push_back(std::move(in));
    if (!ops.is_empty(out)) next.push_back(std::move(out));
  }
  return next;
}

namespace detail {

template <SetOps O>
void longest_independent(const O& ops, const std::vector<typename O::Set>& family,
                         const std::vector<typename O::Set>& parts, std::size_t start,
                         std::size_t depth, std::size_t budget, std::size_t& best) {
  if (depth > best) best = depth;
  if (depth == budget) return;
  // Cells of any deeper sequence refine the atoms generated by the members
  // still available, so 2^(reachable depth) never exceeds that atom count.
  std::vector<typename O::Set> atoms = parts;
  for (std::size_t i = start; i < family.size(); ++i)
    atoms = refine_nonempty(ops, atoms, family[i]);
  std::size_t reachable = 0;
  while ((std::size_t{1} << (reachable + 1)) <= atoms.size()) ++reachable;
  if (reachable <= best) return;
  for (std::size_t i = start; i < family.size(); ++i)
    if (auto next = try_extend_cells(ops, parts, family[i]))
      longest_independent(ops, family, *next, i + 1, depth + 1, budget, best);
}

}  // namespace detail

// Length of the longest independent sequence drawn without reuse from the
// family, capped at budget. Independence is permutation invariant, so the
// search walks index-increasing subsets with an atom-count prune.
template <SetOps O>
std::size_t max_independent_length(const O& ops, const std::vector<typename O::Set>& family,
                                   std::size_t budget) {
  for (const auto& m : family) ops.validate(m);
  std::size_t best = 0;
  detail::longest_independent(ops, family, {ops.whole()}, 0, 0, budget, best);
  return best;
}

enum class SplitStatus { ok, insufficient_witnesses, cannot_separate };

struct SplitOutcome {
  SplitStatus status = SplitStatus::ok;
  std::optional<ClopenSet> chosen;        // present when status == ok
  std::optional<ClopenSet> failing_cell;  // present when witnesses ran short
};

// Picks H from the algebra so that every cell of the current sequence meets
// the witness points on both sides of H; appending H then keeps the sequence
// independent with all cells still witnessed. Greedy: per cell, take the
// first witness pair lying in distinct atoms whose sides don't clash with
// choices made for earlier cells; H is the union of the chosen in-atoms.
inline SplitOutcome split_cell_extension(const Space& space, const FiniteAlgebra& algebra,
                                         const LevelSample& witness,
                                         const std::vector<ClopenSet>& current) {
  ClopenOps ops{space};
  std::vector<ClopenSet> cell_list = cells(ops, current);

  // When every atom is a single interval (always true for separating
  // algebras) the sorted atom list has strictly increasing upper endpoints,
  // so a point's atom is found by binary search; that keeps splits against
  // very large witness samples affordable. Other algebras fall back to the
  // linear scan.
  bool interval_atoms = true;
  for (const ClopenSet& a : algebra.atoms)
    interval_atoms = interval_atoms && a.intervals().size() == 1;

  auto atom_of = [&](const Ordinal& p) -> std::size_t {
    if (interval_atoms) {
      auto it = std::partition_point(algebra.atoms.begin(), algebra.atoms.end(),
                                     [&](const ClopenSet& a) {
                                       return compare(a.intervals().front().high, p) ==
                                              std::strong_ordering::less;
                                     });
      if (it != algebra.atoms.end() && it->contains(p))
        return static_cast<std::size_t>(it - algebra.atoms.begin());
      throw Error("atoms_do_not_cover: " + to_string(p));
    }
    for (std::size_t a = 0; a < algebra.atoms.size(); ++a)
      if (algebra.atoms[a].contains(p)) return a;
    throw Error("atoms_do_not_cover: " + to_string(p));  // unreachable for valid algebras
  };

  std::set<std::size_t> in_atoms, out_atoms;
  for (const ClopenSet& cell : cell_list) {
    std::vector<std::size_t> local;
    for (const Ordinal& w : witness.points)
      if (cell.contains(w)) local.push_back(atom_of(w));
    if (local.size() < 2)
      return SplitOutcome{SplitStatus::insufficient_witnesses, std::nullopt, cell};

    bool picked = false;
    for (std::size_t a = 0; a < local.size() && !picked; ++a) {
      for (std::size_t b = 0; b < local.size() && !picked; ++b) {
        if (a == b || local[a] == local[b]) continue;
        if (out_atoms.count(local[a]) || in_atoms.count(local[b])) continue;
        in_atoms.insert(local[a]);
        out_atoms.insert(local[b]);
        picked = true;
      }
    }
    if (!picked) return SplitOutcome{SplitStatus::cannot_separate, std::nullopt, cell};
  }

  ClopenSet h = ClopenSet::empty_set(space);
  for (std::size_t a : in_atoms) h = h | algebra.atoms[a];
  return SplitOutcome{SplitStatus::ok, std::move(h), std::nullopt};
}

}  // namespace cbrank
