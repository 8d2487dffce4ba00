#pragma once
// The well-founded tree of independent selections from a sequence of finite
// bitset families over a universe {0..D-1}. A node picks at most one member
// per family index, all picked members independent; children add one pair.
// The rank of the tree is the usual well-founded rank of the root: 0 at a
// leaf, otherwise one more than the largest child rank.

#include <algorithm>
#include <cstdint>
#include <future>
#include <map>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <boost/dynamic_bitset.hpp>

#include "cbrank/independence.hpp"
#include "cbrank/ordinal.hpp"

namespace cbrank {

struct FamilySequence {
  std::size_t universe_size = 0;
  std::vector<std::vector<boost::dynamic_bitset<>>> families;
};

// A node, stored as its sorted (family index, member index) pair set; rank
// only depends on this set, not on the order the pairs were picked in.
using TreeNode = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

inline void validate_family_sequence(const FamilySequence& fs) {
  BitsetOps ops{fs.universe_size};
  for (const auto& family : fs.families)
    for (const auto& member : family) ops.validate(member);
}

inline std::vector<boost::dynamic_bitset<>> node_members(const FamilySequence& fs,
                                                         const TreeNode& node) {
  std::vector<boost::dynamic_bitset<>> members;
  members.reserve(node.size());
  for (const auto& [xi, m] : node) members.push_back(fs.families.at(xi).at(m));
  return members;
}

inline TreeNode extend_node(const TreeNode& node, std::uint32_t xi, std::uint32_t m) {
  TreeNode out = node;
  std::pair<std::uint32_t, std::uint32_t> p{xi, m};
  out.insert(std::upper_bound(out.begin(), out.end(), p), p);
  return out;
}

inline std::vector<TreeNode> children(const FamilySequence& fs, const TreeNode& node) {
  validate_family_sequence(fs);
  BitsetOps ops{fs.universe_size};
  std::vector<boost::dynamic_bitset<>> members = node_members(fs, node);
  std::vector<TreeNode> out;
  for (std::uint32_t xi = 0; xi < fs.families.size(); ++xi) {
    bool used = false;
    for (const auto& pr : node) used = used || pr.first == xi;
    if (used) continue;
    for (std::uint32_t m = 0; m < fs.families[xi].size(); ++m) {
      members.push_back(fs.families[xi][m]);
      if (is_independent(ops, members)) out.push_back(extend_node(node, xi, m));
      members.pop_back();
    }
  }
  return out;
}

namespace detail {

// Rank with memoization on the pair-set key; parts carries the nonempty
// cells of the node's members, extended incrementally. Any path reaching the
// same pair set yields the same cell collection, so the memo is sound. The
// backend is generic: the same recursion ranks bitset families and clopen
// interval families.
template <SetOps O>
std::size_t rank_node(const O& ops, const std::vector<std::vector<typename O::Set>>& families,
                      const TreeNode& node, const std::vector<typename O::Set>& parts,
                      std::map<TreeNode, std::size_t>& memo) {
  if (auto it = memo.find(node); it != memo.end()) return it->second;
  std::size_t best = 0;
  for (std::uint32_t xi = 0; xi < families.size(); ++xi) {
    bool used = false;
    for (const auto& pr : node) used = used || pr.first == xi;
    if (used) continue;
    for (std::uint32_t m = 0; m < families[xi].size(); ++m)
      if (auto next = try_extend_cells(ops, parts, families[xi][m]))
        best = std::max(best, 1 + rank_node(ops, families, extend_node(node, xi, m), *next, memo));
  }
  memo.emplace(node, best);
  return best;
}

}  // namespace detail

// Rank of the independent-selection tree over an arbitrary set backend.
template <SetOps O>
std::size_t rank_families(const O& ops, const std::vector<std::vector<typename O::Set>>& families) {
  for (const auto& family : families)
    for (const auto& member : family) ops.validate(member);
  std::map<TreeNode, std::size_t> memo;
  return detail::rank_node(ops, families, {}, {ops.whole()}, memo);
}

inline std::size_t rank(const FamilySequence& fs) {
  return rank_families(BitsetOps{fs.universe_size}, fs.families);
}

namespace detail {

inline std::size_t rank_naive_seq(const FamilySequence& fs,
                                  std::vector<boost::dynamic_bitset<>>& seq,
                                  std::vector<bool>& used) {
  BitsetOps ops{fs.universe_size};
  std::size_t best = 0;
  for (std::uint32_t xi = 0; xi < fs.families.size(); ++xi) {
    if (used[xi]) continue;
    used[xi] = true;
    for (std::uint32_t m = 0; m < fs.families[xi].size(); ++m) {
      seq.push_back(fs.families[xi][m]);
      if (is_independent(ops, seq))
        best = std::max(best, 1 + rank_naive_seq(fs, seq, used));
      seq.pop_back();
    }
    used[xi] = false;
  }
  return best;
}

}  // namespace detail

// Reference evaluation: walks every ordered selection sequence with no
// memoization, rechecking independence from scratch each time. Exponentially
// slower than rank; for small instances and cross-checks only.
inline std::size_t rank_naive(const FamilySequence& fs) {
  validate_family_sequence(fs);
  std::vector<boost::dynamic_bitset<>> seq;
  std::vector<bool> used(fs.families.size(), false);
  return detail::rank_naive_seq(fs, seq, used);
}

// Minimum rank over the trees of all strictly increasing index subsequences
// of length m.
inline std::size_t mrank(const FamilySequence& fs, std::size_t m) {
  validate_family_sequence(fs);
  std::size_t gamma = fs.families.size();
  if (m > gamma)
    throw Error("subsequence_too_long: m = " + std::to_string(m) + " exceeds " +
                std::to_string(gamma) + " families");
  std::vector<std::size_t> pick(m);
  for (std::size_t i = 0; i < m; ++i) pick[i] = i;
  std::size_t best = std::size_t(-1);
  while (true) {
    FamilySequence sub{fs.universe_size, {}};
    for (std::size_t i : pick) sub.families.push_back(fs.families[i]);
    best = std::min(best, rank(sub));
    // next lexicographic combination
    std::size_t i = m;
    while (i > 0 && pick[i - 1] == gamma - m + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t j = i; j < m; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

// Same value as rank, with the root's subtrees evaluated concurrently over a
// shared memo table. Node ranks are schedule-independent, so the result is
// deterministic.
inline std::size_t rank_parallel(const FamilySequence& fs) {
  validate_family_sequence(fs);
  struct SharedMemo {
    std::mutex mu;
    std::map<TreeNode, std::size_t> table;
  };
  auto shared = std::make_shared<SharedMemo>();
  BitsetOps ops{fs.universe_size};
  std::vector<boost::dynamic_bitset<>> root_parts{ops.whole()};

  std::vector<std::future<std::size_t>> tasks;
  for (std::uint32_t xi = 0; xi < fs.families.size(); ++xi)
    for (std::uint32_t m = 0; m < fs.families[xi].size(); ++m)
      if (auto next = try_extend_cells(ops, root_parts, fs.families[xi][m]))
        tasks.push_back(std::async(
            std::launch::async,
            [&fs, ops, shared, node = extend_node({}, xi, m), parts = std::move(*next)] {
              // Private evaluation merged into the shared table afterwards;
              // duplicated subtrees recompute identical values.
              std::map<TreeNode, std::size_t> local;
              {
                std::lock_guard<std::mutex> lock(shared->mu);
                local = shared->table;
              }
              std::size_t r = detail::rank_node(ops, fs.families, node, parts, local);
              std::lock_guard<std::mutex> lock(shared->mu);
              shared->table.merge(local);
              return r;
            }));
  std::size_t best = 0;
  for (auto& t : tasks) best = std::max(best, 1 + t.get());
  return best;
}

// Deterministic DOT rendering of the whole explored tree (nodes unique per
// pair set, so shared subtrees converge). Labels list the node's pairs as
// family:member.
inline void write_dot(const FamilySequence& fs, std::ostream& os) {
  validate_family_sequence(fs);
  std::map<TreeNode, std::size_t> ids;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<std::string> labels;

  auto label_of = [](const TreeNode& node) {
    std::string s = "[";
    for (const auto& [xi, m] : node) {
      if (s.size() > 1) s += " ";
      s += std::to_string(xi) + ":" + std::to_string(m);
    }
    return s + "]";
  };

  // Preorder walk, children in ascending pair order.
  std::vector<TreeNode> stack{{}};
  ids.emplace(TreeNode{}, 0);
  labels.push_back(label_of({}));
  while (!stack.empty()) {
    TreeNode node = std::move(stack.back());
    stack.pop_back();
    std::size_t id = ids.at(node);
    std::vector<TreeNode> kids = children(fs, node);
    std::vector<TreeNode> fresh_kids;
    for (const TreeNode& kid : kids) {
      auto [entry, fresh] = ids.emplace(kid, ids.size());
      if (fresh) {
        labels.push_back(label_of(kid));
        fresh_kids.push_back(kid);
      }
      edges.emplace_back(id, entry->second);
    }
    for (auto it = fresh_kids.rbegin(); it != fresh_kids.rend(); ++it)
      stack.push_back(std::move(*it));
  }
  std::sort(edges.begin(), edges.end());

  os << "digraph ranktree {\n";
  for (std::size_t i = 0; i < labels.size(); ++i)
    os << "  n" << i << " [label=\"" << labels[i] << "\"];\n";
  for (const auto& [from, to] : edges) os << "  n" << from << " -> n" << to << ";\n";
  os << "}\n";
}

}  // namespace cbrank
