#pragma once
// The compact scattered space X = [0, lambda] for an ordinal lambda below
// w^w, with its Cantor-Bendixson structure. A point's level (the derivative
// stage at which it becomes isolated) is its trailing CNF exponent; points 0
// and successors are isolated at level 0.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cbrank/ordinal.hpp"

namespace cbrank {

struct Space {
  Ordinal top;  // the space is the closed interval [0, top], top > 0

  explicit Space(Ordinal lambda) : top(std::move(lambda)) {
    if (top.is_zero()) throw Error("empty_space: lambda must be positive");
  }
};

inline Space make_space(std::string_view lambda_literal) {
  return Space(parse_ordinal(lambda_literal));
}

// Exact level size: a finite count or the countably-infinite marker.
struct Cardinality {
  bool finite = true;
  std::uint64_t count = 0;

  static Cardinality fin(std::uint64_t n) { return {true, n}; }
  static Cardinality aleph0() { return {false, 0}; }
  friend bool operator==(const Cardinality&, const Cardinality&) = default;
};

inline std::string to_string(const Cardinality& c) {
  return c.finite ? std::to_string(c.count) : std::string("aleph0");
}

inline std::uint32_t point_level(const Space& space, const Ordinal& p) {
  if (compare(p, space.top) == std::strong_ordering::greater)
    throw Error("point_outside_space: " + to_string(p) + " > " + to_string(space.top));
  if (p.is_zero() || is_successor(p)) return 0;
  return trailing_exponent(p);
}

// Largest level attained by any point of [0, top]; equals the leading
// CNF exponent of top.
inline std::uint32_t max_point_level(const Space& space) {
  return leading_exponent(space.top);
}

// hgt(X): least derivative stage that is empty. Always a successor here,
// and the top level is finite.
inline Ordinal height(const Space& space) {
  return Ordinal::nat(max_point_level(space) + 1);
}

inline std::vector<Cardinality> cardinal_sequence(const Space& space) {
  std::uint32_t top_level = max_point_level(space);
  std::uint64_t lead_coeff = space.top.terms().front().coefficient;
  std::vector<Cardinality> seq;
  seq.reserve(top_level + 1);
  for (std::uint32_t level = 0; level < top_level; ++level)
    seq.push_back(Cardinality::aleph0());
  // Level top_level holds the points w^top_level * i <= top, i.e. lead_coeff
  // of them; when the space is finite every point counts, including 0.
  seq.push_back(Cardinality::fin(top_level == 0 ? lead_coeff + 1 : lead_coeff));
  return seq;
}

// For p = beta + w^mu*i (trailing term w^mu*i), the block of p is the
// interval (beta + w^mu*(i-1), p]. Nothing of level >= mu other than p
// itself lies in the block, so any clopen set with cut points of levels
// >= mu that contains p contains the whole block.
inline Ordinal block_left_edge(const Ordinal& p) {
  if (p.is_zero()) throw Error("zero_has_no_trailing_term");
  std::vector<Ordinal::Term> terms = p.terms();
  terms.back().coefficient -= 1;
  if (terms.back().coefficient == 0) terms.pop_back();
  return Ordinal::from_terms(std::move(terms));
}

// The level-eta points beta + w^mu*(i-1) + w^eta*j for j = 1..count; they
// lie inside the block of p and increase towards p.
inline std::vector<Ordinal> level_approximants(const Ordinal& p, std::uint32_t eta,
                                               std::uint64_t count) {
  if (eta >= trailing_exponent(p))
    throw Error("approximant_level_not_below: eta must be below the level of p");
  Ordinal edge = block_left_edge(p);
  std::vector<Ordinal> out;
  out.reserve(count);
  for (std::uint64_t j = 1; j <= count; ++j)
    out.push_back(add(edge, Ordinal::omega_power(eta, j)));
  return out;
}

// A finite sampled subset of one Cantor-Bendixson level, with each point
// mapped to the higher-level point it approximates (absent for the top
// requested level).
struct LevelSample {
  std::uint32_t level = 0;
  std::vector<Ordinal> points;          // strictly increasing
  std::map<Ordinal, Ordinal> anchors;   // point -> anchor
};

// Hierarchical sampling of levels 0..gamma-1. The top requested level takes
// w^(gamma-1)*i for i = 1..per_level; every lower level eta takes, under
// each already-sampled higher point, per_level approximants packed inside
// that point's block. Collisions (distinct anchors sharing a block edge
// produce the same approximant) keep the first writer, anchors being
// visited by increasing level then increasing point.
inline std::vector<LevelSample> level_sample(const Space& space, std::uint32_t gamma,
                                             std::uint64_t per_level) {
  if (per_level < 1) throw Error("per_level_must_be_positive");
  if (gamma > max_point_level(space))
    throw Error("level_out_of_range: gamma " + std::to_string(gamma) +
                " exceeds max level " + std::to_string(max_point_level(space)));
  std::vector<LevelSample> samples(gamma);
  if (gamma == 0) return samples;

  std::uint32_t top_level = gamma - 1;
  samples[top_level].level = top_level;
  for (std::uint64_t i = 1; i <= per_level; ++i)
    samples[top_level].points.push_back(Ordinal::omega_power(top_level, i));

  for (std::uint32_t eta = top_level; eta-- > 0;) {
    std::map<Ordinal, Ordinal> found;  // point -> anchor, first writer wins
    for (std::uint32_t mu = eta + 1; mu <= top_level; ++mu) {
      for (const Ordinal& p : samples[mu].points) {
        for (Ordinal& q : level_approximants(p, eta, per_level))
          found.emplace(std::move(q), p);
      }
    }
    samples[eta].level = eta;
    for (auto& [point, anchor] : found) {
      samples[eta].points.push_back(point);
      samples[eta].anchors.emplace(point, anchor);
    }
  }
  return samples;
}

// Size the full hierarchical sample would have, without materializing it:
// sum over eta < gamma of per_level^(gamma-eta). Saturates at the cap.
inline std::uint64_t level_sample_size_bound(std::uint32_t gamma, std::uint64_t per_level,
                                             std::uint64_t cap) {
  std::uint64_t total = 0, block = 1;
  for (std::uint32_t eta = 0; eta < gamma; ++eta) {
    if (block > cap / per_level) return cap;
    block *= per_level;
    total += block;
    if (total >= cap) return cap;
  }
  return total;
}

}  // namespace cbrank
