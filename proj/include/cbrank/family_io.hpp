#pragma once
// Family sequence files: JSON documents with a `universe` size and a
// `families` list, each family a list of members, each member a strictly
// increasing list of naturals below the universe. Exact duplicate members
// within one family are dropped on load (families are sets).

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cbrank/ordinal.hpp"
#include "cbrank/rank_tree.hpp"

namespace cbrank {

inline FamilySequence family_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("universe") || !doc.contains("families"))
    throw Error("family_file: expected an object with 'universe' and 'families'");
  if (!doc["universe"].is_number_unsigned())
    throw Error("family_file: 'universe' must be a non-negative integer");
  FamilySequence fs;
  fs.universe_size = doc["universe"].get<std::size_t>();
  if (!doc["families"].is_array())
    throw Error("family_file: 'families' must be a list");
  for (const auto& family : doc["families"]) {
    if (!family.is_array()) throw Error("family_file: each family must be a list of members");
    std::vector<boost::dynamic_bitset<>> members;
    for (const auto& member : family) {
      if (!member.is_array())
        throw Error("family_file: each member must be a list of naturals");
      boost::dynamic_bitset<> bits(fs.universe_size);
      long long prev = -1;
      for (const auto& element : member) {
        if (!element.is_number_unsigned())
          throw Error("family_file: member elements must be non-negative integers");
        auto e = element.get<unsigned long long>();
        if (e >= fs.universe_size)
          throw Error("family_file: element " + std::to_string(e) +
                      " outside universe of size " + std::to_string(fs.universe_size));
        if (static_cast<long long>(e) <= prev)
          throw Error("family_file: member elements must be strictly increasing");
        prev = static_cast<long long>(e);
        bits.set(e);
      }
      if (std::find(members.begin(), members.end(), bits) == members.end())
        members.push_back(std::move(bits));
    }
    fs.families.push_back(std::move(members));
  }
  return fs;
}

inline FamilySequence load_families(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("family_file: ") + e.what());
  }
  return family_from_json(doc);
}

inline nlohmann::json family_to_json(const FamilySequence& fs) {
  nlohmann::json families = nlohmann::json::array();
  for (const auto& family : fs.families) {
    nlohmann::json fj = nlohmann::json::array();
    for (const auto& member : family) {
      nlohmann::json mj = nlohmann::json::array();
      for (std::size_t e = member.find_first(); e != boost::dynamic_bitset<>::npos;
           e = member.find_next(e))
        mj.push_back(e);
      fj.push_back(std::move(mj));
    }
    families.push_back(std::move(fj));
  }
  return nlohmann::json{{"universe", fs.universe_size}, {"families", std::move(families)}};
}

inline void save_families(std::ostream& out, const FamilySequence& fs) {
  out << family_to_json(fs).dump(2) << "\n";
}

}  // namespace cbrank
