#pragma once

#include <json.hpp>

#include "eqps/reconstruct.hpp"

namespace eqps {

using nlohmann::json;

// Groups: either an explicit table or permutation generators.
json group_to_json(const GroupPtr& g);
GroupPtr group_from_json(const json& j);

// Ring elements. Characters serialize as value vectors aligned with the
// sorted member list; the modulus is the subgroup exponent.
json be_to_json(const BurnsideElement& u);
BurnsideElement be_from_json(const json& j, const GroupPtr& g);
json ebe_to_json(const EquippedBurnsideElement& u);
EquippedBurnsideElement ebe_from_json(const json& j, const GroupPtr& g);

// Series files carry a ring tag "Z" | "A" | "Atilde", the group when needed,
// a factored form and/or expanded terms.
json factored_to_json(const FactoredSeries<ZRing>& f);
json factored_to_json(const FactoredSeries<ARing>& f);
json factored_to_json(const FactoredSeries<AtRing>& f);
FactoredSeries<ZRing> factored_z_from_json(const json& j);
FactoredSeries<ARing> factored_a_from_json(const json& j, const GroupPtr& g);
FactoredSeries<AtRing> factored_at_from_json(const json& j, const GroupPtr& g);

json expanded_to_json(const MultiSeries<ZRing>& s);
json expanded_to_json(const MultiSeries<ARing>& s);
json expanded_to_json(const MultiSeries<AtRing>& s);
MultiSeries<ZRing> expanded_z_from_json(const json& j);
MultiSeries<ARing> expanded_a_from_json(const json& j, const GroupPtr& g);
MultiSeries<AtRing> expanded_at_from_json(const json& j, const GroupPtr& g);

// Graphs.
json graph_to_json(const EquivariantResolutionGraph& g);
EquivariantResolutionGraph graph_from_json(const json& j);

// Reconstruction results: the graph plus representation and tail data.
json representation_to_json(const std::map<int, CyclotomicInteger>& rep,
                            const GroupPtr& g);
json tails_to_json(const std::vector<TailAssignment>& tails);

std::string ring_tag_of(const json& series_file);
GroupPtr group_of_series(const json& series_file);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j); // atomic

} // namespace eqps
