#pragma once

#include <json.hpp>

#include "valg/free_group.hpp"
#include "valg/katetov.hpp"
#include "valg/stepfn.hpp"
#include "valg/value.hpp"

namespace valg {

using Json = nlohmann::json;

Json group_to_json(const FiniteAbelianGroup& g);
FiniteAbelianGroup group_from_json(const Json& j);

Json element_to_json(const FiniteAbelianGroup& g, Elem x);
Elem element_from_json(const FiniteAbelianGroup& g, const Json& j);

std::string element_key(const FiniteAbelianGroup& g, Elem x);  // coords joined by commas
Elem element_from_key(const FiniteAbelianGroup& g, const std::string& key);

Json valued_group_to_json(const ValuedGroup& v);
ValuedGroup valued_group_from_json(const Json& j);
Json semivalue_to_json(const Semivalue& v);

Json cost_to_json(const CostFunction& c);  // infinite entries serialized as "inf"
CostFunction cost_from_json(const Json& j);

Json katetov_to_json(const FiniteAbelianGroup& g, const KatetovMap& f);
KatetovMap katetov_from_json(const FiniteAbelianGroup& g, const Json& j);

Json metric_to_json(const FiniteMetricSpace& x);
FiniteMetricSpace metric_from_json(const Json& j);

Json hom_to_json(const GroupHom& f);  // generator-image lists
GroupHom hom_from_json(const Json& j);

Json stepfn_to_json(const StepFunction& u, const ValuedGroup& host);
std::pair<StepFunction, ValuedGroup> stepfn_from_json(const Json& j);

}  // namespace valg
