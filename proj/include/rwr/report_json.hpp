#pragma once

#include <json.hpp>

#include "rwr/stats.hpp"

namespace rwr {

inline void to_json(nlohmann::json& j, const MCReport& r) {
  j = nlohmann::json{{"name", r.name},         {"estimate", r.estimate}, {"se", r.se},
                     {"target", r.target},     {"pass", r.pass},         {"seed", r.seed},
                     {"replicas", r.replicas}, {"rule", to_string(r.rule)}, {"tolerance", r.tolerance}};
  if (!r.note.empty()) j["note"] = r.note;
}

}  // namespace rwr
