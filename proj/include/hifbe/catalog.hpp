#pragma once

#include <string>
#include <vector>

#include "hifbe/oracle.hpp"

namespace hifb {

/// Builtin problem instances. Ids are stable public strings; see
/// docs/catalog.md for definitions and the provenance of the frozen
/// Holder constants.
CompositeProblem problem_catalog_get(const std::string& id);

const std::vector<std::string>& problem_catalog_ids();

}  // namespace hifb
