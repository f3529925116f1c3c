#pragma once

#include <string>

#include "dcr/buchi.hpp"
#include "dcr/lts.hpp"

namespace dcr {

/// States are labelled Ex/Re/In; accepting states are filled green and the
/// initial state is double-circled. Edges carry the action only.
std::string to_dot(const graph& g, const lts& system);

/// States are labelled "Ex/Re/In | i=k"; accepting states are double-circled
/// and tau edges dashed. With stratified set, states are grouped into one
/// cluster per index.
std::string to_dot(const buchi_automaton& b, bool stratified = false);

}  // namespace dcr
