#pragma once

#include <string>
#include <string_view>

#include "dcr/graph.hpp"
#include "dcr/json_io.hpp"

#ifndef FIXTURE_DIR
#error "FIXTURE_DIR must point at tests/fixtures"
#endif

namespace fixtures {

inline std::string path(std::string_view name) { return std::string(FIXTURE_DIR) + "/" + std::string(name); }

inline dcr::graph_document document(std::string_view name) { return dcr::load_document(path(name)); }

inline dcr::distributed_graph distributed(std::string_view name) {
    return dcr::distributed_graph::from_document(document(name));
}

inline dcr::graph plain(std::string_view name) { return dcr::graph::from_document(document(name)); }

inline dcr::distributed_graph d1() { return distributed("g1.json"); }
inline dcr::distributed_graph d2() { return distributed("g2.json"); }

}  // namespace fixtures
