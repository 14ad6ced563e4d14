#pragma once

#include <span>
#include <string>

#include <json.hpp>

#include "ptsem/conflict.hpp"
#include "ptsem/maximality.hpp"
#include "ptsem/process.hpp"
#include "ptsem/traces.hpp"

namespace ptsem {

using Json = nlohmann::ordered_json;

/// Multiset over net nodes as a name->count object, keys in declaration
/// order; byte-stable across runs.
Json multiset_json(const Net& net, const Multiset& ms);
Json word_json(const Net& net, std::span<const NodeId> word);
Json verdict_json(const Net& net, const Verdict& v);
Json conflict_report_json(const Net& net, const ConflictReport& report);
Json maximality_report_json(const Net& net, const MaximalityReport& report);
Json corollary_report_json(const Net& net, const CorollaryReport& report);
Json correspondence_report_json(const Net& net, const CorrespondenceReport& report);

/// The process dump format: conditions and events in creation order.
Json process_json(const Net& net, const Process& p);

}  // namespace ptsem
