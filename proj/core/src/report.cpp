#include "ptsem/report.hpp"

namespace ptsem {

Json multiset_json(const Net& net, const Multiset& ms) {
  Json out = Json::object();
  for (const auto& [node, count] : ms.entries()) out[net.name_of(node)] = count;
  return out;
}

Json word_json(const Net& net, std::span<const NodeId> word) {
  Json out = Json::array();
  for (NodeId t : word) out.push_back(net.name_of(t));
  return out;
}

namespace {

const char* outcome_text(Outcome outcome) {
  switch (outcome) {
    case Outcome::Holds: return "holds";
    case Outcome::Fails: return "fails";
    case Outcome::Unknown: return "unknown";
  }
  return "unknown";
}

Json witness_json(const Net& net, const Witness& w) {
  Json out = Json::object();
  if (w.marking) out["marking"] = multiset_json(net, *w.marking);
  if (w.step) out["step"] = multiset_json(net, *w.step);
  if (!w.sequence.empty()) out["sequence"] = word_json(net, w.sequence);
  if (w.shared_place) out["shared_place"] = net.name_of(*w.shared_place);
  if (!w.note.empty()) out["note"] = w.note;
  return out;
}

}  // namespace

Json verdict_json(const Net& net, const Verdict& v) {
  Json out = Json::object();
  out["outcome"] = outcome_text(v.outcome);
  if (v.witness) out["witness"] = witness_json(net, *v.witness);
  if (v.bound_hit) out["bound_hit"] = *v.bound_hit;
  return out;
}

Json conflict_report_json(const Net& net, const ConflictReport& report) {
  Json out = Json::object();
  out["property"] = report.property;
  out["verdict"] = verdict_json(net, report.verdict);
  return out;
}

Json maximality_report_json(const Net& net, const MaximalityReport& report) {
  Json out = Json::object();
  out["maximal_process_count"] = report.maximal_process_count;
  out["maximal_class_count"] = report.maximal_class_count;
  out["counts_are_lower_bounds"] = report.counts_are_lower_bounds;
  out["completeness"] = verdict_json(net, report.completeness);
  Json classes = Json::array();
  for (const ClassReport& cr : report.classes) {
    Json cls = Json::object();
    cls["canonical_form"] = form_to_hex(cr.cls.canonical_form);
    cls["member_count_explored"] = cr.cls.member_count_explored;
    cls["transition_multiset"] = multiset_json(net, cr.cls.transition_multiset);
    cls["example_linearization"] = word_json(net, cr.example_linearization);
    classes.push_back(std::move(cls));
  }
  out["classes"] = std::move(classes);
  return out;
}

Json corollary_report_json(const Net& net, const CorollaryReport& report) {
  Json out = Json::object();
  out["structural"] = conflict_report_json(net, report.structural);
  out["conflict_free"] = conflict_report_json(net, report.conflict_free);
  out["binary_conflict_free"] = conflict_report_json(net, report.binary_conflict_free);
  out["maximality"] = maximality_report_json(net, report.maximality);
  out["biconditional"] = verdict_json(net, report.biconditional);
  out["note"] = report.note;
  return out;
}

Json correspondence_report_json(const Net& net, const CorrespondenceReport& report) {
  Json out = Json::object();
  out["length_bound"] = report.length_bound;
  out["sequence_count"] = report.sequence_count;
  out["trace_class_count"] = report.trace_class_count;
  out["swap_class_count"] = report.swap_class_count;
  out["leq_pairs_checked"] = report.leq_pairs_checked;
  out["verdict"] = verdict_json(net, report.verdict);
  return out;
}

Json process_json(const Net& net, const Process& p) {
  Json out = Json::object();
  Json conditions = Json::array();
  for (std::uint32_t c = 0; c < p.conditions.size(); ++c) {
    Json cond = Json::object();
    cond["id"] = c;
    cond["place"] = net.name_of(p.conditions[c].place);
    cond["pre_event"] =
        p.conditions[c].pre_event < 0 ? Json(nullptr) : Json(p.conditions[c].pre_event);
    cond["post_event"] =
        p.conditions[c].post_event < 0 ? Json(nullptr) : Json(p.conditions[c].post_event);
    conditions.push_back(std::move(cond));
  }
  Json events = Json::array();
  for (std::uint32_t e = 0; e < p.events.size(); ++e) {
    Json ev = Json::object();
    ev["id"] = e;
    ev["transition"] = net.name_of(p.events[e].transition);
    ev["index"] = e;
    events.push_back(std::move(ev));
  }
  out["conditions"] = std::move(conditions);
  out["events"] = std::move(events);
  return out;
}

}  // namespace ptsem
