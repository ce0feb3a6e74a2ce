#include <algorithm>

#include "json_util.hpp"
#include "mtmorph/engine.hpp"

namespace mtmorph {

using detail::json;

TraceModel canonical(TraceModel traces) {
  std::sort(traces.traces.begin(), traces.traces.end(), [](const Trace& a, const Trace& b) {
    return std::tie(a.rule, a.sources) < std::tie(b.rule, b.sources);
  });
  return traces;
}

bool operator==(const TraceModel& a, const TraceModel& b) {
  if (a.transformation != b.transformation) return false;
  return canonical(a).traces == canonical(b).traces;
}

TraceModel parse_traces(std::string_view text) {
  const json doc = detail::parse_json(text, "trace");
  TraceModel tm;
  tm.transformation =
      detail::as_string(detail::member(doc, "transformation", "$"), "$.transformation");
  if (const json* traces = detail::optional_member(doc, "traces")) {
    detail::expect_array(*traces, "$.traces");
    for (std::size_t i = 0; i < traces->size(); ++i) {
      const std::string at = "$.traces[" + std::to_string(i) + "]";
      const json& t = (*traces)[i];
      Trace trace;
      trace.rule = detail::as_string(detail::member(t, "rule", at), at + ".rule");
      for (const char* key : {"sources", "targets"}) {
        const json& ids = detail::member(t, key, at);
        detail::expect_array(ids, at + "." + key);
        auto& into = std::string_view(key) == "sources" ? trace.sources : trace.targets;
        for (const auto& id : ids) into.push_back(detail::as_string(id, at + "." + key));
        if (into.empty()) throw ParseError(at + "." + key + ": must not be empty");
      }
      tm.traces.push_back(std::move(trace));
    }
  }
  return tm;
}

TraceModel load_traces(const std::filesystem::path& path) { return parse_traces(read_file(path)); }

std::string serialize_traces(const TraceModel& traces) {
  json list = json::array();
  for (const auto& t : canonical(traces).traces) {
    list.push_back({{"rule", t.rule}, {"sources", t.sources}, {"targets", t.targets}});
  }
  return detail::dump({{"transformation", traces.transformation}, {"traces", list}});
}

void save_traces(const TraceModel& traces, const std::filesystem::path& path) {
  write_file(path, serialize_traces(traces));
}

}  // namespace mtmorph
