#include <json.hpp>

#include "comptra/pipeline.hpp"

namespace comptra {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json demos_json(const std::vector<ScoredCandidate>& demos) {
  auto arr = ordered_json::array();
  for (const auto& d : demos) arr.push_back({{"pool_id", d.pool_id}, {"score", d.score}});
  return arr;
}

}  // namespace

std::string to_json_line(const TranslationRecord& record) {
  ordered_json j;
  j["sentence_id"] = record.sentence_id;
  j["source"] = record.source;
  j["mode"] = std::string(to_string(record.mode));
  if (record.phrase_set) {
    const auto& ps = *record.phrase_set;
    j["phrase_set"] = {
        {"original", ps.original},
        {"phrases", ps.phrases},
        {"strategy",
         {{"kind", std::string(to_string(ps.strategy.kind))}, {"repeat_count", ps.strategy.repeat_count}}},
    };
  } else {
    j["phrase_set"] = nullptr;
  }
  auto per_phrase = ordered_json::array();
  for (const auto& p : record.per_phrase) {
    per_phrase.push_back({
        {"phrase", p.phrase},
        {"demos", demos_json(p.demos)},
        {"raw_translation", p.raw_translation},
        {"cleaned",
         {{"translation", p.cleaned.translation},
          {"kept", p.cleaned.kept},
          {"drop_reason", std::string(to_string(p.cleaned.drop_reason))}}},
    });
  }
  j["per_phrase"] = std::move(per_phrase);
  j["demos"] = demos_json(record.demos);
  j["k_effective"] = record.k_effective;
  j["merge_prompt_digest"] = record.merge_prompt_digest;
  j["raw_output"] = record.raw_output;
  j["final"] = record.final;
  j["fallbacks"] = record.fallbacks;
  j["llm_calls"] = record.llm_calls;
  if (!record.candidates.empty()) {
    auto cands = ordered_json::array();
    for (const auto& c : record.candidates) cands.push_back({{"name", c.name}, {"translation", c.translation}});
    j["candidates"] = std::move(cands);
  }
  if (record.ensemble) {
    j["ensemble"] = {{"chosen_index", record.ensemble->chosen_index},
                     {"chosen_name", record.ensemble->chosen_name},
                     {"scores", record.ensemble->scores}};
  }
  if (record.error) j["error"] = *record.error;
  j["wall_time_ms"] = record.wall_time_ms;
  return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

}  // namespace comptra
