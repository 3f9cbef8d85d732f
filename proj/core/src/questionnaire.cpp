#include "elan/questionnaire.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "elan/errors.hpp"

namespace elan {

namespace {

using nlohmann::json;

void check_scale(const std::string& field, int value) {
  if (value < 1 || value > 5) {
    throw OutOfRangeError(field,
                          "scale values run 1-5, got " + std::to_string(value));
  }
}

QuestionnaireResponse response_from_json(const json& record,
                                         const std::string& locator) {
  if (!record.is_object() || !record.contains("dataset_id")) {
    throw ParseError(locator, "response record needs a dataset_id");
  }
  QuestionnaireResponse response;
  response.dataset_id = record["dataset_id"].get<std::string>();
  response.rater = record.value("rater", "expert");
  response.friendly = record.value("friendly", 0);
  response.nice = record.value("nice", 0);
  response.sensible = record.value("sensible", 0);
  response.empathetic_listening = record.value("empathetic_listening", 0);
  response.free_text = record.value("free_text", "");
  validate(response);
  return response;
}

json response_to_json(const QuestionnaireResponse& response) {
  return json{{"dataset_id", response.dataset_id},
              {"rater", response.rater},
              {"friendly", response.friendly},
              {"nice", response.nice},
              {"sensible", response.sensible},
              {"empathetic_listening", response.empathetic_listening},
              {"free_text", response.free_text}};
}

}  // namespace

void validate(const QuestionnaireResponse& response) {
  if (response.dataset_id.empty()) {
    throw OutOfRangeError("dataset_id", "must be non-empty");
  }
  if (response.rater.empty()) {
    throw OutOfRangeError("rater", "must be non-empty");
  }
  check_scale("friendly", response.friendly);
  check_scale("nice", response.nice);
  check_scale("sensible", response.sensible);
  check_scale("empathetic_listening", response.empathetic_listening);
}

const std::array<QuestionSpec, 4>& questionnaire_questions() {
  static const std::array<QuestionSpec, 4> kQuestions = {{
      {"friendly",
       "Looking at how the conversation evolved, rate your impression of the "
       "chatbot on these scales, from Unfriendly to Friendly",
       "Unfriendly", "Friendly"},
      {"nice",
       "Looking at how the conversation evolved, rate your impression of the "
       "chatbot on these scales, from Awful to Nice",
       "Awful", "Nice"},
      {"sensible",
       "Looking at how the conversation evolved, rate your impression of the "
       "chatbot on these scales, from Foolish to Sensible",
       "Foolish", "Sensible"},
      {"empathetic_listening",
       "How do you evaluate the empathetic listening ability of the chatbot, "
       "from Very unsatisfied to Very satisfied?",
       "Very unsatisfied", "Very satisfied"},
  }};
  return kQuestions;
}

ResponseStore::ResponseStore(std::filesystem::path path)
    : path_(std::move(path)) {
  load();
}

void ResponseStore::load() {
  std::ifstream in(path_, std::ios::binary);
  if (!in) return;  // a store that does not exist yet is empty
  std::ostringstream buffer;
  buffer << in.rdbuf();
  for (QuestionnaireResponse& response :
       responses_from_jsonl(buffer.str(), path_.string())) {
    responses_[{response.dataset_id, response.rater}] = std::move(response);
  }
}

void ResponseStore::persist() const {
  std::ofstream out(path_, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw MissingFileError(path_.string());
  }
  std::vector<QuestionnaireResponse> ordered;
  ordered.reserve(responses_.size());
  for (const auto& [key, response] : responses_) ordered.push_back(response);
  out << responses_to_jsonl(ordered);
  out.flush();
  if (!out) {
    throw MissingFileError(path_.string());
  }
}

std::string ResponseStore::record(const QuestionnaireResponse& response,
                                  std::vector<std::string>* warnings) {
  validate(response);
  const auto key = std::make_pair(response.dataset_id, response.rater);
  const auto it = responses_.find(key);
  if (it != responses_.end() && warnings != nullptr) {
    warnings->push_back("overwriting existing response for dataset " +
                        response.dataset_id + " by rater " + response.rater);
  }
  responses_[key] = response;
  persist();
  return response.dataset_id + "/" + response.rater;
}

std::vector<QuestionnaireResponse> ResponseStore::all() const {
  std::vector<QuestionnaireResponse> ordered;
  ordered.reserve(responses_.size());
  for (const auto& [key, response] : responses_) ordered.push_back(response);
  return ordered;
}

std::vector<QuestionnaireResponse> responses_from_jsonl(
    std::string_view content, std::string_view locator_prefix) {
  std::vector<QuestionnaireResponse> responses;
  std::size_t line_number = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const std::size_t eol = content.find('\n', pos);
    std::string_view line = (eol == std::string_view::npos)
                                ? content.substr(pos)
                                : content.substr(pos, eol - pos);
    pos = (eol == std::string_view::npos) ? content.size() + 1 : eol + 1;
    ++line_number;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;

    const std::string locator =
        std::string(locator_prefix) + ":" + std::to_string(line_number);
    json record;
    try {
      record = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(locator, e.what());
    }
    responses.push_back(response_from_json(record, locator));
  }
  return responses;
}

std::string responses_to_jsonl(
    const std::vector<QuestionnaireResponse>& responses) {
  std::string out;
  for (const QuestionnaireResponse& response : responses) {
    out += response_to_json(response).dump();
    out += '\n';
  }
  return out;
}

std::vector<DiscordanceEntry> discordance_report(
    const std::vector<QuestionnaireResponse>& responses,
    const std::map<std::string, TrajectorySummary>& listener_summaries,
    const DiscordanceConfig& config) {
  std::vector<DiscordanceEntry> entries;
  entries.reserve(responses.size());
  for (const QuestionnaireResponse& response : responses) {
    const auto it = listener_summaries.find(response.dataset_id);
    if (it == listener_summaries.end()) {
      throw MissingSummaryError(response.dataset_id);
    }
    DiscordanceEntry entry;
    entry.dataset_id = response.dataset_id;
    entry.rater = response.rater;
    entry.listener_trend = it->second.trend;
    entry.empathetic_listening = response.empathetic_listening;
    entry.discordant = entry.listener_trend == config.required_trend &&
                       entry.empathetic_listening <= config.max_rating;
    entries.push_back(std::move(entry));
  }
  return entries;
}

std::string discordance_csv(const std::vector<DiscordanceEntry>& entries) {
  std::string csv =
      "dataset_id,rater,listener_trend,empathetic_listening,discordant\n";
  for (const DiscordanceEntry& entry : entries) {
    csv += entry.dataset_id;
    csv += ',';
    csv += entry.rater;
    csv += ',';
    csv += to_string(entry.listener_trend);
    csv += ',';
    csv += std::to_string(entry.empathetic_listening);
    csv += ',';
    csv += entry.discordant ? "true" : "false";
    csv += '\n';
  }
  return csv;
}

}  // namespace elan
