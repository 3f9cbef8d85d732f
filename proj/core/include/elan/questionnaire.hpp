#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "elan/trajectory.hpp"

namespace elan {

// One completed evaluation form for one dataset. The four scales run 1-5.
struct QuestionnaireResponse {
  std::string dataset_id;
  std::string rater = "expert";
  int friendly = 0;
  int nice = 0;
  int sensible = 0;
  int empathetic_listening = 0;
  std::string free_text;

  bool operator==(const QuestionnaireResponse&) const = default;
};

// Throws OutOfRangeError(field) when any scale value is outside [1,5] or the
// dataset id is empty.
void validate(const QuestionnaireResponse& response);

// The form's question wording and scale anchors, in presentation order.
struct QuestionSpec {
  std::string_view field;
  std::string_view question;
  std::string_view low_anchor;
  std::string_view high_anchor;
};
const std::array<QuestionSpec, 4>& questionnaire_questions();

// Line-delimited response store; one JSON record per response, keyed by
// (dataset_id, rater). Re-recording an existing key overwrites the previous
// response and reports a warning. Single-writer discipline.
class ResponseStore {
 public:
  explicit ResponseStore(std::filesystem::path path);

  // Validates, upserts, persists. Returns the stored key
  // "<dataset_id>/<rater>"; appends a note to `warnings` on overwrite.
  std::string record(const QuestionnaireResponse& response,
                     std::vector<std::string>* warnings = nullptr);

  // All stored responses ordered by (dataset_id, rater).
  std::vector<QuestionnaireResponse> all() const;

  const std::filesystem::path& path() const { return path_; }

 private:
  void load();
  void persist() const;

  std::filesystem::path path_;
  std::map<std::pair<std::string, std::string>, QuestionnaireResponse>
      responses_;
};

std::vector<QuestionnaireResponse> responses_from_jsonl(
    std::string_view content, std::string_view locator_prefix);
std::string responses_to_jsonl(
    const std::vector<QuestionnaireResponse>& responses);

struct DiscordanceConfig {
  TrendLabel required_trend = TrendLabel::kGrowing;
  int max_rating = 2;  // ratings <= this count as low
};

struct DiscordanceEntry {
  std::string dataset_id;
  std::string rater;
  TrendLabel listener_trend = TrendLabel::kSteady;
  int empathetic_listening = 0;
  bool discordant = false;
};

// Flags datasets whose automated listener trend disagrees with the human
// empathy rating: discordant iff trend matches required_trend and the rating
// is <= max_rating. One entry per response, input order preserved. Throws
// MissingSummaryError when a response's dataset has no summary.
std::vector<DiscordanceEntry> discordance_report(
    const std::vector<QuestionnaireResponse>& responses,
    const std::map<std::string, TrajectorySummary>& listener_summaries,
    const DiscordanceConfig& config = {});

// CSV rows `dataset_id,rater,listener_trend,empathetic_listening,discordant`
// with header.
std::string discordance_csv(const std::vector<DiscordanceEntry>& entries);

}  // namespace elan
