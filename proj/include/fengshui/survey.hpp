#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace fengshui {

inline constexpr std::size_t kMasqItemCount = 26;
inline constexpr std::size_t kMasqReverseCount = 15;
inline constexpr std::size_t kImageCount = 10;
inline constexpr int kMasqMin = 1;
inline constexpr int kMasqMax = 5;
inline constexpr int kImageMin = 0;
inline constexpr int kImageMax = 5;

struct MasqItem {
    std::string text;
    bool reverse_coded = false;
};

struct SurveyDefinition {
    std::vector<MasqItem> masq_items;
    std::vector<std::string> image_ids;
};

// Placeholder definition: items 1-15 are flagged reverse-coded. Replace the
// flags with the real questionnaire key before collecting data.
SurveyDefinition default_survey_definition();
// Throws Error{DefinitionMismatch} unless 26 items, 15 reversed, 10 images.
void check_definition(const SurveyDefinition& def);

struct ImageResponse {
    std::string word;
    int rating = 0;

    bool operator==(const ImageResponse&) const = default;
};

struct SurveyRecord {
    std::string session_id;
    std::map<std::string, std::string> demographics;
    std::vector<ImageResponse> image_responses;
    std::vector<int> masq_answers;
    std::optional<int> feng_shui_belief;

    bool operator==(const SurveyRecord&) const = default;
};

struct WellbeingScore {
    double value = 0.0;
    // Recorded for reference only; never part of the ground truth.
    double mean_image_rating = 0.0;
};

enum class ViolationKind { AnswerCountMismatch, ImageCountMismatch, OutOfScale };

struct Violation {
    ViolationKind kind;
    // Offending answer/image index for OutOfScale, otherwise the observed count.
    std::size_t index = 0;
    std::string message;
};

std::string to_string(ViolationKind kind);

// Throws Error{OutOfScale} unless raw is in 1..5.
int code_masq_answer(int raw, bool reverse);

std::vector<Violation> validate_record(const SurveyRecord& record, const SurveyDefinition& def);

// Mean of the 26 coded answers. Throws Error{DefinitionMismatch} if the
// definition or the record does not conform.
WellbeingScore wellbeing_score(const SurveyRecord& record, const SurveyDefinition& def);

nlohmann::ordered_json to_json(const SurveyDefinition& def);
SurveyDefinition survey_definition_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SurveyRecord& record);
SurveyRecord survey_record_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const Violation& v);

}  // namespace fengshui
