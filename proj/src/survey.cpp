#include "fengshui/survey.hpp"

#include <algorithm>
#include <numeric>

#include "fengshui/error.hpp"

namespace fengshui {

SurveyDefinition default_survey_definition() {
    SurveyDefinition def;
    for (std::size_t i = 0; i < kMasqItemCount; ++i)
        def.masq_items.push_back({"MASQ item " + std::to_string(i + 1), i < kMasqReverseCount});
    for (std::size_t i = 0; i < kImageCount; ++i)
        def.image_ids.push_back("neutral-" + std::to_string(i + 1));
    return def;
}

void check_definition(const SurveyDefinition& def) {
    if (def.masq_items.size() != kMasqItemCount)
        throw Error(ErrorCode::DefinitionMismatch,
                    "definition has " + std::to_string(def.masq_items.size()) + " MASQ items, expected 26");
    const auto reversed = std::count_if(def.masq_items.begin(), def.masq_items.end(),
                                        [](const MasqItem& item) { return item.reverse_coded; });
    if (static_cast<std::size_t>(reversed) != kMasqReverseCount)
        throw Error(ErrorCode::DefinitionMismatch,
                    "definition flags " + std::to_string(reversed) + " reverse-coded items, expected 15");
    if (def.image_ids.size() != kImageCount)
        throw Error(ErrorCode::DefinitionMismatch,
                    "definition has " + std::to_string(def.image_ids.size()) + " images, expected 10");
}

std::string to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::AnswerCountMismatch: return "AnswerCountMismatch";
        case ViolationKind::ImageCountMismatch: return "ImageCountMismatch";
        case ViolationKind::OutOfScale: return "OutOfScale";
    }
    return "Unknown";
}

int code_masq_answer(int raw, bool reverse) {
    if (raw < kMasqMin || raw > kMasqMax)
        throw Error(ErrorCode::OutOfScale, "MASQ answer " + std::to_string(raw) + " outside 1..5");
    return reverse ? (kMasqMin + kMasqMax) - raw : raw;
}

std::vector<Violation> validate_record(const SurveyRecord& record, const SurveyDefinition& def) {
    std::vector<Violation> out;
    if (record.masq_answers.size() != def.masq_items.size())
        out.push_back({ViolationKind::AnswerCountMismatch, record.masq_answers.size(),
                       "expected " + std::to_string(def.masq_items.size()) + " MASQ answers, got " +
                           std::to_string(record.masq_answers.size())});
    if (record.image_responses.size() != def.image_ids.size())
        out.push_back({ViolationKind::ImageCountMismatch, record.image_responses.size(),
                       "expected " + std::to_string(def.image_ids.size()) + " image responses, got " +
                           std::to_string(record.image_responses.size())});
    for (std::size_t i = 0; i < record.masq_answers.size(); ++i) {
        const int a = record.masq_answers[i];
        if (a < kMasqMin || a > kMasqMax)
            out.push_back({ViolationKind::OutOfScale, i,
                           "MASQ answer " + std::to_string(i) + " = " + std::to_string(a) + " outside 1..5"});
    }
    for (std::size_t i = 0; i < record.image_responses.size(); ++i) {
        const int r = record.image_responses[i].rating;
        if (r < kImageMin || r > kImageMax)
            out.push_back({ViolationKind::OutOfScale, i,
                           "image rating " + std::to_string(i) + " = " + std::to_string(r) + " outside 0..5"});
    }
    return out;
}

WellbeingScore wellbeing_score(const SurveyRecord& record, const SurveyDefinition& def) {
    check_definition(def);
    if (const auto violations = validate_record(record, def); !violations.empty())
        throw Error(ErrorCode::DefinitionMismatch, violations.front().message);

    int sum = 0;
    for (std::size_t i = 0; i < record.masq_answers.size(); ++i)
        sum += code_masq_answer(record.masq_answers[i], def.masq_items[i].reverse_coded);

    WellbeingScore score;
    score.value = static_cast<double>(sum) / static_cast<double>(record.masq_answers.size());
    const int image_sum = std::accumulate(record.image_responses.begin(), record.image_responses.end(), 0,
                                          [](int acc, const ImageResponse& r) { return acc + r.rating; });
    score.mean_image_rating =
        static_cast<double>(image_sum) / static_cast<double>(record.image_responses.size());
    return score;
}

nlohmann::ordered_json to_json(const SurveyDefinition& def) {
    nlohmann::ordered_json j;
    j["masq_items"] = nlohmann::ordered_json::array();
    for (const auto& item : def.masq_items)
        j["masq_items"].push_back({{"text", item.text}, {"reverse_coded", item.reverse_coded}});
    j["image_ids"] = def.image_ids;
    j["masq_scale"] = {kMasqMin, kMasqMax};
    j["image_scale"] = {kImageMin, kImageMax};
    return j;
}

SurveyDefinition survey_definition_from_json(const nlohmann::json& j) {
    try {
        SurveyDefinition def;
        for (const auto& item : j.at("masq_items"))
            def.masq_items.push_back({item.at("text").get<std::string>(), item.at("reverse_coded").get<bool>()});
        def.image_ids = j.at("image_ids").get<std::vector<std::string>>();
        return def;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("survey definition: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const SurveyRecord& record) {
    nlohmann::ordered_json j;
    j["session_id"] = record.session_id;
    j["demographics"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : record.demographics) j["demographics"][k] = v;
    j["image_responses"] = nlohmann::ordered_json::array();
    for (const auto& r : record.image_responses)
        j["image_responses"].push_back({{"word", r.word}, {"rating", r.rating}});
    j["masq_answers"] = record.masq_answers;
    if (record.feng_shui_belief) j["feng_shui_belief"] = *record.feng_shui_belief;
    return j;
}

SurveyRecord survey_record_from_json(const nlohmann::json& j) {
    try {
        SurveyRecord record;
        record.session_id = j.value("session_id", std::string{});
        if (j.contains("demographics"))
            for (const auto& [k, v] : j.at("demographics").items())
                record.demographics[k] = v.is_string() ? v.get<std::string>() : v.dump();
        for (const auto& r : j.at("image_responses"))
            record.image_responses.push_back({r.at("word").get<std::string>(), r.at("rating").get<int>()});
        record.masq_answers = j.at("masq_answers").get<std::vector<int>>();
        if (j.contains("feng_shui_belief") && !j.at("feng_shui_belief").is_null())
            record.feng_shui_belief = j.at("feng_shui_belief").get<int>();
        return record;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::MalformedDocument, std::string("survey record: ") + e.what());
    }
}

nlohmann::ordered_json to_json(const Violation& v) {
    return {{"kind", to_string(v.kind)}, {"index", v.index}, {"message", v.message}};
}

}  // namespace fengshui
