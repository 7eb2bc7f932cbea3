#pragma once

#include <array>
#include <string_view>
#include <utility>

namespace testing {

// Feature/score correlation coefficients of a 22-room reference dataset.
inline constexpr std::array<std::pair<std::string_view, double>, 25> kReferenceCoefficients{{
    {"width", -0.24338773691387658},
    {"height", -0.29759112270921384},
    {"door_direction", 0.24677463268661320},
    {"desk_direction", -0.11004988036162887},
    {"is_rect", 0.05590169943749470},
    {"noise_db", -0.30224131068722480},
    {"Temperature_mean", 0.03247514240073649},
    {"Humidity_mean", 0.07288029553127462},
    {"Air_Pressure_mean", -0.14634161342130952},
    {"Light_Intensity_mean", -0.35336497334816450},
    {"Toxic_Chemical_Level_mean", -0.01665129618237642},
    {"TVOC_Level_mean", -0.34491819179506240},
    {"eCO2_Level_mean", 0.35916354101294357},
    {"H2_Level_mean", -0.02958013062252979},
    {"Ethanol_Level_mean", -0.06445525969167733},
    {"Temperature_std", 0.11654017410369533},
    {"Humidity_std", 0.00941482862018411},
    {"Air_Pressure_std", 0.04834266586644965},
    {"Light_Intensity_std", -0.18967663877532690},
    {"Toxic_Chemical_Level_std", -0.04258358820208688},
    {"TVOC_Level_std", -0.01901284691080757},
    {"eCO2_Level_std", 0.29220914867111870},
    {"H2_Level_std", 0.30894787538751880},
    {"Ethanol_Level_std", 0.08888045959606182},
    {"wh_ratio_score", -0.25847362340400610},
}};

// Best-performing feature set for those coefficients, with its original spelling.
inline constexpr std::array<std::string_view, 10> kReferenceBestSet{
    "width",    "TVOC_Level_mean", "height",       "Light_Intensity_mean", "wh_ratio",
    "eCO2_Level_mean", "door_direction", "H2_Level_std", "noise_db", "eCO2_Level_std",
};

}  // namespace testing
