#pragma once

namespace dbox {

inline constexpr const char* artifact_name = "dbox";
inline constexpr const char* artifact_version = "0.1.0";

} // namespace dbox
