#pragma once

#include <string_view>

#include <json.hpp>

namespace affilkg::log {

enum class Level { Debug = 0, Info = 1, Warn = 2, Error = 3, Off = 4 };

void set_level(Level level);
Level level();
Level level_from_string(std::string_view s);

// One JSON object per line on stderr: {"level", "event", ...fields}.
// Safe to call from several threads.
void emit(Level level, std::string_view event, const nlohmann::json& fields = nlohmann::json::object());

inline void info(std::string_view event, const nlohmann::json& fields = nlohmann::json::object()) {
  emit(Level::Info, event, fields);
}
inline void warn(std::string_view event, const nlohmann::json& fields = nlohmann::json::object()) {
  emit(Level::Warn, event, fields);
}
inline void error(std::string_view event, const nlohmann::json& fields = nlohmann::json::object()) {
  emit(Level::Error, event, fields);
}

}  // namespace affilkg::log
