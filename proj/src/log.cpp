#include "affilkg/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

#include "affilkg/error.hpp"

namespace affilkg::log {

namespace {

std::atomic<Level> g_level{Level::Info};
std::mutex g_mutex;

const char* name(Level l) {
  switch (l) {
    case Level::Debug: return "debug";
    case Level::Info: return "info";
    case Level::Warn: return "warn";
    case Level::Error: return "error";
    case Level::Off: return "off";
  }
  return "info";
}

}  // namespace

void set_level(Level level) { g_level.store(level); }
Level level() { return g_level.load(); }

Level level_from_string(std::string_view s) {
  for (Level l : {Level::Debug, Level::Info, Level::Warn, Level::Error, Level::Off}) {
    if (s == name(l)) return l;
  }
  throw Error(ErrorCode::InvalidArgument, "unknown log level '" + std::string(s) + "'");
}

void emit(Level level, std::string_view event, const nlohmann::json& fields) {
  if (level < g_level.load() || level == Level::Off) return;
  nlohmann::json line = {{"level", name(level)}, {"event", event}};
  if (fields.is_object()) {
    for (auto it = fields.begin(); it != fields.end(); ++it) line[it.key()] = it.value();
  }
  const std::string text = line.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
  std::lock_guard lock(g_mutex);
  std::cerr << text << std::flush;
}

}  // namespace affilkg::log
