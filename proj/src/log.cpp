#include "stratwave/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace stratwave::log {

namespace {
std::atomic<int> g_level{static_cast<int>(Level::warn)};
std::mutex g_mutex;

void emit(Level lvl, const char* tag, const std::string& msg) {
  if (static_cast<int>(lvl) < g_level.load()) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::cerr << "[" << tag << "] " << msg << '\n';
}
}  // namespace

void set_level(Level lvl) { g_level.store(static_cast<int>(lvl)); }
Level level() { return static_cast<Level>(g_level.load()); }

void debug(const std::string& msg) { emit(Level::debug, "debug", msg); }
void info(const std::string& msg) { emit(Level::info, "info", msg); }
void warn(const std::string& msg) { emit(Level::warn, "warn", msg); }
void error(const std::string& msg) { emit(Level::error, "error", msg); }

}  // namespace stratwave::log
