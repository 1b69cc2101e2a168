#include "lexiqx/log.hpp"

#include <iostream>
#include <mutex>
#include <utility>

namespace lexiqx {
namespace {

std::mutex& sink_mutex() {
    static std::mutex m;
    return m;
}

LogSink& current_sink() {
    static LogSink sink = [](LogLevel level, std::string_view message) {
        if (level < LogLevel::warning) return;
        std::cerr << (level == LogLevel::error ? "error: " : "warning: ") << message << '\n';
    };
    return sink;
}

}  // namespace

LogSink set_log_sink(LogSink sink) {
    std::lock_guard lock(sink_mutex());
    return std::exchange(current_sink(), std::move(sink));
}

void log(LogLevel level, std::string_view message) {
    std::lock_guard lock(sink_mutex());
    if (current_sink()) current_sink()(level, message);
}

}  // namespace lexiqx
