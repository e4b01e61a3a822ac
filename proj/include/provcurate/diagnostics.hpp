#pragma once

#include <mutex>
#include <string>
#include <vector>

namespace provcurate {

enum class Severity { info, warning, error };

struct Diagnostic {
    Severity severity = Severity::warning;
    /// Where it came from: a file name, "label-query", "store", ...
    std::string source;
    std::string message;
    std::size_t line = 0;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

const char* to_string(Severity s) noexcept;

/// Thread-safe append-only diagnostics channel with a bounded tail.
class DiagnosticsLog {
public:
    explicit DiagnosticsLog(std::size_t capacity = 1000) : capacity_(capacity) {}

    void add(Diagnostic d);
    void add_all(const std::vector<Diagnostic>& ds);
    std::vector<Diagnostic> snapshot() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::vector<Diagnostic> entries_;
    std::size_t capacity_;
};

} // namespace provcurate
