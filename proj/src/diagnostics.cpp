#include "provcurate/diagnostics.hpp"

namespace provcurate {

const char* to_string(Severity s) noexcept
{
    switch (s) {
    case Severity::info: return "info";
    case Severity::warning: return "warning";
    case Severity::error: return "error";
    }
    return "unknown";
}

void DiagnosticsLog::add(Diagnostic d)
{
    std::lock_guard lock(mutex_);
    entries_.push_back(std::move(d));
    if (entries_.size() > capacity_) {
        entries_.erase(entries_.begin(), entries_.begin() + static_cast<std::ptrdiff_t>(entries_.size() - capacity_));
    }
}

void DiagnosticsLog::add_all(const std::vector<Diagnostic>& ds)
{
    for (const auto& d : ds) {
        add(d);
    }
}

std::vector<Diagnostic> DiagnosticsLog::snapshot() const
{
    std::lock_guard lock(mutex_);
    return entries_;
}

void DiagnosticsLog::clear()
{
    std::lock_guard lock(mutex_);
    entries_.clear();
}

} // namespace provcurate
