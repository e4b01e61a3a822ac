#pragma once

#include "provcurate/error.hpp"
#include "provcurate/provenance/timestamp.hpp"
#include "provcurate/rdf/term.hpp"

#include <chrono>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace provcurate::api {

using provenance::Clock;
using provenance::TimePoint;
using rdf::Iri;

struct LockRecord {
    Iri entity;
    std::string owner;
    std::string token;
    TimePoint expires_at;

    friend bool operator==(const LockRecord&, const LockRecord&) = default;
};

/// Another agent holds a live lock.
class LockConflict : public Error {
public:
    explicit LockConflict(LockRecord holder);
    const LockRecord& holder() const noexcept { return holder_; }

private:
    LockRecord holder_;
};

/// A token that does not match the live lock.
class LockTokenMismatch : public Error {
public:
    using Error::Error;
};

struct LockEvent {
    enum class Kind { grant, refresh, release };
    Kind kind = Kind::grant;
    /// Position in the total order of lock operations.
    std::uint64_t seq = 0;
    TimePoint at;
    LockRecord record;
};

enum class ReleaseOutcome { released, absent };

/// 128-bit random token, hex encoded.
std::string random_token();

/// In-memory TTL lock table. Every operation is an atomic compare-and-set
/// under one mutex; expired records count as absent.
class LockStore {
public:
    explicit LockStore(std::chrono::seconds ttl, Clock clock = provenance::system_now,
                       bool record_history = false);

    /// Grants or refreshes. A refresh by the owner keeps the token.
    LockRecord acquire(const Iri& entity, const std::string& agent);
    /// Throws LockTokenMismatch when a live lock has another token.
    ReleaseOutcome release(const Iri& entity, const std::string& token);
    std::optional<LockRecord> current(const Iri& entity) const;
    /// Whether `token` is the live lock of `entity` held by `agent`.
    bool holds(const Iri& entity, const std::string& agent, const std::string& token) const;

    std::vector<LockEvent> history() const;
    std::chrono::seconds ttl() const noexcept { return ttl_; }

private:
    std::optional<LockRecord> live(const Iri& entity, TimePoint now) const;
    void log(LockEvent::Kind kind, TimePoint at, const LockRecord& record);

    std::chrono::seconds ttl_;
    Clock clock_;
    bool record_history_;
    mutable std::mutex mutex_;
    std::map<Iri, LockRecord> locks_;
    std::vector<LockEvent> history_;
    std::uint64_t seq_ = 0;
};

/// Pairs of grants whose live intervals overlap in a recorded history. A
/// grant lives from its event until its release or its expiry, whichever
/// comes first.
std::vector<std::pair<LockEvent, LockEvent>> overlapping_grants(const std::vector<LockEvent>& history);

} // namespace provcurate::api
