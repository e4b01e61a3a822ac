#include "provcurate/api/lock_store.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <random>

namespace provcurate::api {

LockConflict::LockConflict(LockRecord holder)
    : Error("locked by " + holder.owner + " until " + provenance::format_timestamp(holder.expires_at)),
      holder_(std::move(holder))
{
}

std::string random_token()
{
    static thread_local std::random_device rd;
    std::array<std::uint32_t, 4> words{};
    for (auto& w : words) {
        w = rd();
    }
    char buf[33];
    std::snprintf(buf, sizeof buf, "%08x%08x%08x%08x", words[0], words[1], words[2], words[3]);
    return buf;
}

LockStore::LockStore(std::chrono::seconds ttl, Clock clock, bool record_history)
    : ttl_(ttl), clock_(std::move(clock)), record_history_(record_history)
{
    if (ttl_.count() <= 0) {
        throw ContractViolation("lock ttl must be positive");
    }
}

std::optional<LockRecord> LockStore::live(const Iri& entity, TimePoint now) const
{
    const auto it = locks_.find(entity);
    if (it == locks_.end() || now >= it->second.expires_at) {
        return std::nullopt;
    }
    return it->second;
}

void LockStore::log(LockEvent::Kind kind, TimePoint at, const LockRecord& record)
{
    ++seq_;
    if (record_history_) {
        history_.push_back({kind, seq_, at, record});
    }
}

LockRecord LockStore::acquire(const Iri& entity, const std::string& agent)
{
    std::lock_guard lock(mutex_);
    const auto now = clock_();
    const auto held = live(entity, now);
    if (held && held->owner != agent) {
        throw LockConflict(*held);
    }
    LockRecord rec{entity, agent, held ? held->token : random_token(), now + ttl_};
    locks_[entity] = rec;
    log(held ? LockEvent::Kind::refresh : LockEvent::Kind::grant, now, rec);
    return rec;
}

ReleaseOutcome LockStore::release(const Iri& entity, const std::string& token)
{
    std::lock_guard lock(mutex_);
    const auto now = clock_();
    const auto held = live(entity, now);
    if (!held) {
        locks_.erase(entity);
        return ReleaseOutcome::absent;
    }
    if (held->token != token) {
        throw LockTokenMismatch("edit token does not match the lock on " + entity.str());
    }
    locks_.erase(entity);
    log(LockEvent::Kind::release, now, *held);
    return ReleaseOutcome::released;
}

std::optional<LockRecord> LockStore::current(const Iri& entity) const
{
    std::lock_guard lock(mutex_);
    return live(entity, clock_());
}

bool LockStore::holds(const Iri& entity, const std::string& agent, const std::string& token) const
{
    std::lock_guard lock(mutex_);
    const auto held = live(entity, clock_());
    return held && held->owner == agent && held->token == token;
}

std::vector<LockEvent> LockStore::history() const
{
    std::lock_guard lock(mutex_);
    return history_;
}

std::vector<std::pair<LockEvent, LockEvent>> overlapping_grants(const std::vector<LockEvent>& history)
{
    struct Active {
        LockEvent grant;
        TimePoint expires;
    };
    std::vector<LockEvent> ordered = history;
    std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) { return a.seq < b.seq; });
    std::map<Iri, Active> active;
    std::vector<std::pair<LockEvent, LockEvent>> out;
    for (const auto& e : ordered) {
        const auto it = active.find(e.record.entity);
        const bool same = it != active.end() && it->second.grant.record.token == e.record.token;
        switch (e.kind) {
        case LockEvent::Kind::grant:
            if (it != active.end() && e.at < it->second.expires) {
                out.emplace_back(it->second.grant, e);
            }
            active[e.record.entity] = {e, e.record.expires_at};
            break;
        case LockEvent::Kind::refresh:
            if (same) {
                it->second.expires = e.record.expires_at;
            }
            break;
        case LockEvent::Kind::release:
            if (same) {
                active.erase(it);
            }
            break;
        }
    }
    return out;
}

} // namespace provcurate::api
