#include "ragleak/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ragleak/errors.hpp"
#include "ragleak/hash.hpp"

namespace ragleak {

std::size_t levenshtein(std::string_view a, std::string_view b) {
    const std::size_t m = a.size(), n = b.size();
    if (m == 0) return n;
    if (n == 0) return m;
    std::vector<std::size_t> prev(n + 1), cur(n + 1);
    for (std::size_t j = 0; j <= n; ++j) prev[j] = j;
    for (std::size_t i = 1; i <= m; ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= n; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[n];
}

std::optional<std::size_t> levenshtein_bounded(std::string_view a, std::string_view b,
                                               std::size_t limit) {
    const std::size_t m = a.size(), n = b.size();
    const std::size_t len_diff = m > n ? m - n : n - m;
    if (len_diff > limit) return std::nullopt;
    if (m == 0) return n;
    if (n == 0) return m;

    constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max() / 2;
    std::vector<std::size_t> prev(n + 1, kInf), cur(n + 1, kInf);
    for (std::size_t j = 0; j <= std::min(n, limit); ++j) prev[j] = j;

    for (std::size_t i = 1; i <= m; ++i) {
        const std::size_t lo = i > limit ? i - limit : 1;
        const std::size_t hi = std::min(n, i + limit);
        if (lo > hi) return std::nullopt;
        cur[lo - 1] = (lo == 1) ? i : kInf;
        std::size_t row_min = cur[lo - 1];
        for (std::size_t j = lo; j <= hi; ++j) {
            const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            const std::size_t del = prev[j] + 1;
            const std::size_t ins = cur[j - 1] + 1;
            cur[j] = std::min({sub, del, ins});
            row_min = std::min(row_min, cur[j]);
        }
        if (hi < n) cur[hi + 1] = kInf;  // keep the band edge from leaking stale values
        if (row_min > limit) return std::nullopt;
        std::swap(prev, cur);
    }
    return prev[n] <= limit ? std::optional<std::size_t>(prev[n]) : std::nullopt;
}

double eed(std::string_view a, std::string_view b) {
    const std::size_t maxlen = std::max(a.size(), b.size());
    if (maxlen == 0) return 0.0;
    return static_cast<double>(levenshtein(a, b)) / static_cast<double>(maxlen);
}

double ss(const std::string& a, const std::string& b, const EmbeddingBackend& backend) {
    return cosine_similarity(backend.embed(a), backend.embed(b));
}

namespace detail {

QgramProfile QgramProfile::build(std::string_view text) {
    QgramProfile p;
    p.text_length = text.size();
    if (text.size() >= kQ) {
        p.grams.reserve(text.size() - kQ + 1);
        for (std::size_t i = 0; i + kQ <= text.size(); ++i) {
            p.grams.push_back(fnv1a64(text.substr(i, kQ)));
        }
        std::sort(p.grams.begin(), p.grams.end());
    }
    return p;
}

std::size_t edit_distance_lower_bound(const QgramProfile& a, const QgramProfile& b) {
    const std::size_t len_diff =
        a.text_length > b.text_length ? a.text_length - b.text_length : b.text_length - a.text_length;
    // Multiset symmetric difference of the q-gram profiles; one edit
    // touches at most 2q grams, so distance >= |diff| / (2q).
    std::size_t sym_diff = 0;
    std::size_t i = 0, j = 0;
    while (i < a.grams.size() && j < b.grams.size()) {
        if (a.grams[i] == b.grams[j]) {
            ++i;
            ++j;
        } else if (a.grams[i] < b.grams[j]) {
            ++i;
            ++sym_diff;
        } else {
            ++j;
            ++sym_diff;
        }
    }
    sym_diff += (a.grams.size() - i) + (b.grams.size() - j);
    return std::max(len_diff, sym_diff / (2 * QgramProfile::kQ));
}

namespace {

std::size_t pair_cutoff(double match_eed, std::size_t maxlen) {
    return static_cast<std::size_t>(std::floor(match_eed * static_cast<double>(maxlen)));
}

}  // namespace

}  // namespace detail

CrrResult crr(const std::vector<std::string>& extracted, const KnowledgeBase& kb,
              double match_eed, const EmbeddingBackend* backend) {
    if (kb.chunks.empty()) throw ArgumentError("crr: knowledge base is empty");
    if (match_eed < 0.0 || match_eed > 1.0) throw ArgumentError("crr: match_eed must lie in [0, 1]");

    std::vector<detail::QgramProfile> cand_profiles;
    cand_profiles.reserve(extracted.size());
    for (const auto& c : extracted) cand_profiles.push_back(detail::QgramProfile::build(c));

    std::vector<bool> used(extracted.size(), false);
    CrrResult result;
    result.matches.reserve(kb.chunks.size());
    std::size_t recovered = 0;

    for (const auto& chunk : kb.chunks) {
        const auto chunk_profile = detail::QgramProfile::build(chunk.text);
        double best_eed = std::numeric_limits<double>::infinity();
        int best_idx = -1;
        double best_lb = 1.0;

        for (std::size_t idx = 0; idx < extracted.size(); ++idx) {
            if (used[idx]) continue;
            const auto& cand = extracted[idx];
            const std::size_t maxlen = std::max(chunk.text.size(), cand.size());
            if (maxlen == 0) continue;
            if (cand == chunk.text) {
                best_eed = 0.0;
                best_idx = static_cast<int>(idx);
                break;  // nothing beats an exact match
            }
            const std::size_t cutoff = detail::pair_cutoff(match_eed, maxlen);
            const std::size_t lb = detail::edit_distance_lower_bound(chunk_profile, cand_profiles[idx]);
            if (lb > cutoff) {
                best_lb = std::min(best_lb, static_cast<double>(lb) / static_cast<double>(maxlen));
                continue;
            }
            const auto d = levenshtein_bounded(chunk.text, cand, cutoff);
            if (d) {
                const double e = static_cast<double>(*d) / static_cast<double>(maxlen);
                if (e < best_eed) {
                    best_eed = e;
                    best_idx = static_cast<int>(idx);
                }
            } else {
                best_lb = std::min(best_lb,
                                   static_cast<double>(cutoff + 1) / static_cast<double>(maxlen));
            }
        }

        ChunkMatch match;
        match.kb_chunk_id = chunk.id;
        if (best_idx >= 0) {
            match.candidate_index = best_idx;
            match.eed = best_eed;
            match.recovered = true;
            if (backend) match.ss = ss(chunk.text, extracted[static_cast<std::size_t>(best_idx)], *backend);
            used[static_cast<std::size_t>(best_idx)] = true;
            ++recovered;
        } else {
            match.eed = std::min(1.0, best_lb);
        }
        result.matches.push_back(std::move(match));
    }
    result.value = static_cast<double>(recovered) / static_cast<double>(kb.chunks.size());
    return result;
}

RecoveryTracker::RecoveryTracker(const KnowledgeBase& kb, double match_eed)
    : kb_(&kb), match_eed_(match_eed) {
    if (kb.chunks.empty()) throw ArgumentError("RecoveryTracker: knowledge base is empty");
    if (match_eed < 0.0 || match_eed > 1.0) {
        throw ArgumentError("RecoveryTracker: match_eed must lie in [0, 1]");
    }
    chunk_profiles_.reserve(kb.chunks.size());
    for (std::size_t i = 0; i < kb.chunks.size(); ++i) {
        chunk_by_text_.emplace(kb.chunks[i].text, i);
        chunk_profiles_.push_back(detail::QgramProfile::build(kb.chunks[i].text));
    }
    recovered_.assign(kb.chunks.size(), false);
    recovered_by_.assign(kb.chunks.size(), -1);
    recovered_eed_.assign(kb.chunks.size(), 1.0);
}

std::optional<std::string> RecoveryTracker::add_candidate(const std::string& candidate) {
    const int cand_idx = static_cast<int>(candidate_count_++);

    auto recover = [&](std::size_t chunk_idx, double e) {
        recovered_[chunk_idx] = true;
        recovered_by_[chunk_idx] = cand_idx;
        recovered_eed_[chunk_idx] = e;
        ++recovered_count_;
        return kb_->chunks[chunk_idx].id;
    };

    if (auto it = chunk_by_text_.find(candidate); it != chunk_by_text_.end()) {
        if (!recovered_[it->second]) return recover(it->second, 0.0);
        return std::nullopt;
    }
    if (match_eed_ == 0.0) return std::nullopt;  // only byte-exact recoveries count

    const auto cand_profile = detail::QgramProfile::build(candidate);
    double best_eed = std::numeric_limits<double>::infinity();
    std::size_t best_chunk = 0;
    bool found = false;
    for (std::size_t i = 0; i < kb_->chunks.size(); ++i) {
        if (recovered_[i]) continue;
        const auto& chunk_text = kb_->chunks[i].text;
        const std::size_t maxlen = std::max(chunk_text.size(), candidate.size());
        if (maxlen == 0) continue;
        const std::size_t cutoff = detail::pair_cutoff(match_eed_, maxlen);
        if (detail::edit_distance_lower_bound(chunk_profiles_[i], cand_profile) > cutoff) continue;
        const auto d = levenshtein_bounded(chunk_text, candidate, cutoff);
        if (!d) continue;
        const double e = static_cast<double>(*d) / static_cast<double>(maxlen);
        if (e < best_eed) {
            best_eed = e;
            best_chunk = i;
            found = true;
        }
    }
    if (found) return recover(best_chunk, best_eed);
    return std::nullopt;
}

double RecoveryTracker::crr() const {
    return static_cast<double>(recovered_count_) / static_cast<double>(kb_->chunks.size());
}

std::vector<ChunkMatch> RecoveryTracker::finalize(const std::vector<std::string>& candidates,
                                                  const EmbeddingBackend* backend) const {
    const bool any_unrecovered = recovered_count_ < kb_->chunks.size();
    std::vector<detail::QgramProfile> cand_profiles;
    std::vector<bool> consumed(candidates.size(), false);
    if (any_unrecovered) {
        cand_profiles.reserve(candidates.size());
        for (const auto& c : candidates) cand_profiles.push_back(detail::QgramProfile::build(c));
        for (int by : recovered_by_) {
            if (by >= 0 && static_cast<std::size_t>(by) < consumed.size()) {
                consumed[static_cast<std::size_t>(by)] = true;
            }
        }
    }

    std::vector<ChunkMatch> matches;
    matches.reserve(kb_->chunks.size());
    for (std::size_t i = 0; i < kb_->chunks.size(); ++i) {
        ChunkMatch m;
        m.kb_chunk_id = kb_->chunks[i].id;
        if (recovered_[i]) {
            m.candidate_index = recovered_by_[i];
            m.eed = recovered_eed_[i];
            m.recovered = true;
            if (backend && recovered_by_[i] >= 0 &&
                static_cast<std::size_t>(recovered_by_[i]) < candidates.size()) {
                m.ss = ss(kb_->chunks[i].text, candidates[static_cast<std::size_t>(recovered_by_[i])],
                          *backend);
            }
        } else {
            // Certified lower bound over candidates not consumed by other chunks.
            double lb = 1.0;
            for (std::size_t idx = 0; idx < candidates.size(); ++idx) {
                if (consumed[idx]) continue;
                const std::size_t maxlen = std::max(kb_->chunks[i].text.size(), candidates[idx].size());
                if (maxlen == 0) continue;
                const std::size_t bound =
                    detail::edit_distance_lower_bound(chunk_profiles_[i], cand_profiles[idx]);
                const std::size_t cutoff = detail::pair_cutoff(match_eed_, maxlen);
                const std::size_t certified = std::max(bound, cutoff + 1);
                lb = std::min(lb, static_cast<double>(certified) / static_cast<double>(maxlen));
            }
            m.eed = std::min(1.0, lb);
        }
        matches.push_back(std::move(m));
    }
    return matches;
}

}  // namespace ragleak
