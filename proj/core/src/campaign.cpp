#include "ragleak/campaign.hpp"

#include "ragleak/hash.hpp"

namespace ragleak {

const char* to_string(Phase phase) {
    return phase == Phase::exploration ? "exploration" : "exploitation";
}

Campaign::Campaign(const KnowledgeBase& kb, const VectorIndex& index, RagApp& app,
                   RandomTextGenerator& random_text, ContinuationBackend& continuations,
                   std::shared_ptr<EmbeddingBackend> attacker_embedder, AgentConfig cfg,
                   const std::vector<ExtractionPattern>& patterns,
                   const std::vector<PromptTemplate>& templates)
    : kb_(&kb), index_(&index), app_(&app), random_text_(&random_text),
      continuations_(&continuations), embedder_(std::move(attacker_embedder)),
      cfg_(std::move(cfg)), patterns_(&patterns), templates_(&templates),
      tracker_(kb, cfg_.crr_match_eed), switch_rng_(mix_seed(cfg_.rng_seed, 0x5317c4)) {
    cfg_.validate();
    if (!embedder_) throw ArgumentError("campaign: attacker embedding backend is required");
}

void Campaign::refill_anchor_queue(std::vector<std::string>& flags) {
    while (anchor_queue_.empty()) {
        auto chunk = memory_.pop_short();
        if (!chunk) return;
        if (cfg_.use_overlap_strategy) {
            for (auto& a : exploit_overlap(*chunk, cfg_.assumed_overlap_words)) {
                anchor_queue_.push_back(std::move(a));
            }
        }
        if (cfg_.use_reasoning_strategy) {
            auto reasoning = exploit_reasoning(*chunk, *continuations_, cfg_);
            if (reasoning.short_continuation) flags.push_back("short_continuation");
            for (auto& a : reasoning.anchors) anchor_queue_.push_back(std::move(a));
        }
    }
}

RoundEvent Campaign::execute_round(std::size_t round_no, bool forced_exploration) {
    RoundEvent event;
    event.round = round_no;

    Phase phase = Phase::exploration;
    if (!forced_exploration) {
        if (cfg_.switch_policy.kind == SwitchKind::frequency) {
            phase = (round_no % cfg_.switch_policy.explore_every == 0) ? Phase::exploration
                                                                       : Phase::exploitation;
        } else {
            phase = switch_rng_.bernoulli(cfg_.switch_policy.p_explore) ? Phase::exploration
                                                                        : Phase::exploitation;
        }
    }

    std::optional<AnchorQuery> anchor;
    try {
        if (phase == Phase::exploitation) {
            if (anchor_queue_.empty()) refill_anchor_queue(event.flags);
            if (anchor_queue_.empty()) {
                phase = Phase::exploration;
                event.flags.push_back("short_term_empty_fallback");
            } else {
                anchor = std::move(anchor_queue_.front());
                anchor_queue_.pop_front();
            }
        }
        if (!anchor) {
            auto explored = explore(long_embeddings_, *random_text_, *embedder_, cfg_);
            if (explored.cap_exhausted) event.flags.push_back("exploration_cap_exhausted");
            anchor = std::move(explored.anchor);
        }
    } catch (const TransportError&) {
        // Attack-side backend failure: the round is wasted.
        event.phase = phase;
        event.flags.push_back("agent_backend_error");
        event.crr = tracker_.crr();
        ++consecutive_failures_;
        events_.push_back(event);
        return event;
    }

    event.phase = phase;
    event.origin = anchor->origin;
    event.anchor_hash = content_digest(anchor->text);
    const auto query = compose_query(*anchor, cfg_.command);
    event.query_hash = content_digest(query);

    std::string response_text;
    try {
        response_text = app_->answer(query).text;
    } catch (const TransportError&) {
        event.flags.push_back("target_error");
        event.crr = tracker_.crr();
        ++consecutive_failures_;
        events_.push_back(event);
        return event;
    }
    consecutive_failures_ = 0;
    event.response_hash = content_digest(response_text);

    const auto outcome =
        extract_chunks(response_text, *patterns_, *templates_, cfg_.min_candidate_words);
    for (const auto& candidate : outcome.candidates) {
        if (!memory_.push_candidate(candidate)) continue;
        long_embeddings_.push_back(embedder_->embed(candidate));
        event.new_chunks.push_back(tracker_.add_candidate(candidate));
    }
    event.crr = tracker_.crr();
    events_.push_back(event);
    return event;
}

RoundEvent Campaign::initial_round() {
    if (started_) throw InternalError("campaign: initial round already executed");
    started_ = true;
    return execute_round(0, /*forced_exploration=*/true);
}

RoundEvent Campaign::step() {
    if (!started_) {
        throw InternalError("campaign: step() requires the initial exploration round");
    }
    return execute_round(++rounds_run_, /*forced_exploration=*/false);
}

CampaignReport Campaign::build_report(nlohmann::ordered_json config_echo) const {
    CampaignReport report;
    report.config_echo = std::move(config_echo);
    report.events = events_;
    report.query_count = events_.size();
    report.crr_curve.reserve(events_.size());
    for (const auto& e : events_) report.crr_curve.emplace_back(e.round, e.crr);
    report.final_crr = report.crr_curve.empty() ? 0.0 : report.crr_curve.back().second;
    report.matches = tracker_.finalize(memory_.long_items(), embedder_.get());
    return report;
}

CampaignReport Campaign::run(nlohmann::ordered_json config_echo) {
    initial_round();
    for (std::size_t i = 0; i < cfg_.attack_times; ++i) {
        step();
        if (consecutive_failures_ >= kFailureAbortThreshold) {
            auto partial = build_report(config_echo);
            partial.aborted = true;
            partial.abort_reason = "backend failed " + std::to_string(consecutive_failures_) +
                                   " rounds in a row";
            throw CampaignAbort(partial.abort_reason, std::move(partial));
        }
    }
    return build_report(std::move(config_echo));
}

CampaignReport run_campaign(const KnowledgeBase& kb, const VectorIndex& index, RagApp& app,
                            RandomTextGenerator& random_text, ContinuationBackend& continuations,
                            std::shared_ptr<EmbeddingBackend> attacker_embedder, AgentConfig cfg,
                            nlohmann::ordered_json config_echo) {
    Campaign campaign(kb, index, app, random_text, continuations, std::move(attacker_embedder),
                      std::move(cfg));
    return campaign.run(std::move(config_echo));
}

}  // namespace ragleak
