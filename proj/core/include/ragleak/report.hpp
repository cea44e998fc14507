#pragma once

#include <string>

#include "ragleak/campaign.hpp"

namespace ragleak {

/// Stable shortest-round-trip decimal representation.
std::string format_double(double value);

nlohmann::ordered_json report_to_json(const CampaignReport& report);
nlohmann::ordered_json event_to_json(const RoundEvent& event);

/// One JSON object per line, schema:
/// {round, phase, origin, anchor_hash, query_hash, response_hash,
///  new_chunks, crr, flags}
std::string events_to_jsonl(const std::vector<RoundEvent>& events);

/// "round,crr" header plus one row per curve point.
std::string curve_to_csv(const std::vector<std::pair<std::size_t, double>>& curve);

/// Writes report.json, events.jsonl and crr_curve.csv under out_dir
/// (created if needed). Wall-clock metadata goes to meta.json only, so the
/// main outputs replay byte-identically.
void write_campaign_outputs(const CampaignReport& report, const std::string& out_dir);

}  // namespace ragleak
