#include "ragleak/report.hpp"

#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>

#include "ragleak/errors.hpp"

namespace fs = std::filesystem;

namespace ragleak {

std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

nlohmann::ordered_json event_to_json(const RoundEvent& event) {
    nlohmann::ordered_json j;
    j["round"] = event.round;
    j["phase"] = to_string(event.phase);
    j["origin"] = to_string(event.origin);
    j["anchor_hash"] = event.anchor_hash;
    j["query_hash"] = event.query_hash;
    j["response_hash"] = event.response_hash;
    auto chunks = nlohmann::ordered_json::array();
    for (const auto& id : event.new_chunks) {
        if (id) {
            chunks.push_back(*id);
        } else {
            chunks.push_back(nullptr);
        }
    }
    j["new_chunks"] = std::move(chunks);
    j["crr"] = event.crr;
    j["flags"] = event.flags;
    return j;
}

nlohmann::ordered_json report_to_json(const CampaignReport& report) {
    nlohmann::ordered_json j;
    j["final_crr"] = report.final_crr;
    j["query_count"] = report.query_count;
    j["aborted"] = report.aborted;
    if (report.aborted) j["abort_reason"] = report.abort_reason;
    auto curve = nlohmann::ordered_json::array();
    for (const auto& [round, crr] : report.crr_curve) {
        curve.push_back(nlohmann::ordered_json::array({round, crr}));
    }
    j["crr_curve"] = std::move(curve);
    auto matches = nlohmann::ordered_json::array();
    for (const auto& m : report.matches) {
        matches.push_back({{"kb_chunk_id", m.kb_chunk_id},
                           {"candidate_index", m.candidate_index},
                           {"ss", m.ss},
                           {"eed", m.eed},
                           {"recovered", m.recovered}});
    }
    j["matches"] = std::move(matches);
    j["config"] = report.config_echo;
    return j;
}

std::string events_to_jsonl(const std::vector<RoundEvent>& events) {
    std::string out;
    for (const auto& event : events) {
        out += event_to_json(event).dump();
        out += "\n";
    }
    return out;
}

std::string curve_to_csv(const std::vector<std::pair<std::size_t, double>>& curve) {
    std::string out = "round,crr\n";
    for (const auto& [round, crr] : curve) {
        out += std::to_string(round);
        out += ",";
        out += format_double(crr);
        out += "\n";
    }
    return out;
}

namespace {

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestionError("cannot write output file: " + path.string());
    out << content;
    if (!out) throw IngestionError("write failure: " + path.string());
}

}  // namespace

void write_campaign_outputs(const CampaignReport& report, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const fs::path dir(out_dir);
    write_file(dir / "report.json", report_to_json(report).dump(2) + "\n");
    write_file(dir / "events.jsonl", events_to_jsonl(report.events));
    write_file(dir / "crr_curve.csv", curve_to_csv(report.crr_curve));

    const auto now = std::chrono::system_clock::now();
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch());
    nlohmann::ordered_json meta;
    meta["written_at_unix"] = secs.count();
    write_file(dir / "meta.json", meta.dump(2) + "\n");
}

}  // namespace ragleak
