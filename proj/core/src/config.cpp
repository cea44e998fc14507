#include "ragleak/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "ragleak/errors.hpp"
#include "ragleak/hash.hpp"
#include "ragleak/wordlist.hpp"

namespace ragleak {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& context) {
    if (!obj.is_object()) throw ConfigError("config: " + context + " must be an object");
    for (const auto& [key, _] : obj.items()) {
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw ConfigError("config: unknown key '" + key + "' in " + context);
        }
    }
}

RemoteEndpoint parse_endpoint(const json& j, const std::string& context) {
    check_keys(j, {"url", "timeout_ms", "max_retries", "auth_token_env"}, context);
    RemoteEndpoint ep;
    ep.url = j.at("url").get<std::string>();
    if (j.contains("timeout_ms")) ep.timeout_ms = j["timeout_ms"].get<int>();
    if (j.contains("max_retries")) ep.max_retries = j["max_retries"].get<int>();
    const std::string env_name =
        j.contains("auth_token_env") ? j["auth_token_env"].get<std::string>() : kRemoteTokenEnv;
    if (const char* token = std::getenv(env_name.c_str())) ep.auth_token = token;
    return ep;
}

EmbeddingBackendSpec parse_embedding(const json& j, const std::string& context) {
    check_keys(j, {"kind", "dimension", "hash_seed", "remote"}, context);
    EmbeddingBackendSpec spec;
    if (j.contains("kind")) {
        const auto kind = j["kind"].get<std::string>();
        if (kind == "remote") {
            spec.kind = EmbeddingKind::remote;
        } else if (kind == "hashed-ngram-builtin") {
            spec.kind = EmbeddingKind::hashed_ngram_builtin;
        } else {
            throw ConfigError("config: unknown embedding kind '" + kind + "' in " + context);
        }
    }
    if (j.contains("dimension")) spec.dimension = j["dimension"].get<std::size_t>();
    if (j.contains("hash_seed")) spec.hash_seed = j["hash_seed"].get<std::uint64_t>();
    if (j.contains("remote")) spec.remote = parse_endpoint(j["remote"], context + ".remote");
    spec.validate();
    return spec;
}

nlohmann::ordered_json endpoint_to_json(const RemoteEndpoint& ep) {
    return {{"url", ep.url}, {"timeout_ms", ep.timeout_ms}, {"max_retries", ep.max_retries}};
}

nlohmann::ordered_json embedding_to_json(const EmbeddingBackendSpec& spec) {
    nlohmann::ordered_json j;
    j["kind"] = spec.kind == EmbeddingKind::remote ? "remote" : "hashed-ngram-builtin";
    j["dimension"] = spec.dimension;
    j["hash_seed"] = spec.hash_seed;
    if (spec.remote) j["remote"] = endpoint_to_json(*spec.remote);
    return j;
}

}  // namespace

void CampaignConfig::apply_seed(std::uint64_t new_seed) {
    seed = new_seed;
    agent.rng_seed = new_seed;
    generator.behavior.rng_seed = mix_seed(new_seed, 1);
    // Sampler and continuation backends derive their own streams in
    // build_harness from the same top-level seed.
}

void CampaignConfig::apply_rounds(std::size_t rounds) {
    agent.attack_times = rounds;
}

void CampaignConfig::apply_sweep_value(const std::string& key, const std::string& value) {
    try {
        if (key == "retriever.k") {
            retriever.k = static_cast<std::size_t>(std::stoull(value));
        } else if (key == "retriever.min_similarity") {
            retriever.min_similarity = std::stod(value);
        } else if (key == "switch.explore_every") {
            agent.switch_policy.kind = SwitchKind::frequency;
            agent.switch_policy.explore_every = static_cast<std::size_t>(std::stoull(value));
        } else if (key == "agent.tau") {
            agent.tau = std::stod(value);
        } else {
            throw ConfigError("sweep: unknown key '" + key +
                              "' (expected retriever.k, retriever.min_similarity, "
                              "switch.explore_every or agent.tau)");
        }
    } catch (const std::invalid_argument&) {
        throw ConfigError("sweep: value '" + value + "' is not a number for key " + key);
    } catch (const std::out_of_range&) {
        throw ConfigError("sweep: value '" + value + "' is out of range for key " + key);
    }
}

void CampaignConfig::validate() const {
    prompt_template.validate();
    retriever.validate();
    target_embedding.validate();
    if (attacker_embedding) attacker_embedding->validate();
    generator.behavior.validate();
    agent.validate();
    if (continuation_dropout < 0.0 || continuation_dropout >= 1.0) {
        throw ConfigError("config: continuation.dropout_rate must lie in [0, 1)");
    }
    if (words_per_query == 0) throw ConfigError("config: random_text.words_per_query must be > 0");
    if (random_text_kind == RandomTextKind::remote && random_text_remote.url.empty()) {
        throw ConfigError("config: random_text remote backend requires a url");
    }
    if (continuation_kind == ContinuationKind::remote && continuation_remote.url.empty()) {
        throw ConfigError("config: continuation remote backend requires a url");
    }
}

nlohmann::ordered_json CampaignConfig::to_json() const {
    nlohmann::ordered_json j;
    j["seed"] = seed;
    j["template"] = prompt_template.framework;
    j["retriever"] = {{"mode", retriever.mode == RetrievalMode::top_k ? "top_k" : "threshold"},
                      {"k", retriever.k},
                      {"min_similarity", retriever.min_similarity}};
    j["embedding"] = embedding_to_json(target_embedding);
    nlohmann::ordered_json gen;
    switch (generator.kind) {
        case GeneratorKind::simulated: gen["backend"] = "simulated"; break;
        case GeneratorKind::scripted: gen["backend"] = "scripted"; break;
        case GeneratorKind::remote: gen["backend"] = "remote"; break;
    }
    gen["behavior"] = {{"leak_probability", generator.behavior.leak_probability},
                       {"noise_char_rate", generator.behavior.noise_char_rate},
                       {"refusal_probability", generator.behavior.refusal_probability},
                       {"formatting_mode",
                        generator.behavior.formatting_mode == FormattingMode::plain
                            ? "plain"
                            : "sentence_lines_with_markers"},
                       {"rng_seed", generator.behavior.rng_seed}};
    if (generator.kind == GeneratorKind::scripted && !generator.transcript_path.empty()) {
        gen["transcript_path"] = generator.transcript_path;
    }
    if (generator.kind == GeneratorKind::remote) gen["remote"] = endpoint_to_json(generator.remote);
    j["generator"] = std::move(gen);
    j["defenses"] = {{"grep_filter", defenses.grep_filter},
                     {"min_match_words", defenses.min_match_words}};

    nlohmann::ordered_json a;
    a["tau"] = agent.tau;
    a["continuations_forward"] = agent.continuations_forward;
    a["continuations_backward"] = agent.continuations_backward;
    a["min_continuation_tokens"] = agent.min_continuation_tokens;
    a["assumed_overlap_words"] = agent.assumed_overlap_words;
    if (agent.switch_policy.kind == SwitchKind::frequency) {
        a["switch"] = {{"kind", "frequency"}, {"explore_every", agent.switch_policy.explore_every}};
    } else {
        a["switch"] = {{"kind", "probability"}, {"p_explore", agent.switch_policy.p_explore}};
    }
    a["attack_times"] = agent.attack_times;
    a["exploration_retry_cap"] = agent.exploration_retry_cap;
    a["crr_match_eed"] = agent.crr_match_eed;
    a["rng_seed"] = agent.rng_seed;
    a["command"] = agent.command.id;
    a["mode"] = agent.mode == AgentMode::targeted ? "targeted" : "untargeted";
    if (agent.domain_hint) a["domain_hint"] = *agent.domain_hint;
    a["use_overlap_strategy"] = agent.use_overlap_strategy;
    a["use_reasoning_strategy"] = agent.use_reasoning_strategy;
    a["min_candidate_words"] = agent.min_candidate_words;
    if (attacker_embedding) a["embedding"] = embedding_to_json(*attacker_embedding);
    nlohmann::ordered_json rt;
    rt["backend"] = random_text_kind == RandomTextKind::wordlist ? "wordlist" : "remote";
    rt["words_per_query"] = words_per_query;
    if (!wordlist_path.empty()) rt["wordlist_path"] = wordlist_path;
    if (random_text_kind == RandomTextKind::remote) rt["remote"] = endpoint_to_json(random_text_remote);
    a["random_text"] = std::move(rt);
    nlohmann::ordered_json cont;
    cont["backend"] = continuation_kind == ContinuationKind::oracle ? "oracle" : "remote";
    cont["dropout_rate"] = continuation_dropout;
    cont["variant_shift_words"] = continuation_shift_words;
    if (continuation_kind == ContinuationKind::remote) {
        cont["remote"] = endpoint_to_json(continuation_remote);
    }
    a["continuation"] = std::move(cont);
    j["agent"] = std::move(a);

    if (!templates_path.empty()) j["templates_path"] = templates_path;
    if (!patterns_path.empty()) j["patterns_path"] = patterns_path;
    j["output"] = {{"dir", output_dir}};
    return j;
}

CampaignConfig default_campaign_config() {
    CampaignConfig cfg;
    cfg.apply_seed(0);
    return cfg;
}

CampaignConfig parse_campaign_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    check_keys(doc,
               {"seed", "template", "retriever", "embedding", "generator", "defenses", "agent",
                "templates_path", "patterns_path", "output"},
               "top level");

    CampaignConfig cfg;
    bool agent_seed_set = false;
    bool generator_seed_set = false;

    if (doc.contains("templates_path")) cfg.templates_path = doc["templates_path"].get<std::string>();
    if (doc.contains("patterns_path")) cfg.patterns_path = doc["patterns_path"].get<std::string>();

    if (doc.contains("template")) {
        const auto& t = doc["template"];
        if (t.is_string()) {
            const auto templates = cfg.templates_path.empty()
                                       ? builtin_templates()
                                       : load_templates_file(cfg.templates_path);
            cfg.prompt_template = template_for(t.get<std::string>(), templates);
        } else {
            check_keys(t, {"framework", "text", "joiner", "slice_header_pattern"}, "template");
            cfg.prompt_template.framework = t.at("framework").get<std::string>();
            cfg.prompt_template.text = t.at("text").get<std::string>();
            if (t.contains("joiner")) cfg.prompt_template.context_joiner = t["joiner"].get<std::string>();
            if (t.contains("slice_header_pattern") && !t["slice_header_pattern"].is_null()) {
                cfg.prompt_template.slice_header_pattern =
                    t["slice_header_pattern"].get<std::string>();
            }
        }
    }

    if (doc.contains("retriever")) {
        const auto& r = doc["retriever"];
        check_keys(r, {"mode", "k", "min_similarity"}, "retriever");
        if (r.contains("mode")) {
            const auto mode = r["mode"].get<std::string>();
            if (mode == "top_k") {
                cfg.retriever.mode = RetrievalMode::top_k;
            } else if (mode == "threshold") {
                cfg.retriever.mode = RetrievalMode::threshold;
            } else {
                throw ConfigError("config: retriever.mode must be top_k or threshold");
            }
        }
        if (r.contains("k")) cfg.retriever.k = r["k"].get<std::size_t>();
        if (r.contains("min_similarity")) {
            cfg.retriever.min_similarity = r["min_similarity"].get<double>();
        }
    }

    if (doc.contains("embedding")) cfg.target_embedding = parse_embedding(doc["embedding"], "embedding");

    if (doc.contains("generator")) {
        const auto& g = doc["generator"];
        check_keys(g, {"backend", "behavior", "trigger_phrases", "transcript_path", "remote"},
                   "generator");
        if (g.contains("backend")) {
            const auto backend = g["backend"].get<std::string>();
            if (backend == "simulated") {
                cfg.generator.kind = GeneratorKind::simulated;
            } else if (backend == "scripted") {
                cfg.generator.kind = GeneratorKind::scripted;
            } else if (backend == "remote") {
                cfg.generator.kind = GeneratorKind::remote;
            } else {
                throw ConfigError("config: generator.backend must be simulated, scripted or remote");
            }
        }
        if (g.contains("behavior")) {
            const auto& b = g["behavior"];
            check_keys(b,
                       {"leak_probability", "noise_char_rate", "refusal_probability",
                        "formatting_mode", "rng_seed"},
                       "generator.behavior");
            auto& behavior = cfg.generator.behavior;
            if (b.contains("leak_probability")) {
                behavior.leak_probability = b["leak_probability"].get<double>();
            }
            if (b.contains("noise_char_rate")) {
                behavior.noise_char_rate = b["noise_char_rate"].get<double>();
            }
            if (b.contains("refusal_probability")) {
                behavior.refusal_probability = b["refusal_probability"].get<double>();
            }
            if (b.contains("formatting_mode")) {
                const auto mode = b["formatting_mode"].get<std::string>();
                if (mode == "plain") {
                    behavior.formatting_mode = FormattingMode::plain;
                } else if (mode == "sentence_lines_with_markers") {
                    behavior.formatting_mode = FormattingMode::sentence_lines_with_markers;
                } else {
                    throw ConfigError(
                        "config: formatting_mode must be plain or sentence_lines_with_markers");
                }
            }
            if (b.contains("rng_seed")) {
                behavior.rng_seed = b["rng_seed"].get<std::uint64_t>();
                generator_seed_set = true;
            }
        }
        if (g.contains("trigger_phrases")) {
            cfg.generator.trigger_phrases = g["trigger_phrases"].get<std::vector<std::string>>();
        }
        if (g.contains("transcript_path")) {
            cfg.generator.transcript_path = g["transcript_path"].get<std::string>();
        }
        if (g.contains("remote")) cfg.generator.remote = parse_endpoint(g["remote"], "generator.remote");
    }

    if (doc.contains("defenses")) {
        const auto& d = doc["defenses"];
        check_keys(d, {"grep_filter", "min_match_words"}, "defenses");
        if (d.contains("grep_filter")) cfg.defenses.grep_filter = d["grep_filter"].get<bool>();
        if (d.contains("min_match_words")) {
            cfg.defenses.min_match_words = d["min_match_words"].get<std::size_t>();
        }
    }

    if (doc.contains("agent")) {
        const auto& a = doc["agent"];
        check_keys(a,
                   {"tau", "continuations_forward", "continuations_backward",
                    "min_continuation_tokens", "assumed_overlap_words", "switch", "attack_times",
                    "exploration_retry_cap", "crr_match_eed", "rng_seed", "command", "mode",
                    "domain_hint", "use_overlap_strategy", "use_reasoning_strategy",
                    "min_candidate_words", "embedding", "random_text", "continuation"},
                   "agent");
        auto& agent = cfg.agent;
        if (a.contains("tau")) agent.tau = a["tau"].get<double>();
        if (a.contains("continuations_forward")) {
            agent.continuations_forward = a["continuations_forward"].get<int>();
        }
        if (a.contains("continuations_backward")) {
            agent.continuations_backward = a["continuations_backward"].get<int>();
        }
        if (a.contains("min_continuation_tokens")) {
            agent.min_continuation_tokens = a["min_continuation_tokens"].get<std::size_t>();
        }
        if (a.contains("assumed_overlap_words")) {
            agent.assumed_overlap_words = a["assumed_overlap_words"].get<std::size_t>();
        }
        if (a.contains("switch")) {
            const auto& s = a["switch"];
            check_keys(s, {"kind", "p_explore", "explore_every"}, "agent.switch");
            if (s.contains("kind")) {
                const auto kind = s["kind"].get<std::string>();
                if (kind == "probability") {
                    agent.switch_policy.kind = SwitchKind::probability;
                } else if (kind == "frequency") {
                    agent.switch_policy.kind = SwitchKind::frequency;
                } else {
                    throw ConfigError("config: switch.kind must be probability or frequency");
                }
            }
            if (s.contains("p_explore")) agent.switch_policy.p_explore = s["p_explore"].get<double>();
            if (s.contains("explore_every")) {
                agent.switch_policy.explore_every = s["explore_every"].get<std::size_t>();
            }
        }
        if (a.contains("attack_times")) agent.attack_times = a["attack_times"].get<std::size_t>();
        if (a.contains("exploration_retry_cap")) {
            agent.exploration_retry_cap = a["exploration_retry_cap"].get<std::size_t>();
        }
        if (a.contains("crr_match_eed")) agent.crr_match_eed = a["crr_match_eed"].get<double>();
        if (a.contains("rng_seed")) {
            agent.rng_seed = a["rng_seed"].get<std::uint64_t>();
            agent_seed_set = true;
        }
        if (a.contains("command")) {
            const auto& c = a["command"];
            if (c.is_string()) {
                agent.command = command_for(c.get<std::string>());
            } else {
                check_keys(c, {"id", "text", "trigger_phrases"}, "agent.command");
                agent.command.id = c.at("id").get<std::string>();
                agent.command.text = c.at("text").get<std::string>();
                if (c.contains("trigger_phrases")) {
                    agent.command.trigger_phrases =
                        c["trigger_phrases"].get<std::vector<std::string>>();
                }
            }
        }
        if (a.contains("mode")) {
            const auto mode = a["mode"].get<std::string>();
            if (mode == "untargeted") {
                agent.mode = AgentMode::untargeted;
            } else if (mode == "targeted") {
                agent.mode = AgentMode::targeted;
            } else {
                throw ConfigError("config: agent.mode must be untargeted or targeted");
            }
        }
        if (a.contains("domain_hint") && !a["domain_hint"].is_null()) {
            agent.domain_hint = a["domain_hint"].get<std::string>();
        }
        if (a.contains("use_overlap_strategy")) {
            agent.use_overlap_strategy = a["use_overlap_strategy"].get<bool>();
        }
        if (a.contains("use_reasoning_strategy")) {
            agent.use_reasoning_strategy = a["use_reasoning_strategy"].get<bool>();
        }
        if (a.contains("min_candidate_words")) {
            agent.min_candidate_words = a["min_candidate_words"].get<std::size_t>();
        }
        if (a.contains("embedding")) {
            cfg.attacker_embedding = parse_embedding(a["embedding"], "agent.embedding");
        }
        if (a.contains("random_text")) {
            const auto& rt = a["random_text"];
            check_keys(rt, {"backend", "words_per_query", "wordlist_path", "remote"},
                       "agent.random_text");
            if (rt.contains("backend")) {
                const auto backend = rt["backend"].get<std::string>();
                if (backend == "wordlist") {
                    cfg.random_text_kind = RandomTextKind::wordlist;
                } else if (backend == "remote") {
                    cfg.random_text_kind = RandomTextKind::remote;
                } else {
                    throw ConfigError("config: random_text.backend must be wordlist or remote");
                }
            }
            if (rt.contains("words_per_query")) {
                cfg.words_per_query = rt["words_per_query"].get<std::size_t>();
            }
            if (rt.contains("wordlist_path") && !rt["wordlist_path"].is_null()) {
                cfg.wordlist_path = rt["wordlist_path"].get<std::string>();
            }
            if (rt.contains("remote")) {
                cfg.random_text_remote = parse_endpoint(rt["remote"], "agent.random_text.remote");
            }
        }
        if (a.contains("continuation")) {
            const auto& cont = a["continuation"];
            check_keys(cont, {"backend", "dropout_rate", "variant_shift_words", "remote"},
                       "agent.continuation");
            if (cont.contains("backend")) {
                const auto backend = cont["backend"].get<std::string>();
                if (backend == "oracle") {
                    cfg.continuation_kind = ContinuationKind::oracle;
                } else if (backend == "remote") {
                    cfg.continuation_kind = ContinuationKind::remote;
                } else {
                    throw ConfigError("config: continuation.backend must be oracle or remote");
                }
            }
            if (cont.contains("dropout_rate")) {
                cfg.continuation_dropout = cont["dropout_rate"].get<double>();
            }
            if (cont.contains("variant_shift_words")) {
                cfg.continuation_shift_words = cont["variant_shift_words"].get<std::size_t>();
            }
            if (cont.contains("remote")) {
                cfg.continuation_remote = parse_endpoint(cont["remote"], "agent.continuation.remote");
            }
        }
    }

    if (doc.contains("output")) {
        check_keys(doc["output"], {"dir"}, "output");
        if (doc["output"].contains("dir")) cfg.output_dir = doc["output"]["dir"].get<std::string>();
    }

    // The top-level seed derives any sub-seed the file left unset.
    if (doc.contains("seed")) {
        const auto top = doc["seed"].get<std::uint64_t>();
        cfg.seed = top;
        if (!agent_seed_set) cfg.agent.rng_seed = top;
        if (!generator_seed_set) cfg.generator.behavior.rng_seed = mix_seed(top, 1);
    }

    cfg.validate();
    return cfg;
}

CampaignConfig load_campaign_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_campaign_config(buf.str());
}

std::unique_ptr<CampaignHarness> build_harness(const CampaignConfig& config, StoredKb stored) {
    config.validate();
    auto harness = std::make_unique<CampaignHarness>();
    harness->kb = std::move(stored.kb);

    harness->target_embedder = make_embedding_backend(config.target_embedding);
    harness->attacker_embedder = config.attacker_embedding
                                     ? make_embedding_backend(*config.attacker_embedding)
                                     : harness->target_embedder;

    StoredKb local;
    local.kb = harness->kb;  // index_from_stored reads chunks + vectors
    local.embedding_spec = stored.embedding_spec;
    local.vectors = std::move(stored.vectors);
    harness->index = std::make_unique<VectorIndex>(
        index_from_stored(local, harness->target_embedder));

    RagAppConfig app_config;
    app_config.prompt_template = config.prompt_template;
    app_config.retriever = config.retriever;
    app_config.generator = config.generator;
    app_config.defenses = config.defenses;
    harness->app = std::make_unique<RagApp>(std::move(app_config), harness->kb, *harness->index);

    if (config.random_text_kind == RandomTextKind::wordlist) {
        auto words = config.wordlist_path.empty() ? builtin_wordlist()
                                                  : load_wordlist_file(config.wordlist_path);
        harness->random_text = std::make_unique<WordlistSampler>(
            std::move(words), mix_seed(config.seed, 2), config.words_per_query);
    } else {
        harness->random_text = std::make_unique<RemoteRandomText>(
            config.random_text_remote, config.agent.domain_hint.value_or(""));
    }

    if (config.continuation_kind == ContinuationKind::oracle) {
        harness->continuations = std::make_unique<OracleContinuations>(
            harness->kb, config.continuation_dropout, mix_seed(config.seed, 3),
            config.continuation_shift_words);
    } else {
        harness->continuations = std::make_unique<RemoteContinuations>(
            config.continuation_remote, config.agent.mode, config.agent.domain_hint.value_or(""));
    }

    harness->templates = config.templates_path.empty() ? builtin_templates()
                                                       : load_templates_file(config.templates_path);
    harness->patterns = config.patterns_path.empty() ? builtin_patterns()
                                                     : load_patterns_file(config.patterns_path);
    // A custom inline template must be segmentable after extraction.
    if (std::none_of(harness->templates.begin(), harness->templates.end(),
                     [&](const PromptTemplate& t) {
                         return t.framework == config.prompt_template.framework;
                     })) {
        harness->templates.push_back(config.prompt_template);
    }

    harness->config_echo = config.to_json();
    harness->campaign = std::make_unique<Campaign>(
        harness->kb, *harness->index, *harness->app, *harness->random_text,
        *harness->continuations, harness->attacker_embedder, config.agent, harness->patterns,
        harness->templates);
    return harness;
}

}  // namespace ragleak
