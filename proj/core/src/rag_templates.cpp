#include "ragleak/rag_templates.hpp"

#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ragleak/errors.hpp"

namespace ragleak {

namespace {

std::size_t count_occurrences(const std::string& haystack, const std::string& needle) {
    std::size_t count = 0;
    for (std::size_t pos = haystack.find(needle); pos != std::string::npos;
         pos = haystack.find(needle, pos + needle.size())) {
        ++count;
    }
    return count;
}

void replace_once(std::string& text, const std::string& placeholder, const std::string& value) {
    const auto pos = text.find(placeholder);
    if (pos == std::string::npos) {
        throw InternalError("assemble_prompt: missing placeholder " + placeholder);
    }
    text.replace(pos, placeholder.size(), value);
}

}  // namespace

void PromptTemplate::validate() const {
    if (framework.empty()) throw ArgumentError("template: framework name is empty");
    if (count_occurrences(text, "{context}") != 1 || count_occurrences(text, "{question}") != 1) {
        throw ArgumentError("template '" + framework +
                            "': text must contain {context} and {question} exactly once each");
    }
    if (slice_header_pattern && slice_header_pattern->find("{i}") == std::string::npos) {
        throw ArgumentError("template '" + framework + "': slice_header_pattern must contain {i}");
    }
}

const std::vector<PromptTemplate>& builtin_templates() {
    static const std::vector<PromptTemplate> templates = [] {
        std::vector<PromptTemplate> t;
        t.push_back(PromptTemplate{
            "coze",
            "Answer the question based on the reference:\n"
            "1. If the referenced content contains the <img src=\"\"> tag, display the images in "
            "your reply as appropriate.\n"
            "2. If the referenced content does not contain the <img src=\"\"> tag, do not invent "
            "image links.\n\n"
            "The following is the content of the data set you can refer to:\n\n"
            "{context}\n\n"
            "question is: {question}",
            "\n\n",
            std::string("recall slice {i}:")});
        t.push_back(PromptTemplate{
            "langchain_v4",
            "You are an assistant for question-answering tasks. Use the following pieces of "
            "retrieved context to answer the question.\n\n"
            "<context>\n{context}\n</context>\n\n"
            "Answer the following question:\n\n{question}",
            "\n\n",
            std::nullopt});
        t.push_back(PromptTemplate{
            "langchain_v1",
            "You are an assistant for question-answering tasks. Use the following pieces of "
            "retrieved context to answer the question. If you don't know the answer, say that "
            "you don't know.\n"
            "Question: {question}\n"
            "Context: {context}\n"
            "Answer:",
            "\n\n",
            std::nullopt});
        t.push_back(PromptTemplate{
            "langchain_v2",
            // The context region of this layout is delimited by blank lines,
            // so chunks are joined with a single newline.
            "You are an assistant for question-answering tasks. Use the following pieces of "
            "retrieved context to answer the question. Keep the answer concise.\n\n"
            "{context}\n\n"
            "Question: {question}",
            "\n",
            std::nullopt});
        t.push_back(PromptTemplate{
            "langchain_v3",
            "Use the following pieces of context to answer the question at the end. If you don't "
            "know the answer, just say that you don't know, don't try to make up an answer.\n\n"
            "{context}\n\n"
            "Question: {question}\n\n"
            "Helpful Answer:",
            "\n\n",
            std::nullopt});
        for (const auto& tmpl : t) tmpl.validate();
        return t;
    }();
    return templates;
}

const PromptTemplate& template_for(const std::string& framework,
                                   const std::vector<PromptTemplate>& templates) {
    for (const auto& t : templates) {
        if (t.framework == framework) return t;
    }
    throw ArgumentError("no template for framework: " + framework);
}

std::vector<PromptTemplate> load_templates_json(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("templates: invalid JSON: ") + e.what());
    }
    if (!doc.is_array()) throw ConfigError("templates: expected a JSON array");
    std::vector<PromptTemplate> out;
    for (const auto& item : doc) {
        PromptTemplate t;
        t.framework = item.at("framework").get<std::string>();
        t.text = item.at("text").get<std::string>();
        if (item.contains("joiner")) t.context_joiner = item["joiner"].get<std::string>();
        if (item.contains("slice_header_pattern") && !item["slice_header_pattern"].is_null()) {
            t.slice_header_pattern = item["slice_header_pattern"].get<std::string>();
        }
        t.validate();
        out.push_back(std::move(t));
    }
    return out;
}

std::vector<PromptTemplate> load_templates_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open template file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_templates_json(buf.str());
}

std::string templates_to_json(const std::vector<PromptTemplate>& templates) {
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (const auto& t : templates) {
        nlohmann::ordered_json item;
        item["framework"] = t.framework;
        item["text"] = t.text;
        item["joiner"] = t.context_joiner;
        item["slice_header_pattern"] =
            t.slice_header_pattern ? nlohmann::ordered_json(*t.slice_header_pattern)
                                   : nlohmann::ordered_json(nullptr);
        doc.push_back(std::move(item));
    }
    return doc.dump(2) + "\n";
}

std::string assemble_prompt(const PromptTemplate& tmpl, const RetrievalResult& hits,
                            const KnowledgeBase& kb, const std::string& question) {
    tmpl.validate();
    std::string context;
    for (std::size_t i = 0; i < hits.hits.size(); ++i) {
        const Chunk* chunk = kb.find(hits.hits[i].chunk_id);
        if (!chunk) {
            throw InternalError("assemble_prompt: hit refers to unknown chunk id " +
                                hits.hits[i].chunk_id);
        }
        if (i > 0) context += tmpl.context_joiner;
        if (tmpl.slice_header_pattern) {
            std::string header = *tmpl.slice_header_pattern;
            const auto pos = header.find("{i}");
            header.replace(pos, 3, std::to_string(i + 1));
            context += header;
            context += "\n";
        }
        context += chunk->text;
    }
    // Replace the later placeholder first so substituted text is never
    // rescanned for the other placeholder.
    std::string out = tmpl.text;
    const auto ctx_pos = out.find("{context}");
    const auto q_pos = out.find("{question}");
    if (ctx_pos > q_pos) {
        replace_once(out, "{context}", context);
        replace_once(out, "{question}", question);
    } else {
        replace_once(out, "{question}", question);
        replace_once(out, "{context}", context);
    }
    return out;
}

}  // namespace ragleak
