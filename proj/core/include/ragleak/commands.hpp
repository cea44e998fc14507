#pragma once

#include <string>
#include <vector>

namespace ragleak {

/// A prompt-injection command: the payload appended to every anchor query,
/// plus the phrases the simulated generator recognizes it by.
struct AdversarialCommand {
    std::string id;
    std::string text;
    std::vector<std::string> trigger_phrases;

    void validate() const;
};

/// Shipped command library: five seed injection templates plus the
/// optimized direct-output command. Also available as a JSON data file.
const std::vector<AdversarialCommand>& builtin_commands();

const AdversarialCommand& command_for(const std::string& id);

/// Union of every builtin command's trigger phrases; the simulated
/// generator's default recognition list.
std::vector<std::string> builtin_trigger_phrases();

std::vector<AdversarialCommand> load_commands_json(const std::string& json_text);
std::vector<AdversarialCommand> load_commands_file(const std::string& path);
std::string commands_to_json(const std::vector<AdversarialCommand>& commands);

}  // namespace ragleak
