#pragma once

#include <string>
#include <vector>

namespace afdm::cli {

// Reads `key = value` lines ('#' starts a comment) into `--key value` tokens.
std::vector<std::string> config_tokens(const std::string& path);

// Splices config-file tokens in front of the command-line flags of a
// subcommand so that flags given on the command line take precedence. Keys
// in the same mutually exclusive group as a command-line flag are dropped.
std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::vector<std::string>>& exclusive_groups);

}  // namespace afdm::cli
