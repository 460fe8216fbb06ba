#include "config_file.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

namespace afdm::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string option_name(const std::string& token) {
  if (token.rfind("--", 0) != 0) return {};
  const auto eq = token.find('=');
  return token.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
}

}  // namespace

std::vector<std::string> config_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    out.push_back("--" + trim(line.substr(0, eq)));
    out.push_back(trim(line.substr(eq + 1)));
  }
  return out;
}

std::vector<std::string> merge_config(const std::vector<std::string>& args,
                                      const std::vector<std::vector<std::string>>& exclusive_groups) {
  std::vector<std::string> flags;
  std::string config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      flags.push_back(args[i]);
    }
  }
  if (config_path.empty()) return flags;

  std::vector<std::string> given;
  for (const auto& f : flags)
    if (auto name = option_name(f); !name.empty()) given.push_back(name);
  auto on_command_line = [&](const std::string& key) {
    return std::find(given.begin(), given.end(), key) != given.end();
  };
  auto shadowed = [&](const std::string& key) {
    for (const auto& group : exclusive_groups) {
      if (std::find(group.begin(), group.end(), key) == group.end()) continue;
      for (const auto& other : group)
        if (on_command_line(other)) return true;
    }
    return on_command_line(key);
  };

  const auto tokens = config_tokens(config_path);
  std::vector<std::string> merged;
  for (std::size_t i = 0; i + 1 < tokens.size(); i += 2) {
    if (shadowed(tokens[i].substr(2))) continue;
    merged.push_back(tokens[i]);
    merged.push_back(tokens[i + 1]);
  }
  merged.insert(merged.end(), flags.begin(), flags.end());
  return merged;
}

}  // namespace afdm::cli
