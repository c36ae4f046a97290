#include "config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "acyl/error.hpp"

namespace acyl::cli {

namespace {

std::string scalar_text(const nlohmann::json& v, const std::string& key) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return v.dump();
  throw Error(ErrorCode::kConfigError, "config key '" + key + "' must be a string, number, bool or array");
}

}  // namespace

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorCode::kConfigError, "--config needs a file");
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (path.empty()) return rest;

  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kConfigError, "cannot open config file " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kConfigError, "config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::kConfigError, "config file must hold a JSON object");

  std::vector<std::string> flags;
  std::string command;
  for (const auto& [key, value] : doc.items()) {
    if (key == "command") {
      command = scalar_text(value, key);
      continue;
    }
    if (value.is_boolean()) {
      if (value.get<bool>()) flags.push_back("--" + key);
      continue;
    }
    std::string text;
    if (value.is_array()) {
      for (const auto& item : value) text += (text.empty() ? "" : ",") + scalar_text(item, key);
    } else {
      text = scalar_text(value, key);
    }
    flags.push_back("--" + key + "=" + text);
  }

  // program [command] <file flags> <command-line flags>
  std::vector<std::string> out;
  std::size_t next = 0;
  if (!rest.empty()) out.push_back(rest[next++]);
  if (next < rest.size() && rest[next].rfind("-", 0) != 0) {
    out.push_back(rest[next++]);
  } else if (!command.empty()) {
    out.push_back(command);
  }
  out.insert(out.end(), flags.begin(), flags.end());
  out.insert(out.end(), rest.begin() + static_cast<std::ptrdiff_t>(next), rest.end());
  return out;
}

}  // namespace acyl::cli
