#include "pacebench/command_template.h"

#include <functional>
#include <string_view>

#include "pacebench/error.h"

namespace pacebench {
namespace {

// Calls |on_name| for every placeholder and |on_text| for literal runs.
void Scan(std::string_view token,
          const std::function<void(std::string_view)>& on_text,
          const std::function<void(std::string_view)>& on_name) {
  size_t pos = 0;
  while (pos < token.size()) {
    const size_t open = token.find_first_of("{}", pos);
    if (open == std::string_view::npos) {
      on_text(token.substr(pos));
      return;
    }
    if (token[open] == '}') {
      throw Error(ErrorCode::kTemplate,
                  "unbalanced '}' in template token '" + std::string(token) + "'");
    }
    on_text(token.substr(pos, open - pos));
    const size_t close = token.find('}', open);
    if (close == std::string_view::npos) {
      throw Error(ErrorCode::kTemplate,
                  "unterminated placeholder in template token '" +
                      std::string(token) + "'");
    }
    on_name(token.substr(open + 1, close - open - 1));
    pos = close + 1;
  }
}

}  // namespace

std::vector<std::string> RenderTemplate(std::span<const std::string> tokens,
                                        const TemplateVars& vars) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& token : tokens) {
    std::string rendered;
    Scan(
        token, [&](std::string_view text) { rendered += text; },
        [&](std::string_view name) {
          auto it = vars.find(std::string(name));
          if (it == vars.end()) {
            throw Error(ErrorCode::kTemplate,
                        "unknown placeholder {" + std::string(name) + "}");
          }
          rendered += it->second;
        });
    out.push_back(std::move(rendered));
  }
  return out;
}

std::map<std::string, int> CountPlaceholders(std::span<const std::string> tokens) {
  std::map<std::string, int> counts;
  for (const auto& token : tokens) {
    Scan(
        token, [](std::string_view) {},
        [&](std::string_view name) { ++counts[std::string(name)]; });
  }
  return counts;
}

}  // namespace pacebench
