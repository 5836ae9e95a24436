#ifndef PACEBENCH_COMMAND_TEMPLATE_H_
#define PACEBENCH_COMMAND_TEMPLATE_H_

#include <map>
#include <span>
#include <string>
#include <vector>

namespace pacebench {

using TemplateVars = std::map<std::string, std::string>;

// Substitutes every {name} in every token. A placeholder may sit inside a
// token ("--fps={fps}"). Unknown names and unbalanced braces throw
// Error(kTemplate) naming the offender.
std::vector<std::string> RenderTemplate(std::span<const std::string> tokens,
                                        const TemplateVars& vars);

// How many times each placeholder name occurs across |tokens|.
std::map<std::string, int> CountPlaceholders(std::span<const std::string> tokens);

}  // namespace pacebench

#endif  // PACEBENCH_COMMAND_TEMPLATE_H_
