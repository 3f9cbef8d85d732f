#pragma once

#include <filesystem>
#include <string>

namespace elan {

// Editable prompt pair for conversation generation. File format: the system
// instruction, a line containing only "---", then the continuation
// instruction, which may reference {conversation_so_far} and {target_turns}.
struct PromptTemplate {
  std::string system_instruction;
  std::string continuation_instruction;

  // Throws MissingFileError / ParseError (missing separator, empty section).
  static PromptTemplate load(const std::filesystem::path& path);

  // Substitutes both placeholders. Throws ParseError when the rendered text
  // is empty.
  std::string render(const std::string& conversation_so_far,
                     int target_turns) const;
};

}  // namespace elan
