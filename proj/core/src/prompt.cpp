#include "elan/prompt.hpp"

#include <fstream>
#include <sstream>

#include "elan/errors.hpp"

namespace elan {

namespace {

void replace_all(std::string& text, const std::string& needle,
                 const std::string& replacement) {
  std::size_t pos = 0;
  while ((pos = text.find(needle, pos)) != std::string::npos) {
    text.replace(pos, needle.size(), replacement);
    pos += replacement.size();
  }
}

std::string trim_blank_edges(const std::string& text) {
  const std::size_t begin = text.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const std::size_t end = text.find_last_not_of(" \t\r\n");
  return text.substr(begin, end - begin + 1);
}

}  // namespace

PromptTemplate PromptTemplate::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw MissingFileError(path.string());
  }

  PromptTemplate result;
  std::string line;
  std::string section;
  bool separator_seen = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "---") {
      if (separator_seen) {
        throw ParseError(path.string(), "more than one --- separator");
      }
      result.system_instruction = trim_blank_edges(section);
      section.clear();
      separator_seen = true;
      continue;
    }
    section += line;
    section += '\n';
  }
  if (!separator_seen) {
    throw ParseError(path.string(),
                     "template needs a --- line between the system "
                     "instruction and the continuation instruction");
  }
  result.continuation_instruction = trim_blank_edges(section);

  if (result.system_instruction.empty() ||
      result.continuation_instruction.empty()) {
    throw ParseError(path.string(), "template sections must be non-empty");
  }
  return result;
}

std::string PromptTemplate::render(const std::string& conversation_so_far,
                                   int target_turns) const {
  std::string rendered = continuation_instruction;
  replace_all(rendered, "{conversation_so_far}", conversation_so_far);
  replace_all(rendered, "{target_turns}", std::to_string(target_turns));
  if (trim_blank_edges(rendered).empty()) {
    throw ParseError("template", "rendered instruction is empty");
  }
  return rendered;
}

}  // namespace elan
