#include "tabalg/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <utility>

namespace tabalg {

namespace detail {
extern const std::vector<std::pair<std::string_view, std::string_view>> kBundledTexts;
}  // namespace detail

namespace {

struct Corpus {
  std::vector<std::string> names;
  std::vector<std::string> texts;
  std::vector<Algebra> algebras;
};

/// Parsed once; the texts were verified when the library was built.
const Corpus& corpus() {
  static const Corpus c = [] {
    Corpus c;
    for (const auto& [name, text] : detail::kBundledTexts) {
      c.names.emplace_back(name);
      c.texts.emplace_back(text);
      c.algebras.push_back(parse_algebra(text));
    }
    return c;
  }();
  return c;
}

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

std::size_t position(std::string_view name) {
  const auto& c = corpus();
  auto it = std::find_if(c.names.begin(), c.names.end(),
                         [&](const std::string& n) { return lower(n) == lower(name); });
  if (it == c.names.end()) {
    throw UnknownName("no bundled algebra named " + std::string(name));
  }
  return static_cast<std::size_t>(it - c.names.begin());
}

}  // namespace

std::vector<std::string> bundled_names() { return corpus().names; }

const std::vector<Algebra>& bundled() { return corpus().algebras; }

const Algebra& bundled(std::string_view name) {
  return corpus().algebras[position(name)];
}

const std::string& bundled_text(std::string_view name) {
  return corpus().texts[position(name)];
}

Algebra load_algebra(std::string_view uri) {
  constexpr std::string_view kPrefix = "bundled:";
  if (uri.substr(0, kPrefix.size()) != kPrefix) return parse_algebra(read_file(uri));
  const std::string_view name = uri.substr(kPrefix.size());
  if (const char* dir = std::getenv("TABALG_DATA_DIR"); dir && *dir) {
    const auto path = std::filesystem::path(dir) / (lower(name) + ".tab");
    if (std::filesystem::exists(path)) return parse_algebra(read_file(path.string()));
  }
  return bundled(name);
}

}  // namespace tabalg
