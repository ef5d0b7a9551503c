// Build-time step: verifies each algebra file and writes a source file that
// embeds the canonical texts. Usage: embed_corpus OUT.cpp FILE...
#include "tabalg/corpus.hpp"
#include "tabalg/verify.hpp"

#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
  if (argc < 3) {
    std::cerr << "usage: embed_corpus OUT.cpp FILE...\n";
    return 2;
  }
  std::ostringstream os;
  os << "// Generated by embed_corpus; do not edit.\n"
        "#include <string_view>\n#include <utility>\n#include <vector>\n\n"
        "namespace tabalg::detail {\n\n"
        "extern const std::vector<std::pair<std::string_view, std::string_view>>\n"
        "    kBundledTexts = {\n";
  for (int f = 2; f < argc; ++f) {
    try {
      const std::string text = tabalg::read_file(argv[f]);
      const auto a = tabalg::parse_algebra(text);
      const auto report = tabalg::verify_axioms(a);
      if (!report.passed()) {
        for (const auto& c : report.checks) {
          if (!c.passed()) {
            std::cerr << argv[f] << ": fails " << tabalg::axiom_name(c.axiom) << '\n';
          }
        }
        return 1;
      }
      if (tabalg::serialize(a) != text) {
        std::cerr << argv[f] << ": not in canonical form\n";
        return 1;
      }
      if (text.find(")tab\"") != std::string::npos) {
        std::cerr << argv[f] << ": contains the raw-string delimiter\n";
        return 1;
      }
      os << "    {\"" << a.name() << "\", R\"tab(" << text << ")tab\"},\n";
    } catch (const std::exception& e) {
      std::cerr << argv[f] << ": " << e.what() << '\n';
      return 1;
    }
  }
  os << "};\n\n}  // namespace tabalg::detail\n";
  // Leave the output untouched when nothing changed to avoid rebuilds.
  std::string old;
  try {
    old = tabalg::read_file(argv[1]);
  } catch (const std::exception&) {
  }
  if (old != os.str()) tabalg::write_file(argv[1], os.str());
  return 0;
}
