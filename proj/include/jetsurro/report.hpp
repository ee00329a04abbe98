#pragma once

#include <string>
#include <vector>

namespace jetsurro::report {

/// Renders a single self-contained report (HTML or Markdown with inline SVG)
/// from the CSV artifacts found in `in_dir`. Every section is optional:
/// absent inputs are marked in the document and listed in `missing`.
/// Output is byte-stable for identical inputs.
std::string render(const std::string& in_dir, const std::string& format,
                   std::vector<std::string>* missing = nullptr);

}  // namespace jetsurro::report
