#ifndef PACEBENCH_ATOMIC_FILE_H_
#define PACEBENCH_ATOMIC_FILE_H_

#include <filesystem>
#include <string>
#include <string_view>

namespace pacebench {

// Writes |contents| to a sibling temp file and renames it over |path|, so
// readers never observe a partially written file. Throws kIo.
void WriteFileAtomically(const std::filesystem::path& path,
                         std::string_view contents);

std::string ReadFileToString(const std::filesystem::path& path);

}  // namespace pacebench

#endif  // PACEBENCH_ATOMIC_FILE_H_
