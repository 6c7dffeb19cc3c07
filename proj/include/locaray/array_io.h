#ifndef LOCARAY_ARRAY_IO_H_
#define LOCARAY_ARRAY_IO_H_

#include <filesystem>
#include <iosfwd>
#include <string>

#include "locaray/model.h"

namespace locaray {

// On-disk array:
//   line 1      model spec ("2^3", "2,2,2,3", ...)
//   line 2      "m t"
//   next m      k space-separated entries per row
// Lines starting with '#' are ignored. Output uses LF endings.
struct ArrayFile {
  TestArray array;
  int strength = 2;
};

ArrayFile ReadArray(std::istream& in);
ArrayFile ReadArrayFile(const std::filesystem::path& path);

void WriteArray(std::ostream& out, const ArrayFile& file);
void WriteArrayFile(const std::filesystem::path& path, const ArrayFile& file);
std::string FormatArray(const ArrayFile& file);

}  // namespace locaray

#endif  // LOCARAY_ARRAY_IO_H_
