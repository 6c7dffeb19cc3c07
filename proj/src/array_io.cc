#include "locaray/array_io.h"

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <vector>

namespace locaray {
namespace {

// Next non-comment line, with a trailing CR stripped.
std::optional<std::string> NextLine(std::istream& in, int& line_no) {
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line.front() == '#') continue;
    return line;
  }
  return std::nullopt;
}

[[noreturn]] void Fail(int line_no, const std::string& what) {
  throw ParseError("array file line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

ArrayFile ReadArray(std::istream& in) {
  int line_no = 0;
  auto spec = NextLine(in, line_no);
  if (!spec) throw ParseError("array file is empty");
  SutModel model = ParseModel(*spec);

  auto header = NextLine(in, line_no);
  if (!header) Fail(line_no, "missing 'm t' line");
  std::istringstream hs(*header);
  long long m = -1;
  int t = -1;
  std::string extra;
  if (!(hs >> m >> t) || (hs >> extra) || m < 0 || m > (1 << 24)) {
    Fail(line_no, "expected 'm t', got '" + *header + "'");
  }
  if (t < 0 || t > model.num_factors()) {
    Fail(line_no, "strength " + std::to_string(t) + " outside 0.." +
                      std::to_string(model.num_factors()));
  }

  std::vector<std::vector<int>> rows;
  rows.reserve(m);
  for (long long i = 0; i < m; ++i) {
    auto line = NextLine(in, line_no);
    if (!line) {
      Fail(line_no, "expected " + std::to_string(m) + " rows, found " +
                        std::to_string(i));
    }
    std::istringstream rs(*line);
    std::vector<int> row;
    int value;
    while (rs >> value) row.push_back(value);
    if (!rs.eof()) Fail(line_no, "non-integer entry in '" + *line + "'");
    rows.push_back(std::move(row));
  }
  while (auto line = NextLine(in, line_no)) {
    if (line->find_first_not_of(" \t") != std::string::npos) {
      Fail(line_no, "unexpected content after the last row");
    }
  }
  try {
    return ArrayFile{TestArray(std::move(model), rows), t};
  } catch (const DomainError& e) {
    throw ParseError(std::string("array file: ") + e.what());
  }
}

ArrayFile ReadArrayFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open array file " + path.string());
  return ReadArray(in);
}

void WriteArray(std::ostream& out, const ArrayFile& file) {
  const TestArray& a = file.array;
  out << a.model().ToSpec() << '\n'
      << a.num_rows() << ' ' << file.strength << '\n';
  for (int i = 0; i < a.num_rows(); ++i) {
    for (int j = 0; j < a.num_factors(); ++j) {
      if (j) out << ' ';
      out << a.at(i, j);
    }
    out << '\n';
  }
}

void WriteArrayFile(const std::filesystem::path& path, const ArrayFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write array file " + path.string());
  WriteArray(out, file);
  if (!out) throw ParseError("failed writing array file " + path.string());
}

std::string FormatArray(const ArrayFile& file) {
  std::ostringstream out;
  WriteArray(out, file);
  return out.str();
}

}  // namespace locaray
