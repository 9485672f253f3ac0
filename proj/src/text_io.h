#ifndef BIMSYNTH_SRC_TEXT_IO_H_
#define BIMSYNTH_SRC_TEXT_IO_H_

// Line-oriented tokenizer shared by the structured-text formats (scene
// manifests, pose files, dataset manifests, model files). '#' starts a comment;
// blank lines are skipped; tokens are whitespace separated.

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "bimsynth/error.h"

namespace bimsynth::text {

struct Line {
  int number = 0;
  std::vector<std::string> tokens;

  const std::string& keyword() const { return tokens.front(); }
  std::size_t size() const { return tokens.size(); }
};

class LineReader {
 public:
  LineReader(std::istream& in, std::string source);

  // Next non-empty line; false at end of input.
  bool next(Line& line);

  [[noreturn]] void fail(const Line& line, const std::string& what) const;
  const std::string& source() const { return source_; }

 private:
  std::istream& in_;
  std::string source_;
  int number_ = 0;
};

double to_double(const LineReader& reader, const Line& line, std::size_t i);
long long to_int(const LineReader& reader, const Line& line, std::size_t i);

// Requires exactly `n` tokens including the keyword.
void expect_arity(const LineReader& reader, const Line& line, std::size_t n);

// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace bimsynth::text

#endif  // BIMSYNTH_SRC_TEXT_IO_H_
