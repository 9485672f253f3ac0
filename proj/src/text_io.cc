#include "text_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

namespace bimsynth::text {

LineReader::LineReader(std::istream& in, std::string source)
    : in_(in), source_(std::move(source)) {}

bool LineReader::next(Line& line) {
  std::string raw;
  while (std::getline(in_, raw)) {
    ++number_;
    if (const auto hash = raw.find('#'); hash != std::string::npos) {
      raw.resize(hash);
    }
    std::istringstream ss(raw);
    std::vector<std::string> tokens;
    for (std::string tok; ss >> tok;) tokens.push_back(std::move(tok));
    if (tokens.empty()) continue;
    line.number = number_;
    line.tokens = std::move(tokens);
    return true;
  }
  return false;
}

void LineReader::fail(const Line& line, const std::string& what) const {
  throw Error(ErrorCode::kParse,
              source_ + ":" + std::to_string(line.number) + ": " + what);
}

void expect_arity(const LineReader& reader, const Line& line, std::size_t n) {
  if (line.size() != n) {
    reader.fail(line, "'" + line.keyword() + "' expects " +
                          std::to_string(n - 1) + " value(s), got " +
                          std::to_string(line.size() - 1));
  }
}

double to_double(const LineReader& reader, const Line& line, std::size_t i) {
  if (i >= line.size()) reader.fail(line, "missing numeric value");
  const std::string& tok = line.tokens[i];
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    reader.fail(line, "expected a number, got '" + tok + "'");
  }
  return v;
}

long long to_int(const LineReader& reader, const Line& line, std::size_t i) {
  if (i >= line.size()) reader.fail(line, "missing integer value");
  const std::string& tok = line.tokens[i];
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    reader.fail(line, "expected an integer, got '" + tok + "'");
  }
  return v;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kMissingFile, "cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw Error(ErrorCode::kIo, "cannot open for writing: " + path.string());
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

}  // namespace bimsynth::text
