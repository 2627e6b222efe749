#include "dynleiden/edge_stream.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dynleiden/errors.hpp"

namespace dynleiden {

VertexId IdMap::intern(const std::string& token) {
  auto [it, inserted] = ids_.try_emplace(token, static_cast<VertexId>(tokens_.size()));
  if (inserted) tokens_.push_back(token);
  return it->second;
}

namespace {

struct RawLine {
  std::size_t line;
  std::string u;
  std::string v;
  Weight weight;
  std::optional<std::int64_t> timestamp;
};

std::optional<VertexId> as_vertex_id(const std::string& token) {
  std::uint64_t value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end || value >= kNoVertex) return std::nullopt;
  return static_cast<VertexId>(value);
}

Weight parse_weight(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const double w = std::stod(token, &used);
    if (used != token.size() || !std::isfinite(w)) throw ParseError(line, "bad weight '" + token + "'");
    return w;
  } catch (const std::logic_error&) {
    throw ParseError(line, "bad weight '" + token + "'");
  }
}

std::int64_t parse_timestamp(const std::string& token, std::size_t line) {
  std::int64_t value = 0;
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    // Accept fractional timestamps by truncation.
    try {
      std::size_t used = 0;
      const double t = std::stod(token, &used);
      if (used != token.size()) throw ParseError(line, "bad timestamp '" + token + "'");
      return static_cast<std::int64_t>(t);
    } catch (const std::logic_error&) {
      throw ParseError(line, "bad timestamp '" + token + "'");
    }
  }
  return value;
}

}  // namespace

EdgeStream load_edge_stream(std::istream& source, StreamFormat /*fmt*/) {
  EdgeStream out;
  std::vector<RawLine> raw;
  std::string text;
  std::size_t line_no = 0;
  bool all_numeric = true;
  while (std::getline(source, text)) {
    ++line_no;
    ++out.stats.lines;
    std::istringstream fields(text);
    std::vector<std::string> tokens;
    for (std::string tok; fields >> tok;) tokens.push_back(tok);
    if (tokens.empty()) continue;
    if (tokens[0][0] == '#') {
      ++out.stats.comments;
      continue;
    }
    if (tokens.size() < 2 || tokens.size() > 4) {
      throw ParseError(line_no, "expected 'u v [w] [timestamp]'");
    }
    RawLine r{line_no, tokens[0], tokens[1], 1.0, std::nullopt};
    if (tokens.size() >= 3) r.weight = parse_weight(tokens[2], line_no);
    if (r.weight < 0.0) throw NegativeWeight(line_no);
    if (tokens.size() == 4) r.timestamp = parse_timestamp(tokens[3], line_no);
    all_numeric = all_numeric && as_vertex_id(r.u) && as_vertex_id(r.v);
    raw.push_back(std::move(r));
  }
  out.stats.remapped = !all_numeric;
  out.edges.reserve(raw.size());
  for (const auto& r : raw) {
    VertexId u = all_numeric ? *as_vertex_id(r.u) : out.ids.intern(r.u);
    VertexId v = all_numeric ? *as_vertex_id(r.v) : out.ids.intern(r.v);
    if (u > v) std::swap(u, v);
    if (u == v) ++out.stats.self_loops;
    if (r.timestamp) ++out.stats.with_timestamp;
    out.edges.push_back({u, v, r.weight, r.timestamp});
  }
  return out;
}

EdgeStream load_edge_stream_file(const std::string& path, StreamFormat fmt) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return load_edge_stream(in, fmt);
}

}  // namespace dynleiden
