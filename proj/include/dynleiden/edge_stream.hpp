#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "dynleiden/graph.hpp"

namespace dynleiden {

/// Whitespace-separated text, one edge per line: "u v [w] [timestamp]".
/// Missing w defaults to 1.0; a line whose first non-blank character is '#'
/// is a comment. When every endpoint token is a non-negative integer the
/// integers are used as vertex ids directly; otherwise tokens are remapped to
/// dense ids in first-seen order and the map is kept in EdgeStream::ids.
enum class StreamFormat { kText };

struct StreamEdge {
  VertexId u = 0;
  VertexId v = 0;
  Weight weight = 1.0;
  std::optional<std::int64_t> timestamp;

  friend bool operator==(const StreamEdge&, const StreamEdge&) = default;
};

struct StreamStats {
  std::size_t lines = 0;
  std::size_t comments = 0;
  std::size_t self_loops = 0;
  std::size_t with_timestamp = 0;
  bool remapped = false;
};

/// External token -> dense id map, in first-seen order.
class IdMap {
 public:
  VertexId intern(const std::string& token);
  const std::vector<std::string>& tokens() const { return tokens_; }
  std::size_t size() const { return tokens_.size(); }

 private:
  std::unordered_map<std::string, VertexId> ids_;
  std::vector<std::string> tokens_;
};

struct EdgeStream {
  std::vector<StreamEdge> edges;
  StreamStats stats;
  IdMap ids;
};

/// Parses an edge stream. Edges come back in file order with u <= v.
/// Throws ParseError or NegativeWeight with the offending 1-based line number.
EdgeStream load_edge_stream(std::istream& source, StreamFormat fmt = StreamFormat::kText);
EdgeStream load_edge_stream_file(const std::string& path, StreamFormat fmt = StreamFormat::kText);

}  // namespace dynleiden
