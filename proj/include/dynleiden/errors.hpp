#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace dynleiden {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DeletionExceedsWeight : public Error {
 public:
  DeletionExceedsWeight(std::uint64_t u, std::uint64_t v)
      : Error("deletion exceeds weight of edge (" + std::to_string(u) + ", " +
              std::to_string(v) + ")"),
        u(u),
        v(v) {}
  std::uint64_t u;
  std::uint64_t v;
};

class UnknownVertex : public Error {
 public:
  explicit UnknownVertex(std::uint64_t v)
      : Error("unknown vertex " + std::to_string(v)), vertex(v) {}
  std::uint64_t vertex;
};

class UnknownCommunity : public Error {
 public:
  explicit UnknownCommunity(std::uint64_t c)
      : Error("unknown community " + std::to_string(c)), community(c) {}
  std::uint64_t community;
};

class EmptyGraph : public Error {
 public:
  EmptyGraph() : Error("graph has no edge weight; modularity is undefined") {}
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

class NegativeWeight : public Error {
 public:
  explicit NegativeWeight(std::size_t line)
      : Error("line " + std::to_string(line) + ": negative edge weight"), line(line) {}
  std::size_t line;
};

class EdgeNotInIndex : public Error {
 public:
  EdgeNotInIndex(std::uint64_t u, std::uint64_t v)
      : Error("edge (" + std::to_string(u) + ", " + std::to_string(v) +
              ") is not in the connectivity index") {}
};

class NotEnoughEdges : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynleiden
