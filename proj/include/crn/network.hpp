#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crn/rational.hpp"

namespace crn {

/// A complex as its exponent vector, one entry per species.
using Complex = RationalVector;

enum class NetworkMode { chemical, generalized };

/// Rate metadata attached to a reaction line: "| k=VALUE" or "| k in (LO,HI)".
struct FixedRate {
  double value;
  bool operator==(const FixedRate&) const = default;
};
struct RateInterval {
  double lo;
  double hi;
  bool operator==(const RateInterval&) const = default;
};
using RateSpec = std::variant<FixedRate, RateInterval>;

struct Reaction {
  Complex source;
  Complex target;
  std::optional<RateSpec> rate;

  RationalVector vector() const { return target - source; }
  bool operator==(const Reaction&) const = default;
};

/// The three structural conditions a valid network must satisfy.
enum class NetworkCondition {
  no_self_reaction,     // P -> P is forbidden
  complexes_used,       // every complex occurs in some reaction
  species_supported,    // every species appears in some complex
  no_duplicate_reactions,
  consistent_dimension,
  nonnegative_integer,  // chemical mode only
};

std::string_view describe(NetworkCondition c);

class ValidationError : public std::runtime_error {
 public:
  ValidationError(NetworkCondition condition, const std::string& detail);
  NetworkCondition condition() const { return condition_; }

 private:
  NetworkCondition condition_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable, validated reaction network.
class ReactionNetwork {
 public:
  /// Validates and throws ValidationError on the first violated condition.
  ReactionNetwork(std::vector<std::string> species, std::vector<Reaction> reactions,
                  NetworkMode mode = NetworkMode::chemical);

  const std::vector<std::string>& species() const { return species_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  NetworkMode mode() const { return mode_; }
  std::size_t species_count() const { return species_.size(); }
  std::size_t reaction_count() const { return reactions_.size(); }

  /// Distinct complexes in order of first appearance (source before target).
  const std::vector<Complex>& complexes() const { return complexes_; }
  std::size_t complex_index(const Complex& c) const;
  std::size_t source_index(std::size_t reaction) const { return source_idx_[reaction]; }
  std::size_t target_index(std::size_t reaction) const { return target_idx_[reaction]; }

  /// Human-readable complex, e.g. "2X + Y" or "0"; generalized mode prints the vector.
  std::string complex_label(const Complex& c) const;
  std::string reaction_label(std::size_t reaction) const;

 private:
  std::vector<std::string> species_;
  std::vector<Reaction> reactions_;
  NetworkMode mode_;
  std::vector<Complex> complexes_;
  std::vector<std::size_t> source_idx_;
  std::vector<std::size_t> target_idx_;
};

/// Same species and mode, same reactions as a multiset (rate metadata included).
bool equivalent(const ReactionNetwork& a, const ReactionNetwork& b);

ReactionNetwork parse_network(std::string_view text, NetworkMode mode = NetworkMode::chemical);

/// Reads a file; ".gcrn" selects generalized mode, everything else chemical.
ReactionNetwork load_network(const std::string& path);

std::string format_network(const ReactionNetwork& net);

/// Distinct source complexes, sorted lexicographically.
std::vector<Complex> source_complexes(const ReactionNetwork& net);

/// Every reaction P -> P' replaced by P' -> P.
ReactionNetwork reversed(const ReactionNetwork& net);

}  // namespace crn
