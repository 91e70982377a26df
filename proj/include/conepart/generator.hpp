#pragma once

#include <cstdint>
#include <string>

#include "conepart/problem_io.hpp"

namespace conepart {

/// Seeded instance generator. Entries live on the integer grid [-2, 2] so
/// the exact rational oracle applies whenever every block is an orthant;
/// identical seed and spec give byte-identical files.
struct GenSpec {
  std::uint64_t seed = 0;
  int m = 3;
  std::vector<ConeBlock> blocks;
  double density = 1.0;  // probability of a nonzero entry
  enum class Planted { None, LpOracle } planted = Planted::None;
  std::string name;  // optional; derived from the spec when empty
};

/// Block spec grammar: comma-separated "orthant:DIM" / "soc:DIM" items, each
/// with an optional "*COUNT" repeat, e.g. "soc:3,orthant:1*6".
std::vector<ConeBlock> parse_block_spec(const std::string& spec);
std::string format_block_spec(const std::vector<ConeBlock>& blocks);

ProblemFile generate_instance(const GenSpec& spec);

}  // namespace conepart
