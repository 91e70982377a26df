#include "conepart/generator.hpp"

#include <random>
#include <sstream>

namespace conepart {

namespace {

double unit_draw(std::mt19937_64& eng) {
  return static_cast<double>(eng() >> 11) * 0x1.0p-53;  // [0, 1)
}

// One matrix draw: zero with probability 1 - density, otherwise uniform on
// {-2, -1, 1, 2}. Uses raw engine words only, so output is identical on
// every platform.
std::vector<Rational> draw_entries(std::mt19937_64& eng, int m, int n, double density) {
  static const int grid[4] = {-2, -1, 1, 2};
  std::vector<Rational> entries(static_cast<size_t>(m) * static_cast<size_t>(n), Rational(0));
  for (Rational& q : entries) {
    if (unit_draw(eng) >= density) continue;
    q = grid[eng() % 4];
  }
  return entries;
}

}  // namespace

std::vector<ConeBlock> parse_block_spec(const std::string& spec) {
  std::vector<ConeBlock> blocks;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    size_t colon = item.find(':');
    if (colon == std::string::npos)
      throw std::invalid_argument("block spec item \"" + item + "\": expected TYPE:DIM");
    std::string type = item.substr(0, colon);
    std::string rest = item.substr(colon + 1);
    int repeat = 1;
    size_t star = rest.find('*');
    if (star != std::string::npos) {
      repeat = std::stoi(rest.substr(star + 1));
      rest = rest.substr(0, star);
    }
    int dim = std::stoi(rest);
    if (dim < 1 || repeat < 1)
      throw std::invalid_argument("block spec item \"" + item + "\": dim and repeat must be >= 1");
    for (int k = 0; k < repeat; ++k) {
      if (type == "orthant")
        blocks.push_back(orthant_block(dim));
      else if (type == "soc")
        blocks.push_back(soc_block(dim));
      else
        throw std::invalid_argument("block spec item \"" + item + "\": unknown type");
    }
  }
  if (blocks.empty()) throw std::invalid_argument("block spec is empty");
  return blocks;
}

std::string format_block_spec(const std::vector<ConeBlock>& blocks) {
  std::string out;
  for (size_t k = 0; k < blocks.size(); ++k) {
    if (k) out += ",";
    out += blocks[k].kind == ConeKind::Orthant ? "orthant:" : "soc:";
    out += std::to_string(blocks[k].dim);
  }
  return out;
}

ProblemFile generate_instance(const GenSpec& spec) {
  if (spec.blocks.empty()) throw std::invalid_argument("generator: no blocks given");
  if (spec.m < 1) throw std::invalid_argument("generator: m must be >= 1");
  if (!(spec.density >= 0.0 && spec.density <= 1.0))
    throw std::invalid_argument("generator: density must be in [0, 1]");

  ProblemFile p;
  p.blocks = spec.blocks;
  p.m = spec.m;
  const int n = p.n();

  if (spec.planted == GenSpec::Planted::LpOracle) {
    for (const ConeBlock& b : spec.blocks)
      if (b.kind != ConeKind::Orthant)
        throw std::invalid_argument("--planted lp-oracle needs all-orthant blocks");
  }

  std::mt19937_64 eng(spec.seed);
  p.entries = draw_entries(eng, spec.m, n, spec.density);
  if (spec.planted == GenSpec::Planted::LpOracle) {
    // resample (deterministically) until both partition sides are inhabited,
    // so the instance actually exercises the oracle
    for (int attempt = 0; attempt < 1000; ++attempt) {
      GtPartition gt = gt_partition_exact(p.rational_matrix());
      if (!gt.B.empty() && !gt.N.empty()) break;
      p.entries = draw_entries(eng, spec.m, n, spec.density);
    }
  }

  if (!spec.name.empty()) {
    p.name = spec.name;
  } else {
    std::ostringstream name;
    name << "gen-seed" << spec.seed << "-m" << spec.m << "-" << format_block_spec(spec.blocks);
    if (spec.planted == GenSpec::Planted::LpOracle) name << "-planted";
    p.name = name.str();
  }
  return p;
}

}  // namespace conepart
