// Compares the serial reference classification against the OpenMP-parallel
// run over the same instances; the two must produce identical reports.
#include <omp.h>

#include <iostream>
#include <vector>

#include "conepart/generator.hpp"
#include "conepart/partition.hpp"

using namespace conepart;

namespace {

bool same_report(const PartitionReport& a, const PartitionReport& b) {
  return a.classes == b.classes && a.B == b.B && a.BPrime == b.BPrime && a.N == b.N &&
         a.NPrime == b.NPrime && a.C == b.C && a.O == b.O && a.B0 == b.B0 && a.N0 == b.N0 &&
         a.full == b.full;
}

}  // namespace

int main(int argc, char** argv) {
  int count = 8;
  std::uint64_t seed = 11;
  std::string blocks = "soc:3*2,orthant:2*2,soc:4";
  int m = 5;
  for (int a = 1; a + 1 < argc; a += 2) {
    std::string key = argv[a];
    std::string val = argv[a + 1];
    if (key == "--count") count = std::stoi(val);
    else if (key == "--seed") seed = std::stoull(val);
    else if (key == "--blocks") blocks = val;
    else if (key == "--m") m = std::stoi(val);
    else {
      std::cerr << "usage: bench_classify [--count N] [--seed S] [--blocks SPEC] [--m M]\n";
      return 1;
    }
  }

  SolverConfig config;
  const int threads = omp_get_max_threads();
  std::vector<ConicSystem> systems;
  for (int k = 0; k < count; ++k) {
    GenSpec spec;
    spec.seed = seed + static_cast<std::uint64_t>(k);
    spec.m = m;
    spec.blocks = parse_block_spec(blocks);
    systems.push_back(generate_instance(spec).conic_system());
  }

  std::cout << "instances: " << count << "  blocks: " << blocks << "  m: " << m
            << "  threads: " << threads << "\n";

  double t0 = omp_get_wtime();
  std::vector<ClassificationResult> serial;
  for (const ConicSystem& sys : systems) serial.push_back(classify(sys, config, 1));
  double t_serial = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  std::vector<ClassificationResult> parallel;
  for (const ConicSystem& sys : systems) parallel.push_back(classify(sys, config, threads));
  double t_parallel = omp_get_wtime() - t0;

  bool equal = true;
  for (int k = 0; k < count; ++k)
    if (!same_report(serial[static_cast<size_t>(k)].report, parallel[static_cast<size_t>(k)].report))
      equal = false;

  std::cout << "serial reference: " << t_serial << " s\n";
  std::cout << "openmp (" << threads << " threads): " << t_parallel << " s\n";
  std::cout << "speedup: " << (t_parallel > 0 ? t_serial / t_parallel : 0.0) << "x\n";
  std::cout << "reports identical: " << (equal ? "yes" : "NO") << "\n";
  return equal ? 0 : 1;
}
