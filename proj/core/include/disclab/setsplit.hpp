#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "disclab/error.hpp"

namespace disclab {

// A (b,2-2) set-splitting instance: a universe {1..n} and m sets of four
// distinct elements, with no element occurring in more than b sets.
struct SetSplitInstance {
  int n = 0;
  int b = 0;
  std::vector<std::array<int, 4>> sets;  // 1-indexed elements

  int m() const { return static_cast<int>(sets.size()); }

  // Occurrence count per element, 0-indexed.
  std::vector<int> occurrences() const;

  // Throws Error{validation} if any invariant fails (distinctness, range,
  // occurrence bound, 4m <= bn).
  void validate() const;
};

// A +-1 labeling of the universe.
struct Assignment {
  std::vector<int> values;

  int size() const { return static_cast<int>(values.size()); }
  void validate() const;  // entries must be exactly +-1
};

struct SplitReport {
  int split_count = 0;
  int unsplit_count = 0;
  std::vector<int> per_set_sums;   // entries in {0, +-2, +-4}
  double unsplit_fraction = 0.0;   // unsplit_count / m, 0 when m == 0
};

// Evaluates the assignment against every set.
SplitReport evaluate(const SetSplitInstance& instance, const Assignment& a);

struct ExhaustiveOptions {
  int cap = 24;     // largest universe enumerated (2^cap assignments)
  int threads = 0;  // 0 = decide from hardware and DISCLAB_THREADS
};

struct ExhaustiveResult {
  Assignment best;               // lexicographically smallest minimizer (+1 < -1)
  int min_unsplit_count = 0;
  double min_unsplit_fraction = 0.0;
};

// Scans all 2^n assignments for the minimum unsplit fraction. The instance is
// satisfiable exactly when the minimum is 0. m == 0 yields 0 by convention.
ExhaustiveResult exhaustive_min_unsplit(const SetSplitInstance& instance,
                                        const ExhaustiveOptions& options = {});

// Seeded instance generator. Sets are sampled by rejection until the
// occurrence bound holds; duplicate sets are never emitted.
SetSplitInstance generate_random(int n, int m, int b, std::uint64_t seed);

struct PlantedInstance {
  SetSplitInstance instance;
  Assignment witness;  // splits every set by construction
};

// Draws a hidden assignment first and only samples sets it splits.
PlantedInstance generate_satisfiable(int n, int m, int b, std::uint64_t seed);

}  // namespace disclab
