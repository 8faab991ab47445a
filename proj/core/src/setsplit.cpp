#include "disclab/setsplit.hpp"

#include <algorithm>
#include <bit>
#include <cstdlib>
#include <set>
#include <string>
#include <thread>

#include "disclab/rng.hpp"

namespace disclab {

namespace {

int thread_count(int requested) {
  if (requested > 0) return requested;
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw <= 0) hw = 1;
  if (const char* env = std::getenv("DISCLAB_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

}  // namespace

std::vector<int> SetSplitInstance::occurrences() const {
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const auto& set : sets)
    for (int e : set) {
      if (e < 1 || e > n) fail(ErrorKind::validation, "set element out of range");
      ++deg[static_cast<std::size_t>(e - 1)];
    }
  return deg;
}

void SetSplitInstance::validate() const {
  if (n < 1) fail(ErrorKind::validation, "universe size must be positive");
  if (b < 1) fail(ErrorKind::validation, "occurrence bound must be positive");
  for (const auto& set : sets) {
    std::array<int, 4> sorted = set;
    std::sort(sorted.begin(), sorted.end());
    for (int e : sorted)
      if (e < 1 || e > n) fail(ErrorKind::validation, "set element out of range");
    for (int i = 0; i + 1 < 4; ++i)
      if (sorted[i] == sorted[i + 1])
        fail(ErrorKind::validation, "set elements must be distinct");
  }
  for (int deg : occurrences())
    if (deg > b)
      fail(ErrorKind::validation,
           "element occurs in " + std::to_string(deg) + " sets, bound is " +
               std::to_string(b));
  if (4LL * m() > static_cast<long long>(b) * n)
    fail(ErrorKind::validation, "4m > bn");
}

void Assignment::validate() const {
  for (int v : values)
    if (v != 1 && v != -1)
      fail(ErrorKind::validation, "assignment entries must be +1 or -1");
}

SplitReport evaluate(const SetSplitInstance& instance, const Assignment& a) {
  if (a.size() != instance.n)
    fail(ErrorKind::dimension, "assignment length " + std::to_string(a.size()) +
                                   " does not match universe size " +
                                   std::to_string(instance.n));
  a.validate();
  SplitReport report;
  report.per_set_sums.reserve(instance.sets.size());
  for (const auto& set : instance.sets) {
    int sum = 0;
    for (int e : set) sum += a.values[static_cast<std::size_t>(e - 1)];
    report.per_set_sums.push_back(sum);
    if (sum == 0)
      ++report.split_count;
    else
      ++report.unsplit_count;
  }
  const int m = instance.m();
  report.unsplit_fraction = m == 0 ? 0.0 : static_cast<double>(report.unsplit_count) / m;
  return report;
}

namespace {

// Walks masks in increasing order over [first, last), maintaining per-set
// sums incrementally: stepping from mask to mask+1 flips the low run of bits,
// which is amortized O(1) flips per step. Bit j of the mask encodes element
// n-j (so increasing mask order is lexicographic in the assignment with
// +1 < -1 and element 1 most significant).
struct RangeScan {
  int best_unsplit;
  std::uint64_t best_mask;
};

RangeScan scan_range(const SetSplitInstance& instance, std::uint64_t first,
                     std::uint64_t last) {
  const int n = instance.n;
  const int m = instance.m();
  std::vector<std::vector<int>> sets_of(static_cast<std::size_t>(n));
  for (int j = 0; j < m; ++j)
    for (int e : instance.sets[static_cast<std::size_t>(j)])
      sets_of[static_cast<std::size_t>(e - 1)].push_back(j);

  std::vector<int> sign(static_cast<std::size_t>(n));   // by element index
  std::vector<int> sums(static_cast<std::size_t>(m), 0);
  for (int i = 0; i < n; ++i) {
    const int bit = n - 1 - i;
    sign[static_cast<std::size_t>(i)] = ((first >> bit) & 1u) ? -1 : 1;
  }
  for (int j = 0; j < m; ++j) {
    int s = 0;
    for (int e : instance.sets[static_cast<std::size_t>(j)])
      s += sign[static_cast<std::size_t>(e - 1)];
    sums[static_cast<std::size_t>(j)] = s;
  }
  auto unsplit_count = [&]() {
    int u = 0;
    for (int s : sums)
      if (s != 0) ++u;
    return u;
  };

  RangeScan result{unsplit_count(), first};
  for (std::uint64_t mask = first; ++mask < last;) {
    std::uint64_t flipped = mask ^ (mask - 1);  // low run incl. new bit
    while (flipped != 0) {
      const int bit = std::countr_zero(flipped);
      flipped &= flipped - 1;
      const int element = n - 1 - bit;
      const int delta = -2 * sign[static_cast<std::size_t>(element)];
      sign[static_cast<std::size_t>(element)] += delta;
      for (int j : sets_of[static_cast<std::size_t>(element)])
        sums[static_cast<std::size_t>(j)] += delta;
    }
    const int u = unsplit_count();
    if (u < result.best_unsplit) {
      result.best_unsplit = u;
      result.best_mask = mask;
    }
  }
  return result;
}

Assignment assignment_from_mask(int n, std::uint64_t mask) {
  Assignment a;
  a.values.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i)
    a.values[static_cast<std::size_t>(i)] = ((mask >> (n - 1 - i)) & 1u) ? -1 : 1;
  return a;
}

}  // namespace

ExhaustiveResult exhaustive_min_unsplit(const SetSplitInstance& instance,
                                        const ExhaustiveOptions& options) {
  instance.validate();
  if (instance.n > options.cap)
    fail(ErrorKind::capacity, "universe size " + std::to_string(instance.n) +
                                  " exceeds enumeration cap " +
                                  std::to_string(options.cap));
  const int m = instance.m();
  ExhaustiveResult result;
  if (m == 0) {
    result.best = assignment_from_mask(instance.n, 0);
    return result;  // 0/0 defined as 0
  }

  const std::uint64_t total = std::uint64_t{1} << instance.n;
  int threads = thread_count(options.threads);
  if (total < 4096) threads = 1;
  std::vector<RangeScan> partial(static_cast<std::size_t>(threads));
  if (threads == 1) {
    partial[0] = scan_range(instance, 0, total);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = total / static_cast<std::uint64_t>(threads);
    for (int t = 0; t < threads; ++t) {
      const std::uint64_t first = chunk * static_cast<std::uint64_t>(t);
      const std::uint64_t last = (t + 1 == threads) ? total : first + chunk;
      pool.emplace_back([&, t, first, last]() {
        partial[static_cast<std::size_t>(t)] = scan_range(instance, first, last);
      });
    }
    for (auto& th : pool) th.join();
  }

  // Merge in thread order; lexicographically smallest mask wins ties.
  RangeScan best = partial[0];
  for (int t = 1; t < threads; ++t) {
    const auto& cand = partial[static_cast<std::size_t>(t)];
    if (cand.best_unsplit < best.best_unsplit ||
        (cand.best_unsplit == best.best_unsplit && cand.best_mask < best.best_mask))
      best = cand;
  }

  result.best = assignment_from_mask(instance.n, best.best_mask);
  result.min_unsplit_count = best.best_unsplit;
  result.min_unsplit_fraction = static_cast<double>(best.best_unsplit) / m;
  return result;
}

namespace {

constexpr int kSetAttempts = 20000;
constexpr int kInstanceRestarts = 200;

void check_generator_args(int n, int m, int b) {
  if (n < 4) fail(ErrorKind::parameter, "universe size must be at least 4");
  if (m < 1) fail(ErrorKind::parameter, "set count must be positive");
  if (b < 1) fail(ErrorKind::parameter, "occurrence bound must be positive");
  if (4LL * m > static_cast<long long>(b) * n)
    fail(ErrorKind::parameter,
         "4m > bn (" + std::to_string(4LL * m) + " > " +
             std::to_string(static_cast<long long>(b) * n) + ")");
}

// Draws `want` distinct elements from the residual-capacity slot pool (each
// element carries b - deg slots), optionally restricted to one sign class.
// Sampling by slot keeps tight instances (4m close to bn) completable, which
// plain uniform picks are not once most elements are saturated.
bool draw_from_pool(std::mt19937_64& rng, const std::vector<int>& deg, int b,
                    const std::vector<int>* allowed, int want,
                    std::vector<int>& out) {
  std::vector<int> pool;
  if (allowed == nullptr) {
    for (int e = 1; e <= static_cast<int>(deg.size()); ++e)
      for (int k = deg[static_cast<std::size_t>(e - 1)]; k < b; ++k)
        pool.push_back(e);
  } else {
    for (int e : *allowed)
      for (int k = deg[static_cast<std::size_t>(e - 1)]; k < b; ++k)
        pool.push_back(e);
  }
  for (int picked = 0; picked < want; ++picked) {
    if (pool.empty()) return false;
    const int e = pool[static_cast<std::size_t>(
        uniform_below(rng, static_cast<std::uint64_t>(pool.size())))];
    out.push_back(e);
    pool.erase(std::remove(pool.begin(), pool.end(), e), pool.end());
  }
  return true;
}

}  // namespace

SetSplitInstance generate_random(int n, int m, int b, std::uint64_t seed) {
  check_generator_args(n, m, b);
  std::mt19937_64 rng(seed);
  for (int restart = 0; restart < kInstanceRestarts; ++restart) {
    SetSplitInstance instance;
    instance.n = n;
    instance.b = b;
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::set<std::array<int, 4>> used;
    bool stuck = false;
    for (int j = 0; j < m && !stuck; ++j) {
      bool placed = false;
      for (int attempt = 0; attempt < kSetAttempts; ++attempt) {
        std::vector<int> draw;
        if (!draw_from_pool(rng, deg, b, nullptr, 4, draw)) break;
        std::array<int, 4> pick{draw[0], draw[1], draw[2], draw[3]};
        std::sort(pick.begin(), pick.end());
        if (used.count(pick)) continue;
        for (int e : pick) ++deg[static_cast<std::size_t>(e - 1)];
        used.insert(pick);
        instance.sets.push_back(pick);
        placed = true;
        break;
      }
      stuck = !placed;
    }
    if (!stuck) {
      instance.validate();
      return instance;
    }
  }
  fail(ErrorKind::generation, "sampling budget exceeded while generating instance");
}

PlantedInstance generate_satisfiable(int n, int m, int b, std::uint64_t seed) {
  check_generator_args(n, m, b);
  std::mt19937_64 rng(seed);
  for (int restart = 0; restart < kInstanceRestarts; ++restart) {
    Assignment hidden;
    hidden.values.resize(static_cast<std::size_t>(n));
    std::vector<int> plus_side, minus_side;
    for (int i = 0; i < n; ++i) {
      hidden.values[static_cast<std::size_t>(i)] = uniform_sign(rng);
      (hidden.values[static_cast<std::size_t>(i)] == 1 ? plus_side : minus_side)
          .push_back(i + 1);
    }
    if (plus_side.size() < 2 || minus_side.size() < 2)
      continue;  // no balanced 4-subset exists

    SetSplitInstance instance;
    instance.n = n;
    instance.b = b;
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    std::set<std::array<int, 4>> used;
    bool stuck = false;
    for (int j = 0; j < m && !stuck; ++j) {
      bool placed = false;
      for (int attempt = 0; attempt < kSetAttempts; ++attempt) {
        // Two elements the hidden assignment labels +1, two labeled -1: the
        // witness splits every emitted set by construction.
        std::vector<int> draw;
        if (!draw_from_pool(rng, deg, b, &plus_side, 2, draw)) break;
        if (!draw_from_pool(rng, deg, b, &minus_side, 2, draw)) break;
        std::array<int, 4> pick{draw[0], draw[1], draw[2], draw[3]};
        std::sort(pick.begin(), pick.end());
        if (used.count(pick)) continue;
        for (int e : pick) ++deg[static_cast<std::size_t>(e - 1)];
        used.insert(pick);
        instance.sets.push_back(pick);
        placed = true;
        break;
      }
      stuck = !placed;
    }
    if (!stuck) {
      instance.validate();
      return PlantedInstance{std::move(instance), std::move(hidden)};
    }
  }
  fail(ErrorKind::generation, "sampling budget exceeded while planting instance");
}

}  // namespace disclab
