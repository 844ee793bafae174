// Random batch partitions: the shuffle step of the random batch method.
// A partition divides {0..n-1} into n/p disjoint batches of size p,
// uniformly over all such partitions (Fisher-Yates shuffle, then chunking
// into consecutive blocks; every partition corresponds to the same number
// of permutations).

#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "levyrbm/forces.hpp"
#include "levyrbm/rng.hpp"

namespace levyrbm {

struct BatchPartition {
  int n = 0;
  int p = 0;
  std::vector<int> assignment;                  // particle -> batch id
  std::vector<std::vector<int>> batch_members;  // ascending within each batch

  int n_batches() const { return p > 0 ? n / p : 0; }

  // Disjoint cover with exact batch sizes.
  bool valid() const {
    if (n <= 0 || p < 2 || n % p != 0) return false;
    if (static_cast<int>(assignment.size()) != n) return false;
    if (static_cast<int>(batch_members.size()) != n_batches()) return false;
    std::vector<char> seen(n, 0);
    for (int b = 0; b < n_batches(); ++b) {
      if (static_cast<int>(batch_members[b].size()) != p) return false;
      for (int idx : batch_members[b]) {
        if (idx < 0 || idx >= n || seen[idx] || assignment[idx] != b) return false;
        seen[idx] = 1;
      }
    }
    return true;
  }
};

// Build a partition directly from batch member lists (tests, enumeration).
inline BatchPartition make_partition(int n, std::vector<std::vector<int>> members) {
  BatchPartition part;
  part.n = n;
  part.p = members.empty() ? 0 : static_cast<int>(members.front().size());
  part.batch_members = std::move(members);
  part.assignment.assign(n, -1);
  for (int b = 0; b < static_cast<int>(part.batch_members.size()); ++b) {
    std::sort(part.batch_members[b].begin(), part.batch_members[b].end());
    for (int idx : part.batch_members[b]) part.assignment[idx] = b;
  }
  if (!part.valid()) throw std::invalid_argument("make_partition: not a valid batch partition");
  return part;
}

inline BatchPartition random_partition(int n, int p, Substream& rng) {
  if (p < 2) throw std::invalid_argument("random_partition: batch size must be >= 2");
  if (n < p || n % p != 0)
    throw std::invalid_argument("random_partition: batch size must divide particle count");

  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }

  BatchPartition part;
  part.n = n;
  part.p = p;
  part.assignment.assign(n, -1);
  part.batch_members.resize(n / p);
  for (int b = 0; b < n / p; ++b) {
    auto& members = part.batch_members[b];
    members.assign(perm.begin() + static_cast<std::ptrdiff_t>(b) * p,
                   perm.begin() + static_cast<std::ptrdiff_t>(b + 1) * p);
    // Ascending member order keeps the force summation order identical to
    // the full O(N^2) loop, so p = n reproduces it bitwise.
    std::sort(members.begin(), members.end());
    for (int idx : members) part.assignment[idx] = b;
  }
  return part;
}

// Batch-restricted mean force on particle i:
// (1/(p-1)) sum over batch-mates j != i of K(x_j - x_i).
inline void batch_mean_force(int i, const BatchPartition& partition,
                             const ParticleEnsemble& state, const InteractionKernel& kernel,
                             double* out, std::uint64_t* eval_count = nullptr) {
  const int dim = state.dim;
  if (i < 0 || i >= state.n) throw std::out_of_range("batch_mean_force: particle index");
  if (partition.n != state.n)
    throw std::invalid_argument("batch_mean_force: partition does not match ensemble size");
  for (int k = 0; k < dim; ++k) out[k] = 0.0;

  double dx[8];
  double kv[8];
  if (dim > 8) throw std::invalid_argument("batch_mean_force: dim > 8 unsupported");
  const double* xi = state.pos(i);
  const auto& mates = partition.batch_members[partition.assignment[i]];
  std::uint64_t evals = 0;
  for (int j : mates) {
    if (j == i) continue;
    const double* xj = state.pos(j);
    for (int k = 0; k < dim; ++k) dx[k] = xj[k] - xi[k];
    kernel.evaluate(dx, kv, dim);
    ++evals;
    for (int k = 0; k < dim; ++k) out[k] += kv[k];
  }
  const double inv = 1.0 / (partition.p - 1);
  for (int k = 0; k < dim; ++k) out[k] *= inv;
  if (eval_count) *eval_count += evals;
}

}  // namespace levyrbm
