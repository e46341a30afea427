#pragma once

#include "seqeval/types.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace seqeval {

/// Minimal number of single-character insertions, deletions and substitutions.
std::size_t levenshtein(std::string_view a, std::string_view b);

/// Levenshtein distance over the longer length; 0 for two empty strings.
double normalized_levenshtein(std::string_view a, std::string_view b);

/// Fraction of generated elements whose string does not occur in the reference.
double novelty(const SequenceSet& generated, const SequenceSet& reference);

/// Distinct strings over set size.
double uniqueness(const SequenceSet& generated);

struct DiversityParams {
  /// Others sampled per element; nullopt means all n-1 others.
  std::optional<std::size_t> k;
  std::uint64_t seed = 0;
};

/// Mean over elements of the mean normalized edit distance to other elements.
/// With a sampled k, element i draws its k partners (never itself) from a
/// generator seeded by (seed, i).
double diversity(const SequenceSet& generated, const DiversityParams& params = {});

struct NgramParams {
  std::size_t n = 3;
};

/// Mean Jaccard index between each generated n-gram set and the union of all
/// reference n-grams.
double ngram_jaccard(const SequenceSet& generated, const SequenceSet& reference,
                     const NgramParams& params);

}  // namespace seqeval
