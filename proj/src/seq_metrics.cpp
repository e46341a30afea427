#include "seqeval/seq_metrics.hpp"

#include "seqeval/errors.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <unordered_set>

namespace seqeval {

std::size_t levenshtein(std::string_view a, std::string_view b) {
  if (a.size() < b.size()) std::swap(a, b);
  std::vector<std::size_t> row(b.size() + 1);
  std::iota(row.begin(), row.end(), std::size_t{0});
  for (std::size_t i = 1; i <= a.size(); ++i) {
    std::size_t diagonal = row[0];
    row[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t above = row[j];
      row[j] = a[i - 1] == b[j - 1]
                   ? diagonal
                   : 1 + std::min({diagonal, above, row[j - 1]});
      diagonal = above;
    }
  }
  return row[b.size()];
}

double normalized_levenshtein(std::string_view a, std::string_view b) {
  const std::size_t longest = std::max(a.size(), b.size());
  if (longest == 0) return 0.0;
  return static_cast<double>(levenshtein(a, b)) / static_cast<double>(longest);
}

double novelty(const SequenceSet& generated, const SequenceSet& reference) {
  if (generated.empty()) throw InvalidInput("novelty: generated set is empty");
  const std::unordered_set<std::string_view> known(reference.sequences().begin(),
                                                   reference.sequences().end());
  const auto novel = std::count_if(generated.sequences().begin(), generated.sequences().end(),
                                   [&](const std::string& s) { return !known.count(s); });
  return static_cast<double>(novel) / static_cast<double>(generated.size());
}

double uniqueness(const SequenceSet& generated) {
  if (generated.empty()) throw InvalidInput("uniqueness: generated set is empty");
  const std::unordered_set<std::string_view> distinct(generated.sequences().begin(),
                                                      generated.sequences().end());
  return static_cast<double>(distinct.size()) / static_cast<double>(generated.size());
}

double diversity(const SequenceSet& generated, const DiversityParams& params) {
  const std::size_t n = generated.size();
  if (n < 2) throw InvalidInput("diversity: needs at least 2 sequences, got " + std::to_string(n));
  const std::size_t k = params.k.value_or(n - 1);
  if (k < 1) throw InvalidInput("diversity: k must be >= 1");
  if (k > n - 1) {
    throw InvalidInput("diversity: k = " + std::to_string(k) + " exceeds n - 1 = " +
                       std::to_string(n - 1));
  }

  double total = 0.0;
  if (k == n - 1) {
    std::vector<double> dist(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        dist[i * n + j] = dist[j * n + i] = normalized_levenshtein(generated[i], generated[j]);
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double inner = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) inner += dist[i * n + j];
      }
      total += inner / static_cast<double>(n - 1);
    }
  } else {
    std::vector<std::size_t> others(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      std::seed_seq seq{static_cast<std::uint32_t>(params.seed),
                        static_cast<std::uint32_t>(params.seed >> 32),
                        static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(i >> 32)};
      std::mt19937_64 rng(seq);
      for (std::size_t j = 0, at = 0; j < n; ++j) {
        if (j != i) others[at++] = j;
      }
      // Partial Fisher-Yates: the first k slots become a uniform k-subset.
      double inner = 0.0;
      for (std::size_t s = 0; s < k; ++s) {
        std::uniform_int_distribution<std::size_t> pick(s, others.size() - 1);
        std::swap(others[s], others[pick(rng)]);
        inner += normalized_levenshtein(generated[i], generated[others[s]]);
      }
      total += inner / static_cast<double>(k);
    }
  }
  return total / static_cast<double>(n);
}

namespace {

std::set<std::string_view> ngrams(std::string_view s, std::size_t n) {
  std::set<std::string_view> out;
  if (s.size() < n) return out;
  for (std::size_t i = 0; i + n <= s.size(); ++i) out.insert(s.substr(i, n));
  return out;
}

}  // namespace

double ngram_jaccard(const SequenceSet& generated, const SequenceSet& reference,
                     const NgramParams& params) {
  if (params.n < 1) throw InvalidInput("ngram_jaccard: N must be >= 1");
  if (generated.empty()) throw InvalidInput("ngram_jaccard: generated set is empty");
  if (reference.empty()) throw InvalidInput("ngram_jaccard: reference set is empty");

  std::set<std::string_view> pooled;
  for (const auto& s : reference.sequences()) pooled.merge(ngrams(s, params.n));

  double total = 0.0;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const auto own = ngrams(generated[i], params.n);
    std::size_t common = 0;
    for (const auto& g : own) common += pooled.count(g);
    const std::size_t joint = own.size() + pooled.size() - common;
    if (joint == 0) {
      throw InvalidInput("ngram_jaccard: sequence " + std::to_string(i) +
                         " and the reference have no " + std::to_string(params.n) +
                         "-grams (0/0)");
    }
    total += static_cast<double>(common) / static_cast<double>(joint);
  }
  return total / static_cast<double>(generated.size());
}

}  // namespace seqeval
