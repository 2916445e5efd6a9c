// Relation-frequency distributions, tagset coverage and length statistics.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "scud/conllu.h"
#include "scud/tagset.h"

namespace scud {

struct RelationFrequency {
  std::string tag;     // primary name (subtypes collapsed)
  size_t count = 0;
  double percentage = 0.0;  // exact; rounded only at rendering
};

// Sorted descending by count, ties broken by tag name. Percentages are over
// all attached tokens (surface + empty). Throws on a corpus with none.
std::vector<RelationFrequency> relation_frequencies(const Corpus& corpus,
                                                    unsigned jobs = 1);

struct TagsetCoverage {
  Tagset used;
  Tagset unused;
};
TagsetCoverage tagset_coverage(const Corpus& corpus, const Tagset& tagset);

struct LengthStats {
  std::map<size_t, size_t> histogram;  // surface length -> sentence count
  double mean = 0.0;
  double median = 0.0;
};
LengthStats length_histogram(const Corpus& corpus);

// Rounds half away from zero to one decimal.
double round1(double v);

std::string render_frequencies(const std::vector<RelationFrequency>& rows,
                               bool tsv);
// Side-by-side top-k table for two corpora (columns independent).
std::string compare_distributions(const Corpus& a, const Corpus& b,
                                  size_t top_k, const std::string& name_a,
                                  const std::string& name_b, bool tsv);
std::string render_lengths(const LengthStats& stats, bool tsv);
std::string render_coverage(const TagsetCoverage& cov, bool tsv);

}  // namespace scud
