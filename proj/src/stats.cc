#include "scud/stats.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "scud/parallel.h"

namespace scud {

double round1(double v) {
  return (v < 0 ? -1.0 : 1.0) * std::floor(std::abs(v) * 10.0 + 0.5) / 10.0;
}

namespace {

std::string pct1(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", round1(v));
  return buf;
}

std::map<std::string, size_t> primary_counts(const Corpus& corpus,
                                             unsigned jobs = 1) {
  unsigned workers = jobs > 1 && corpus.size() > 1
                         ? std::min<unsigned>(jobs, corpus.size())
                         : 1;
  std::vector<std::map<std::string, size_t>> parts(workers);
  parallel_for(workers, workers, [&](size_t w) {
    for (size_t i = w; i < corpus.size(); i += workers)
      for (const auto& t : corpus[i].tokens)
        if (t.deprel) ++parts[w][t.deprel->name];
  });
  std::map<std::string, size_t> counts = std::move(parts[0]);
  for (unsigned w = 1; w < workers; ++w)
    for (const auto& [tag, n] : parts[w]) counts[tag] += n;
  return counts;
}

}  // namespace

std::vector<RelationFrequency> relation_frequencies(const Corpus& corpus,
                                                    unsigned jobs) {
  auto counts = primary_counts(corpus, jobs);
  size_t total = 0;
  for (const auto& [tag, n] : counts) total += n;
  if (total == 0) throw std::runtime_error("no attached tokens");
  std::vector<RelationFrequency> rows;
  for (const auto& [tag, n] : counts)
    rows.push_back({tag, n, 100.0 * static_cast<double>(n) / total});
  std::sort(rows.begin(), rows.end(),
            [](const RelationFrequency& a, const RelationFrequency& b) {
              if (a.count != b.count) return a.count > b.count;
              return a.tag < b.tag;
            });
  return rows;
}

TagsetCoverage tagset_coverage(const Corpus& corpus, const Tagset& tagset) {
  TagsetCoverage cov;
  for (const auto& [tag, n] : primary_counts(corpus)) cov.used.insert(tag);
  for (const auto& tag : tagset)
    if (!cov.used.count(tag)) cov.unused.insert(tag);
  return cov;
}

LengthStats length_histogram(const Corpus& corpus) {
  LengthStats stats;
  std::vector<size_t> lengths;
  for (const auto& s : corpus) {
    size_t n = s.surface_count();
    ++stats.histogram[n];
    lengths.push_back(n);
  }
  if (lengths.empty()) return stats;
  std::sort(lengths.begin(), lengths.end());
  size_t total = 0;
  for (size_t n : lengths) total += n;
  stats.mean = static_cast<double>(total) / lengths.size();
  size_t mid = lengths.size() / 2;
  stats.median = lengths.size() % 2
                     ? static_cast<double>(lengths[mid])
                     : (static_cast<double>(lengths[mid - 1]) + lengths[mid]) / 2.0;
  return stats;
}

std::string render_frequencies(const std::vector<RelationFrequency>& rows,
                               bool tsv) {
  std::string out;
  if (tsv) {
    out = "tag\tcount\tpct\n";
    for (const auto& r : rows)
      out += r.tag + "\t" + std::to_string(r.count) + "\t" + pct1(r.percentage) +
             "\n";
    return out;
  }
  size_t width = 4;
  for (const auto& r : rows) width = std::max(width, r.tag.size());
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%-*s %8s %6s\n", static_cast<int>(width),
                "tag", "count", "pct");
  out += buf;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%-*s %8zu %5s%%\n",
                  static_cast<int>(width), r.tag.c_str(), r.count,
                  pct1(r.percentage).c_str());
    out += buf;
  }
  return out;
}

std::string compare_distributions(const Corpus& a, const Corpus& b,
                                  size_t top_k, const std::string& name_a,
                                  const std::string& name_b, bool tsv) {
  if (top_k == 0) throw std::runtime_error("top_k must be positive");
  auto rows_a = relation_frequencies(a);
  auto rows_b = relation_frequencies(b);
  rows_a.resize(std::min(top_k, rows_a.size()));
  rows_b.resize(std::min(top_k, rows_b.size()));
  size_t rows = std::max(rows_a.size(), rows_b.size());
  std::string out;
  char buf[256];
  auto cell = [](const std::vector<RelationFrequency>& v, size_t i,
                 std::string& tag, std::string& pct) {
    if (i < v.size()) {
      tag = v[i].tag;
      pct = pct1(v[i].percentage);
    } else {
      tag = "-";
      pct = "-";
    }
  };
  if (tsv) {
    out = name_a + "_tag\t" + name_a + "_pct\t" + name_b + "_tag\t" + name_b +
          "_pct\n";
    for (size_t i = 0; i < rows; ++i) {
      std::string ta, pa, tb, pb;
      cell(rows_a, i, ta, pa);
      cell(rows_b, i, tb, pb);
      out += ta + "\t" + pa + "\t" + tb + "\t" + pb + "\n";
    }
    return out;
  }
  std::snprintf(buf, sizeof(buf), "%-12s %6s   %-12s %6s\n", name_a.c_str(),
                "pct", name_b.c_str(), "pct");
  out += buf;
  for (size_t i = 0; i < rows; ++i) {
    std::string ta, pa, tb, pb;
    cell(rows_a, i, ta, pa);
    cell(rows_b, i, tb, pb);
    std::snprintf(buf, sizeof(buf), "%-12s %5s%%   %-12s %5s%%\n", ta.c_str(),
                  pa.c_str(), tb.c_str(), pb.c_str());
    out += buf;
  }
  return out;
}

std::string render_lengths(const LengthStats& stats, bool tsv) {
  std::string out;
  char buf[64];
  if (tsv) {
    out = "length\tsentences\n";
    for (const auto& [len, n] : stats.histogram)
      out += std::to_string(len) + "\t" + std::to_string(n) + "\n";
  } else {
    out = "length  sentences\n";
    for (const auto& [len, n] : stats.histogram) {
      std::snprintf(buf, sizeof(buf), "%6zu  %9zu\n", len, n);
      out += buf;
    }
  }
  std::snprintf(buf, sizeof(buf), "mean\t%.2f\nmedian\t%.1f\n", stats.mean,
                stats.median);
  out += buf;
  return out;
}

std::string render_coverage(const TagsetCoverage& cov, bool tsv) {
  std::string out;
  const char* sep = tsv ? "\t" : " ";
  out += "used" + std::string(sep) + std::to_string(cov.used.size()) + "\n";
  for (const auto& t : cov.used) out += sep + t + "\n";
  out += "unused" + std::string(sep) + std::to_string(cov.unused.size()) + "\n";
  for (const auto& t : cov.unused) out += sep + t + "\n";
  return out;
}

}  // namespace scud
