// Copyright 2026 The Leaklab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LEAKLAB_FTS_INDEX_HPP
#define LEAKLAB_FTS_INDEX_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "leaklab/bytes.hpp"
#include "leaklab/paged_db.hpp"

namespace leaklab {

// Inverted index with leveled segment B-trees: every insert creates a
// level-0 segment; when a level accumulates `merge_factor` segments they
// merge into one segment a level up, cascading. Each live segment is one
// row (its encoded root node plus metadata) in a segdir table of the
// backing database, which is where its size becomes observable.
//
// Every segment here is a single root node. The doclist byte grammar is an
// approximation of the real on-disk one — delta varints plus a position
// list marker — chosen so that size orderings (an appended posting is
// always smaller than a fresh term entry) hold exactly.

struct Posting {
  int64_t docid = 0;
  std::vector<uint32_t> positions;
};

struct TermDoclist {
  std::string term;
  std::vector<Posting> postings;
};

struct Segment {
  int level = 0;
  int ordinal = 0;
  std::vector<TermDoclist> entries;  // sorted by term, terms unique
  int64_t segdir_rowid = 0;
};

// Lowercases, replaces non-alphanumeric bytes with whitespace, splits.
std::vector<std::string> tokenize(const std::string& text);

// Builds sorted term->doclist entries for one document.
std::vector<TermDoclist> doc_entries(int64_t docid,
                                     const std::vector<std::string>& terms);

Bytes encode_node(const std::vector<TermDoclist>& entries);

// Record stored in the segdir table for a segment.
Record segdir_record(const Segment& segment);

// Exact byte length of the segdir cell for this segment under `rowid`.
// Throws OversizedPayload when the node cannot fit a page, which signals the
// single-root-node precondition is violated.
size_t segdir_cell_len(const Segment& segment, int64_t rowid,
                       const PageConfig& config = {});

struct MergeReport {
  std::vector<int> levels_merged;
  bool segment_created = false;
};

class FtsIndex {
 public:
  FtsIndex(Database* db, std::string segdir_table, int merge_factor = 16);

  // Indexes one document. Docids must be strictly increasing; a document
  // with no terms leaves the index untouched.
  MergeReport insert(int64_t docid, const std::vector<std::string>& terms);

  std::set<int64_t> query(const std::string& term) const;

  const std::vector<Segment>& segments() const { return segments_; }
  size_t count_at_level(int level) const;
  int merge_factor() const { return merge_factor_; }

  std::string dump_json() const;

 private:
  void store_segment(Segment& segment);
  void cascade_merges(MergeReport& report);

  Database* db_;
  std::string segdir_table_;
  int merge_factor_;
  std::vector<Segment> segments_;
  int64_t last_docid_ = 0;
};

}  // namespace leaklab

#endif  // LEAKLAB_FTS_INDEX_HPP
