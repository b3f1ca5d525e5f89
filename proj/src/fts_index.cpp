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

#include "leaklab/fts_index.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "leaklab/errors.hpp"
#include "leaklab/varint.hpp"

namespace leaklab {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> terms;
  std::string current;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      terms.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) terms.push_back(std::move(current));
  return terms;
}

std::vector<TermDoclist> doc_entries(int64_t docid,
                                     const std::vector<std::string>& terms) {
  std::map<std::string, std::vector<uint32_t>> positions;
  for (uint32_t i = 0; i < terms.size(); ++i)
    positions[terms[i]].push_back(i);

  std::vector<TermDoclist> entries;
  entries.reserve(positions.size());
  for (auto& [term, pos] : positions)
    entries.push_back(TermDoclist{term, {Posting{docid, std::move(pos)}}});
  return entries;
}

namespace {

Bytes encode_doclist(const std::vector<Posting>& postings) {
  Bytes out;
  int64_t prev_docid = 0;
  for (const Posting& p : postings) {
    encode_varint(out, static_cast<uint64_t>(p.docid - prev_docid));
    prev_docid = p.docid;
    out.push_back(0x01);  // position-list marker
    encode_varint(out, p.positions.size());
    uint32_t prev_pos = 0;
    for (uint32_t pos : p.positions) {
      encode_varint(out, pos - prev_pos);
      prev_pos = pos;
    }
  }
  return out;
}

}  // namespace

Bytes encode_node(const std::vector<TermDoclist>& entries) {
  Bytes out;
  for (const TermDoclist& e : entries) {
    encode_varint(out, e.term.size());
    append(out, std::string_view(e.term));
    Bytes doclist = encode_doclist(e.postings);
    encode_varint(out, doclist.size());
    append(out, doclist);
  }
  return out;
}

Record segdir_record(const Segment& segment) {
  Record rec;
  rec.add(int64_t{segment.level});
  rec.add(int64_t{segment.ordinal});
  rec.add(int64_t{0});  // start_block
  rec.add(int64_t{0});  // leaves_end_block
  rec.add(int64_t{0});  // end_block
  rec.add(encode_node(segment.entries));
  return rec;
}

size_t segdir_cell_len(const Segment& segment, int64_t rowid,
                       const PageConfig& config) {
  size_t payload = segdir_record(segment).encoded_size();
  if (payload >= config.page_size - 14)
    throw OversizedPayload("segdir node does not fit a root page");
  return cell_len(rowid, payload);
}

FtsIndex::FtsIndex(Database* db, std::string segdir_table, int merge_factor)
    : db_(db), segdir_table_(std::move(segdir_table)),
      merge_factor_(merge_factor) {}

MergeReport FtsIndex::insert(int64_t docid,
                             const std::vector<std::string>& terms) {
  if (docid <= last_docid_)
    throw NonMonotoneDocid("docid " + std::to_string(docid) +
                           " not above " + std::to_string(last_docid_));
  last_docid_ = docid;

  MergeReport report;
  if (terms.empty()) return report;

  Segment seg;
  seg.level = 0;
  seg.ordinal = static_cast<int>(count_at_level(0));
  seg.entries = doc_entries(docid, terms);
  store_segment(seg);
  segments_.push_back(std::move(seg));
  report.segment_created = true;

  cascade_merges(report);
  return report;
}

void FtsIndex::store_segment(Segment& segment) {
  Placement p = db_->table(segdir_table_).insert(segdir_record(segment));
  segment.segdir_rowid = p.rowid;
}

void FtsIndex::cascade_merges(MergeReport& report) {
  for (int level = 0;; ++level) {
    if (count_at_level(level) < static_cast<size_t>(merge_factor_)) break;

    // Collect this level's segments in creation order and fold their
    // doclists together per term.
    std::vector<Segment> merged_away;
    auto it = segments_.begin();
    while (it != segments_.end()) {
      if (it->level == level) {
        merged_away.push_back(std::move(*it));
        it = segments_.erase(it);
      } else {
        ++it;
      }
    }
    std::map<std::string, std::vector<Posting>> combined;
    for (const Segment& seg : merged_away)
      for (const TermDoclist& e : seg.entries)
        for (const Posting& p : e.postings)
          combined[e.term].push_back(p);
    for (auto& [term, postings] : combined)
      std::sort(postings.begin(), postings.end(),
                [](const Posting& a, const Posting& b) {
                  return a.docid < b.docid;
                });

    Segment merged;
    merged.level = level + 1;
    merged.ordinal = static_cast<int>(count_at_level(level + 1));
    for (auto& [term, postings] : combined)
      merged.entries.push_back(TermDoclist{term, std::move(postings)});

    // The new root must fit a page before the old rows are dropped.
    segdir_cell_len(merged, db_->table(segdir_table_).last_rowid() + 1,
                    db_->config());

    for (const Segment& seg : merged_away)
      db_->table(segdir_table_).erase(seg.segdir_rowid);
    store_segment(merged);
    segments_.push_back(std::move(merged));
    report.levels_merged.push_back(level);
  }
}

std::set<int64_t> FtsIndex::query(const std::string& term) const {
  std::set<int64_t> out;
  for (const Segment& seg : segments_)
    for (const TermDoclist& e : seg.entries)
      if (e.term == term)
        for (const Posting& p : e.postings) out.insert(p.docid);
  return out;
}

size_t FtsIndex::count_at_level(int level) const {
  size_t n = 0;
  for (const Segment& seg : segments_)
    if (seg.level == level) ++n;
  return n;
}

std::string FtsIndex::dump_json() const {
  std::ostringstream os;
  os << "[";
  bool first_seg = true;
  for (const Segment& seg : segments_) {
    if (!first_seg) os << ",";
    first_seg = false;
    os << "{\"level\":" << seg.level << ",\"ordinal\":" << seg.ordinal
       << ",\"entries\":[";
    bool first_entry = true;
    for (const TermDoclist& e : seg.entries) {
      if (!first_entry) os << ",";
      first_entry = false;
      os << "{\"term\":\"" << e.term << "\",\"docids\":[";
      for (size_t i = 0; i < e.postings.size(); ++i) {
        if (i) os << ",";
        os << e.postings[i].docid;
      }
      os << "]}";
    }
    os << "]}";
  }
  os << "]";
  return os.str();
}

}  // namespace leaklab
