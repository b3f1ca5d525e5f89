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

#ifndef LEAKLAB_PAGED_DB_HPP
#define LEAKLAB_PAGED_DB_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "leaklab/bytes.hpp"
#include "leaklab/record.hpp"

namespace leaklab {

// Single-file paged B-tree database model, reduced to what the length
// side-channels depend on: leaf pages filled bottom-up with record-format
// cells, one table per B-tree, file size always a whole number of pages.
// There are no interior pages, overflow chains or freelists; a cell that
// cannot fit in an empty page is rejected. Deleting a row frees its bytes
// inside its page (pages are defragmented, never reclaimed), and inserts
// only ever go to a table's last page.

struct PageConfig {
  size_t page_size = 4096;
  size_t leaf_header_len = 12;
  size_t cell_pointer_len = 2;

  size_t capacity() const { return page_size - leaf_header_len; }
};

// Cell layout: varint(payload_size) || varint(rowid) || payload.
size_t cell_len(int64_t rowid, size_t payload_size);

struct Placement {
  size_t page_index = 0;     // index within the table
  size_t free_space = 0;     // free bytes in that page after the insert
  int pages_allocated = 0;   // 0 or 1
  int64_t rowid = 0;
  size_t cell_size = 0;
};

class Table {
 public:
  Table(std::string name, const PageConfig* config);

  const std::string& name() const { return name_; }

  // Appends a row with the next rowid. Throws OversizedPayload if the record
  // cannot fit a fresh page.
  Placement insert(const Record& record);

  // Re-inserts a specific rowid (used when a row is replaced); the rowid
  // counter is never rewound.
  Placement insert_with_rowid(int64_t rowid, const Record& record);

  // Removes a row; its space becomes reusable within its page. Returns false
  // if the rowid is not live.
  bool erase(int64_t rowid);

  // Overwrites a row's payload without moving it. The encoded size must not
  // change; used for fixed-width bookkeeping rows.
  void overwrite_in_place(int64_t rowid, const Record& record);

  size_t row_count() const { return rows_.size(); }
  size_t page_count() const { return pages_.size(); }
  std::vector<int64_t> rowids() const;
  bool has_row(int64_t rowid) const { return rows_.count(rowid) != 0; }
  const Bytes& payload(int64_t rowid) const;
  int64_t last_rowid() const { return next_rowid_ - 1; }

  size_t free_space(size_t page_index) const;
  size_t last_page_free_space() const { return free_space(pages_.size() - 1); }

  void render_pages(Bytes& out) const;

 private:
  struct Row {
    Bytes payload;
    size_t page = 0;
  };
  struct Page {
    std::vector<int64_t> cells;  // rowids in placement order (oldest first)
    size_t used = 0;             // sum of (pointer + cell) bytes
  };

  Placement place(int64_t rowid, Bytes payload);

  std::string name_;
  const PageConfig* config_;
  std::map<int64_t, Row> rows_;
  std::vector<Page> pages_;
  int64_t next_rowid_ = 1;
};

class Database {
 public:
  explicit Database(PageConfig config = {});

  Table& create_table(const std::string& name);
  Table& table(const std::string& name);
  const Table& table(const std::string& name) const;
  bool has_table(const std::string& name) const;

  const std::vector<std::string>& table_names() const { return order_; }
  const PageConfig& config() const { return config_; }

  size_t page_count() const;

  // Byte image: pages per table in creation order, then page order.
  Bytes serialize() const;
  size_t serialized_size() const { return page_count() * config_.page_size; }

 private:
  PageConfig config_;
  std::vector<std::string> order_;
  std::map<std::string, std::unique_ptr<Table>> tables_;
};

}  // namespace leaklab

#endif  // LEAKLAB_PAGED_DB_HPP
