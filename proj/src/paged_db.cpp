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

#include "leaklab/paged_db.hpp"

#include "leaklab/errors.hpp"
#include "leaklab/varint.hpp"

namespace leaklab {

size_t cell_len(int64_t rowid, size_t payload_size) {
  return varint_len(payload_size) + varint_len(static_cast<uint64_t>(rowid)) +
         payload_size;
}

Table::Table(std::string name, const PageConfig* config)
    : name_(std::move(name)), config_(config) {
  pages_.emplace_back();  // each declared table starts with one leaf page
}

Placement Table::insert(const Record& record) {
  return place(next_rowid_++, record.encode());
}

Placement Table::insert_with_rowid(int64_t rowid, const Record& record) {
  if (rows_.count(rowid)) throw Error("table " + name_ + ": rowid live");
  if (rowid >= next_rowid_) next_rowid_ = rowid + 1;
  return place(rowid, record.encode());
}

Placement Table::place(int64_t rowid, Bytes payload) {
  if (payload.size() >= config_->page_size - 14)
    throw OversizedPayload("table " + name_ + ": payload of " +
                           std::to_string(payload.size()) + " bytes");
  size_t cell = cell_len(rowid, payload.size());
  size_t need = cell + config_->cell_pointer_len;
  if (need > config_->capacity())
    throw OversizedPayload("table " + name_ + ": cell exceeds page capacity");

  Placement out;
  Page* page = &pages_.back();
  if (page->used + need > config_->capacity()) {
    pages_.emplace_back();
    page = &pages_.back();
    out.pages_allocated = 1;
  }
  page->cells.push_back(rowid);
  page->used += need;

  rows_[rowid] = Row{std::move(payload), pages_.size() - 1};
  out.page_index = pages_.size() - 1;
  out.free_space = config_->capacity() - page->used;
  out.rowid = rowid;
  out.cell_size = cell;
  return out;
}

bool Table::erase(int64_t rowid) {
  auto it = rows_.find(rowid);
  if (it == rows_.end()) return false;
  Page& page = pages_[it->second.page];
  for (auto cit = page.cells.begin(); cit != page.cells.end(); ++cit) {
    if (*cit == rowid) {
      page.used -= cell_len(rowid, it->second.payload.size()) +
                   config_->cell_pointer_len;
      page.cells.erase(cit);
      break;
    }
  }
  rows_.erase(it);
  return true;
}

void Table::overwrite_in_place(int64_t rowid, const Record& record) {
  auto it = rows_.find(rowid);
  if (it == rows_.end()) throw Error("table " + name_ + ": no such rowid");
  Bytes payload = record.encode();
  if (payload.size() != it->second.payload.size())
    throw Error("table " + name_ + ": in-place overwrite changed size");
  it->second.payload = std::move(payload);
}

std::vector<int64_t> Table::rowids() const {
  std::vector<int64_t> out;
  out.reserve(rows_.size());
  for (const auto& [rowid, row] : rows_) out.push_back(rowid);
  return out;
}

const Bytes& Table::payload(int64_t rowid) const {
  return rows_.at(rowid).payload;
}

size_t Table::free_space(size_t page_index) const {
  return config_->capacity() - pages_.at(page_index).used;
}

void Table::render_pages(Bytes& out) const {
  for (const Page& page : pages_) {
    size_t base = out.size();
    out.resize(base + config_->page_size, 0);

    // 12-byte leaf header: type, cell count, content start, then zeros.
    out[base] = 0x0d;
    out[base + 1] = static_cast<uint8_t>(page.cells.size() >> 8);
    out[base + 2] = static_cast<uint8_t>(page.cells.size());

    // Cells pack bottom-up: the oldest live cell sits at the very end of the
    // page, each later cell immediately above it.
    size_t offset = config_->page_size;
    size_t ptr = base + config_->leaf_header_len;
    for (int64_t rowid : page.cells) {
      const Row& row = rows_.at(rowid);
      Bytes cell;
      encode_varint(cell, row.payload.size());
      encode_varint(cell, static_cast<uint64_t>(rowid));
      append(cell, row.payload);
      offset -= cell.size();
      out[ptr] = static_cast<uint8_t>(offset >> 8);
      out[ptr + 1] = static_cast<uint8_t>(offset);
      ptr += 2;
      std::copy(cell.begin(), cell.end(), out.begin() + base + offset);
    }
    size_t content_start = offset;
    out[base + 3] = static_cast<uint8_t>(content_start >> 8);
    out[base + 4] = static_cast<uint8_t>(content_start);
  }
}

Database::Database(PageConfig config) : config_(config) {}

Table& Database::create_table(const std::string& name) {
  if (tables_.count(name)) throw Error("duplicate table " + name);
  order_.push_back(name);
  auto [it, ok] = tables_.emplace(name, std::make_unique<Table>(name, &config_));
  return *it->second;
}

Table& Database::table(const std::string& name) {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error("no table " + name);
  return *it->second;
}

const Table& Database::table(const std::string& name) const {
  auto it = tables_.find(name);
  if (it == tables_.end()) throw Error("no table " + name);
  return *it->second;
}

bool Database::has_table(const std::string& name) const {
  return tables_.count(name) != 0;
}

size_t Database::page_count() const {
  size_t n = 0;
  for (const auto& name : order_) n += tables_.at(name)->page_count();
  return n;
}

Bytes Database::serialize() const {
  Bytes out;
  out.reserve(serialized_size());
  for (const auto& name : order_) tables_.at(name)->render_pages(out);
  return out;
}

}  // namespace leaklab
