#pragma once

#include <cstdint>
#include <cstring>
#include <memory>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "erw/site.hpp"

namespace erw {

namespace detail {

inline constexpr int kPageBits = 5;          // 32x32 cells per page
inline constexpr int kPageSide = 1 << kPageBits;
inline constexpr int kPageCells = kPageSide * kPageSide;

inline constexpr uint64_t page_key(int32_t x, int32_t y) {
  return (uint64_t(uint32_t(x >> kPageBits)) << 32) |
         uint64_t(uint32_t(y >> kPageBits));
}

inline constexpr int cell_index(int32_t x, int32_t y) {
  return ((y & (kPageSide - 1)) << kPageBits) | (x & (kPageSide - 1));
}

// Flat byte model for the page directory: hash node plus bucket slot. Used
// by the stores' memory accounting, which the acceptance suite compares.
inline constexpr uint64_t kPageMapNodeBytes = 64;

}  // namespace detail

/// Set of visited non-floor vertices, stored as one height per column.
///
/// Each (x, y) column holds the contiguous interval [1, h]. Heights live in
/// a paged byte grid (32x32 cells per page) so queries from a walking
/// process stay inside one hot page; columns taller than 254 spill into a
/// side map. While the walk descends through fresh vertices the newly
/// recorded sites form a single detached interval [lo, hi] above the column
/// base; it merges into the base when the descent reaches it. Insertion
/// order must keep intervals contiguous (walk histories do; arbitrary
/// orders that would create a second gap are rejected).
class ColumnStore {
 public:
  ColumnStore() = default;

  bool contains(const Site& s) const {
    if (s.z < 1) return false;
    if (descent_.active && s.x == descent_.x && s.y == descent_.y &&
        s.z >= descent_.lo && s.z <= descent_.hi)
      return true;
    return s.z <= height(s.x, s.y);
  }

  /// Records a visited non-floor vertex. Throws on floor vertices and on
  /// insertions that would fragment a column into more than base+descent.
  void insert(const Site& s) {
    if (s.z < 1) throw std::invalid_argument("ColumnStore: floor vertex");
    const int32_t h = height(s.x, s.y);
    if (descent_.active && s.x == descent_.x && s.y == descent_.y) {
      if (s.z >= descent_.lo && s.z <= descent_.hi) return;  // already present
      if (s.z == descent_.lo - 1) {
        descent_.lo = s.z;
        account_site(s);
        if (descent_.lo == h + 1) merge_descent(h);
        return;
      }
      if (s.z == descent_.hi + 1) {
        descent_.hi = s.z;
        account_site(s);
        return;
      }
      if (s.z <= h) return;
      throw std::logic_error("ColumnStore: non-contiguous insert");
    }
    if (s.z <= h) return;  // already present
    if (s.z == h + 1) {
      set_height(s.x, s.y, s.z);
      account_site(s);
      return;
    }
    if (descent_.active)
      throw std::logic_error("ColumnStore: second detached interval");
    descent_ = {true, s.x, s.y, s.z, s.z};
    account_site(s);
  }

  /// True when every column is a full interval [1, h]; during a descent the
  /// detached interval makes the configuration transiently non-closed.
  bool downward_closed() const { return !descent_.active; }

  bool has_open_descent() const { return descent_.active; }

  uint64_t size() const { return count_; }
  bool empty() const { return count_ == 0; }

  /// Order-independent digest of the member set; updated per recorded site.
  uint64_t fingerprint() const { return fingerprint_; }

  int32_t column_height(int32_t x, int32_t y) const { return height(x, y); }

  /// Visits every stored site (base intervals, then any open descent).
  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const auto& [key, page] : pages_) {
      const int32_t bx = int32_t(uint32_t(key >> 32)) << detail::kPageBits;
      const int32_t by = int32_t(uint32_t(key)) << detail::kPageBits;
      for (int c = 0; c < detail::kPageCells; ++c) {
        const uint8_t raw = page->h[c];
        if (raw == 0) continue;
        const int32_t x = bx + (c & (detail::kPageSide - 1));
        const int32_t y = by + (c >> detail::kPageBits);
        const int32_t h = raw == kTallSentinel ? tall_.at(pack_xy(x, y))
                                               : int32_t(raw);
        for (int32_t z = 1; z <= h; ++z) fn(Site{x, y, z});
      }
    }
    if (descent_.active)
      for (int32_t z = descent_.lo; z <= descent_.hi; ++z)
        fn(Site{descent_.x, descent_.y, z});
  }

  void clear() {
    pages_.clear();
    tall_.clear();
    descent_ = {};
    count_ = 0;
    fingerprint_ = 0;
    bytes_ = 0;
    cached_key_ = kNoPage;
    cached_page_ = nullptr;
  }

  uint64_t bytes_current() const { return bytes_; }
  uint64_t bytes_peak() const { return bytes_peak_; }

 private:
  static constexpr uint8_t kTallSentinel = 255;
  static constexpr uint64_t kNoPage = ~uint64_t(0);

  struct Page {
    uint8_t h[detail::kPageCells];
  };

  struct Descent {
    bool active = false;
    int32_t x = 0, y = 0;
    int32_t lo = 0, hi = 0;
  };

  const Page* find_page(int32_t x, int32_t y) const {
    const uint64_t key = detail::page_key(x, y);
    if (key == cached_key_) return cached_page_;
    auto it = pages_.find(key);
    if (it == pages_.end()) return nullptr;
    cached_key_ = key;
    cached_page_ = it->second.get();
    return cached_page_;
  }

  Page* obtain_page(int32_t x, int32_t y) {
    const uint64_t key = detail::page_key(x, y);
    if (key == cached_key_) return cached_page_;
    auto it = pages_.find(key);
    if (it == pages_.end()) {
      auto page = std::make_unique<Page>();
      std::memset(page->h, 0, sizeof(page->h));
      it = pages_.emplace(key, std::move(page)).first;
      bytes_ += sizeof(Page) + detail::kPageMapNodeBytes;
      if (bytes_ > bytes_peak_) bytes_peak_ = bytes_;
    }
    cached_key_ = key;
    cached_page_ = it->second.get();
    return cached_page_;
  }

  int32_t height(int32_t x, int32_t y) const {
    const Page* page = find_page(x, y);
    if (page == nullptr) return 0;
    const uint8_t raw = page->h[detail::cell_index(x, y)];
    if (raw != kTallSentinel) return int32_t(raw);
    return tall_.at(pack_xy(x, y));
  }

  void set_height(int32_t x, int32_t y, int32_t h) {
    Page* page = obtain_page(x, y);
    uint8_t& cell = page->h[detail::cell_index(x, y)];
    if (h < kTallSentinel) {
      if (cell == kTallSentinel) tall_.erase(pack_xy(x, y));
      cell = uint8_t(h);
      return;
    }
    if (cell != kTallSentinel) {
      bytes_ += detail::kPageMapNodeBytes;
      if (bytes_ > bytes_peak_) bytes_peak_ = bytes_;
    }
    cell = kTallSentinel;
    tall_[pack_xy(x, y)] = h;
  }

  void merge_descent(int32_t base) {
    (void)base;
    set_height(descent_.x, descent_.y, descent_.hi);
    descent_.active = false;
  }

  void account_site(const Site& s) {
    ++count_;
    fingerprint_ ^= mix64(pack_site(s));
  }

  std::unordered_map<uint64_t, std::unique_ptr<Page>, XYHash> pages_;
  std::unordered_map<uint64_t, int32_t, XYHash> tall_;
  Descent descent_;
  uint64_t count_ = 0;
  uint64_t fingerprint_ = 0;
  uint64_t bytes_ = 0;
  uint64_t bytes_peak_ = 0;
  mutable uint64_t cached_key_ = kNoPage;
  mutable Page* cached_page_ = nullptr;
};

namespace detail {

struct AllocCounter {
  uint64_t current = 0;
  uint64_t peak = 0;

  void add(uint64_t n) {
    current += n;
    if (current > peak) peak = current;
  }
  void sub(uint64_t n) { current -= n; }
};

template <class T>
class CountingAllocator {
 public:
  using value_type = T;

  explicit CountingAllocator(AllocCounter* counter) : counter_(counter) {}
  template <class U>
  CountingAllocator(const CountingAllocator<U>& other)
      : counter_(other.counter_) {}

  T* allocate(size_t n) {
    counter_->add(n * sizeof(T));
    return static_cast<T*>(::operator new(n * sizeof(T)));
  }
  void deallocate(T* p, size_t n) {
    counter_->sub(n * sizeof(T));
    ::operator delete(p);
  }

  template <class U>
  bool operator==(const CountingAllocator<U>& other) const {
    return counter_ == other.counter_;
  }

  AllocCounter* counter_;
};

}  // namespace detail

/// Reference implementation of the visited set: one hash entry per site.
/// Allocation is instrumented so the column store's footprint can be
/// compared against it.
class NaiveSet {
 public:
  NaiveSet()
      : counter_(std::make_unique<detail::AllocCounter>()),
        set_(0, SiteHash{}, std::equal_to<Site>{},
             detail::CountingAllocator<Site>(counter_.get())) {}

  bool contains(const Site& s) const { return set_.find(s) != set_.end(); }

  void insert(const Site& s) {
    if (s.z < 1) throw std::invalid_argument("NaiveSet: floor vertex");
    if (set_.insert(s).second) fingerprint_ ^= mix64(pack_site(s));
  }

  bool downward_closed() const {
    for (const Site& s : set_)
      if (s.z > 1 && !contains(Site{s.x, s.y, s.z - 1})) return false;
    return true;
  }

  uint64_t size() const { return set_.size(); }
  bool empty() const { return set_.empty(); }
  uint64_t fingerprint() const { return fingerprint_; }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (const Site& s : set_) fn(s);
  }

  void clear() {
    set_.clear();
    fingerprint_ = 0;
  }

  uint64_t bytes_current() const { return counter_->current; }
  uint64_t bytes_peak() const { return counter_->peak; }

 private:
  std::unique_ptr<detail::AllocCounter> counter_;
  std::unordered_set<Site, SiteHash, std::equal_to<Site>,
                     detail::CountingAllocator<Site>>
      set_;
  uint64_t fingerprint_ = 0;
};

/// Runs a ColumnStore and a NaiveSet side by side and cross-checks every
/// membership answer. Differential-testing aid; not for production walks.
class DualStore {
 public:
  bool contains(const Site& s) const {
    const bool a = column.contains(s);
    const bool b = naive.contains(s);
    if (a != b) throw std::logic_error("DualStore: membership disagreement");
    return a;
  }

  void insert(const Site& s) {
    column.insert(s);
    naive.insert(s);
    if (column.size() != naive.size())
      throw std::logic_error("DualStore: size disagreement");
  }

  uint64_t size() const { return naive.size(); }
  bool empty() const { return naive.empty(); }
  uint64_t fingerprint() const { return naive.fingerprint(); }

  void clear() {
    column.clear();
    naive.clear();
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    naive.for_each(fn);
  }

  bool downward_closed() const {
    const bool a = column.downward_closed();
    const bool b = naive.downward_closed();
    if (a != b) throw std::logic_error("DualStore: closure disagreement");
    return a;
  }

  uint64_t bytes_current() const {
    return column.bytes_current() + naive.bytes_current();
  }
  uint64_t bytes_peak() const {
    return column.bytes_peak() + naive.bytes_peak();
  }

  ColumnStore column;
  NaiveSet naive;
};

/// Paged bitmap over (x, y); tracks which floor points a walk has occupied.
class FloorMap {
 public:
  /// Marks (x, y); returns true when it was not marked before.
  bool test_and_set(int32_t x, int32_t y) {
    Page* page = obtain_page(x, y);
    const int cell = detail::cell_index(x, y);
    uint64_t& word = page->bits[cell >> 6];
    const uint64_t bit = uint64_t(1) << (cell & 63);
    if (word & bit) return false;
    word |= bit;
    return true;
  }

  bool test(int32_t x, int32_t y) const {
    const uint64_t key = detail::page_key(x, y);
    auto it = pages_.find(key);
    if (it == pages_.end()) return false;
    const int cell = detail::cell_index(x, y);
    return (it->second->bits[cell >> 6] >> (cell & 63)) & 1;
  }

  void clear() {
    pages_.clear();
    cached_key_ = ~uint64_t(0);
    cached_page_ = nullptr;
  }

 private:
  struct Page {
    uint64_t bits[detail::kPageCells / 64];
  };

  Page* obtain_page(int32_t x, int32_t y) {
    const uint64_t key = detail::page_key(x, y);
    if (key == cached_key_) return cached_page_;
    auto it = pages_.find(key);
    if (it == pages_.end()) {
      auto page = std::make_unique<Page>();
      std::memset(page->bits, 0, sizeof(page->bits));
      it = pages_.emplace(key, std::move(page)).first;
    }
    cached_key_ = key;
    cached_page_ = it->second.get();
    return cached_page_;
  }

  std::unordered_map<uint64_t, std::unique_ptr<Page>, XYHash> pages_;
  uint64_t cached_key_ = ~uint64_t(0);
  Page* cached_page_ = nullptr;
};

}  // namespace erw
