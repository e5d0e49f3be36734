#pragma once

// Folksonomy data model: interned user/resource/tag tables and the tag
// assignment relation grouped into bookmarks.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "folksim/error.hpp"

namespace folksim {

/// Dense 0-based index into one interning table.
template <typename Kind>
struct Id {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const Id&) const = default;
};

using UserId = Id<struct UserKind>;
using ResourceId = Id<struct ResourceKind>;
using TagId = Id<struct TagKind>;

/// Label <-> id bijection, ids assigned in first-seen order.
class Interner {
 public:
  std::uint32_t intern(std::string_view label) {
    if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
    const auto id = static_cast<std::uint32_t>(labels_.size());
    labels_.emplace_back(label);
    index_.emplace(labels_.back(), id);
    return id;
  }

  std::optional<std::uint32_t> find(std::string_view label) const {
    if (auto it = index_.find(std::string(label)); it != index_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& label(std::uint32_t id) const { return labels_.at(id); }
  std::span<const std::string> labels() const { return labels_; }
  std::size_t size() const noexcept { return labels_.size(); }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::uint32_t> index_;
};

/// Tags one user attached to one resource. `tags` is sorted and unique.
struct Bookmark {
  UserId user;
  ResourceId resource;
  std::vector<TagId> tags;

  bool operator==(const Bookmark&) const = default;
};

/// One raw assignment as read from a triple stream. `line` is 1-based; 0 means
/// unknown, in which case errors report the position in the stream.
struct Triple {
  std::string user;
  std::string resource;
  std::string tag;
  std::size_t line = 0;

  bool operator==(const Triple& o) const {
    return user == o.user && resource == o.resource && tag == o.tag;
  }
};

/// Immutable folksonomy. The id tables are shared between a dataset and the
/// train subsets derived from it, so tag ids line up across splits.
class FolksonomyDataset {
 public:
  FolksonomyDataset()
      : users_(std::make_shared<Interner>()),
        resources_(std::make_shared<Interner>()),
        tags_(std::make_shared<Interner>()) {}

  FolksonomyDataset(std::shared_ptr<const Interner> users, std::shared_ptr<const Interner> resources,
                    std::shared_ptr<const Interner> tags, std::vector<Bookmark> bookmarks)
      : users_(std::move(users)),
        resources_(std::move(resources)),
        tags_(std::move(tags)),
        bookmarks_(std::move(bookmarks)) {}

  const Interner& users() const noexcept { return *users_; }
  const Interner& resources() const noexcept { return *resources_; }
  const Interner& tags() const noexcept { return *tags_; }
  std::span<const Bookmark> bookmarks() const noexcept { return bookmarks_; }

  std::size_t user_count() const noexcept { return users_->size(); }
  std::size_t resource_count() const noexcept { return resources_->size(); }
  std::size_t tag_count() const noexcept { return tags_->size(); }
  std::size_t bookmark_count() const noexcept { return bookmarks_.size(); }

  /// Number of (bookmark, tag) memberships, i.e. |AS|.
  std::size_t assignment_count() const noexcept {
    std::size_t n = 0;
    for (const auto& b : bookmarks_) n += b.tags.size();
    return n;
  }

  /// Same id tables, different bookmark list.
  FolksonomyDataset with_bookmarks(std::vector<Bookmark> bookmarks) const {
    return FolksonomyDataset(users_, resources_, tags_, std::move(bookmarks));
  }

  bool same_tables(const FolksonomyDataset& o) const noexcept {
    return users_ == o.users_ && resources_ == o.resources_ && tags_ == o.tags_;
  }

 private:
  std::shared_ptr<const Interner> users_;
  std::shared_ptr<const Interner> resources_;
  std::shared_ptr<const Interner> tags_;
  std::vector<Bookmark> bookmarks_;
};

/// Incremental grouping of triples into bookmarks keyed by (user, resource).
class DatasetBuilder {
 public:
  void add(std::string_view user, std::string_view resource, std::string_view tag,
           std::size_t line = 0) {
    ++position_;
    if (user.empty() || resource.empty() || tag.empty()) {
      throw ParseError("empty label in triple", line ? line : position_);
    }
    const UserId u{users_->intern(user)};
    const ResourceId r{resources_->intern(resource)};
    const TagId t{tags_->intern(tag)};
    const std::uint64_t key = (std::uint64_t{u.value} << 32) | r.value;
    auto [it, inserted] = by_pair_.try_emplace(key, bookmarks_.size());
    if (inserted) bookmarks_.push_back(Bookmark{u, r, {}});
    auto& tags = bookmarks_[it->second].tags;
    if (std::find(tags.begin(), tags.end(), t) == tags.end()) tags.push_back(t);
  }

  void add(const Triple& triple) { add(triple.user, triple.resource, triple.tag, triple.line); }

  FolksonomyDataset build() && {
    for (auto& b : bookmarks_) std::sort(b.tags.begin(), b.tags.end());
    return FolksonomyDataset(std::move(users_), std::move(resources_), std::move(tags_),
                             std::move(bookmarks_));
  }

 private:
  std::shared_ptr<Interner> users_ = std::make_shared<Interner>();
  std::shared_ptr<Interner> resources_ = std::make_shared<Interner>();
  std::shared_ptr<Interner> tags_ = std::make_shared<Interner>();
  std::vector<Bookmark> bookmarks_;
  std::unordered_map<std::uint64_t, std::size_t> by_pair_;
  std::size_t position_ = 0;
};

/// Interns labels in first-seen order and groups triples by (user, resource).
/// Repeated identical triples collapse into a single tag membership.
inline FolksonomyDataset build_dataset(std::span<const Triple> triples) {
  DatasetBuilder builder;
  for (const auto& t : triples) builder.add(t);
  return std::move(builder).build();
}

}  // namespace folksim

template <typename Kind>
struct std::hash<folksim::Id<Kind>> {
  std::size_t operator()(folksim::Id<Kind> id) const noexcept {
    return std::hash<std::uint32_t>{}(id.value);
  }
};
