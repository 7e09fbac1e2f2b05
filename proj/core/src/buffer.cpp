#include "odsim/buffer.hpp"

#include "odsim/error.hpp"

namespace odsim {

Buffer::Buffer(std::size_t capacity, const TileGrid& grid)
    : capacity_(capacity), nx_(grid.nx()), pos_(grid.size(), kAbsent) {
  items_.reserve(capacity);
}

std::optional<double> Buffer::version_of(TileIndex t) const {
  const auto p = pos_[key(t)];
  if (p == kAbsent) return std::nullopt;
  return items_[static_cast<std::size_t>(p)].version;
}

void Buffer::erase_at(std::size_t pos) {
  pos_[key(items_[pos].tile)] = kAbsent;
  items_.erase(items_.begin() + static_cast<std::ptrdiff_t>(pos));
  for (std::size_t i = pos; i < items_.size(); ++i) pos_[key(items_[i].tile)] = static_cast<std::int32_t>(i);
}

OfferResult Buffer::offer(const InfoItem& item, Insertion insertion, Eviction eviction, const RoiSquare& roi,
                          const TileGrid& grid) {
  if (!grid.in_range(item.tile)) throw Error("item tile outside the grid");
  const auto p = pos_[key(item.tile)];
  if (p != kAbsent) {
    InfoItem& stored = items_[static_cast<std::size_t>(p)];
    if (stored.version >= item.version) return OfferResult::Stale;
    stored.version = item.version;
    return OfferResult::Updated;
  }
  if (insertion == Insertion::Selective && !tile_in_roi(item.tile, roi, grid)) return OfferResult::Rejected;
  if (capacity_ == 0) return OfferResult::Dropped;
  OfferResult result = OfferResult::Inserted;
  if (full()) {
    if (eviction == Eviction::Fifo) {
      erase_at(0);
    } else {
      std::size_t victim = items_.size();
      for (std::size_t i = 0; i < items_.size(); ++i) {
        if (!tile_in_roi(items_[i].tile, roi, grid)) {
          victim = i;
          break;
        }
      }
      if (victim == items_.size()) return OfferResult::Dropped;
      erase_at(victim);
    }
    result = OfferResult::Replaced;
  }
  pos_[key(item.tile)] = static_cast<std::int32_t>(items_.size());
  items_.push_back(item);
  return result;
}

void Buffer::clear() {
  for (const auto& it : items_) pos_[key(it.tile)] = kAbsent;
  items_.clear();
}

}  // namespace odsim
