#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ued/rng.hpp"

namespace ued {

/// Named real-valued side data stored with each buffered level (e.g. "max_return").
using LevelExtra = std::map<std::string, double>;

enum class Prioritization { rank };

struct SamplerConfig {
  double temperature = 0.3;
  double staleness_coeff = 0.3;
  Prioritization prioritization = Prioritization::rank;
  double replay_prob = 0.5;
  double min_fill_ratio = 0.5;
  bool dedup = true;

  void validate() const {
    if (!(temperature > 0.0)) throw std::invalid_argument("temperature must be positive");
    if (!(staleness_coeff >= 0.0 && staleness_coeff <= 1.0))
      throw std::invalid_argument("staleness_coeff must lie in [0, 1]");
    if (!(replay_prob >= 0.0 && replay_prob <= 1.0)) throw std::invalid_argument("replay_prob must lie in [0, 1]");
    if (!(min_fill_ratio >= 0.0 && min_fill_ratio <= 1.0))
      throw std::invalid_argument("min_fill_ratio must lie in [0, 1]");
  }
};

template <class Level>
struct BufferEntry {
  Level level;
  double score = 0.0;
  std::uint64_t last_touched = 0;
  LevelExtra extra;

  friend bool operator==(const BufferEntry&, const BufferEntry&) = default;
};

/// Rolling buffer of scored levels. The episode counter advances once per
/// touch event (insert batch, update batch, sample batch); staleness of an
/// entry is episode_counter - last_touched.
template <class Level>
class LevelBuffer {
 public:
  explicit LevelBuffer(std::size_t capacity = 4000) : capacity_(capacity) {
    if (capacity_ == 0) throw std::invalid_argument("buffer capacity must be positive");
    entries_.reserve(std::min<std::size_t>(capacity_, 1 << 16));
  }

  std::size_t capacity() const { return capacity_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool full() const { return entries_.size() == capacity_; }
  std::uint64_t episode_counter() const { return episode_counter_; }
  const std::vector<BufferEntry<Level>>& entries() const { return entries_; }
  const BufferEntry<Level>& operator[](std::size_t slot) const { return entries_.at(slot); }

  double mean_score() const {
    if (entries_.empty()) return 0.0;
    double s = 0.0;
    for (const auto& e : entries_) s += e.score;
    return s / static_cast<double>(entries_.size());
  }

  // Low-level mutators used by the batch operations and by checkpoint loading.
  std::uint64_t advance_counter() { return ++episode_counter_; }
  void set_episode_counter(std::uint64_t c) { episode_counter_ = c; }
  BufferEntry<Level>& mutable_entry(std::size_t slot) { return entries_.at(slot); }
  void push_back(BufferEntry<Level> e) {
    if (full()) throw std::length_error("level buffer is full");
    entries_.push_back(std::move(e));
  }

  friend bool operator==(const LevelBuffer&, const LevelBuffer&) = default;

 private:
  std::size_t capacity_;
  std::uint64_t episode_counter_ = 0;
  std::vector<BufferEntry<Level>> entries_;
};

namespace detail {
inline void require_finite(double score) {
  if (!std::isfinite(score)) throw std::invalid_argument("level scores must be finite");
}
}  // namespace detail

/// True once the buffer holds at least min_fill_ratio * capacity levels.
template <class Level>
bool replay_ready(const LevelBuffer<Level>& buffer, const SamplerConfig& config) {
  return static_cast<double>(buffer.size()) >= config.min_fill_ratio * static_cast<double>(buffer.capacity());
}

/// false while the buffer is below the fill threshold; otherwise a
/// Bernoulli(replay_prob) draw.
template <class Level>
bool sample_replay_decision(const LevelBuffer<Level>& buffer, const SamplerConfig& config, RngKey key) {
  if (!replay_ready(buffer, config)) return false;
  RngStream rng(key);
  return rng.bernoulli(config.replay_prob);
}

/// (1 - rho) * P_score + rho * P_stale, with P_score_i proportional to
/// (1 / rank_i)^(1 / temperature). Rank 1 is the highest score; equal scores
/// rank by slot index. P_stale is proportional to staleness, or uniform when
/// every entry is fresh.
template <class Level>
std::vector<double> sampling_weights(const LevelBuffer<Level>& buffer, const SamplerConfig& config) {
  const std::size_t n = buffer.size();
  if (n == 0) throw std::logic_error("sampling_weights on an empty buffer");
  const auto& entries = buffer.entries();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return entries[a].score > entries[b].score; });

  std::vector<double> score_w(n);
  const double inv_t = 1.0 / config.temperature;
  for (std::size_t r = 0; r < n; ++r) score_w[order[r]] = std::pow(1.0 / static_cast<double>(r + 1), inv_t);
  const double score_sum = std::accumulate(score_w.begin(), score_w.end(), 0.0);

  std::vector<double> stale_w(n);
  double stale_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    stale_w[i] = static_cast<double>(buffer.episode_counter() - entries[i].last_touched);
    stale_sum += stale_w[i];
  }

  const double rho = config.staleness_coeff;
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double ps = score_w[i] / score_sum;
    const double pt = stale_sum > 0.0 ? stale_w[i] / stale_sum : 1.0 / static_cast<double>(n);
    p[i] = (1.0 - rho) * ps + rho * pt;
  }
  return p;
}

template <class Level>
struct SampledLevels {
  std::vector<std::size_t> slots;
  std::vector<Level> levels;
};

/// n independent draws (with replacement) from sampling_weights. Every drawn
/// slot is marked touched at the incremented counter.
template <class Level>
SampledLevels<Level> sample_levels(LevelBuffer<Level>& buffer, const SamplerConfig& config, RngKey key,
                                   std::size_t n) {
  const auto p = sampling_weights(buffer, config);
  std::vector<double> cdf(p.size());
  std::partial_sum(p.begin(), p.end(), cdf.begin());
  RngStream rng(key);
  SampledLevels<Level> out;
  out.slots.reserve(n);
  out.levels.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double u = rng.uniform() * cdf.back();
    auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    std::size_t slot = static_cast<std::size_t>(it - cdf.begin());
    if (slot >= cdf.size()) slot = cdf.size() - 1;
    // skip zero-probability slots that upper_bound can land on through rounding
    while (p[slot] == 0.0 && slot + 1 < p.size()) ++slot;
    out.slots.push_back(slot);
    out.levels.push_back(buffer[slot].level);
  }
  const auto now = buffer.advance_counter();
  for (auto slot : out.slots) buffer.mutable_entry(slot).last_touched = now;
  return out;
}

/// Appends while there is room; once full, a candidate replaces the
/// minimum-score entry only if its score is strictly greater. With dedup on,
/// a candidate equal to a stored level updates that entry in place instead.
/// Returns the slot each candidate ended up in (nullopt when rejected).
template <class Level>
std::vector<std::optional<std::size_t>> insert_batch(LevelBuffer<Level>& buffer, std::span<const Level> levels,
                                                     std::span<const double> scores,
                                                     std::span<const LevelExtra> extras, const SamplerConfig& config) {
  if (levels.size() != scores.size() || (!extras.empty() && extras.size() != levels.size()))
    throw std::invalid_argument("insert_batch: levels, scores and extras differ in length");
  for (double s : scores) detail::require_finite(s);

  const auto now = buffer.advance_counter();
  std::vector<std::optional<std::size_t>> placed(levels.size());
  for (std::size_t i = 0; i < levels.size(); ++i) {
    LevelExtra extra = extras.empty() ? LevelExtra{} : extras[i];
    if (config.dedup) {
      const auto& entries = buffer.entries();
      auto it = std::find_if(entries.begin(), entries.end(), [&](const auto& e) { return e.level == levels[i]; });
      if (it != entries.end()) {
        const auto slot = static_cast<std::size_t>(it - entries.begin());
        auto& e = buffer.mutable_entry(slot);
        e.score = scores[i];
        e.extra = std::move(extra);
        e.last_touched = now;
        placed[i] = slot;
        continue;
      }
    }
    if (!buffer.full()) {
      placed[i] = buffer.size();
      buffer.push_back({levels[i], scores[i], now, std::move(extra)});
      continue;
    }
    const auto& entries = buffer.entries();
    std::size_t worst = 0;
    for (std::size_t s = 1; s < entries.size(); ++s)
      if (entries[s].score < entries[worst].score) worst = s;
    if (scores[i] > entries[worst].score) {
      buffer.mutable_entry(worst) = {levels[i], scores[i], now, std::move(extra)};
      placed[i] = worst;
    }
  }
  return placed;
}

/// Overwrites scores and extras of occupied slots. Repeated slots within one
/// batch are applied in order, so the last write wins.
template <class Level>
void update_batch(LevelBuffer<Level>& buffer, std::span<const std::size_t> slots, std::span<const double> scores,
                  std::span<const LevelExtra> extras) {
  if (slots.size() != scores.size() || (!extras.empty() && extras.size() != slots.size()))
    throw std::invalid_argument("update_batch: slots, scores and extras differ in length");
  for (auto slot : slots)
    if (slot >= buffer.size()) throw std::out_of_range("update_batch: slot " + std::to_string(slot) + " is unoccupied");
  for (double s : scores) detail::require_finite(s);
  const auto now = buffer.advance_counter();
  for (std::size_t i = 0; i < slots.size(); ++i) {
    auto& e = buffer.mutable_entry(slots[i]);
    e.score = scores[i];
    if (!extras.empty()) e.extra = extras[i];
    e.last_touched = now;
  }
}

}  // namespace ued
