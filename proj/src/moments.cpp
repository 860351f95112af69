#include "bergman/moments.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace bergman {

LazySequence::LazySequence(Filler fill, std::size_t capacity)
    : fill_(std::move(fill)), capacity_(capacity) {
  const std::size_t chunk_count = (capacity_ + kChunk - 1) / kChunk;
  chunks_ = std::make_unique<std::unique_ptr<double[]>[]>(chunk_count);
}

void LazySequence::ensure(std::size_t count) const {
  if (count <= published_.load(std::memory_order_acquire)) return;
  if (count > capacity_) {
    throw ResourceError("moment table capacity exceeded: requested " + std::to_string(count) +
                        " entries, capacity " + std::to_string(capacity_));
  }
  std::lock_guard<std::mutex> lock(extend_);
  std::size_t done = published_.load(std::memory_order_relaxed);
  while (done < count) {
    const std::size_t chunk = done >> kChunkBits;
    const std::size_t begin = chunk * kChunk;
    const std::size_t end = std::min(begin + kChunk, capacity_);
    auto block = std::make_unique<double[]>(kChunk);
    fill_(begin, end, block.get());
    chunks_[chunk] = std::move(block);
    done = end;
    published_.store(done, std::memory_order_release);
  }
}

double LazySequence::operator[](std::size_t index) const {
  if (index >= published_.load(std::memory_order_acquire)) ensure(index + 1);
  return chunks_[index >> kChunkBits][index & (kChunk - 1)];
}

MomentSequence::MomentSequence(RealFn density_t, RealFn tail_t, double t_max, std::size_t capacity)
    : rule_(RadialRule::log_mapped(0.0, t_max, 0.5, 16)),
      log_r_end_(std::log1p(-std::exp(-t_max))),
      tail_(tail_t(t_max)),
      table_([this](std::size_t b, std::size_t e, double* out) { fill(b, e, out); }, capacity) {
  node_weight_.reserve(rule_.nodes().size());
  for (const RadialNode& node : rule_.nodes()) {
    const double t = -std::log(node.one_minus_r);
    // node.weight already carries the factor (1 - r); divide it back out
    // because density_t includes it.
    node_weight_.push_back(density_t(t) * node.weight / node.one_minus_r);
  }
  if (!std::isfinite(tail_) || tail_ < 0.0) throw IntegrabilityError("moment tail is not finite");
}

MomentSequence::MomentSequence(RadialRule rule, const RadialFn& density, double tail_mass, std::size_t capacity)
    : rule_(std::move(rule)),
      log_r_end_(std::log(rule_.r_end())),
      tail_(tail_mass),
      table_([this](std::size_t b, std::size_t e, double* out) { fill(b, e, out); }, capacity) {
  node_weight_.reserve(rule_.nodes().size());
  for (const RadialNode& node : rule_.nodes()) node_weight_.push_back(density(node.r, node.one_minus_r) * node.weight);
  if (!std::isfinite(tail_) || tail_ < 0.0) throw IntegrabilityError("moment tail is not finite");
}

MomentSequence::MomentSequence(LazySequence::Filler exact, std::size_t capacity)
    : table_(std::move(exact), capacity) {}

void MomentSequence::fill(std::size_t begin, std::size_t end, double* out) const {
  const std::size_t count = end - begin;
  std::fill(out, out + count, 0.0);
  constexpr std::size_t kResync = 256;
  constexpr double kUnderflow = -700.0;
  const auto nodes = rule_.nodes();
  // Node-outer accumulation of w_i r_i^k; powers are advanced by
  // multiplication and resynchronized with exp every kResync steps.
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const double w = node_weight_[i];
    if (w == 0.0) continue;
    const double log_r = nodes[i].log_r;
    const double r = nodes[i].r;
    std::size_t k = begin;
    while (k < end) {
      const double exponent = static_cast<double>(k) * log_r;
      if (exponent < kUnderflow) break;
      double power = w * std::exp(exponent);
      const std::size_t stop = std::min(end, k + kResync);
      for (; k < stop; ++k) {
        out[k - begin] += power;
        power *= r;
      }
    }
  }
  for (std::size_t k = begin; k < end; ++k) {
    const double exponent = static_cast<double>(k) * log_r_end_;
    out[k - begin] += tail_ * std::exp(exponent);
  }
}

}  // namespace bergman
