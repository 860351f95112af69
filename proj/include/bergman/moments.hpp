#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <memory>
#include <mutex>

#include "bergman/quadrature.hpp"

namespace bergman {

// Append-only table of doubles filled in chunks on demand. Each index is
// written once, before its chunk is published; readers never observe a
// partially written value.
class LazySequence {
 public:
  // fill(begin, end, out) writes entries [begin, end) to out[0 .. end-begin).
  using Filler = std::function<void(std::size_t, std::size_t, double*)>;

  explicit LazySequence(Filler fill, std::size_t capacity = std::size_t{1} << 26);
  LazySequence(const LazySequence&) = delete;
  LazySequence& operator=(const LazySequence&) = delete;

  double operator[](std::size_t index) const;
  // Makes entries [0, count) available.
  void ensure(std::size_t count) const;
  std::size_t capacity() const { return capacity_; }

 private:
  static constexpr std::size_t kChunkBits = 12;
  static constexpr std::size_t kChunk = std::size_t{1} << kChunkBits;

  Filler fill_;
  std::size_t capacity_;
  std::unique_ptr<std::unique_ptr<double[]>[]> chunks_;
  mutable std::atomic<std::size_t> published_{0};
  mutable std::mutex extend_;
};

// Power moments m_k = \int_0^1 r^k v(r) dr of a density on [0, 1).
// The density is supplied in the boundary variable: density_t(t) returns
// v(r) (1 - r) at r = 1 - e^{-t}, and tail_t(T) returns \int_{r_T}^1 v(r) dr.
// A fixed composite Gauss-Legendre rule covers [0, T) and the remainder is
// r_T^k times the tail, which is exact to O(k e^{-T}).
class MomentSequence {
 public:
  MomentSequence(RealFn density_t, RealFn tail_t, double t_max = 60.0,
                 std::size_t capacity = std::size_t{1} << 26);
  // Moments from an explicit rule; `tail_mass` is the mass beyond rule.r_end().
  MomentSequence(RadialRule rule, const RadialFn& density, double tail_mass,
                 std::size_t capacity = std::size_t{1} << 26);
  // Moments supplied directly by a closed-form filler.
  explicit MomentSequence(LazySequence::Filler exact, std::size_t capacity = std::size_t{1} << 26);

  double operator[](std::size_t k) const { return table_[k]; }
  void ensure(std::size_t count) const { table_.ensure(count); }
  std::size_t capacity() const { return table_.capacity(); }

 private:
  void fill(std::size_t begin, std::size_t end, double* out) const;

  RadialRule rule_;
  std::vector<double> node_weight_;  // v(r_i) (1 - r_i) times the rule weight
  double log_r_end_ = 0.0;
  double tail_ = 0.0;
  LazySequence table_;
};

}  // namespace bergman
