#pragma once

// Histograms of observed pure strategies. A histogram for (observed, alpha)
// is a length-alpha vector of nonnegative counts summing to `observed`.
// Everything downstream indexes histograms by their rank in strictly
// increasing lexicographic order, so that order is the one contract here.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace anongame {

using Histogram = std::vector<int>;

// C(n, k) in unsigned 64-bit; desk-scale arguments only.
inline unsigned long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<unsigned long long>(n - k + i) / i;
  return r;
}

inline std::size_t histogram_count(int observed, int alpha) {
  return static_cast<std::size_t>(binomial(observed + alpha - 1, alpha - 1));
}

// All histograms for (observed, alpha) in increasing lexicographic order,
// e.g. (2,3): (0,0,2) (0,1,1) (0,2,0) (1,0,1) (1,1,0) (2,0,0).
inline std::vector<Histogram> enumerate_histograms(int observed, int alpha) {
  if (alpha < 1 || observed < 0) throw std::invalid_argument("enumerate_histograms: bad shape");
  std::vector<Histogram> out;
  out.reserve(histogram_count(observed, alpha));
  Histogram cur(alpha, 0);
  // Depth-first over positions; counts at each position ascend, so the
  // emitted sequence is lexicographically increasing.
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == alpha - 1) {
      cur[pos] = left;
      out.push_back(cur);
      return;
    }
    for (int v = 0; v <= left; ++v) {
      cur[pos] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, observed);
  return out;
}

// Lexicographic rank of `c` among all histograms with the same sum and length.
// Counts the vectors that agree on a prefix and then take a smaller value.
inline std::size_t histogram_rank(const Histogram& c) {
  int alpha = static_cast<int>(c.size());
  int left = 0;
  for (int v : c) left += v;
  std::size_t rank = 0;
  for (int i = 0; i + 1 < alpha; ++i) {
    for (int v = 0; v < c[i]; ++v)
      rank += binomial(left - v + alpha - i - 2, alpha - i - 2);
    left -= c[i];
  }
  return rank;
}

// A fixed (observed, alpha) shape with the full lexicographic listing.
class HistogramSpace {
public:
  HistogramSpace() : observed_(0), alpha_(1), all_(1, Histogram{0}) {}
  HistogramSpace(int observed, int alpha)
      : observed_(observed), alpha_(alpha), all_(enumerate_histograms(observed, alpha)) {}

  int observed() const { return observed_; }
  int alpha() const { return alpha_; }
  std::size_t size() const { return all_.size(); }
  const Histogram& at(std::size_t i) const { return all_[i]; }
  const std::vector<Histogram>& all() const { return all_; }

  std::size_t rank(const Histogram& c) const {
    if (static_cast<int>(c.size()) != alpha_) throw std::invalid_argument("HistogramSpace: arity mismatch");
    return histogram_rank(c);
  }

private:
  int observed_;
  int alpha_;
  std::vector<Histogram> all_;
};

}  // namespace anongame
