#pragma once

#include <cstddef>
#include <string>

#include "bsb/bits.hpp"
#include "bsb/errors.hpp"

namespace bsb {

/// Number of defective positions selected by the query: sum of x_i * s_i.
inline std::size_t spring_balance(const SecretString& s, const QueryString& x) {
  if (s.size() != x.size()) {
    throw DimensionError("query length " + std::to_string(x.size()) + " != secret length " +
                         std::to_string(s.size()));
  }
  auto sb = s.bits();
  auto xb = x.bits();
  std::size_t total = 0;
  for (std::size_t i = 0; i < sb.size(); ++i) total += sb[i] & xb[i];
  return total;
}

/// Spring balance that keeps its secret to itself and counts every weighing.
class CountingOracle {
 public:
  explicit CountingOracle(SecretString secret) : secret_(std::move(secret)) {}

  std::size_t size() const noexcept { return secret_.size(); }
  std::size_t query_count() const noexcept { return queries_; }

  std::size_t weigh(const QueryString& x) {
    std::size_t f = spring_balance(secret_, x);
    ++queries_;
    return f;
  }

 private:
  SecretString secret_;
  std::size_t queries_ = 0;
};

}  // namespace bsb
