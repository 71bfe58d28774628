#ifndef BOUNDPOP_HISTOGRAM_HPP
#define BOUNDPOP_HISTOGRAM_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace boundpop {

// Count-frequency histogram: n_j classes were observed exactly j times.
// Only j >= 1 with n_j > 0 is stored; n_0 is never observed.
class CountHistogram {
public:
  struct Entry {
    std::uint64_t multiplicity;
    std::uint64_t frequency;
    friend bool operator==(const Entry &, const Entry &) = default;
  };

  // Validates and sorts. Zero-frequency entries are dropped; a zero
  // multiplicity, a repeated multiplicity, or no entries at all throw.
  explicit CountHistogram(std::vector<Entry> entries);

  const std::vector<Entry> &entries() const { return entries_; }
  std::uint64_t distinct() const { return distinct_; }
  std::uint64_t individuals() const { return individuals_; }
  std::uint64_t max_multiplicity() const { return entries_.back().multiplicity; }

  // n_j, or 0 when j is absent.
  std::uint64_t frequency(std::uint64_t j) const;

  // n_1..n_jmax as doubles, gaps filled with zeros.
  std::vector<double> dense_frequencies(std::uint64_t jmax) const;

  friend bool operator==(const CountHistogram &a, const CountHistogram &b) {
    return a.entries_ == b.entries_;
  }

private:
  std::vector<Entry> entries_;
  std::uint64_t distinct_ = 0;
  std::uint64_t individuals_ = 0;
};

// Two-column "j n_j" text; blank lines and '#' comments ignored.
CountHistogram parse_histogram(std::istream &in);
CountHistogram parse_histogram(const std::string &text);

// One non-negative integer count per line, one line per class.
CountHistogram parse_counts(std::istream &in);

CountHistogram from_counts(std::span<const std::uint64_t> counts);
CountHistogram from_counts(std::span<const std::uint32_t> counts);

void render(std::ostream &out, const CountHistogram &h);
std::string render(const CountHistogram &h);

} // namespace boundpop

#endif
