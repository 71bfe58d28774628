#include "boundpop/histogram.hpp"

#include "boundpop/error.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <limits>
#include <map>
#include <random>
#include <sstream>

namespace boundpop {

const char *to_string(Errc code) {
  switch (code) {
  case Errc::malformed_input: return "malformed input";
  case Errc::empty_histogram: return "empty histogram";
  case Errc::duplicate_multiplicity: return "duplicate multiplicity";
  case Errc::no_singletons: return "no singletons";
  case Errc::insufficient_rare_classes: return "insufficient rare-class information";
  case Errc::order_too_large: return "order too large";
  case Errc::recurrence_breakdown: return "recurrence breakdown";
  case Errc::invalid_recurrence: return "invalid recurrence";
  case Errc::eigensolve_failed: return "eigensolve failed";
  case Errc::bootstrap_exhausted: return "bootstrap exhausted";
  case Errc::invalid_argument: return "invalid argument";
  }
  return "unknown error";
}

std::uint64_t entropy_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

namespace {

constexpr auto u64_max = std::numeric_limits<std::uint64_t>::max();

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  if (a > u64_max - b)
    throw Error(Errc::malformed_input, "histogram totals overflow 64 bits");
  return a + b;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > u64_max / a)
    throw Error(Errc::malformed_input, "histogram totals overflow 64 bits");
  return a * b;
}

std::string_view strip(std::string_view s) {
  if (const auto hash = s.find('#'); hash != std::string_view::npos)
    s = s.substr(0, hash);
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
    return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// Splits on spaces/tabs and parses every field as an unsigned integer.
bool parse_fields(std::string_view s, std::vector<std::uint64_t> &out) {
  out.clear();
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t'))
      ++i;
    if (i == s.size())
      break;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t')
      ++j;
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(s.data() + i, s.data() + j, v);
    if (ec != std::errc() || ptr != s.data() + j)
      return false;
    out.push_back(v);
    i = j;
  }
  return true;
}

[[noreturn]] void bad_line(std::size_t line_no, const std::string &why) {
  throw Error(Errc::malformed_input,
              "line " + std::to_string(line_no) + ": " + why);
}

template <typename T> CountHistogram tally(std::span<const T> counts) {
  std::map<std::uint64_t, std::uint64_t> freq;
  for (const T c : counts)
    if (c > 0)
      ++freq[c];
  std::vector<CountHistogram::Entry> entries;
  entries.reserve(freq.size());
  for (const auto &[j, n] : freq)
    entries.push_back({j, n});
  return CountHistogram(std::move(entries));
}

} // namespace

CountHistogram::CountHistogram(std::vector<Entry> entries) {
  std::erase_if(entries, [](const Entry &e) { return e.frequency == 0; });
  if (entries.empty())
    throw Error(Errc::empty_histogram, "histogram has no observed classes");
  std::sort(entries.begin(), entries.end(),
            [](const Entry &a, const Entry &b) {
              return a.multiplicity < b.multiplicity;
            });
  if (entries.front().multiplicity == 0)
    throw Error(Errc::malformed_input,
                "multiplicity 0 is not observable input");
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (entries[i].multiplicity == entries[i - 1].multiplicity)
      throw Error(Errc::duplicate_multiplicity,
                  "duplicate multiplicity " +
                      std::to_string(entries[i].multiplicity));
  for (const auto &e : entries) {
    distinct_ = checked_add(distinct_, e.frequency);
    individuals_ = checked_add(individuals_, checked_mul(e.multiplicity, e.frequency));
  }
  entries_ = std::move(entries);
}

std::uint64_t CountHistogram::frequency(std::uint64_t j) const {
  const auto it = std::lower_bound(
      entries_.begin(), entries_.end(), j,
      [](const Entry &e, std::uint64_t m) { return e.multiplicity < m; });
  return (it != entries_.end() && it->multiplicity == j) ? it->frequency : 0;
}

std::vector<double> CountHistogram::dense_frequencies(std::uint64_t jmax) const {
  std::vector<double> out(jmax, 0.0);
  for (const auto &e : entries_) {
    if (e.multiplicity > jmax)
      break;
    out[e.multiplicity - 1] = static_cast<double>(e.frequency);
  }
  return out;
}

CountHistogram parse_histogram(std::istream &in) {
  std::vector<CountHistogram::Entry> entries;
  std::map<std::uint64_t, std::size_t> seen;
  std::vector<std::uint64_t> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = strip(line);
    if (body.empty())
      continue;
    if (!parse_fields(body, fields) || fields.size() != 2)
      bad_line(line_no, "expected two non-negative integers \"j n_j\"");
    const auto [j, n] = std::pair{fields[0], fields[1]};
    if (j == 0)
      bad_line(line_no, "multiplicity 0 is not observable input");
    if (auto [it, fresh] = seen.emplace(j, line_no); !fresh)
      throw Error(Errc::duplicate_multiplicity,
                  "line " + std::to_string(line_no) +
                      ": duplicate multiplicity " + std::to_string(j) +
                      " (first on line " + std::to_string(it->second) + ")");
    if (n > 0)
      entries.push_back({j, n});
  }
  return CountHistogram(std::move(entries));
}

CountHistogram parse_histogram(const std::string &text) {
  std::istringstream in(text);
  return parse_histogram(in);
}

CountHistogram parse_counts(std::istream &in) {
  std::vector<std::uint64_t> counts;
  std::vector<std::uint64_t> fields;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = strip(line);
    if (body.empty())
      continue;
    if (!parse_fields(body, fields) || fields.size() != 1)
      bad_line(line_no, "expected one non-negative integer count");
    counts.push_back(fields[0]);
  }
  return from_counts(counts);
}

CountHistogram from_counts(std::span<const std::uint64_t> counts) {
  return tally(counts);
}

CountHistogram from_counts(std::span<const std::uint32_t> counts) {
  return tally(counts);
}

void render(std::ostream &out, const CountHistogram &h) {
  for (const auto &e : h.entries())
    out << e.multiplicity << '\t' << e.frequency << '\n';
}

std::string render(const CountHistogram &h) {
  std::ostringstream out;
  render(out, h);
  return out.str();
}

} // namespace boundpop
