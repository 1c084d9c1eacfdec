#include "splaylab/sequences.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace splaylab {

namespace {

constexpr std::uint64_t kSequenceTag = 0x5e9;

std::uint32_t lo32(std::uint64_t v) { return static_cast<std::uint32_t>(v); }
std::uint32_t hi32(std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); }

double parse_number(std::string_view s, std::string_view context) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad parameter for " + std::string(context) + ": '" +
                                std::string(s) + "'");
  }
  return v;
}

// Splits "name(p)" or "name:p" into name and optional parameter text.
std::pair<std::string_view, std::string_view> split_parameter(std::string_view text) {
  if (const auto open = text.find('('); open != std::string_view::npos) {
    if (text.back() != ')') throw std::invalid_argument("unclosed generator parameter");
    return {text.substr(0, open), text.substr(open + 1, text.size() - open - 2)};
  }
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    return {text.substr(0, colon), text.substr(colon + 1)};
  }
  return {text, {}};
}

}  // namespace

Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag) {
  std::seed_seq seq{lo32(seed), hi32(seed), lo32(stream), hi32(stream), lo32(tag), hi32(tag)};
  return Rng(seq);
}

std::uint64_t uniform_below(Rng& rng, std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below: empty range");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

double uniform_unit(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Tree random_tree(Rng& rng, std::vector<Key> keys) {
  const std::size_t n = keys.size();
  std::vector<Slot> parents(n, kNoSlot);
  struct Range {
    std::size_t lo, hi;
    Slot parent;
  };
  std::vector<Range> stack{{0, n, kNoSlot}};
  while (!stack.empty()) {
    const Range r = stack.back();
    stack.pop_back();
    if (r.lo >= r.hi) continue;
    const std::size_t root = r.lo + uniform_below(rng, r.hi - r.lo);
    parents[root] = r.parent;
    stack.push_back({r.lo, root, static_cast<Slot>(root)});
    stack.push_back({root + 1, r.hi, static_cast<Slot>(root)});
  }
  return Tree::from_parents(std::move(keys), parents);
}

GeneratorSpec parse_generator(std::string_view text) {
  const auto [name, param] = split_parameter(text);
  GeneratorSpec spec;
  if (name == "uniform" || name == "sequential" || name == "repeated-extremes") {
    if (!param.empty()) throw std::invalid_argument(std::string(name) + " takes no parameter");
    spec.kind = name == "uniform"      ? GeneratorKind::Uniform
                : name == "sequential" ? GeneratorKind::Sequential
                                       : GeneratorKind::RepeatedExtremes;
    return spec;
  }
  if (name == "zipf") {
    spec.kind = GeneratorKind::Zipf;
    spec.parameter = param.empty() ? 1.0 : parse_number(param, name);
    if (!(spec.parameter > 0.0) || !std::isfinite(spec.parameter)) {
      throw std::invalid_argument("zipf exponent must be positive");
    }
    return spec;
  }
  if (name == "working-set") {
    spec.kind = GeneratorKind::WorkingSet;
    spec.parameter = param.empty() ? 8.0 : parse_number(param, name);
    if (!(spec.parameter >= 1.0) || spec.parameter != std::floor(spec.parameter) ||
        spec.parameter > 1e9) {
      throw std::invalid_argument("working-set size must be a positive integer");
    }
    return spec;
  }
  throw std::invalid_argument("unknown generator '" + std::string(text) + "'");
}

std::string generator_name(const GeneratorSpec& spec) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    s.erase(s.find_last_not_of('0') + 1);
    if (s.back() == '.') s.pop_back();
    return s;
  };
  switch (spec.kind) {
    case GeneratorKind::Uniform: return "uniform";
    case GeneratorKind::Sequential: return "sequential";
    case GeneratorKind::Zipf: return "zipf(" + num(spec.parameter) + ")";
    case GeneratorKind::WorkingSet: return "working-set(" + num(spec.parameter) + ")";
    case GeneratorKind::RepeatedExtremes: return "repeated-extremes";
  }
  return "uniform";
}

std::vector<Key> generate_sequence(const GeneratorSpec& spec, std::size_t n, std::size_t m,
                                   std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("generator needs n >= 1");
  if (n > kMaxKeys) throw std::invalid_argument("n exceeds the supported key count");
  std::vector<Key> out;
  out.reserve(m);
  Rng rng = substream(seed, 0, kSequenceTag);
  auto uniform_key = [&] { return static_cast<Key>(uniform_below(rng, n)); };

  switch (spec.kind) {
    case GeneratorKind::Uniform:
      for (std::size_t i = 0; i < m; ++i) out.push_back(uniform_key());
      break;
    case GeneratorKind::Sequential:
      for (std::size_t i = 0; i < m; ++i) out.push_back(static_cast<Key>(i % n));
      break;
    case GeneratorKind::RepeatedExtremes:
      for (std::size_t i = 0; i < m; ++i) out.push_back(i % 2 == 0 ? 0 : static_cast<Key>(n - 1));
      break;
    case GeneratorKind::Zipf: {
      std::vector<Key> perm(n);
      for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<Key>(i);
      for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_below(rng, i)]);
      std::vector<double> cdf(n);
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) {
        acc += std::pow(static_cast<double>(r + 1), -spec.parameter);
        cdf[r] = acc;
      }
      for (std::size_t i = 0; i < m; ++i) {
        const double u = uniform_unit(rng) * acc;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        out.push_back(perm[static_cast<std::size_t>(it - cdf.begin())]);
      }
      break;
    }
    case GeneratorKind::WorkingSet: {
      const auto w = static_cast<std::size_t>(spec.parameter);
      std::deque<Key> recent;  // most recent first, distinct
      for (std::size_t i = 0; i < m; ++i) {
        Key k;
        if (!recent.empty() && uniform_below(rng, 4) < 3) {
          k = recent[uniform_below(rng, recent.size())];
        } else {
          k = uniform_key();
        }
        if (const auto it = std::find(recent.begin(), recent.end(), k); it != recent.end()) {
          recent.erase(it);
        }
        recent.push_front(k);
        if (recent.size() > w) recent.pop_back();
        out.push_back(k);
      }
      break;
    }
  }
  return out;
}

}  // namespace splaylab
