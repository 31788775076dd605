#include "svp/sft.hpp"

#include <algorithm>

#include "svp/errors.hpp"
#include "svp/util.hpp"

namespace svp {

bool Sft::full_shift() const {
  for (std::uint8_t v : t)
    if (!v) return false;
  return true;
}

bool Sft::admissible(const Word& w) const {
  for (int s : w)
    if (s < 0 || s >= k) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (!transition(w[i], w[i + 1])) return false;
  return !w.empty();
}

namespace {

// Strong connectivity via forward/backward reachability from node 0.
bool strongly_connected(const Sft& sft) {
  int k = sft.k;
  auto reach = [&](bool forward) {
    std::vector<char> seen(std::size_t(k), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (int v = 0; v < k; ++v) {
        bool edge = forward ? sft.transition(u, v) : sft.transition(v, u);
        if (edge && !seen[std::size_t(v)]) {
          seen[std::size_t(v)] = 1;
          stack.push_back(v);
        }
      }
    }
    return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
  };
  return reach(true) && reach(false);
}

}  // namespace

Sft validate_sft(const std::vector<std::vector<int>>& rows) {
  int k = int(rows.size());
  if (k == 0) fail(ErrorCode::NonSquare, "empty matrix");
  Sft sft;
  sft.k = k;
  sft.t.assign(std::size_t(k) * std::size_t(k), 0);
  for (int i = 0; i < k; ++i) {
    if (int(rows[std::size_t(i)].size()) != k)
      fail(ErrorCode::NonSquare, "row " + std::to_string(i) + " has wrong length");
    for (int j = 0; j < k; ++j) {
      int v = rows[std::size_t(i)][std::size_t(j)];
      if (v != 0 && v != 1) fail(ErrorCode::BadInput, "transition entries must be 0 or 1");
      sft.t[std::size_t(i) * std::size_t(k) + std::size_t(j)] = std::uint8_t(v);
    }
  }
  for (int i = 0; i < k; ++i) {
    bool row = false, col = false;
    for (int j = 0; j < k; ++j) {
      row = row || sft.transition(i, j);
      col = col || sft.transition(j, i);
    }
    if (!row) fail(ErrorCode::EmptyRowOrColumn, "row " + std::to_string(i) + " empty");
    if (!col) fail(ErrorCode::EmptyRowOrColumn, "column " + std::to_string(i) + " empty");
  }
  sft.irreducible = strongly_connected(sft);
  return sft;
}

Sft full_shift(int k) {
  std::vector<std::vector<int>> rows(std::size_t(k), std::vector<int>(std::size_t(k), 1));
  return validate_sft(rows);
}

WordCount count_words(const Sft& sft, int n) {
  if (n < 1) fail(ErrorCode::BadInput, "word length must be >= 1");
  int k = sft.k;
  WordCount out;
  // exact pass in uint64 with overflow detection
  std::vector<std::uint64_t> v(std::size_t(k), 1);
  bool overflow = false;
  for (int step = 1; step < n && !overflow; ++step) {
    std::vector<std::uint64_t> next(std::size_t(k), 0);
    for (int i = 0; i < k && !overflow; ++i) {
      for (int j = 0; j < k; ++j) {
        if (!sft.transition(i, j)) continue;
        if (__builtin_add_overflow(next[std::size_t(i)], v[std::size_t(j)],
                                   &next[std::size_t(i)])) {
          overflow = true;
          break;
        }
      }
    }
    v.swap(next);
  }
  if (!overflow) {
    std::uint64_t total = 0;
    for (std::uint64_t x : v) {
      if (__builtin_add_overflow(total, x, &total)) {
        overflow = true;
        break;
      }
    }
    if (!overflow && total <= (std::uint64_t(1) << 63)) {
      out.exact = true;
      out.value = total;
      out.approx = double(total);
      return out;
    }
  }
  // float fallback: report the count approximately rather than wrapping
  std::vector<double> vd(std::size_t(k), 1.0);
  for (int step = 1; step < n; ++step) {
    std::vector<double> next(std::size_t(k), 0.0);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j)
        if (sft.transition(i, j)) next[std::size_t(i)] += vd[std::size_t(j)];
    vd.swap(next);
  }
  double total = 0.0;
  for (double x : vd) total += x;
  out.exact = false;
  out.value = 0;
  out.approx = total;
  return out;
}

void visit_words(const Sft& sft, int n,
                 const std::function<bool(int, int)>& enter,
                 const std::function<void()>& leave) {
  if (n < 1) fail(ErrorCode::BadInput, "word length must be >= 1");
  struct Frame {
    int symbol;
    int next_child;
  };
  for (int first = 0; first < sft.k; ++first) {
    if (!enter(first, 1)) continue;
    std::vector<Frame> stack{{first, 0}};
    while (!stack.empty()) {
      Frame& top = stack.back();
      int depth = int(stack.size());
      if (depth == n || top.next_child >= sft.k) {
        leave();
        stack.pop_back();
        continue;
      }
      int child = top.next_child++;
      if (!sft.transition(top.symbol, child)) continue;
      if (enter(child, depth + 1)) stack.push_back({child, 0});
    }
  }
}

std::vector<Word> enumerate_words(const Sft& sft, int n, std::uint64_t budget) {
  WordCount c = count_words(sft, n);
  if (!c.exact || c.value > budget)
    fail(ErrorCode::BudgetExceeded, "word enumeration over budget");
  std::vector<Word> out;
  out.reserve(std::size_t(c.value));
  Word current;
  visit_words(
      sft, n,
      [&](int symbol, int depth) {
        current.resize(std::size_t(depth));
        current[std::size_t(depth - 1)] = symbol;
        if (depth == n) out.push_back(current);
        return true;
      },
      [&]() { current.pop_back(); });
  return out;
}

long BlockSft::state_rank(const Word& w) const {
  auto it = std::lower_bound(states.begin(), states.end(), w);
  if (it == states.end() || *it != w) return -1;
  return long(it - states.begin());
}

namespace {

BlockSft recode_common(const Sft& sft, int n, bool sliding) {
  if (n < 1) fail(ErrorCode::BadInput, "block length must be >= 1");
  WordCount c = count_words(sft, n);
  if (!c.exact || c.value > kStateBudget)
    fail(ErrorCode::StateBudgetExceeded,
         "block recoding needs " + std::to_string(c.approx) + " states");
  BlockSft out;
  out.base = sft;
  out.n = n;
  out.kind = sliding ? BlockSft::Kind::Sliding : BlockSft::Kind::Power;
  out.states = enumerate_words(sft, n, kStateBudget);
  std::size_t m = out.states.size();
  if (sliding && n == 1) {
    out.recoded = sft;
    return out;
  }
  if (m > kDenseStates) return out;  // implicit form only
  std::vector<std::vector<int>> rows(m, std::vector<int>(m, 0));
  if (sliding) {
    // successor states share the length-(n-1) suffix as their prefix; both
    // ends are admissible words so no extra pair check is needed
    for (std::size_t a = 0; a < m; ++a) {
      const Word& w = out.states[a];
      Word key(w.begin() + 1, w.end());
      key.push_back(0);
      // states are sorted lexicographically: binary search the first child
      auto lo = std::lower_bound(out.states.begin(), out.states.end(), key);
      for (auto it = lo; it != out.states.end(); ++it) {
        if (!std::equal(key.begin(), key.end() - 1, it->begin())) break;
        rows[a][std::size_t(it - out.states.begin())] = 1;
      }
    }
  } else {
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        if (sft.transition(out.states[a].back(), out.states[b].front()))
          rows[a][b] = 1;
  }
  out.recoded = validate_sft(rows);
  return out;
}

}  // namespace

BlockSft recode_sliding(const Sft& sft, int n) { return recode_common(sft, n, true); }
BlockSft recode_power(const Sft& sft, int n) { return recode_common(sft, n, false); }

std::vector<std::vector<int>> sft_components(const Sft& sft) {
  return scc_components(sft.k,
                        [&](int i, int j) { return sft.transition(i, j) != 0; });
}

Sft restrict_sft(const Sft& sft, const std::vector<int>& symbols) {
  std::size_t m = symbols.size();
  std::vector<std::vector<int>> rows(m, std::vector<int>(m, 0));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b)
      rows[a][b] = sft.transition(symbols[a], symbols[b]);
  return validate_sft(rows);
}

std::string word_to_string(const Word& w) {
  static const char* digits = "0123456789abcdefghijklmnopqrstuvwxyz";
  std::string s;
  s.reserve(w.size());
  for (int v : w) {
    if (v < 0 || v >= 36) fail(ErrorCode::BadInput, "symbol out of printable range");
    s.push_back(digits[v]);
  }
  return s;
}

Word word_from_string(const std::string& s) {
  Word w;
  w.reserve(s.size());
  for (char c : s) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'z') v = 10 + (c - 'a');
    else fail(ErrorCode::BadInput, std::string("bad symbol character '") + c + "'");
    w.push_back(v);
  }
  return w;
}

}  // namespace svp
