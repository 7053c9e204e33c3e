#include "coxgates/automata.hpp"

#include <json.hpp>

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "coxgates/errors.hpp"

namespace coxgates {

int Automaton::run(std::span<const int> word) const {
  int q = start;
  for (int s : word) {
    if (s < 0 || s >= static_cast<int>(alphabet.size())) throw ValidationError("letter out of range");
    q = step(q, s);
    if (q == kDead) return kDead;
  }
  return q;
}

namespace {

std::vector<std::string> alphabet_of(const CoxeterSystem& sys) {
  std::vector<std::string> out;
  for (int s = 0; s < sys.rank(); ++s) out.push_back(sys.generator_name(s));
  return out;
}

std::string word_label(const CoxeterSystem& sys, std::span<const int> word) {
  return word.empty() ? std::string("e") : sys.word_string(word);
}

using Bits = std::vector<std::uint64_t>;

struct BitsHash {
  std::size_t operator()(const Bits& b) const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto w : b) h = (h ^ w) * 1099511628211ULL + (h >> 29);
    return static_cast<std::size_t>(h);
  }
};

bool test_bit(const Bits& b, std::size_t i) { return (b[i / 64] >> (i % 64)) & 1U; }
void set_bit(Bits& b, std::size_t i) { b[i / 64] |= std::uint64_t{1} << (i % 64); }

}  // namespace

Automaton build_canonical(Pipeline& p) {
  const CoxeterSystem& sys = p.system();
  const int r = sys.rank();
  const std::size_t m = p.elementary().size();
  const std::size_t words = std::max<std::size_t>(1, (m + 63) / 64);
  Automaton a;
  a.alphabet = alphabet_of(sys);
  std::vector<Bits> states;
  std::unordered_map<Bits, int, BitsHash> index;
  states.emplace_back(words, 0);
  index.emplace(states[0], 0);
  for (std::size_t q = 0; q < states.size(); ++q) {
    std::vector<int> row(r, Automaton::kDead);
    for (int s = 0; s < r; ++s) {
      const int as = p.elementary_position(p.roots().simple(s));
      if (test_bit(states[q], as)) continue;
      Bits next(words, 0);
      set_bit(next, as);
      for (std::size_t i = 0; i < m; ++i) {
        if (!test_bit(states[q], i)) continue;
        const int j = p.elementary_reflect(s, static_cast<int>(i));
        if (j >= 0) set_bit(next, j);
      }
      auto [it, fresh] = index.emplace(next, static_cast<int>(states.size()));
      if (fresh) {
        states.push_back(std::move(next));
        if (states.size() > p.limits().max_low_elements)
          throw ResourceError("more than " + std::to_string(p.limits().max_low_elements) + " canonical states");
      }
      row[s] = it->second;
    }
    a.delta.push_back(std::move(row));
  }
  for (const Bits& b : states) {
    std::string label = "{";
    bool first = true;
    for (std::size_t i = 0; i < m; ++i) {
      if (!test_bit(b, i)) continue;
      if (!first) label += ",";
      label += std::to_string(p.elementary()[i]);
      first = false;
    }
    a.labels.push_back(label + "}");
  }
  return a;
}

Automaton build_gate_automaton(Pipeline& p) {
  const CoxeterSystem& sys = p.system();
  const int r = sys.rank();
  const LowSet& low = p.low();
  const GateSet& gates = p.gates();
  Automaton a;
  a.alphabet = alphabet_of(sys);
  std::vector<std::size_t> states{0};
  std::unordered_map<std::size_t, int> index{{0, 0}};
  for (std::size_t q = 0; q < states.size(); ++q) {
    const LowElement& g = low[states[q]];
    std::vector<int> row(r, Automaton::kDead);
    for (int s = 0; s < r; ++s) {
      auto inv = left_multiply(p.roots(), s, g.inv);
      if (!inv) continue;
      const std::size_t target = p.project(std::move(*inv));
      auto [it, fresh] = index.emplace(target, static_cast<int>(states.size()));
      if (fresh) states.push_back(target);
      row[s] = it->second;
    }
    a.delta.push_back(std::move(row));
  }
  if (states.size() != gates.size()) throw InternalError("gate automaton does not reach every gate");
  for (std::size_t g : states) a.labels.push_back(word_label(sys, low[g].word));
  return a;
}

Automaton build_garside(RootTable& table, std::span<const InversionSet> B) {
  const CoxeterSystem& sys = table.system();
  const int r = sys.rank();
  std::unordered_map<InversionSet, int, InversionSetHash> index;
  for (std::size_t i = 0; i < B.size(); ++i) index.emplace(B[i], static_cast<int>(i));
  if (!index.count(InversionSet{})) throw ValidationError("Garside set must contain e");
  for (int s = 0; s < r; ++s)
    if (!index.count(InversionSet{table.simple(s)})) throw ValidationError("Garside set must contain the generators");

  // Prefix tests are subset tests of inversion sets, done on bitsets over
  // the roots that occur in B.
  std::unordered_map<RootId, std::size_t> pos;
  for (const auto& inv : B)
    for (RootId id : inv) pos.emplace(id, pos.size());
  const std::size_t words = std::max<std::size_t>(1, (pos.size() + 63) / 64);
  auto bits_of = [&](const InversionSet& inv) {
    Bits b(words, 0);
    for (RootId id : inv) {
      auto it = pos.find(id);
      if (it != pos.end()) set_bit(b, it->second);
    }
    return b;
  };
  std::vector<Bits> bbits;
  for (const auto& inv : B) bbits.push_back(bits_of(inv));
  auto within = [&](const Bits& a, const Bits& b) {
    for (std::size_t k = 0; k < words; ++k)
      if (a[k] & ~b[k]) return false;
    return true;
  };

  Automaton a;
  a.alphabet = alphabet_of(sys);
  std::vector<int> states{index.at(InversionSet{})};
  std::unordered_map<int, int> state_of{{states[0], 0}};
  for (std::size_t q = 0; q < states.size(); ++q) {
    const InversionSet& w = B[states[q]];
    std::vector<int> row(r, Automaton::kDead);
    for (int s = 0; s < r; ++s) {
      auto v = left_multiply(table, s, w);
      if (!v) continue;
      if (v->size() != w.size() + 1) throw InternalError("left multiplication changed length unexpectedly");
      const Bits vb = bits_of(*v);
      int best = -1;
      std::vector<int> prefixes;
      for (std::size_t i = 0; i < B.size(); ++i) {
        if (B[i].size() > v->size() || !within(bbits[i], vb)) continue;
        prefixes.push_back(static_cast<int>(i));
        if (best < 0 || B[i].size() > B[best].size()) best = static_cast<int>(i);
      }
      for (int i : prefixes) {
        if (!within(bbits[i], bbits[best])) {
          const Word vw = word_of_inversion_set(table, *v);
          throw NotJoinClosed("no unique maximal prefix in B for " + word_label(sys, vw) + ": " +
                              word_label(sys, word_of_inversion_set(table, B[best])) + " and " +
                              word_label(sys, word_of_inversion_set(table, B[i])) + " are incomparable");
        }
      }
      auto [it, fresh] = state_of.emplace(best, static_cast<int>(states.size()));
      if (fresh) states.push_back(best);
      row[s] = it->second;
    }
    a.delta.push_back(std::move(row));
  }
  for (int b : states) a.labels.push_back(word_label(sys, word_of_inversion_set(table, B[b])));
  return a;
}

Automaton build_garside(RootTable& table, std::span<const Element> B) {
  std::vector<InversionSet> sets;
  sets.reserve(B.size());
  for (const Element& b : B) sets.push_back(inversion_set(table, b));
  return build_garside(table, sets);
}

Automaton build_garside_low(Pipeline& p) {
  std::vector<InversionSet> sets;
  for (const LowElement& x : p.low()) sets.push_back(x.inv);
  return build_garside(p.roots(), sets);
}

Automaton canonical(const Automaton& a) {
  const std::size_t n = a.size();
  const std::size_t k = a.alphabet.size();
  std::vector<int> number(n, -1);
  std::vector<int> order;
  if (n == 0) return a;
  number[a.start] = 0;
  order.push_back(a.start);
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t s = 0; s < k; ++s) {
      const int t = a.delta[order[i]][s];
      if (t == Automaton::kDead || number[t] >= 0) continue;
      number[t] = static_cast<int>(order.size());
      order.push_back(t);
    }
  }
  Automaton out;
  out.alphabet = a.alphabet;
  out.start = 0;
  for (int q : order) {
    std::vector<int> row(k, Automaton::kDead);
    for (std::size_t s = 0; s < k; ++s) {
      const int t = a.delta[q][s];
      row[s] = t == Automaton::kDead ? Automaton::kDead : number[t];
    }
    out.delta.push_back(std::move(row));
    out.labels.push_back(q < static_cast<int>(a.labels.size()) ? a.labels[q] : std::to_string(q));
  }
  return out;
}

Automaton minimize(const Automaton& input) {
  const Automaton a = canonical(input);
  const std::size_t n = a.size();
  const std::size_t k = a.alphabet.size();
  // DEAD is class -1 throughout; all live states start in class 0.
  std::vector<int> cls(n, 0);
  std::size_t count = n ? 1 : 0;
  for (;;) {
    std::map<std::vector<int>, int> sigs;
    std::vector<int> next(n);
    for (std::size_t q = 0; q < n; ++q) {
      std::vector<int> sig;
      sig.reserve(k + 1);
      sig.push_back(cls[q]);
      for (std::size_t s = 0; s < k; ++s) {
        const int t = a.delta[q][s];
        sig.push_back(t == Automaton::kDead ? -1 : cls[t]);
      }
      auto [it, fresh] = sigs.emplace(std::move(sig), static_cast<int>(sigs.size()));
      next[q] = it->second;
    }
    cls = std::move(next);
    if (sigs.size() == count) break;
    count = sigs.size();
  }
  Automaton q;
  q.alphabet = a.alphabet;
  q.start = cls[a.start];
  q.delta.assign(count, std::vector<int>(k, Automaton::kDead));
  q.labels.assign(count, {});
  std::vector<int> members(count, 0);
  for (std::size_t st = 0; st < n; ++st) {
    const int c = cls[st];
    if (members[c]++ == 0) {
      q.labels[c] = a.labels[st];
      for (std::size_t s = 0; s < k; ++s) {
        const int t = a.delta[st][s];
        q.delta[c][s] = t == Automaton::kDead ? Automaton::kDead : cls[t];
      }
    }
  }
  for (std::size_t c = 0; c < count; ++c)
    if (members[c] > 1) q.labels[c] += " (+" + std::to_string(members[c] - 1) + ")";
  return canonical(q);
}

bool isomorphic(const Automaton& a, const Automaton& b) {
  if (a.alphabet.size() != b.alphabet.size()) return false;
  return canonical(a).delta == canonical(b).delta;
}

std::vector<std::uint64_t> word_counts(const Automaton& a, int n) {
  std::vector<std::uint64_t> out;
  std::vector<std::uint64_t> cur(a.size(), 0), next(a.size(), 0);
  if (a.size()) cur[a.start] = 1;
  for (int len = 0; len <= n; ++len) {
    std::uint64_t total = 0;
    for (auto c : cur)
      if (__builtin_add_overflow(total, c, &total)) throw ResourceError("word count overflows 64 bits");
    out.push_back(total);
    if (len == n) break;
    std::fill(next.begin(), next.end(), 0);
    for (std::size_t q = 0; q < a.size(); ++q) {
      if (!cur[q]) continue;
      for (int t : a.delta[q]) {
        if (t == Automaton::kDead) continue;
        if (__builtin_add_overflow(next[t], cur[q], &next[t])) throw ResourceError("word count overflows 64 bits");
      }
    }
    std::swap(cur, next);
  }
  return out;
}

std::vector<std::uint64_t> brute_force_counts(const CoxeterSystem& system, int n, std::size_t max_elements) {
  // r(v) = sum of r(sv) over left descents s of v; each pair (v, s) arises
  // exactly once as v = s w with s an ascent of w one level down.
  struct Entry {
    Element w;
    std::uint64_t r = 0;
  };
  std::vector<std::uint64_t> out;
  std::unordered_map<std::string, Entry> level;
  const Element e = system.identity();
  level.emplace(e.key(), Entry{e, 1});
  std::size_t total = 1;
  for (int len = 0; len <= n; ++len) {
    std::uint64_t sum = 0;
    for (const auto& [key, entry] : level)
      if (__builtin_add_overflow(sum, entry.r, &sum)) throw ResourceError("word count overflows 64 bits");
    out.push_back(sum);
    if (len == n) break;
    std::unordered_map<std::string, Entry> next;
    for (const auto& [key, entry] : level) {
      for (int s = 0; s < system.rank(); ++s) {
        if (entry.w.has_left_descent(s)) continue;
        Element v = entry.w.left_multiply(s);
        auto [it, fresh] = next.try_emplace(v.key(), Entry{v, 0});
        if (fresh && ++total > max_elements)
          throw ResourceError("ball of radius " + std::to_string(len + 1) + " exceeds " +
                              std::to_string(max_elements) + " elements");
        if (__builtin_add_overflow(it->second.r, entry.r, &it->second.r))
          throw ResourceError("word count overflows 64 bits");
      }
    }
    level = std::move(next);
  }
  return out;
}

int classify(const Automaton& a, const Element& w) {
  const Word word = w.inverse().reduced_word();
  return a.run(word);
}

bool refines(const Automaton& a, const Automaton& b, int depth) {
  if (a.alphabet.size() != b.alphabet.size()) throw LanguageMismatch("automata have different alphabets");
  if (word_counts(a, depth) != word_counts(b, depth))
    throw LanguageMismatch("word counts differ within length " + std::to_string(depth));
  const std::size_t k = a.alphabet.size();
  std::vector<int> image(b.size(), -1);
  std::deque<std::pair<int, int>> queue{{a.start, b.start}};
  image[b.start] = a.start;
  bool ok = true;
  std::vector<std::vector<char>> seen(a.size(), std::vector<char>());
  auto mark = [&](int p, int q) {
    auto& row = seen[p];
    if (row.empty()) row.assign(b.size(), 0);
    if (row[q]) return false;
    row[q] = 1;
    return true;
  };
  mark(a.start, b.start);
  while (!queue.empty()) {
    auto [p, q] = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < k; ++s) {
      const int pn = a.delta[p][s];
      const int qn = b.delta[q][s];
      if ((pn == Automaton::kDead) != (qn == Automaton::kDead))
        throw LanguageMismatch("automata disagree on a word through letter " + a.alphabet[s]);
      if (pn == Automaton::kDead) continue;
      if (image[qn] < 0) image[qn] = pn;
      else if (image[qn] != pn) ok = false;
      if (mark(pn, qn)) queue.emplace_back(pn, qn);
    }
  }
  return ok;
}

bool language_leq(const Automaton& a, int p, int q) {
  const std::size_t k = a.alphabet.size();
  std::vector<std::vector<char>> seen(a.size());
  std::deque<std::pair<int, int>> queue{{p, q}};
  seen[p].assign(a.size(), 0);
  seen[p][q] = 1;
  while (!queue.empty()) {
    auto [x, y] = queue.front();
    queue.pop_front();
    for (std::size_t s = 0; s < k; ++s) {
      const int xn = a.delta[x][s];
      if (xn == Automaton::kDead) continue;
      const int yn = a.delta[y][s];
      if (yn == Automaton::kDead) return false;
      if (seen[xn].empty()) seen[xn].assign(a.size(), 0);
      if (!seen[xn][yn]) {
        seen[xn][yn] = 1;
        queue.emplace_back(xn, yn);
      }
    }
  }
  return true;
}

std::vector<std::vector<char>> containment_relation(const Automaton& a) {
  const std::size_t n = a.size();
  const std::size_t k = a.alphabet.size();
  std::vector<std::vector<char>> rel(n, std::vector<char>(n, 1));
  std::vector<std::vector<std::vector<int>>> pred(k, std::vector<std::vector<int>>(n));
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t s = 0; s < k; ++s)
      if (a.delta[q][s] != Automaton::kDead) pred[s][a.delta[q][s]].push_back(static_cast<int>(q));
  std::vector<std::pair<int, int>> work;
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) {
      for (std::size_t s = 0; s < k; ++s) {
        if (a.delta[p][s] != Automaton::kDead && a.delta[q][s] == Automaton::kDead) {
          rel[p][q] = 0;
          work.emplace_back(static_cast<int>(p), static_cast<int>(q));
          break;
        }
      }
    }
  }
  while (!work.empty()) {
    auto [pn, qn] = work.back();
    work.pop_back();
    for (std::size_t s = 0; s < k; ++s) {
      for (int p : pred[s][pn]) {
        for (int q : pred[s][qn]) {
          if (!rel[p][q]) continue;
          rel[p][q] = 0;
          work.emplace_back(p, q);
        }
      }
    }
  }
  return rel;
}

namespace {

std::string dot_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::string export_dot(const Automaton& a, const std::string& name) {
  std::string out = "digraph \"" + dot_escape(name) + "\" {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (std::size_t q = 0; q < a.size(); ++q) {
    out += "  q" + std::to_string(q) + " [label=\"" + dot_escape(q < a.labels.size() ? a.labels[q] : "") + "\"";
    if (static_cast<int>(q) == a.start) out += ", shape=doublecircle";
    out += "];\n";
  }
  for (std::size_t q = 0; q < a.size(); ++q)
    for (std::size_t s = 0; s < a.alphabet.size(); ++s)
      if (a.delta[q][s] != Automaton::kDead)
        out += "  q" + std::to_string(q) + " -> q" + std::to_string(a.delta[q][s]) + " [label=\"" +
               dot_escape(a.alphabet[s]) + "\"];\n";
  return out + "}\n";
}

std::string export_json(const Automaton& a) {
  nlohmann::json j;
  j["alphabet"] = a.alphabet;
  j["start"] = a.start;
  j["states"] = nlohmann::json::array();
  for (std::size_t q = 0; q < a.size(); ++q)
    j["states"].push_back({{"label", q < a.labels.size() ? a.labels[q] : std::string()}});
  j["delta"] = a.delta;
  return j.dump(1) + "\n";
}

Automaton import_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError("malformed automaton JSON", line, col);
  }
  auto bad = [](const std::string& what) { return ParseError("automaton JSON: " + what, 1, 1); };
  if (!j.is_object() || !j.contains("alphabet") || !j.contains("start") || !j.contains("delta"))
    throw bad("expected fields alphabet, start, delta");
  Automaton a;
  try {
    a.alphabet = j["alphabet"].get<std::vector<std::string>>();
    a.start = j["start"].get<int>();
    a.delta = j["delta"].get<std::vector<std::vector<int>>>();
  } catch (const nlohmann::json::exception&) {
    throw bad("wrong field types");
  }
  const int n = static_cast<int>(a.delta.size());
  if (a.start < 0 || a.start >= n) throw bad("start state out of range");
  for (const auto& row : a.delta) {
    if (row.size() != a.alphabet.size()) throw bad("transition row length differs from alphabet size");
    for (int t : row)
      if (t < Automaton::kDead || t >= n) throw bad("transition target out of range");
  }
  if (j.contains("states") && j["states"].is_array()) {
    for (const auto& st : j["states"]) a.labels.push_back(st.value("label", std::string()));
  }
  a.labels.resize(a.delta.size());
  return a;
}

}  // namespace coxgates
