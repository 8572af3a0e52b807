#include "skewlab/covertower.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <tuple>
#include <utility>

#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

namespace skewlab {
namespace {

void check_letters(const Word& w, int n, const char* where) {
  for (int c : w) {
    if (c == 0 || std::abs(c) > n) {
      throw domain_error(std::string(where) + ": letter " + std::to_string(c) +
                         " outside the rank-" + std::to_string(n) +
                         " alphabet");
    }
  }
}

// Cyclic reduction on top of free reduction: strip matching inverse
// letters from the two ends. Only relators go through this; words stand
// for group elements, not conjugacy classes, and are never rotated.
Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[lo] == -r[hi - 1]) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo),
              r.begin() + static_cast<std::ptrdiff_t>(hi));
}

int cocycle_bit(const Cocycle& c, int letter) {
  return c[static_cast<std::size_t>(std::abs(letter)) - 1] & 1;
}

bool is_zero_class(const Cocycle& c) {
  return std::all_of(c.begin(), c.end(),
                     [](std::uint8_t b) { return (b & 1) == 0; });
}

// Schreier generator numbering for the transversal {1, x_t}: the pairs
// (sheet, generator) sorted with sheet 0 first, skipping (0, t) which is
// the transversal representative itself. Ids are 1-based.
int schreier_id(int sheet, int gen, int t, int n) {
  if (sheet == 0) {
    return gen - (gen > t ? 1 : 0);
  }
  return (n - 1) + gen;
}

// Reidemeister-Schreier rewriting of a word whose class pairing is even:
// walk the two sheets, emitting the Schreier generator crossed by each
// letter. The walk must return to sheet 0, which the caller guarantees.
Word rs_rewrite(const Word& w, const Cocycle& c, int t, int n) {
  Word out;
  out.reserve(w.size());
  int sigma = 0;
  for (int ch : w) {
    const int i = std::abs(ch);
    const int ci = cocycle_bit(c, i);
    if (ch > 0) {
      if (!(sigma == 0 && i == t)) {
        out.push_back(schreier_id(sigma, i, t, n));
      }
      sigma ^= ci;
    } else {
      sigma ^= ci;
      if (!(sigma == 0 && i == t)) {
        out.push_back(-schreier_id(sigma, i, t, n));
      }
    }
  }
  if (sigma != 0) {
    throw domain_error("rs_rewrite: word does not lift (odd pairing)");
  }
  return free_reduce(out);
}

struct Elimination {
  int t = 0;         // transversal generator
  int gel = 0;       // eliminated Schreier id
  Word expression;   // gel in the surviving Schreier alphabet
  Word new_relator;  // renumbered relator of the cover
  std::vector<int> renumber;  // Schreier id -> final id, 0 for gel
};

// Substitute every occurrence of +-gel by the expression (or its inverse)
// and reduce. Ids stay in the Schreier numbering.
Word substitute(const Word& w, int gel, const Word& expr) {
  Word out;
  out.reserve(w.size() + 4);
  for (int ch : w) {
    if (std::abs(ch) == gel) {
      if (ch > 0) {
        out.insert(out.end(), expr.begin(), expr.end());
      } else {
        Word e = inverse_word(expr);
        out.insert(out.end(), e.begin(), e.end());
      }
    } else {
      out.push_back(ch);
    }
  }
  return free_reduce(out);
}

Word apply_renumber(const Word& w, const std::vector<int>& ren) {
  Word out;
  out.reserve(w.size());
  for (int ch : w) {
    const int id = ren[static_cast<std::size_t>(std::abs(ch))];
    out.push_back(ch > 0 ? id : -id);
  }
  return out;
}

// Core of the double cover: pick the transversal and the Tietze
// elimination. The two rewritten relators present the index-2 subgroup on
// 2n-1 Schreier generators; a generator occurring exactly once in one of
// them can be solved for and substituted into the other, landing back on
// a one-relator presentation. Transversals are tried in increasing
// generator order and the eliminated generator is the rarest eligible one
// (ties to the smallest id), which kept relator growth flat everywhere
// this has been exercised.
Elimination plan_elimination(const Presentation& G, const Cocycle& c) {
  const int n = G.n_generators;
  for (int t = 1; t <= n; ++t) {
    if (cocycle_bit(c, t) == 0) {
      continue;
    }
    Word rel_a = rs_rewrite(G.relator, c, t, n);
    Word conjugated;
    conjugated.reserve(G.relator.size() + 2);
    conjugated.push_back(t);
    conjugated.insert(conjugated.end(), G.relator.begin(), G.relator.end());
    conjugated.push_back(-t);
    Word rel_b = rs_rewrite(conjugated, c, t, n);

    const int m = 2 * n - 1;
    std::vector<int> count_a(static_cast<std::size_t>(m) + 1, 0);
    std::vector<int> count_b(static_cast<std::size_t>(m) + 1, 0);
    for (int ch : rel_a) ++count_a[static_cast<std::size_t>(std::abs(ch))];
    for (int ch : rel_b) ++count_b[static_cast<std::size_t>(std::abs(ch))];

    for (int host = 0; host < 2; ++host) {
      const Word& hostrel = host == 0 ? rel_a : rel_b;
      const Word& otherrel = host == 0 ? rel_b : rel_a;
      const std::vector<int>& host_count = host == 0 ? count_a : count_b;

      int gel = 0;
      int best_total = 0;
      for (int id = 1; id <= m; ++id) {
        if (host_count[static_cast<std::size_t>(id)] != 1) {
          continue;
        }
        const int total = count_a[static_cast<std::size_t>(id)] +
                          count_b[static_cast<std::size_t>(id)];
        if (gel == 0 || total < best_total) {
          gel = id;
          best_total = total;
        }
      }
      if (gel == 0) {
        continue;
      }

      const auto pos = std::find_if(
          hostrel.begin(), hostrel.end(),
          [gel](int ch) { return std::abs(ch) == gel; });
      const int sign = *pos > 0 ? 1 : -1;
      // hostrel = A gel^sign B = 1, so gel^sign = A^-1 B^-1.
      Word prefix(hostrel.begin(), pos);
      Word suffix(pos + 1, hostrel.end());
      Word expr = inverse_word(prefix);
      Word suffix_inv = inverse_word(suffix);
      expr.insert(expr.end(), suffix_inv.begin(), suffix_inv.end());
      expr = free_reduce(expr);
      if (sign < 0) {
        expr = inverse_word(expr);
      }

      std::vector<int> ren(static_cast<std::size_t>(m) + 1, 0);
      for (int id = 1; id <= m; ++id) {
        ren[static_cast<std::size_t>(id)] = id < gel ? id
                                          : id == gel ? 0
                                                      : id - 1;
      }

      Elimination e;
      e.t = t;
      e.gel = gel;
      e.expression = expr;
      e.new_relator =
          apply_renumber(cyclic_reduce(substitute(otherrel, gel, expr)), ren);
      e.renumber = std::move(ren);
      return e;
    }
  }
  throw resource_error(
      "double_cover: no transversal admits a single-occurrence elimination");
}

// Ordering used to break score ties toward the "smallest" class: compare
// as little-endian bit integers, most significant generator first.
bool class_less(const Cocycle& a, const Cocycle& b) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if ((a[i] & 1) != (b[i] & 1)) {
      return (a[i] & 1) < (b[i] & 1);
    }
  }
  return false;
}

Cocycle class_from_bits(std::uint32_t bits, int n) {
  Cocycle c(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i)] =
        static_cast<std::uint8_t>((bits >> i) & 1u);
  }
  return c;
}

// Candidate classes for one greedy step. Exhaustive below 17 generators;
// past that the 2^n classes are out of reach, so take every dual basis
// class plus a fixed-seed random sample (deterministic across runs).
std::vector<Cocycle> candidate_classes(int n) {
  std::vector<Cocycle> out;
  if (n <= 16) {
    const std::uint32_t top = 1u << n;
    out.reserve(top - 1);
    for (std::uint32_t bits = 1; bits < top; ++bits) {
      out.push_back(class_from_bits(bits, n));
    }
    return out;
  }
  std::set<Cocycle> seen;
  for (int i = 0; i < n; ++i) {
    Cocycle c(static_cast<std::size_t>(n), 0);
    c[static_cast<std::size_t>(i)] = 1;
    seen.insert(std::move(c));
  }
  CounterRng rng(0, static_cast<std::uint64_t>(n));
  for (int draw = 0; draw < 4096; ++draw) {
    Cocycle c(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; i += 64) {
      std::uint64_t word = rng.next();
      for (int b = 0; b < 64 && i + b < n; ++b) {
        c[static_cast<std::size_t>(i + b)] =
            static_cast<std::uint8_t>((word >> b) & 1u);
      }
    }
    if (!is_zero_class(c)) {
      seen.insert(std::move(c));
    }
  }
  out.assign(seen.begin(), seen.end());
  std::sort(out.begin(), out.end(), class_less);
  return out;
}

using CoverKey = std::tuple<int, Word, Cocycle>;

const CoverStep& cached_cover(CoverTower& tower,
                              std::map<CoverKey, std::size_t>& cache,
                              const Presentation& G, const Cocycle& c,
                              std::size_t* index_out) {
  CoverKey key{G.n_generators, G.relator, c};
  auto it = cache.find(key);
  if (it == cache.end()) {
    tower.steps.push_back(double_cover(G, c));
    it = cache.emplace(std::move(key), tower.steps.size() - 1).first;
  }
  *index_out = it->second;
  return tower.steps[it->second];
}

// --- Streaming verifier ------------------------------------------------
//
// Rebuilds each level of a claimed tower from (presentation, class) alone
// and replays the tower word letter by letter: each letter entering a
// level updates that level's sheet walk and pairing parity, then cascades
// its Schreier image (with the eliminated generator expanded in place)
// into the next level. No lift from the construction is reused, so a
// certificate only checks out if an independent rewriting lands on the
// same parities: zeros at every covering level and one at the top.

struct StreamLevel {
  int n = 0;
  Cocycle cocycle;
  int t = 0;
  int gel = 0;
  Word expression;            // in Schreier ids
  std::vector<int> renumber;  // Schreier id -> next-level id
  int sheet = 0;
  int parity = 0;
};

// Per-letter Schreier emission: the image of one letter in the next
// level's alphabet (possibly empty for the transversal, possibly several
// letters where the eliminated generator expands).
void emit_letter(StreamLevel& lvl, int ch, Word* out) {
  out->clear();
  const int i = std::abs(ch);
  const int ci = cocycle_bit(lvl.cocycle, i);
  int id = 0;
  int sign = 0;
  if (ch > 0) {
    if (!(lvl.sheet == 0 && i == lvl.t)) {
      id = schreier_id(lvl.sheet, i, lvl.t, lvl.n);
      sign = 1;
    }
    lvl.sheet ^= ci;
  } else {
    lvl.sheet ^= ci;
    if (!(lvl.sheet == 0 && i == lvl.t)) {
      id = schreier_id(lvl.sheet, i, lvl.t, lvl.n);
      sign = -1;
    }
  }
  if (id == 0) {
    return;
  }
  if (id == lvl.gel) {
    Word expr = sign > 0 ? lvl.expression : inverse_word(lvl.expression);
    for (int ech : expr) {
      const int mapped = lvl.renumber[static_cast<std::size_t>(std::abs(ech))];
      out->push_back(ech > 0 ? mapped : -mapped);
    }
  } else {
    const int mapped = lvl.renumber[static_cast<std::size_t>(id)];
    out->push_back(sign > 0 ? mapped : -mapped);
  }
}

void feed(std::vector<StreamLevel>& levels, int ch, std::size_t depth) {
  StreamLevel& lvl = levels[depth];
  lvl.parity ^= cocycle_bit(lvl.cocycle, ch);
  if (depth + 1 == levels.size()) {
    return;  // the detecting level only accumulates parity
  }
  Word out;
  emit_letter(lvl, ch, &out);
  for (int oc : out) {
    feed(levels, oc, depth + 1);
  }
}

VerifyWordReport verify_entry(const Presentation& base,
                              const WordTowerEntry& entry) {
  VerifyWordReport report;
  if (!entry.open) {
    report.note = "no certificate claimed";
    return report;
  }
  report.checked = true;

  if (entry.path.empty() ||
      entry.open_level != static_cast<int>(entry.path.size())) {
    report.note = "path length disagrees with the claimed level";
    return report;
  }
  ReduceResult rr = reduce(base, entry.word);
  if (rr.trivial) {
    report.note = "word is trivial, nothing can detect it";
    return report;
  }

  // Derive every level independently. The last class detects and needs no
  // cover; earlier ones must be honest double covers.
  std::vector<StreamLevel> levels;
  Presentation cur = base;
  for (std::size_t d = 0; d < entry.path.size(); ++d) {
    const Cocycle& c = entry.path[d];
    if (c.size() != static_cast<std::size_t>(cur.n_generators) ||
        is_zero_class(c)) {
      report.note = "level " + std::to_string(d + 1) +
                    " class does not fit its presentation";
      return report;
    }
    StreamLevel lvl;
    lvl.n = cur.n_generators;
    lvl.cocycle = c;
    if (d + 1 < entry.path.size()) {
      Elimination e = plan_elimination(cur, c);
      lvl.t = e.t;
      lvl.gel = e.gel;
      lvl.expression = e.expression;
      lvl.renumber = std::move(e.renumber);
      cur = Presentation{2 * cur.n_generators - 2, e.new_relator};
    }
    levels.push_back(std::move(lvl));
  }

  for (int ch : entry.word) {
    feed(levels, ch, 0);
  }

  bool ok = true;
  for (std::size_t d = 0; d < levels.size(); ++d) {
    report.parities.push_back(levels[d].parity);
    const int expected = d + 1 == levels.size() ? 1 : 0;
    if (levels[d].parity != expected) {
      ok = false;
      if (report.note.empty()) {
        report.note = "level " + std::to_string(d + 1) + " parity is " +
                      std::to_string(levels[d].parity) + ", expected " +
                      std::to_string(expected);
      }
    }
    if (d + 1 < levels.size() && levels[d].sheet != 0) {
      ok = false;
      if (report.note.empty()) {
        report.note =
            "level " + std::to_string(d + 1) + " sheet walk does not close";
      }
    }
  }
  report.ok = ok;
  return report;
}

}  // namespace

int Presentation::genus() const {
  if (n_generators < 2 || n_generators % 2 != 0) {
    throw domain_error("genus: generator count " +
                       std::to_string(n_generators) + " is not 2g");
  }
  if (relator.size() != static_cast<std::size_t>(2 * n_generators)) {
    throw domain_error("genus: relator length " +
                       std::to_string(relator.size()) + " is not 4g");
  }
  check_letters(relator, n_generators, "genus");
  if (cyclic_reduce(relator) != relator) {
    throw domain_error("genus: relator is not cyclically reduced");
  }
  return n_generators / 2;
}

Presentation surface_group(int genus) {
  if (genus < 1) {
    throw domain_error("surface_group: genus must be at least 1, got " +
                       std::to_string(genus));
  }
  Presentation G;
  G.n_generators = 2 * genus;
  G.relator.reserve(static_cast<std::size_t>(4 * genus));
  for (int i = 0; i < genus; ++i) {
    const int a = 2 * i + 1;
    const int b = 2 * i + 2;
    G.relator.insert(G.relator.end(), {a, b, -a, -b});
  }
  return G;
}

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (int c : w) {
    if (!out.empty() && out.back() == -c) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
  return out;
}

Word inverse_word(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    out.push_back(-*it);
  }
  return out;
}

ReduceResult reduce(const Presentation& G, const Word& w) {
  const int g = G.genus();
  check_letters(w, G.n_generators, "reduce");
  ReduceResult result;
  result.reduced = free_reduce(w);

  if (g == 1) {
    // The torus group is Z^2: triviality is a pair of exponent sums.
    long sum_a = 0, sum_b = 0;
    for (int c : result.reduced) {
      (std::abs(c) == 1 ? sum_a : sum_b) += c > 0 ? 1 : -1;
    }
    result.trivial = sum_a == 0 && sum_b == 0;
    return result;
  }

  // Dehn's algorithm: the surface relators satisfy C'(1/6) for g >= 2, so
  // a nonempty freely reduced word is trivial iff it keeps containing
  // more than half of some cyclic rotation of the relator or its inverse.
  const std::size_t L = G.relator.size();
  std::vector<Word> rotations;
  rotations.reserve(2 * L);
  for (const Word& base : {G.relator, inverse_word(G.relator)}) {
    for (std::size_t s = 0; s < L; ++s) {
      Word rot;
      rot.reserve(L);
      rot.insert(rot.end(), base.begin() + static_cast<std::ptrdiff_t>(s),
                 base.end());
      rot.insert(rot.end(), base.begin(),
                 base.begin() + static_cast<std::ptrdiff_t>(s));
      rotations.push_back(std::move(rot));
    }
  }

  Word d = result.reduced;
  bool shrunk = true;
  while (shrunk && !d.empty()) {
    shrunk = false;
    for (const Word& rot : rotations) {
      for (std::size_t len = L - 1; len > L / 2; --len) {
        const auto piece_end = rot.begin() + static_cast<std::ptrdiff_t>(len);
        const auto at = std::search(d.begin(), d.end(), rot.begin(), piece_end);
        if (at == d.end()) {
          continue;
        }
        // rot = piece * rest = 1, so piece can be swapped for rest^-1,
        // which is strictly shorter.
        Word rest_inv = inverse_word(Word(piece_end, rot.end()));
        Word next(d.begin(), at);
        next.insert(next.end(), rest_inv.begin(), rest_inv.end());
        next.insert(next.end(), at + static_cast<std::ptrdiff_t>(len),
                    d.end());
        d = free_reduce(next);
        shrunk = true;
        break;
      }
      if (shrunk) {
        break;
      }
    }
  }
  result.trivial = d.empty();
  return result;
}

int cocycle_eval(const Cocycle& c, const Word& w) {
  check_letters(w, static_cast<int>(c.size()), "cocycle_eval");
  int parity = 0;
  for (int ch : w) {
    parity ^= cocycle_bit(c, ch);
  }
  return parity;
}

Cocycle ab2_vector(const Word& w, int n_generators) {
  if (n_generators < 1) {
    throw domain_error("ab2_vector: need at least one generator");
  }
  check_letters(w, n_generators, "ab2_vector");
  Cocycle out(static_cast<std::size_t>(n_generators), 0);
  for (int ch : w) {
    out[static_cast<std::size_t>(std::abs(ch)) - 1] ^= 1;
  }
  return out;
}

CoverStep double_cover(const Presentation& G, const Cocycle& c) {
  const int g = G.genus();
  if (c.size() != static_cast<std::size_t>(G.n_generators)) {
    throw domain_error("double_cover: class has " + std::to_string(c.size()) +
                       " bits for " + std::to_string(G.n_generators) +
                       " generators");
  }
  if (is_zero_class(c)) {
    throw domain_error("double_cover: the zero class has no connected cover");
  }
  if (cocycle_eval(c, G.relator) != 0) {
    throw domain_error("double_cover: relator pairs oddly with the class");
  }

  Elimination e = plan_elimination(G, c);

  CoverStep step;
  step.base = G;
  step.cocycle = c;
  step.transversal = e.t;
  step.eliminated = e.gel;
  step.elimination = std::move(e.expression);
  step.renumber = std::move(e.renumber);
  step.total = Presentation{2 * G.n_generators - 2, std::move(e.new_relator)};

  // The cover of a genus-g surface of index 2 is the genus 2g-1 surface;
  // anything else means the elimination went off the rails.
  if (step.total.genus() != 2 * g - 1) {
    throw verify_error("double_cover: cover is not the genus " +
                       std::to_string(2 * g - 1) + " surface");
  }
  return step;
}

LiftResult lift_word(const CoverStep& step, const Word& w) {
  check_letters(w, step.base.n_generators, "lift_word");
  LiftResult result;
  if (cocycle_eval(step.cocycle, w) != 0) {
    return result;  // odd pairing: the word climbs out of the cover
  }
  result.closed = true;
  Word schreier =
      rs_rewrite(w, step.cocycle, step.transversal, step.base.n_generators);
  result.lift = apply_renumber(
      substitute(schreier, step.eliminated, step.elimination), step.renumber);
  return result;
}

CoverTower open_all(const Presentation& G, const std::vector<Word>& words,
                    int max_depth) {
  G.genus();
  if (max_depth < 1) {
    throw domain_error("open_all: max_depth must be at least 1, got " +
                       std::to_string(max_depth));
  }

  CoverTower tower;
  tower.base = G;
  tower.max_depth = max_depth;
  std::map<CoverKey, std::size_t> cache;

  for (std::size_t wi = 0; wi < words.size(); ++wi) {
    ReduceResult rr = reduce(G, words[wi]);
    if (rr.trivial) {
      throw domain_error("open_all: word " + std::to_string(wi) +
                         " is trivial and can never open");
    }

    WordTowerEntry entry;
    entry.word = words[wi];
    Presentation cur = G;
    Word lift = rr.reduced;

    for (int depth = 1; depth <= max_depth; ++depth) {
      Cocycle ab = ab2_vector(lift, cur.n_generators);
      if (!is_zero_class(ab)) {
        // Detected: the dual class of the lowest odd generator pairs to 1.
        Cocycle witness(ab.size(), 0);
        for (std::size_t i = 0; i < ab.size(); ++i) {
          if (ab[i] & 1) {
            witness[i] = 1;
            break;
          }
        }
        entry.open = true;
        entry.open_level = depth;
        entry.path.push_back(std::move(witness));
        break;
      }
      if (depth == max_depth) {
        break;
      }

      // Greedy cover choice: best (lift class nonzero, shortest lift,
      // smallest class) over the candidate classes. Every candidate is
      // admissible since the lift's mod-2 class just vanished.
      bool have_best = false;
      Cocycle best_class;
      Word best_lift;
      std::size_t best_step = 0;
      bool best_opens = false;
      for (const Cocycle& c : candidate_classes(cur.n_generators)) {
        std::size_t step_index = 0;
        const CoverStep& step =
            cached_cover(tower, cache, cur, c, &step_index);
        LiftResult lr = lift_word(step, lift);
        if (lr.lift.empty()) {
          continue;  // cannot happen for nontrivial words, kept defensive
        }
        const bool opens =
            !is_zero_class(ab2_vector(lr.lift, step.total.n_generators));
        bool better;
        if (!have_best) {
          better = true;
        } else if (opens != best_opens) {
          better = opens;
        } else if (lr.lift.size() != best_lift.size()) {
          better = lr.lift.size() < best_lift.size();
        } else {
          better = class_less(c, best_class);
        }
        if (better) {
          have_best = true;
          best_class = c;
          best_lift = std::move(lr.lift);
          best_step = step_index;
          best_opens = opens;
        }
      }
      if (!have_best) {
        break;  // no usable cover, leave the entry closed
      }
      entry.path.push_back(best_class);
      entry.steps.push_back(best_step);
      lift = std::move(best_lift);
      cur = tower.steps[best_step].total;
    }

    entry.final_lift = std::move(lift);
    tower.entries.push_back(std::move(entry));
  }
  return tower;
}

TowerVerifyReport verify_tower(const CoverTower& tower) {
  tower.base.genus();
  TowerVerifyReport report;
  report.all_ok = true;
  report.words.reserve(tower.entries.size());
  for (const WordTowerEntry& entry : tower.entries) {
    VerifyWordReport wr;
    try {
      wr = verify_entry(tower.base, entry);
    } catch (const std::exception& ex) {
      wr.checked = entry.open;
      wr.ok = false;
      wr.note = std::string("verification aborted: ") + ex.what();
    }
    report.all_ok = report.all_ok && wr.ok;
    report.words.push_back(std::move(wr));
  }
  return report;
}

}  // namespace skewlab
