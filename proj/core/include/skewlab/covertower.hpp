#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace skewlab {

// Words in a finitely presented group: letters are +-g for generator
// indices g in 1..n, composed left to right.
using Word = std::vector<int>;

// A Z/2 cohomology class as a bit per generator; evaluation on a word is
// the parity of the letters it picks up.
using Cocycle = std::vector<std::uint8_t>;

// One-relator presentation. Every presentation this module produces is a
// closed orientable surface group: 2g generators and one relator of
// length 4g in commutator form (or the standard torus relator at g = 1).
struct Presentation {
  int n_generators = 0;
  Word relator;

  // Surface genus n/2; domain_error when the shape is not surface-like.
  int genus() const;

  bool operator==(const Presentation& o) const {
    return n_generators == o.n_generators && relator == o.relator;
  }
};

// The genus-g surface group with relator [a1,b1][a2,b2]...[ag,bg].
Presentation surface_group(int genus);

Word free_reduce(const Word& w);
Word inverse_word(const Word& w);

// Freely reduced form plus a triviality decision: Dehn's algorithm for
// genus >= 2 (the presentations satisfy small cancellation), exponent
// sums for the torus.
struct ReduceResult {
  Word reduced;
  bool trivial = false;
};

ReduceResult reduce(const Presentation& G, const Word& w);

// Evaluation pairing: parity of w against the class c.
int cocycle_eval(const Cocycle& c, const Word& w);

// Mod-2 abelianization of w as a generator-indexed parity vector.
Cocycle ab2_vector(const Word& w, int n_generators);

// The index-2 cover attached to a nonzero class c: Reidemeister-Schreier
// along the transversal {1, x_t} (t the first c-positive generator that
// admits an elimination), followed by a Tietze elimination of a Schreier
// generator occurring exactly once in one of the two rewritten relators.
// The result is again a one-relator surface presentation of genus 2g - 1.
struct CoverStep {
  Presentation base;
  Cocycle cocycle;
  int transversal = 0;   // generator whose lift spans the coset swap
  int eliminated = 0;    // Schreier generator id removed by Tietze
  Word elimination;      // its expression in the surviving alphabet (pre-renumber)
  std::vector<int> renumber;  // Schreier id -> final id (0 for the eliminated one)
  Presentation total;
};

// Throws domain_error for the zero class or a class the relator pairs
// nontrivially with; resource_error if no transversal admits the
// elimination (not observed on any surface input).
CoverStep double_cover(const Presentation& G, const Cocycle& c);

// A word lifts through the cover iff it pairs trivially with the class.
struct LiftResult {
  bool closed = false;
  Word lift;  // in the generators of step.total when closed
};

LiftResult lift_word(const CoverStep& step, const Word& w);

// Per-word certificate: a chain of closed covers and the class that
// finally detects the word. path holds the cocycles level by level; for
// an open word the last entry is the detecting class at the last
// presentation and steps indexes the closed covers in the shared cache.
struct WordTowerEntry {
  Word word;
  bool open = false;
  int open_level = 0;  // 1-based level of the detecting class
  std::vector<Cocycle> path;
  std::vector<std::size_t> steps;  // indices into CoverTower::steps
  Word final_lift;  // the word's lift at the last closed presentation
};

struct CoverTower {
  Presentation base;
  int max_depth = 0;
  std::vector<CoverStep> steps;  // deduplicated cover cache
  std::vector<WordTowerEntry> entries;
};

// Builds an opening tower per word, greedily: if the current lift has a
// nonzero mod-2 class it opens right there (witness: the dual class of
// the lowest nonvanishing generator); otherwise every class is scored by
// (lift class nonzero, shorter lift, smaller class) and the best cover is
// taken. Classes are enumerated exhaustively up to 16 generators and
// sampled beyond. Trivial words never open and are rejected.
CoverTower open_all(const Presentation& G, const std::vector<Word>& words,
                    int max_depth);

// Streaming re-verification of a tower, independent of the construction:
// the Schreier rewriting is replayed letter by letter through freshly
// derived per-level emission tables, accumulating the pairing parity fed
// into each level. An open entry checks out when the parities come out
// 0, ..., 0, 1, the coset walk closes at every covering level, and the
// word is not Dehn-trivial.
struct VerifyWordReport {
  bool checked = false;  // entries not claiming openness carry no certificate
  bool ok = false;
  std::vector<int> parities;
  std::string note;  // first failed check, empty when ok
};

struct TowerVerifyReport {
  bool all_ok = false;
  std::vector<VerifyWordReport> words;
};

TowerVerifyReport verify_tower(const CoverTower& tower);

}  // namespace skewlab
