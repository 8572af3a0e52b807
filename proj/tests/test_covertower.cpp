#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "skewlab/covertower.hpp"
#include "skewlab/errors.hpp"
#include "skewlab/rng.hpp"

using skewlab::Cocycle;
using skewlab::CoverStep;
using skewlab::CoverTower;
using skewlab::Presentation;
using skewlab::Word;
using skewlab::WordTowerEntry;

namespace {

// Every freely reduced word over 2g signed generators with length in
// [1, max_len]. For genus 2 and max_len 4 this is the 3200-word universe:
// 8 + 8*7 + 8*49 + 8*343.
std::vector<Word> reduced_words(int genus, int max_len) {
  std::vector<int> letters;
  for (int i = 1; i <= 2 * genus; ++i) {
    letters.push_back(i);
    letters.push_back(-i);
  }
  std::vector<Word> out;
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (int c : letters) {
        if (!w.empty() && w.back() == -c) {
          continue;
        }
        Word grown = w;
        grown.push_back(c);
        out.push_back(grown);
        next.push_back(std::move(grown));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

Cocycle dual(int gen, int n) {
  Cocycle c(static_cast<std::size_t>(n), 0);
  c[static_cast<std::size_t>(gen) - 1] = 1;
  return c;
}

}  // namespace

TEST_CASE("surface presentations carry their genus in the relator shape") {
  Presentation torus = skewlab::surface_group(1);
  CHECK(torus.n_generators == 2);
  CHECK(torus.relator == Word{1, 2, -1, -2});
  CHECK(torus.genus() == 1);

  Presentation g2 = skewlab::surface_group(2);
  CHECK(g2.n_generators == 4);
  CHECK(g2.relator == Word{1, 2, -1, -2, 3, 4, -3, -4});
  CHECK(g2.genus() == 2);

  CHECK(skewlab::surface_group(3).genus() == 3);
  CHECK_THROWS_AS(skewlab::surface_group(0), skewlab::domain_error);

  Presentation odd{3, Word{1, 2, -1, -2, 3, -3}};
  CHECK_THROWS_AS(odd.genus(), skewlab::domain_error);
  Presentation short_rel{4, Word{1, 2, -1, -2}};
  CHECK_THROWS_AS(short_rel.genus(), skewlab::domain_error);
  Presentation unreduced{2, Word{1, 2, -2, -1}};  // cyclically cancels
  CHECK_THROWS_AS(unreduced.genus(), skewlab::domain_error);
}

TEST_CASE("free reduction and inversion") {
  CHECK(skewlab::free_reduce(Word{1, -1}) == Word{});
  CHECK(skewlab::free_reduce(Word{1, 2, -2, -1, 3}) == Word{3});
  CHECK(skewlab::free_reduce(Word{1, 2, 3}) == Word{1, 2, 3});
  CHECK(skewlab::inverse_word(Word{1, 2, -3}) == Word{3, -2, -1});
  CHECK(skewlab::free_reduce(Word{}) == Word{});
}

TEST_CASE("triviality on the torus is a pair of exponent sums") {
  Presentation torus = skewlab::surface_group(1);
  CHECK(skewlab::reduce(torus, Word{1, 2, -1, -2}).trivial);
  CHECK(skewlab::reduce(torus, Word{2, 1, -2, 1, -1, -1}).trivial);
  CHECK_FALSE(skewlab::reduce(torus, Word{1}).trivial);
  CHECK_FALSE(skewlab::reduce(torus, Word{1, 2}).trivial);
}

TEST_CASE("Dehn reduction decides triviality in the genus 2 group") {
  Presentation G = skewlab::surface_group(2);

  CHECK(skewlab::reduce(G, Word{}).trivial);
  CHECK(skewlab::reduce(G, G.relator).trivial);
  CHECK(skewlab::reduce(G, skewlab::inverse_word(G.relator)).trivial);

  // Conjugates and products of relator copies are trivial too.
  Word conj{3, -2};
  Word w = conj;
  w.insert(w.end(), G.relator.begin(), G.relator.end());
  Word conj_inv = skewlab::inverse_word(conj);
  w.insert(w.end(), conj_inv.begin(), conj_inv.end());
  CHECK(skewlab::reduce(G, w).trivial);

  Word twice = G.relator;
  twice.insert(twice.end(), G.relator.begin(), G.relator.end());
  CHECK(skewlab::reduce(G, twice).trivial);

  // A relator copy spliced into the middle of a word does not change the
  // element, and the decision sees through it.
  Word spliced{1, 2};
  spliced.insert(spliced.end(), G.relator.begin(), G.relator.end());
  spliced.push_back(-2);
  CHECK(skewlab::reduce(G, spliced).trivial == false);
  Word spliced_same = skewlab::reduce(G, spliced).reduced;
  CHECK(skewlab::reduce(G, Word{1, 2, -2}).reduced == Word{1});
  CHECK(spliced_same.size() >= 1);

  // The single commutator is nontrivial (it is a relator only at genus 1).
  CHECK_FALSE(skewlab::reduce(G, Word{1, 2, -1, -2}).trivial);
  CHECK_FALSE(skewlab::reduce(G, Word{1}).trivial);
  CHECK_FALSE(skewlab::reduce(G, Word{1, 1, 1, 1}).trivial);

  // The reduced form is the free reduction, not the Dehn-shortened word.
  CHECK(skewlab::reduce(G, Word{1, -1, 2}).reduced == Word{2});

  CHECK_THROWS_AS(skewlab::reduce(G, Word{5}), skewlab::domain_error);
  CHECK_THROWS_AS(skewlab::reduce(G, Word{1, 0}), skewlab::domain_error);
}

TEST_CASE("class evaluation and mod 2 abelianization") {
  Presentation G = skewlab::surface_group(2);
  Cocycle e1 = dual(1, 4);
  CHECK(skewlab::cocycle_eval(e1, Word{1}) == 1);
  CHECK(skewlab::cocycle_eval(e1, Word{-1}) == 1);
  CHECK(skewlab::cocycle_eval(e1, Word{1, 1}) == 0);
  CHECK(skewlab::cocycle_eval(e1, Word{2, 3, -2}) == 0);
  CHECK(skewlab::cocycle_eval(e1, G.relator) == 0);

  CHECK(skewlab::ab2_vector(Word{1, 2, -1, -2}, 4) == Cocycle{0, 0, 0, 0});
  CHECK(skewlab::ab2_vector(Word{1, 2, 3}, 4) == Cocycle{1, 1, 1, 0});
  CHECK(skewlab::ab2_vector(G.relator, 4) == Cocycle{0, 0, 0, 0});
  CHECK_THROWS_AS(skewlab::ab2_vector(Word{5}, 4), skewlab::domain_error);
}

TEST_CASE("double covers climb the genus ladder 2, 3, 5, 9, 17, 33, 65") {
  Presentation cur = skewlab::surface_group(2);
  std::vector<int> expected{3, 5, 9, 17, 33, 65};
  for (int want : expected) {
    Cocycle ones(static_cast<std::size_t>(cur.n_generators), 1);
    CoverStep step = skewlab::double_cover(cur, ones);
    CHECK(step.total.n_generators == 2 * cur.n_generators - 2);
    CHECK(step.total.genus() == want);
    CHECK(step.total.relator.size() ==
          static_cast<std::size_t>(4 * want));
    cur = step.total;
  }
}

TEST_CASE("double cover rejects unusable classes") {
  Presentation G = skewlab::surface_group(2);
  CHECK_THROWS_AS(skewlab::double_cover(G, Cocycle{0, 0, 0, 0}),
                  skewlab::domain_error);
  CHECK_THROWS_AS(skewlab::double_cover(G, Cocycle{1, 0}),
                  skewlab::domain_error);

  // The torus covers itself: genus 2*1 - 1 = 1.
  Presentation torus = skewlab::surface_group(1);
  CoverStep step = skewlab::double_cover(torus, Cocycle{1, 0});
  CHECK(step.total.genus() == 1);
}

TEST_CASE("words lift iff they pair evenly with the class") {
  Presentation G = skewlab::surface_group(2);
  CoverStep step = skewlab::double_cover(G, dual(1, 4));

  // Odd pairing: the loop climbs out of the cover instead of lifting.
  CHECK_FALSE(skewlab::lift_word(step, Word{1}).closed);
  CHECK_FALSE(skewlab::lift_word(step, Word{-1, 2, 2}).closed);

  // The commutator of the first handle lifts to a separating curve: its
  // lift is nontrivial but invisible to every class at the next level.
  skewlab::LiftResult comm = skewlab::lift_word(step, Word{1, 2, -1, -2});
  CHECK(comm.closed);
  CHECK_FALSE(comm.lift.empty());
  CHECK(skewlab::ab2_vector(comm.lift, step.total.n_generators) ==
        Cocycle(static_cast<std::size_t>(step.total.n_generators), 0));

  // The square of the same loop lifts to a primitive, nonseparating curve.
  skewlab::LiftResult sq = skewlab::lift_word(step, Word{1, 1});
  CHECK(sq.closed);
  CHECK_FALSE(sq.lift.empty());
  CHECK_FALSE(skewlab::ab2_vector(sq.lift, step.total.n_generators) ==
              Cocycle(static_cast<std::size_t>(step.total.n_generators), 0));

  CHECK_THROWS_AS(skewlab::lift_word(step, Word{7}), skewlab::domain_error);
}

TEST_CASE("homologically visible words open at level 1 with a dual witness") {
  Presentation G = skewlab::surface_group(2);
  std::vector<Word> words{{1}, {-3}, {1, 2, 3}, {2, 1, 2}, {1, -1, 4}};
  CoverTower tower = skewlab::open_all(G, words, 3);
  CHECK(tower.entries.size() == words.size());
  for (const WordTowerEntry& e : tower.entries) {
    CHECK(e.open);
    CHECK(e.open_level == 1);
    CHECK(e.path.size() == 1);
    CHECK(e.steps.empty());
    CHECK(skewlab::cocycle_eval(e.path[0], e.word) == 1);
  }
  CHECK(tower.steps.empty());
}

TEST_CASE("deeper words climb and the claimed levels verify") {
  Presentation G = skewlab::surface_group(2);
  std::vector<Word> words{
      {1, 2, -1, -2},   // separating after one cover, opens at 2
      {1, 1},           // opens at 2
      {1, 1, 1, 1},     // fourth power, the deep case, opens at 3
      {-2, -2, -2, -2},
  };
  CoverTower tower = skewlab::open_all(G, words, 3);
  CHECK(tower.entries[0].open);
  CHECK(tower.entries[0].open_level == 2);
  CHECK(tower.entries[1].open_level == 2);
  CHECK(tower.entries[2].open_level == 3);
  CHECK(tower.entries[3].open_level == 3);

  for (const WordTowerEntry& e : tower.entries) {
    CHECK(e.path.size() == static_cast<std::size_t>(e.open_level));
    CHECK(e.steps.size() == static_cast<std::size_t>(e.open_level - 1));
    // The recorded lift at the last closed level is what the witness sees.
    const Presentation& top = e.steps.empty()
                                  ? tower.base
                                  : tower.steps[e.steps.back()].total;
    Cocycle ab = skewlab::ab2_vector(e.final_lift, top.n_generators);
    CHECK(skewlab::cocycle_eval(e.path.back(), e.final_lift) == 1);
    CHECK_FALSE(ab == Cocycle(ab.size(), 0));
  }

  skewlab::TowerVerifyReport report = skewlab::verify_tower(tower);
  CHECK(report.all_ok);
  for (const skewlab::VerifyWordReport& wr : report.words) {
    CHECK(wr.checked);
    CHECK(wr.ok);
    for (std::size_t i = 0; i + 1 < wr.parities.size(); ++i) {
      CHECK(wr.parities[i] == 0);
    }
    CHECK(wr.parities.back() == 1);
  }
}

TEST_CASE("trivial words are rejected up front") {
  Presentation G = skewlab::surface_group(2);
  CHECK_THROWS_AS(skewlab::open_all(G, {G.relator}, 3),
                  skewlab::domain_error);
  CHECK_THROWS_AS(skewlab::open_all(G, {Word{1, -1}}, 3),
                  skewlab::domain_error);
  CHECK_THROWS_AS(skewlab::open_all(G, {Word{1}}, 0), skewlab::domain_error);

  Presentation torus = skewlab::surface_group(1);
  CHECK_THROWS_AS(skewlab::open_all(torus, {Word{1, 2, -1, -2}}, 2),
                  skewlab::domain_error);
  CoverTower t = skewlab::open_all(torus, {Word{1, 2}}, 2);
  CHECK(t.entries[0].open_level == 1);
}

TEST_CASE("the full 3200-word universe opens by depth 3") {
  Presentation G = skewlab::surface_group(2);
  std::vector<Word> words = reduced_words(2, 4);
  CHECK(words.size() == 3200);

  CoverTower tower = skewlab::open_all(G, words, 3);
  std::map<int, int> hist;
  for (const WordTowerEntry& e : tower.entries) {
    CHECK(e.open);
    ++hist[e.open_level];
  }
  CHECK(hist[1] == 2848);
  CHECK(hist[2] == 344);
  CHECK(hist[3] == 8);

  // The deep words are exactly the fourth powers of single letters.
  for (const WordTowerEntry& e : tower.entries) {
    if (e.open_level == 3) {
      CHECK(e.word.size() == 4);
      CHECK(e.word == Word(4, e.word[0]));
    }
  }

  // The cover cache dedupes: far fewer covers than words.
  CHECK(tower.steps.size() < 400);

  skewlab::TowerVerifyReport report = skewlab::verify_tower(tower);
  CHECK(report.all_ok);
}

TEST_CASE("open_all is deterministic") {
  Presentation G = skewlab::surface_group(2);
  std::vector<Word> words{{1, 1}, {1, 2, -1, -2}, {3, 3, 3, 3}};
  CoverTower a = skewlab::open_all(G, words, 3);
  CoverTower b = skewlab::open_all(G, words, 3);
  REQUIRE(a.entries.size() == b.entries.size());
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    CHECK(a.entries[i].path == b.entries[i].path);
    CHECK(a.entries[i].final_lift == b.entries[i].final_lift);
    CHECK(a.entries[i].open_level == b.entries[i].open_level);
  }
}

TEST_CASE("verification catches tampered certificates") {
  Presentation G = skewlab::surface_group(2);
  std::vector<Word> words{{1, 1, 1, 1}, {1, 2, -1, -2}};
  CoverTower tower = skewlab::open_all(G, words, 3);
  REQUIRE(skewlab::verify_tower(tower).all_ok);

  // A detecting class that provably misses the lift: nonzero, but paired
  // evenly with the word's class at the top level.
  {
    CoverTower bad = tower;
    WordTowerEntry& e = bad.entries[0];
    const Presentation& top = tower.steps[e.steps.back()].total;
    Cocycle ab = skewlab::ab2_vector(e.final_lift, top.n_generators);
    Cocycle miss(ab.size(), 0);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < ab.size() && hits < 2; ++i) {
      if (ab[i]) {
        miss[i] = 1;
        ++hits;
      }
    }
    if (hits == 1) {  // single odd generator: any other dual misses
      miss.assign(ab.size(), 0);
      miss[ab[0] ? 1 : 0] = 1;
    }
    REQUIRE(skewlab::cocycle_eval(miss, e.final_lift) == 0);
    e.path.back() = miss;
    skewlab::TowerVerifyReport r = skewlab::verify_tower(bad);
    CHECK_FALSE(r.all_ok);
    CHECK_FALSE(r.words[0].ok);
    CHECK_FALSE(r.words[0].note.empty());
  }

  // A detecting class that pairs evenly cannot certify.
  {
    CoverTower bad = tower;
    bad.entries[1].path.back() = Cocycle(
        bad.entries[1].path.back().size(), 0);
    skewlab::TowerVerifyReport r = skewlab::verify_tower(bad);
    CHECK_FALSE(r.all_ok);
    CHECK_FALSE(r.words[1].ok);
  }

  // Swapping in a different word breaks the parities.
  {
    CoverTower bad = tower;
    bad.entries[0].word = Word{1, 1};
    skewlab::TowerVerifyReport r = skewlab::verify_tower(bad);
    CHECK_FALSE(r.words[0].ok);
  }

  // A claimed level that disagrees with the path length is malformed.
  {
    CoverTower bad = tower;
    bad.entries[0].open_level = 2;
    skewlab::TowerVerifyReport r = skewlab::verify_tower(bad);
    CHECK_FALSE(r.words[0].ok);
  }

  // Certificates for trivial words are refused outright.
  {
    CoverTower bad = tower;
    bad.entries[0].word = G.relator;
    bad.entries[0].open_level = 1;
    bad.entries[0].path = {dual(1, 4)};
    skewlab::TowerVerifyReport r = skewlab::verify_tower(bad);
    CHECK_FALSE(r.words[0].ok);
    CHECK(r.words[0].note.find("trivial") != std::string::npos);
  }

  // An entry that never opened carries no certificate and cannot pass.
  {
    CoverTower shallow = skewlab::open_all(G, {Word{1, 1, 1, 1}}, 2);
    CHECK_FALSE(shallow.entries[0].open);
    skewlab::TowerVerifyReport r = skewlab::verify_tower(shallow);
    CHECK_FALSE(r.all_ok);
    CHECK_FALSE(r.words[0].checked);
  }
}

TEST_CASE("random words agree between construction and replay") {
  Presentation G = skewlab::surface_group(2);
  skewlab::CounterRng rng(42, 7);
  std::vector<Word> words;
  while (words.size() < 200) {
    const std::size_t len = 1 + rng.next() % 8;
    Word w;
    while (w.size() < len) {
      int c = static_cast<int>(1 + rng.next() % 4);
      if (rng.next() & 1) {
        c = -c;
      }
      if (!w.empty() && w.back() == -c) {
        continue;
      }
      w.push_back(c);
    }
    if (!skewlab::reduce(G, w).trivial) {
      words.push_back(std::move(w));
    }
  }
  CoverTower tower = skewlab::open_all(G, words, 4);
  std::size_t opened = 0;
  for (const WordTowerEntry& e : tower.entries) {
    if (e.open) {
      ++opened;
    }
  }
  CHECK(opened == words.size());
  skewlab::TowerVerifyReport report = skewlab::verify_tower(tower);
  CHECK(report.all_ok);
}
