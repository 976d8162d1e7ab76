"""Normal forms for the two-generator semigroups driven by a threshold sequence.

Words over {x, y} are rewritten with x*x -> x together with the absorption
rule  x y^j x y^j' x -> x y^j x  whenever the class of j' is strictly below
(strict variant) or weakly below (weak variant) the class of j.  Every word
then has a unique reduced form

    y^j0 x y^j1 x ... x y^j_{t-1} x y^jt

with interior run lengths j1..j_{t-1} >= 1 whose classes are nondecreasing
(strict) or strictly increasing (weak) along the word.  ReducedWord stores
the run lengths; RewriteSystem implements the incremental fold used by the
walk simulations plus a random-rule-order reference reducer used to
spot-check confluence.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Iterable

from .sequences import InvalidParameter, MSequence

GENERATORS = ("x", "y")
VARIANTS = ("strict", "weak")


@dataclass(frozen=True)
class ReducedWord:
    """A word in reduced form, stored as its run lengths.

    j0 is the leading y-run, interior the runs strictly between consecutive
    x's (each >= 1), jt the trailing y-run.  has_x distinguishes the empty
    word / pure y-powers (all mass in j0) from words containing x.
    """

    j0: int = 0
    interior: tuple[int, ...] = ()
    jt: int = 0
    has_x: bool = False

    def __post_init__(self):
        if self.j0 < 0 or self.jt < 0:
            raise InvalidParameter("run lengths must be nonnegative")
        if not self.has_x and (self.interior or self.jt):
            raise InvalidParameter("a word without x has only a leading y-run")
        if any(j < 1 for j in self.interior):
            raise InvalidParameter("interior runs must be >= 1")

    @property
    def t(self) -> int:
        """Number of x's."""
        return len(self.interior) + 1 if self.has_x else 0

    def length(self) -> int:
        """Semigroup length: number of letters of the reduced form."""
        return self.t + self.j0 + sum(self.interior) + self.jt

    def expand(self) -> str:
        """The reduced form spelled out as a string ('' for the empty word)."""
        if not self.has_x:
            return "y" * self.j0
        runs = (self.j0, *self.interior, self.jt)
        return ("x".join("y" * j for j in runs))

    def to_json(self) -> dict:
        return {"j0": self.j0, "interior": list(self.interior),
                "jt": self.jt, "has_x": self.has_x}

    @classmethod
    def from_json(cls, obj: dict) -> "ReducedWord":
        return cls(int(obj["j0"]), tuple(int(j) for j in obj["interior"]),
                   int(obj["jt"]), bool(obj["has_x"]))


@dataclass(frozen=True)
class ClassBlocks:
    """Per-class block tally: how many interior runs land in the class and
    the total length those blocks contribute (run + 1 for the leading x)."""
    count: int
    total_len: int


@dataclass(frozen=True)
class BlockStats:
    """Decomposition y^n0 (blocks) x^delta y^n_inf of a reduced word.

    Each interior run j becomes a block x y^j of length j + 1, tallied under
    its class; the final x (present iff the word contains x) is delta; the
    leading and trailing y-runs are n0 and n_inf.  By construction
    n0 + n_inf + delta + sum(total_len) equals the word length.
    """
    n0: int
    n_inf: int
    delta: int
    per_class: dict[int, ClassBlocks]

    def total_length(self) -> int:
        return (self.n0 + self.n_inf + self.delta
                + sum(cb.total_len for cb in self.per_class.values()))


@dataclass(frozen=True)
class ConfluenceReport:
    samples: int
    all_agree: bool
    disagreements: int
    length_failures: int
    counterexample: str | None
    elapsed_s: float


class RewriteSystem:
    """Rewriting engine for one (threshold sequence, variant) pair."""

    def __init__(self, seq: MSequence, variant: str):
        if variant not in VARIANTS:
            raise InvalidParameter(f"variant must be one of {VARIANTS}, got {variant!r}")
        self.seq = seq
        self.variant = variant
        self._weak = variant == "weak"
        self._cls: dict[int, int] = {}

    def __repr__(self) -> str:
        return f"RewriteSystem({self.seq.spec}, {self.variant})"

    def class_of(self, j: int) -> int:
        cls = self._cls.get(j)
        if cls is None:
            cls = self._cls[j] = self.seq.class_of(j)
        return cls

    def absorbs(self, prev_run: int, new_run: int) -> bool:
        """Does x y^prev x absorb a following y^new x?"""
        cp, cn = self.class_of(prev_run), self.class_of(new_run)
        return cn < cp or (self._weak and cn == cp)

    def identity(self) -> ReducedWord:
        return ReducedWord()

    def word_label(self, w: ReducedWord) -> str:
        return w.expand() or "1"

    def append_generator(self, w: ReducedWord, g: str) -> ReducedWord:
        """Right-multiply a reduced word by one generator (stays reduced)."""
        if g == "y":
            if w.has_x:
                return ReducedWord(w.j0, w.interior, w.jt + 1, True)
            return ReducedWord(w.j0 + 1)
        if g != "x":
            raise InvalidParameter(f"unknown generator {g!r}")
        if not w.has_x:
            return ReducedWord(w.j0, (), 0, True)
        if w.jt == 0:
            return w  # x * x = x
        if w.interior and self.absorbs(w.interior[-1], w.jt):
            return ReducedWord(w.j0, w.interior, 0, True)
        return ReducedWord(w.j0, w.interior + (w.jt,), 0, True)

    def normalize(self, word: str) -> ReducedWord:
        """Reduced form of an arbitrary word, by folding append_generator.

        Inlined for speed; agrees letter-for-letter with repeated
        append_generator calls (unit-tested).
        """
        j0 = 0
        interior: list[int] = []
        jt = 0
        has_x = False
        absorbs = self.absorbs
        for g in word:
            if g == "y":
                if has_x:
                    jt += 1
                else:
                    j0 += 1
            elif g == "x":
                if not has_x:
                    has_x = True
                elif jt:
                    if not (interior and absorbs(interior[-1], jt)):
                        interior.append(jt)
                    jt = 0
            else:
                raise InvalidParameter(f"unknown generator {g!r}")
        return ReducedWord(j0, tuple(interior), jt, has_x)

    def normalize_reference(self, word: str, rng: random.Random) -> ReducedWord:
        """Reduce by applying uniformly random applicable rule instances.

        Independent reduction orders must reach the same normal form; this
        is the oracle check_confluence_sample runs against normalize.
        """
        nx = word.count("x")
        if nx + word.count("y") != len(word):
            raise InvalidParameter("words are over the alphabet {x, y}")
        if nx == 0:
            return ReducedWord(len(word))
        parts = word.split("x")
        j0 = len(parts[0])
        jt = len(parts[-1])
        gaps = [len(p) for p in parts[1:-1]]  # y-runs between consecutive x's
        removed = 0
        absorbs = self.absorbs
        while True:
            cands = [i for i, g in enumerate(gaps) if g == 0]
            cands += [i + 1 for i in range(len(gaps) - 1)
                      if gaps[i] and gaps[i + 1] and absorbs(gaps[i], gaps[i + 1])]
            if not cands:
                break
            pick = cands[rng.randrange(len(cands))] if len(cands) > 1 else cands[0]
            removed += gaps[pick] + 1  # the dropped run plus one x
            del gaps[pick]
        out = ReducedWord(j0, tuple(gaps), jt, True)
        # independent bookkeeping: letters removed must account for the length
        if out.length() != len(word) - removed:
            raise AssertionError(f"length bookkeeping broke on {word!r}")
        return out

    def multiply(self, a: ReducedWord, b: ReducedWord) -> ReducedWord:
        """Product in the semigroup, folding b's letters into a."""
        w = a
        for g in b.expand():
            w = self.append_generator(w, g)
        return w

    def block_stats(self, w: ReducedWord) -> BlockStats:
        per_class: dict[int, list[int]] = {}
        for j in w.interior:
            cell = per_class.setdefault(self.class_of(j), [0, 0])
            cell[0] += 1
            cell[1] += j + 1
        return BlockStats(
            n0=w.j0,
            n_inf=w.jt if w.has_x else 0,
            delta=1 if w.has_x else 0,
            per_class={k: ClassBlocks(c, t) for k, (c, t) in sorted(per_class.items())},
        )


def random_word(rng: random.Random, max_len: int) -> str:
    """A word with uniform length in [0, max_len] and i.i.d. uniform letters."""
    return "".join(rng.choices(GENERATORS, k=rng.randint(0, max_len)))


def check_confluence_sample(system: RewriteSystem, num_samples: int,
                            max_len: int = 40, seed: int = 0) -> ConfluenceReport:
    """Spot-check confluence on seeded random words.

    For each word, two independently seeded random-rule-order reductions and
    the incremental fold must produce identical reduced words, and the
    symbolic length must match the letter-count bookkeeping of the reducer.
    """
    rng = random.Random(seed)
    disagreements = 0
    length_failures = 0
    counterexample = None
    t0 = time.perf_counter()
    for _ in range(num_samples):
        word = random_word(rng, max_len)
        folded = system.normalize(word)
        ref1 = system.normalize_reference(word, random.Random(rng.getrandbits(64)))
        ref2 = system.normalize_reference(word, random.Random(rng.getrandbits(64)))
        if not (folded == ref1 == ref2):
            disagreements += 1
            if counterexample is None:
                counterexample = word
        if folded.length() != len(folded.expand()):
            length_failures += 1
            if counterexample is None:
                counterexample = word
    return ConfluenceReport(
        samples=num_samples,
        all_agree=disagreements == 0 and length_failures == 0,
        disagreements=disagreements,
        length_failures=length_failures,
        counterexample=counterexample,
        elapsed_s=time.perf_counter() - t0,
    )
