"""Words in free groups and in closed orientable surface groups.

A word is a freely reduced tuple of signed generator indices: ``+i`` is the
``i``-th generator of an alphabet (1-based) and ``-i`` its inverse.

The word problem in the genus ``g >= 2`` surface group is decided with Dehn's
algorithm.  The standard relator ``[x1,y1]...[xg,yg]`` uses each of the ``4g``
signed letters exactly once, so two distinct cyclic permutations of the
relator (or its inverse) can share at most one letter: pieces have length 1,
the presentation is C'(1/7), and greedily replacing any subword that is more
than half a relator by the shorter complement reaches the empty word exactly
when the input is trivial.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from . import kernels


def _free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("0 is not a letter")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """Freely reduced word; construction always reduces."""

    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def gen(cls, i: int) -> "Word":
        return cls((i,))

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-x for x in reversed(self.letters)))

    def __invert__(self) -> "Word":
        return self.inverse()

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        return Word(base.letters * abs(k))

    def conj(self, c: "Word") -> "Word":
        """``c * self * c^-1``."""
        return c * self * c.inverse()

    def rotate(self, i: int) -> "Word":
        """Cyclic permutation starting at position ``i`` (conjugate by the prefix)."""
        return Word(self.letters[i:] + self.letters[:i])

    def abelianize(self, n_gens: int) -> tuple[int, ...]:
        v = [0] * n_gens
        for x in self.letters:
            v[abs(x) - 1] += 1 if x > 0 else -1
        return tuple(v)

    def __repr__(self) -> str:
        return f"Word({list(self.letters)})"


def reduce(w: Word | Iterable[int]) -> Word:
    """Free reduction.  ``Word`` values are already reduced; raw letter sequences are not."""
    return w if isinstance(w, Word) else Word(tuple(w))


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Return ``(core, conjugator)`` with ``w == conjugator * core * conjugator^-1``."""
    letters = w.letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    return Word(letters[i:j]), Word(letters[:i])


_TOKEN = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_']*)(?:\^(-?\d+))?\s*")


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        if len(set(self.names)) != len(self.names):
            raise ValueError(f"duplicate generator names in {self.names}")

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name) + 1
        except ValueError:
            raise KeyError(f"unknown generator {name!r}") from None

    def gen(self, name: str) -> Word:
        return Word.gen(self.index(name))

    def format(self, w: Word) -> str:
        """Plain-text form, e.g. ``x1 y1 x1^-1 y1^-1``; runs are collapsed to powers."""
        if not w:
            return "1"
        parts = []
        letters = w.letters
        i = 0
        while i < len(letters):
            j = i
            while j < len(letters) and letters[j] == letters[i]:
                j += 1
            name = self.names[abs(letters[i]) - 1]
            exp = (j - i) * (1 if letters[i] > 0 else -1)
            parts.append(name if exp == 1 else f"{name}^{exp}")
            i = j
        return " ".join(parts)

    def parse(self, text: str) -> Word:
        text = text.strip()
        if text in ("", "1"):
            return Word()
        letters: list[int] = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                raise ValueError(f"cannot parse word at column {pos + 1}: {text!r}")
            g = self.index(m.group(1))
            exp = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend([g if exp > 0 else -g] * abs(exp))
            pos = m.end()
        return Word(tuple(letters))


class SurfaceGroup:
    """Fundamental group of the closed orientable surface of the given genus."""

    def __init__(self, genus: int = 2):
        if genus < 1:
            raise ValueError("genus must be positive")
        self.genus = genus
        names = []
        for i in range(1, genus + 1):
            names += [f"x{i}", f"y{i}"]
        self.alphabet = Alphabet(tuple(names))
        rel: list[int] = []
        for i in range(genus):
            x, y = 2 * i + 1, 2 * i + 2
            rel += [x, y, -x, -y]
        self.relator = Word(tuple(rel))
        self.n_gens = 2 * genus
        self.rlen = 4 * genus
        self.succ = self._successor_table()

    def _successor_table(self) -> np.ndarray:
        n = self.n_gens
        succ = np.zeros((2, 2 * n + 1), dtype=np.int64)
        for row, r in enumerate((self.relator, self.relator.inverse())):
            L = r.letters
            for k, x in enumerate(L):
                succ[row, x + n] = L[(k + 1) % len(L)]
        return succ

    def __repr__(self) -> str:
        return f"SurfaceGroup(genus={self.genus})"

    def __eq__(self, other) -> bool:
        return isinstance(other, SurfaceGroup) and other.genus == self.genus

    def __hash__(self) -> int:
        return hash(("SurfaceGroup", self.genus))

    @cached_property
    def generators(self) -> tuple[Word, ...]:
        return tuple(Word.gen(i) for i in range(1, self.n_gens + 1))

    def word(self, text: str) -> Word:
        return self.alphabet.parse(text)

    def format(self, w: Word) -> str:
        return self.alphabet.format(w)

    def abelianize(self, w: Word) -> tuple[int, ...]:
        return w.abelianize(self.n_gens)

    # -- word problem -------------------------------------------------------

    def dehn_reduce(self, w: Word) -> Word:
        if self.genus < 2:
            raise NotImplementedError("Dehn's algorithm needs genus >= 2")
        if not w:
            return w
        arr = np.fromiter(w.letters, dtype=np.int64, count=len(w))
        out = kernels.dehn_reduce_array(arr, self.succ, self.rlen)
        return Word(tuple(int(x) for x in out))

    def is_trivial(self, w: Word) -> bool:
        if self.genus == 1:
            return not any(self.abelianize(w))
        return not self.dehn_reduce(w)

    def equal(self, u: Word, v: Word) -> bool:
        return self.is_trivial(u * v.inverse())

    def trivial_batch(self, words: np.ndarray, lengths: Optional[np.ndarray] = None) -> np.ndarray:
        """Vectorized ``is_trivial`` over a zero-padded 2D array of letters."""
        words = np.ascontiguousarray(words, dtype=np.int64)
        if lengths is None:
            lengths = (words != 0).sum(axis=1)
        return kernels.dehn_trivial_batch(words, np.asarray(lengths, dtype=np.int64), self.succ, self.rlen)

    def _longest_piece(self, letters: Sequence[int], i: int, cap: int) -> tuple[int, int]:
        """Longest cyclic-relator match starting at ``letters[i]`` (cyclically)."""
        n, off = len(letters), self.n_gens
        best_k, best_r = 0, 0
        for r in (0, 1):
            k, cur = 1, letters[i]
            while k < min(cap, n):
                nxt = int(self.succ[r, cur + off])
                if letters[(i + k) % n] != nxt:
                    break
                cur, k = nxt, k + 1
            if k > best_k:
                best_k, best_r = k, r
        return best_k, best_r

    def cyclic_dehn_reduce(self, w: Word) -> tuple[Word, Word]:
        """Shorten ``w`` within its conjugacy class.

        Returns ``(core, conjugator)`` with ``w = conjugator * core * conjugator^-1``
        in the group, ``core`` cyclically reduced and containing no cyclic subword
        longer than half a relator.
        """
        core, conj = cyclic_reduce(self.dehn_reduce(w))
        while core:
            letters = core.letters
            hit = None
            for i in range(len(letters)):
                k, r = self._longest_piece(letters, i, self.rlen)
                if 2 * k > self.rlen:
                    hit = (i, k, r)
                    break
            if hit is None:
                break
            i, k, r = hit
            conj = conj * Word(letters[:i])
            rot = letters[i:] + letters[:i]
            comp, cur = [], rot[k - 1]
            for _ in range(self.rlen - k):
                cur = int(self.succ[r, cur + self.n_gens])
                comp.append(cur)
            replaced = Word(tuple(-x for x in reversed(comp)) + rot[k:])
            core, c2 = cyclic_reduce(self.dehn_reduce(replaced))
            conj = conj * c2
        return core, Word(conj.letters)

    def conjugacy_obstructed(self, u: Word, v: Word) -> bool:
        """True when abelianization proves ``u`` and ``v`` are not conjugate."""
        return self.abelianize(u) != self.abelianize(v)

    def conjugacy_witness(self, u: Word, v: Word, bound: int = 16) -> Optional[Word]:
        """Find ``w`` with ``w v w^-1 = u`` and ``len(w) <= bound``.

        Both words are first shortened within their conjugacy classes; the
        remaining search runs breadth-first over short words ``t`` applied to
        cyclic permutations of the reduced ``v``.  ``None`` means no witness
        within the bound; use :meth:`conjugacy_obstructed` for a proof of
        non-conjugacy.
        """
        if self.conjugacy_obstructed(u, v):
            return None
        cu, pu = self.cyclic_dehn_reduce(u)
        cv, pv = self.cyclic_dehn_reduce(v)
        if bool(cu) != bool(cv):
            return None
        rotations = [Word(cv.letters[:i]) for i in range(max(len(cv), 1))]
        target = cu.inverse()
        depth = min(bound, 2 * self.genus)
        for t in _bfs_words(self.n_gens, depth):
            for a in rotations:
                x = t * a.inverse()
                if self.is_trivial(target * x * cv * x.inverse()):
                    w = self.dehn_reduce(pu * x * pv.inverse())
                    if len(w) <= bound:
                        return w
        return None


def _bfs_words(n_gens: int, max_len: int) -> Iterator[Word]:
    """Reduced words in order of length (shortlex within a length)."""
    letters = [s * g for g in range(1, n_gens + 1) for s in (1, -1)]
    queue: deque[tuple[int, ...]] = deque([()])
    while queue:
        w = queue.popleft()
        yield Word(w)
        if len(w) < max_len:
            for x in letters:
                if not w or w[-1] != -x:
                    queue.append(w + (x,))


def reduced_words(n_gens: int, max_len: int) -> Iterator[Word]:
    return _bfs_words(n_gens, max_len)


def normal_closure_words(relators: Sequence[Word], n_gens: int, max_len: int,
                         conj_len: int = 4, pair_conj_len: int = 1) -> set[tuple[int, ...]]:
    """Naive bounded enumeration of the normal closure, truncated to ``max_len``.

    Collects free reductions of single conjugates ``c r c^-1`` (``|c| <= conj_len``)
    and of products of two conjugates with ``|c| <= pair_conj_len``, for ``r``
    ranging over the relators and their inverses.  Independent of Dehn's
    algorithm; used as a test oracle.
    """
    rels = []
    for r in relators:
        rels += [r, r.inverse()]
    found: set[tuple[int, ...]] = {()}
    small = []
    for c in _bfs_words(n_gens, conj_len):
        for r in rels:
            x = r.conj(c)
            if len(x) <= max_len:
                found.add(x.letters)
            if len(c) <= pair_conj_len:
                small.append(x)
    for a, b in product(small, repeat=2):
        x = a * b
        if len(x) <= max_len:
            found.add(x.letters)
    return found
