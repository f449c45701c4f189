"""Memoryless source over a finite alphabet with exact rational probabilities.

Symbols are kept sorted by descending probability (stable with respect to the
input order), which every construction in this package relies on: tree type i
always refers to the suffix alphabet starting at the i-th most probable symbol.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    NonPositiveError,
    ProbabilityFileError,
    SumNotOneError,
    TooSmallError,
)

ONE = Fraction(1)


@dataclass(frozen=True)
class SourceModel:
    """A stationary memoryless source.

    ``tail_sums[i]`` is the probability that a symbol is ``a_i`` or a less
    probable one; ``bits_b`` bounds the bit length of any probability's
    numerator or denominator and feeds the solver's bounding box.
    """

    symbols: tuple[str, ...]
    probs: tuple[Fraction, ...]
    tail_sums: tuple[Fraction, ...]
    bits_b: int

    @classmethod
    def from_probs(
        cls,
        probs: Iterable[Fraction | int | str],
        symbols: Sequence[str] | None = None,
    ) -> "SourceModel":
        raw = [Fraction(p) for p in probs]
        if len(raw) < 2:
            raise TooSmallError(f"alphabet needs at least 2 symbols, got {len(raw)}")
        if any(p <= 0 for p in raw):
            raise NonPositiveError("every probability must be positive")
        total = sum(raw)
        if total != 1:
            raise SumNotOneError(f"probabilities sum to {total}, not 1")
        if symbols is None:
            names = [f"a{i}" for i in range(len(raw))]
        else:
            names = [str(s) for s in symbols]
            if len(names) != len(raw):
                raise ProbabilityFileError(
                    f"{len(names)} symbol names for {len(raw)} probabilities"
                )
            if len(set(names)) != len(names):
                raise ProbabilityFileError("symbol names must be distinct")
        order = sorted(range(len(raw)), key=lambda i: raw[i], reverse=True)
        sorted_probs = tuple(raw[i] for i in order)
        sorted_names = tuple(names[i] for i in order)
        tails = []
        acc = Fraction(0)
        for p in reversed(sorted_probs):
            acc += p
            tails.append(acc)
        tails.reverse()
        bits = max(
            max(p.numerator.bit_length(), p.denominator.bit_length())
            for p in sorted_probs
        )
        return cls(sorted_names, sorted_probs, tuple(tails), bits)

    def __len__(self) -> int:
        return len(self.probs)

    @property
    def min_prob(self) -> Fraction:
        return self.probs[-1]

    def cond_prob(self, i: int) -> Fraction:
        """Probability that a symbol is ``a_i`` given it is ``a_i`` or later.

        Defined for 0 <= i <= |S|-2; the branching ratio of every tie
        operation at type i.
        """
        if not 0 <= i <= len(self) - 2:
            raise IndexError(f"type index {i} outside [0, {len(self) - 2}]")
        return self.probs[i] / self.tail_sums[i]

    def index_of(self, name: str) -> int:
        try:
            return self.symbols.index(name)
        except ValueError:
            raise KeyError(name) from None


def load_probability_file(path) -> SourceModel:
    """Read ``<symbol> <probability>`` lines into a source model.

    Probabilities may be ``num/den`` fractions or decimal literals (converted
    exactly, so ``0.6`` becomes 3/5). Blank lines and lines starting with
    ``#`` are ignored.
    """
    names: list[str] = []
    probs: list[Fraction] = []
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            parts = text.split()
            if len(parts) != 2:
                raise ProbabilityFileError(
                    f"{path}:{lineno}: expected '<symbol> <probability>', got {text!r}"
                )
            name, value = parts
            try:
                prob = Fraction(value)
            except (ValueError, ZeroDivisionError) as exc:
                raise ProbabilityFileError(
                    f"{path}:{lineno}: bad probability {value!r}: {exc}"
                ) from None
            names.append(name)
            probs.append(prob)
    if not names:
        raise ProbabilityFileError(f"{path}: no symbol lines found")
    return SourceModel.from_probs(probs, names)
