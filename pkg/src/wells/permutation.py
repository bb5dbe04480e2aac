"""
Permutation - elements of the symmetric group S_N in one-line notation
Labels are 1-based in I/O (cycle strings, images); arrays are 0-based internally
"""

import itertools
from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from errors import DomainError, ParseError


@dataclass(frozen=True)
class Permutation:
    """Bijection on {1..N}; image[i-1] = p(i)"""

    image: Tuple[int, ...]

    def __post_init__(self):
        image = tuple(int(v) for v in self.image)
        if sorted(image) != list(range(1, len(image) + 1)):
            raise DomainError(f"image {list(image)} is not a bijection on 1..{len(image)}")
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        """The two-cycle (i j)"""
        if not (1 <= i <= n and 1 <= j <= n) or i == j:
            raise DomainError(f"transposition ({i} {j}) is not valid in S_{n}")
        image = list(range(1, n + 1))
        image[i - 1], image[j - 1] = j, i
        return cls(tuple(image))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], n: int) -> "Permutation":
        image = list(range(1, n + 1))
        seen = set()
        for cycle in cycles:
            for symbol in cycle:
                if not 1 <= symbol <= n:
                    raise DomainError(f"symbol {symbol} out of range 1..{n}")
                if symbol in seen:
                    raise DomainError(f"symbol {symbol} repeated")
                seen.add(symbol)
            for a, b in zip(cycle, list(cycle[1:]) + list(cycle[:1])):
                image[a - 1] = b
        return cls(tuple(image))

    @property
    def degree(self) -> int:
        return len(self.image)

    def __call__(self, i: int) -> int:
        return self.image[i - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """self ∘ other: apply other first"""
        self._check_degree(other)
        return Permutation(tuple(self.image[v - 1] for v in other.image))

    __mul__ = compose

    def inverse(self) -> "Permutation":
        inverse = [0] * self.degree
        for i, v in enumerate(self.image, start=1):
            inverse[v - 1] = i
        return Permutation(tuple(inverse))

    def is_identity(self) -> bool:
        return self.image == tuple(range(1, self.degree + 1))

    def cycles(self, include_fixed: bool = False) -> List[Tuple[int, ...]]:
        """Disjoint cycles, each starting at its smallest symbol"""
        seen = set()
        result = []
        for start in range(1, self.degree + 1):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            nxt = self(start)
            while nxt != start:
                cycle.append(nxt)
                seen.add(nxt)
                nxt = self(nxt)
            if len(cycle) > 1 or include_fixed:
                result.append(tuple(cycle))
        return result

    def cycle_type(self) -> Tuple[int, ...]:
        """Cycle lengths in descending order (a partition of N)"""
        return tuple(sorted((len(c) for c in self.cycles(include_fixed=True)), reverse=True))

    def sign(self) -> int:
        transpositions = sum(len(c) - 1 for c in self.cycles())
        return -1 if transpositions % 2 else 1

    def to_cycle_string(self) -> str:
        cycles = self.cycles()
        if not cycles:
            return "()"
        sep = "," if self.degree > 9 else ""
        return "".join("(" + sep.join(str(s) for s in c) + ")" for c in cycles)

    def _check_degree(self, other: "Permutation"):
        if other.degree != self.degree:
            raise DomainError(f"size mismatch: S_{self.degree} vs S_{other.degree}")

    def __str__(self):
        return self.to_cycle_string()


def symmetric_group(n: int) -> List[Permutation]:
    """All of S_n, images in lexicographic order"""
    if n < 1:
        raise DomainError(f"S_{n} is not defined")
    return [Permutation(p) for p in itertools.permutations(range(1, n + 1))]


def parse_cycles(text: str, n: int) -> Permutation:
    """Parse cycle notation such as "(12)(3)" or "(1,10)(2,3)"; whitespace is ignored

    Inside a cycle, symbols are single digits unless the cycle contains commas.
    Omitted symbols are fixed points.
    """
    if n < 1:
        raise DomainError(f"S_{n} is not defined")

    cycles = []
    position = 0
    length = len(text)

    while position < length:
        char = text[position]
        if char.isspace():
            position += 1
            continue
        if char != "(":
            raise ParseError(f"expected '(' but found {char!r}", position)

        close = text.find(")", position + 1)
        nested = text.find("(", position + 1)
        if close == -1 or (nested != -1 and nested < close):
            raise ParseError("unbalanced parentheses", position)

        body_start = position + 1
        cycles.append(_parse_cycle_body(text[body_start:close], body_start, n))
        position = close + 1

    seen = {}
    for cycle, offsets in cycles:
        for symbol, offset in zip(cycle, offsets):
            if symbol in seen:
                raise ParseError(f"symbol {symbol} repeated", offset)
            seen[symbol] = offset

    return Permutation.from_cycles([cycle for cycle, _ in cycles], n)


def _parse_cycle_body(body, offset, n):
    """Return (symbols, their text offsets) for the inside of one cycle"""
    symbols = []
    offsets = []

    if "," in body:
        cursor = 0
        for token in body.split(","):
            stripped = token.strip()
            token_offset = offset + cursor + (len(token) - len(token.lstrip()))
            if not stripped.isdigit():
                raise ParseError(f"invalid symbol {stripped!r}", token_offset)
            symbols.append(int(stripped))
            offsets.append(token_offset)
            cursor += len(token) + 1
    else:
        for i, char in enumerate(body):
            if char.isspace():
                continue
            if not char.isdigit():
                raise ParseError(f"invalid symbol {char!r}", offset + i)
            symbols.append(int(char))
            offsets.append(offset + i)

    for symbol, symbol_offset in zip(symbols, offsets):
        if not 1 <= symbol <= n:
            raise ParseError(f"symbol {symbol} out of range 1..{n}", symbol_offset)

    return symbols, offsets
