"""Dense subsets of F_2^n."""

from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import PreconditionError
from .gf2_linalg import Coset, check_dim


class SetF2:
    """A subset ``A`` of F_2^n stored as a read-only boolean array of length 2^n."""

    __slots__ = ("n", "bitmap")

    def __init__(self, n: int, bitmap: np.ndarray):
        check_dim(n)
        bitmap = np.asarray(bitmap, dtype=bool)
        if bitmap.shape != (1 << n,):
            raise PreconditionError(f"bitmap must have length 2^{n}")
        if bitmap.flags.writeable:
            bitmap = bitmap.copy()
            bitmap.flags.writeable = False
        self.n = n
        self.bitmap = bitmap

    @classmethod
    def from_elements(cls, n: int, elements: Iterable[int]) -> SetF2:
        check_dim(n)
        bitmap = np.zeros(1 << n, dtype=bool)
        idx = np.fromiter((int(x) for x in elements), dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= 1 << n):
            raise PreconditionError(f"element outside F_2^{n}")
        bitmap[idx] = True
        return cls(n, bitmap)

    @classmethod
    def empty(cls, n: int) -> SetF2:
        return cls(n, np.zeros(1 << n, dtype=bool))

    @classmethod
    def full(cls, n: int) -> SetF2:
        return cls(n, np.ones(1 << n, dtype=bool))

    @property
    def size(self) -> int:
        return 1 << self.n

    def __len__(self) -> int:
        return int(np.count_nonzero(self.bitmap))

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.size and bool(self.bitmap[x])

    def __iter__(self):
        return (int(x) for x in self.elements())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SetF2):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.bitmap, other.bitmap))

    def __hash__(self) -> int:
        return hash((self.n, self.bitmap.tobytes()))

    def __repr__(self) -> str:
        return f"SetF2(n={self.n}, |A|={len(self)})"

    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.bitmap).astype(np.int64)

    def indicator(self) -> np.ndarray:
        return self.bitmap.astype(np.int64)

    def _check(self, other: SetF2) -> None:
        if self.n != other.n:
            raise PreconditionError("sets live in different ambient groups")

    def __or__(self, other: SetF2) -> SetF2:
        self._check(other)
        return SetF2(self.n, self.bitmap | other.bitmap)

    def __and__(self, other: SetF2) -> SetF2:
        self._check(other)
        return SetF2(self.n, self.bitmap & other.bitmap)

    def __sub__(self, other: SetF2) -> SetF2:
        self._check(other)
        return SetF2(self.n, self.bitmap & ~other.bitmap)

    def issubset(self, other: SetF2) -> bool:
        self._check(other)
        return not np.any(self.bitmap & ~other.bitmap)

    def isdisjoint(self, other: SetF2) -> bool:
        self._check(other)
        return not np.any(self.bitmap & other.bitmap)

    def restrict(self, coset: Coset) -> SetF2:
        """``A`` intersected with ``coset``."""
        if coset.subgroup.ambient_n != self.n:
            raise PreconditionError("coset and set live in different ambient groups")
        mask = np.zeros(self.size, dtype=bool)
        mask[coset.elements()] = True
        return SetF2(self.n, self.bitmap & mask)

    def count_in(self, coset: Coset) -> int:
        return int(np.count_nonzero(self.bitmap[coset.elements()]))

    def within(self, coset: Coset) -> bool:
        return self.count_in(coset) == len(self)
