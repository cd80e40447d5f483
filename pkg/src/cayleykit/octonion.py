"""Octonion (Cayley number) arithmetic over the canonical real basis.

The algebra lives on R^8 with basis ``(1, e_0, ..., e_6)``.  All products
are generated from seven cyclic triples

    (i, i+1, i+3)  mod 7,      i = 0..6,

each meaning ``e_i e_{i+1} = e_{i+3}`` together with the cyclic rotations
of that relation.  The remaining rules are ``e_i^2 = -1`` and
anticommutativity of distinct imaginary units.  Every ordered pair of
distinct imaginary units appears in exactly one triple, so the table
closes without conflicts; :meth:`MultiplicationTable.generate` asserts
this while filling in the 8 x 8 signed index table.

The product is not associative but alternative: any two elements generate
an associative subalgebra.  The conjugation ``x -> x*`` negates the
imaginary part, and the Euclidean norm is multiplicative.  These are the
facts the verification suites exercise numerically.
"""

from __future__ import annotations

import csv

import numpy as np

# e_i e_{i+1} = e_{i+3}, indices mod 7
FANO_TRIPLES = tuple((i, (i + 1) % 7, (i + 3) % 7) for i in range(7))

DIM = 8


class MultiplicationTable:
    """Signed product table for the basis (1, e_0, ..., e_6).

    Entry ``(i, j)`` holds the product of basis elements ``i`` and ``j``
    as a pair (sign, index), both 8 x 8 integer arrays.  Index 0 is the
    real unit, index ``k`` with ``k >= 1`` is ``e_{k-1}``.
    """

    def __init__(self, sign: np.ndarray, index: np.ndarray):
        sign = np.asarray(sign, dtype=np.int64)
        index = np.asarray(index, dtype=np.int64)
        if sign.shape != (DIM, DIM) or index.shape != (DIM, DIM):
            raise ValueError("table must be 8 x 8")
        if not np.all(np.isin(sign, (-1, 1))) or index.min() < 0 or index.max() >= DIM:
            raise ValueError("malformed table entries")
        self.sign = sign
        self.index = index
        self._tensor = None

    @classmethod
    def generate(cls) -> "MultiplicationTable":
        """Close the seven cyclic triples into the full signed table."""
        sign = np.zeros((DIM, DIM), dtype=np.int64)
        index = np.full((DIM, DIM), -1, dtype=np.int64)

        def put(i, j, s, k):
            # each slot must be written exactly once
            if index[i, j] != -1:
                raise AssertionError(f"table conflict at ({i}, {j})")
            sign[i, j] = s
            index[i, j] = k

        put(0, 0, 1, 0)
        for i in range(1, DIM):
            put(0, i, 1, i)      # 1 * e = e
            put(i, 0, 1, i)
            put(i, i, -1, 0)     # e^2 = -1
        for a, b, c in FANO_TRIPLES:
            for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
                put(x + 1, y + 1, 1, z + 1)
                put(y + 1, x + 1, -1, z + 1)
        if index.min() < 0:
            raise AssertionError("table left incomplete by the triples")
        return cls(sign, index)

    def product(self, i: int, j: int) -> tuple[int, int]:
        """Product of basis elements ``i`` and ``j`` as (sign, index)."""
        return int(self.sign[i, j]), int(self.index[i, j])

    def structure_tensor(self) -> np.ndarray:
        """Dense (8, 8, 8) tensor C with e_i e_j = sum_k C[i, j, k] e_k."""
        if self._tensor is None:
            c = np.zeros((DIM, DIM, DIM))
            ii, jj = np.meshgrid(range(DIM), range(DIM), indexing="ij")
            c[ii, jj, self.index] = self.sign
            c.setflags(write=False)
            self._tensor = c
        return self._tensor

    def save(self, path) -> None:
        """Write the table as CSV of signed entries ``sign * (index + 1)``."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            for i in range(DIM):
                writer.writerow(int(self.sign[i, j] * (self.index[i, j] + 1)) for j in range(DIM))

    @classmethod
    def load(cls, path) -> "MultiplicationTable":
        """Read a table written by :meth:`save` (used by CLI fixtures)."""
        with open(path, newline="") as fh:
            rows = [[int(x) for x in row] for row in csv.reader(fh) if row]
        if len(rows) != DIM or any(len(r) != DIM for r in rows):
            raise ValueError("table file must contain an 8 x 8 grid")
        packed = np.array(rows, dtype=np.int64)
        if np.any(packed == 0) or np.any(np.abs(packed) > DIM):
            raise ValueError("entries must be nonzero signed indices in 1..8")
        return cls(np.sign(packed), np.abs(packed) - 1)


DEFAULT_TABLE = MultiplicationTable.generate()


def mul_arrays(a, b, table: MultiplicationTable | None = None) -> np.ndarray:
    """Batched octonion product on trailing axes of length 8."""
    c = (table or DEFAULT_TABLE).structure_tensor()
    return np.einsum("ijk,...i,...j->...k", c, np.asarray(a, dtype=float), np.asarray(b, dtype=float))


def conj_arrays(a) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def inner_arrays(a, b) -> np.ndarray:
    return np.sum(np.asarray(a, dtype=float) * np.asarray(b, dtype=float), axis=-1)


def norm_arrays(a) -> np.ndarray:
    return np.sqrt(inner_arrays(a, a))


class Octonion:
    """A single Cayley number with coefficients ordered (1, e_0, ..., e_6)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.shape != (DIM,):
            raise ValueError("octonion needs 8 coefficients")
        self.coeffs = arr

    @classmethod
    def zero(cls) -> "Octonion":
        return cls(np.zeros(DIM))

    @classmethod
    def unit(cls) -> "Octonion":
        c = np.zeros(DIM)
        c[0] = 1.0
        return cls(c)

    @classmethod
    def e(cls, i: int) -> "Octonion":
        """Imaginary basis unit e_i, 0 <= i <= 6."""
        if not 0 <= i <= 6:
            raise ValueError("imaginary index out of range")
        c = np.zeros(DIM)
        c[i + 1] = 1.0
        return cls(c)

    @classmethod
    def random(cls, rng: np.random.Generator) -> "Octonion":
        return cls(rng.uniform(-1.0, 1.0, DIM))

    @property
    def real(self) -> float:
        return float(self.coeffs[0])

    @property
    def imag(self) -> np.ndarray:
        return self.coeffs[1:].copy()

    def conjugate(self) -> "Octonion":
        return Octonion(conj_arrays(self.coeffs))

    def inner(self, other: "Octonion") -> float:
        return float(inner_arrays(self.coeffs, other.coeffs))

    def norm(self) -> float:
        return float(norm_arrays(self.coeffs))

    def __add__(self, other):
        return Octonion(self.coeffs + other.coeffs)

    def __sub__(self, other):
        return Octonion(self.coeffs - other.coeffs)

    def __neg__(self):
        return Octonion(-self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return Octonion(mul_arrays(self.coeffs, other.coeffs))
        return Octonion(self.coeffs * float(other))

    def __rmul__(self, scalar):
        return Octonion(self.coeffs * float(scalar))

    def __eq__(self, other):
        return isinstance(other, Octonion) and bool(np.all(self.coeffs == other.coeffs))

    def __repr__(self):
        return f"Octonion({self.coeffs.tolist()})"


class OctPair:
    """Point of R^16 = O^2, the tangent model used by the curvature module.

    Coordinates 0..7 are the first octonion slot, 8..15 the second one.
    """

    __slots__ = ("x", "y")

    def __init__(self, x: Octonion, y: Octonion):
        self.x = x
        self.y = y

    @classmethod
    def from_vector(cls, v) -> "OctPair":
        v = np.asarray(v, dtype=float)
        if v.shape != (2 * DIM,):
            raise ValueError("pair vector needs 16 components")
        return cls(Octonion(v[:DIM]), Octonion(v[DIM:]))

    @classmethod
    def random(cls, rng: np.random.Generator) -> "OctPair":
        return cls(Octonion.random(rng), Octonion.random(rng))

    def vector(self) -> np.ndarray:
        return np.concatenate([self.x.coeffs, self.y.coeffs])

    def inner(self, other: "OctPair") -> float:
        return self.x.inner(other.x) + self.y.inner(other.y)

    def norm(self) -> float:
        return float(np.sqrt(self.inner(self)))

    def __repr__(self):
        return f"OctPair({self.x!r}, {self.y!r})"
