"""Candidate parallel forms and the linear constraints they impose.

A parallel p-form Omega turns the surrogate pairing T(a, Omega) into a
linear map on symmetric matrices a, and the statement "T(a, Omega) = 0"
becomes a list of linear functionals: one per monomial of the output.
This module builds the three candidates

* ``kahler_form(n)``        -- -sum_i theta^i ^ theta^{n+i} on R^{2n};
* ``quaternionic_form(n)``  -- om1^om1 + om2^om2 + om3^om3 on R^{4n} for
  the three almost-complex structures of the block frame (e, Ie, Je, Ke);
* ``spin9_form(fspec)``     -- -v_0^...^v_7 + w_0^...^w_7 plus an
  arbitrary admissible mixed correction F on R^16,

and extracts the constraint functionals of designated target monomials
(the diagonal pair, quaternionic line and top monomials respectively).

For the 8-form, every admissible correction word is a wedge of grade-2
letters v_{s(i)} ^ v_{s(j)} / w_{t(k)} ^ w_{t(l)} with injective index
maps, mixing both letter kinds.  Removing one letter factor and adding
one basis covector can then never complete a pure v- or w-top monomial,
so the coefficient functionals of the two tops do not depend on F; the
``no_leak_report`` check verifies that cancellation for every one of the
256 index pairs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exterior import Form, hessian_action, indices_of, mask_of, wedge

SPIN9_DIM = 16
V_TOP = (1 << 8) - 1              # v_0 ^ ... ^ v_7
W_TOP = ((1 << 8) - 1) << 8       # w_0 ^ ... ^ w_7


def kahler_form(n: int) -> Form:
    """The 2-form -sum theta^i ^ theta^{n+i} on R^{2n}."""
    if n < 1 or 2 * n > SPIN9_DIM:
        raise ValueError("complex dimension out of range")
    return Form(2 * n, 2, {mask_of((i, n + i)): -1.0 for i in range(n)})


def kahler_targets(n: int) -> tuple[int, ...]:
    """Designated monomials theta^i ^ theta^{n+i} for the diagonal functionals."""
    return tuple(mask_of((i, n + i)) for i in range(n))


def quaternionic_kahler_forms(n: int) -> tuple[Form, Form, Form]:
    """The three 2-forms g(., I .), g(., J .), g(., K .) of the block frame.

    Blocks at offsets 0, n, 2n, 3n carry e, Ie, Je, Ke; the structures
    satisfy IJ = -JI = K and cyclic relations.
    """
    if n < 1 or 4 * n > SPIN9_DIM:
        raise ValueError("quaternionic dimension out of range")
    dim = 4 * n
    c1: dict[int, float] = {}
    c2: dict[int, float] = {}
    c3: dict[int, float] = {}
    for k in range(n):
        c1[mask_of((k, n + k))] = -1.0
        c1[mask_of((2 * n + k, 3 * n + k))] = -1.0
        c2[mask_of((k, 2 * n + k))] = -1.0
        c2[mask_of((n + k, 3 * n + k))] = 1.0
        c3[mask_of((k, 3 * n + k))] = -1.0
        c3[mask_of((n + k, 2 * n + k))] = -1.0
    return Form(dim, 2, c1), Form(dim, 2, c2), Form(dim, 2, c3)


def quaternionic_form(n: int) -> Form:
    """The parallel 4-form om1^om1 + om2^om2 + om3^om3 on R^{4n}."""
    om1, om2, om3 = quaternionic_kahler_forms(n)
    return wedge(om1, om1) + wedge(om2, om2) + wedge(om3, om3)


def quaternionic_targets(n: int) -> tuple[int, ...]:
    """Quaternionic-line monomials theta^i ^ theta^{i+n} ^ theta^{i+2n} ^ theta^{i+3n}."""
    return tuple(mask_of((i, n + i, 2 * n + i, 3 * n + i)) for i in range(n))


# ---------------------------------------------------------------------------
# The 8-form and its admissible corrections


@dataclass(frozen=True)
class FWord:
    """One wedge word: coefficient times four grade-2 letters.

    Each letter is (kind, p, q) with kind 'v' or 'w' and symbol indices
    p < q; a word must use both kinds so that it can never reduce to a
    pure top monomial.
    """

    coefficient: float
    letters: tuple[tuple[str, int, int], ...]

    def __post_init__(self):
        if len(self.letters) != 4:
            raise ValueError("a correction word needs total grade 8, i.e. 4 letters")
        kinds = set()
        for kind, p, q in self.letters:
            if kind not in ("v", "w"):
                raise ValueError("letter kind must be 'v' or 'w'")
            if not (0 <= p < q <= 7):
                raise ValueError("symbol indices must satisfy 0 <= p < q <= 7")
            kinds.add(kind)
        if kinds != {"v", "w"}:
            raise ValueError("word must mix v- and w-letters")


@dataclass(frozen=True)
class FSpec:
    """Admissible correction: words over letters routed through injective maps."""

    words: tuple[FWord, ...]
    sigma: tuple[int, ...] = tuple(range(8))
    tau: tuple[int, ...] = tuple(range(8))

    def __post_init__(self):
        for name, perm in (("sigma", self.sigma), ("tau", self.tau)):
            if sorted(perm) != list(range(8)):
                raise ValueError(f"{name} must be an injective map on eight symbols")


def build_correction(spec: FSpec) -> Form:
    """Evaluate an FSpec into a concrete 8-form on R^16."""
    total = Form.zero(SPIN9_DIM, 8)
    for word in spec.words:
        acc = Form(SPIN9_DIM, 0, {0: word.coefficient})
        for kind, p, q in word.letters:
            if kind == "v":
                a, b = spec.sigma[p], spec.sigma[q]
                offset = 0
            else:
                a, b = spec.tau[p], spec.tau[q]
                offset = 8
            sign = 1.0 if a < b else -1.0
            lo, hi = min(a, b) + offset, max(a, b) + offset
            acc = wedge(acc, Form(SPIN9_DIM, 2, {mask_of((lo, hi)): sign}))
        total = total + acc
    return total


def random_f_spec(rng: np.random.Generator, n_words: int = 3) -> FSpec:
    """Random admissible correction with random injective index maps."""
    sigma = tuple(int(i) for i in rng.permutation(8))
    tau = tuple(int(i) for i in rng.permutation(8))
    words = []
    for _ in range(n_words):
        n_v = int(rng.integers(1, 4))  # 1..3 v-letters, rest w-letters
        v_syms = rng.choice(8, size=2 * n_v, replace=False)
        w_syms = rng.choice(8, size=2 * (4 - n_v), replace=False)
        letters = []
        for k in range(n_v):
            p, q = sorted(int(s) for s in v_syms[2 * k: 2 * k + 2])
            letters.append(("v", p, q))
        for k in range(4 - n_v):
            p, q = sorted(int(s) for s in w_syms[2 * k: 2 * k + 2])
            letters.append(("w", p, q))
        coeff = float(rng.uniform(-2.0, 2.0))
        words.append(FWord(coeff, tuple(letters)))
    return FSpec(tuple(words), sigma, tau)


def spin9_form(spec: FSpec | None = None) -> Form:
    """-v_0^...^v_7 + w_0^...^w_7 plus the optional admissible correction."""
    base = Form(SPIN9_DIM, 8, {V_TOP: -1.0, W_TOP: 1.0})
    if spec is None:
        return base
    return base + build_correction(spec)


def spin9_targets() -> tuple[int, int]:
    return V_TOP, W_TOP


def no_leak_report(correction: Form) -> dict:
    """Max coefficient the correction contributes to either top monomial.

    Applies eps(theta^i) l(e_j) for all 256 index pairs and reads the two
    top coefficients; an admissible correction must leave both at zero.
    """
    from .exterior import epsilon, interior

    worst = 0.0
    worst_pair = None
    for j in range(SPIN9_DIM):
        lowered = interior(j, correction)
        if lowered.is_zero():
            continue
        for i in range(SPIN9_DIM):
            raised = epsilon(i, lowered)
            leak = max(abs(raised.coefficient(V_TOP)), abs(raised.coefficient(W_TOP)))
            if leak > worst:
                worst = leak
                worst_pair = (i, j)
    return {"max_leak": worst, "worst_pair": worst_pair, "pairs_checked": SPIN9_DIM**2}


# ---------------------------------------------------------------------------
# Constraint extraction


def monomial_functionals(omega: Form) -> dict[int, dict[tuple[int, int], float]]:
    """For each output monomial of T(a, omega), its functional in a.

    Functionals are expressed over the free entries (i, j) with i <= j of
    a symmetric matrix; off-diagonal entries collect both index orders.
    """
    n = omega.n
    full = (1 << n) - 1
    table: dict[int, dict[tuple[int, int], float]] = {}
    for m, c in omega.coeffs.items():
        mj = m
        while mj:
            lowj = mj & -mj
            j = lowj.bit_length() - 1
            mj ^= lowj
            sj = -1.0 if (m & (lowj - 1)).bit_count() & 1 else 1.0
            m1 = m ^ lowj
            rest = full ^ m1
            while rest:
                lowi = rest & -rest
                i = lowi.bit_length() - 1
                rest ^= lowi
                si = -1.0 if (m1 & (lowi - 1)).bit_count() & 1 else 1.0
                mo = m1 | lowi
                key = (i, j) if i <= j else (j, i)
                row = table.setdefault(mo, {})
                row[key] = row.get(key, 0.0) + si * sj * c
    for mo in list(table):
        table[mo] = {k: v for k, v in table[mo].items() if v != 0.0}
        if not table[mo]:
            del table[mo]
    return table


def coefficient_functional(omega: Form, monomial) -> dict[tuple[int, int], float]:
    """Functional of a single output monomial (mask or index tuple)."""
    m = monomial if isinstance(monomial, int) else mask_of(monomial)
    return monomial_functionals(omega).get(m, {})


def _rationalize(x: float, max_den: int = 64, tol: float = 1e-9) -> float:
    frac = Fraction(x).limit_denominator(max_den)
    return float(frac) if abs(float(frac) - x) <= tol else x


class ConstraintSet:
    """Canonical list of linear functionals on symmetric n x n matrices.

    Rows are reduced (ordered echelon pivots, unit pivot coefficient,
    near-rational entries snapped to denominators <= 64), so two
    extractions of the same constraint space compare equal.
    """

    def __init__(self, n: int, rows):
        self.n = n
        self.rows = [tuple(sorted(r.items())) if isinstance(r, dict) else tuple(r) for r in rows]

    def __len__(self):
        return len(self.rows)

    def __eq__(self, other):
        return isinstance(other, ConstraintSet) and self.n == other.n and self.rows == other.rows

    def __repr__(self):
        return f"ConstraintSet(n={self.n}, rows={len(self.rows)})"

    def coordinates(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(i, self.n)]

    def dense(self) -> np.ndarray:
        coords = {c: k for k, c in enumerate(self.coordinates())}
        mat = np.zeros((len(self.rows), len(coords)))
        for r, row in enumerate(self.rows):
            for key, val in row:
                mat[r, coords[key]] = val
        return mat

    def evaluate(self, a: np.ndarray) -> np.ndarray:
        """Residual of each functional on a symmetric matrix."""
        a = np.asarray(a, dtype=float)
        out = np.zeros(len(self.rows))
        for r, row in enumerate(self.rows):
            out[r] = sum(val * (a[i, j] if i == j else a[i, j] + a[j, i]) for (i, j), val in row)
        return out

    @classmethod
    def from_functionals(cls, n: int, functionals, tol: float = 1e-9) -> "ConstraintSet":
        """Canonicalize raw functionals by row reduction."""
        coords = [(i, j) for i in range(n) for j in range(i, n)]
        index = {c: k for k, c in enumerate(coords)}
        raw = []
        for func in functionals:
            vec = np.zeros(len(coords))
            for key, val in (func.items() if isinstance(func, dict) else func):
                vec[index[tuple(key)]] += val
            if np.abs(vec).max() > tol:
                raw.append(vec)
        if not raw:
            return cls(n, [])
        mat = np.array(raw)
        # row echelon with partial pivoting
        r = 0
        for c in range(mat.shape[1]):
            piv = r + int(np.argmax(np.abs(mat[r:, c]))) if r < mat.shape[0] else r
            if r >= mat.shape[0] or abs(mat[piv, c]) <= tol:
                continue
            mat[[r, piv]] = mat[[piv, r]]
            mat[r] = mat[r] / mat[r, c]
            for rr in range(mat.shape[0]):
                if rr != r and abs(mat[rr, c]) > 0:
                    mat[rr] = mat[rr] - mat[rr, c] * mat[r]
            r += 1
            if r == mat.shape[0]:
                break
        rows = []
        for vec in mat[:r]:
            row = {}
            for k, val in enumerate(vec):
                if abs(val) > tol:
                    row[coords[k]] = _rationalize(float(val))
            rows.append(tuple(sorted(row.items())))
        rows.sort()
        return cls(n, rows)

    def to_json(self) -> str:
        payload = {
            "n": self.n,
            "constraints": [
                {"indices": [list(k) for k, _ in row], "coeffs": [v for _, v in row]}
                for row in self.rows
            ],
        }
        return json.dumps(payload, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "ConstraintSet":
        payload = json.loads(text)
        rows = []
        for entry in payload["constraints"]:
            rows.append(tuple(((int(i), int(j)), float(c))
                              for (i, j), c in zip(entry["indices"], entry["coeffs"])))
        return cls(int(payload["n"]), rows)


def extract_constraints(omega: Form, targets=None) -> ConstraintSet:
    """Constraints on symmetric a implied by the designated monomials.

    ``targets`` lists output monomials (masks or index tuples); ``None``
    collects every monomial with a nonvanishing functional.  The result
    is canonicalized, so it is invariant under rescaling of omega.
    """
    table = monomial_functionals(omega)
    if targets is None:
        funcs = list(table.values())
    else:
        funcs = []
        for t in targets:
            m = t if isinstance(t, int) else mask_of(t)
            if m in table:
                funcs.append(table[m])
    return ConstraintSet.from_functionals(omega.n, funcs)


def standard_constraints(kind: str, n: int | None = None, spec: FSpec | None = None) -> ConstraintSet:
    """Extraction with the designated targets for each geometry."""
    if kind == "kahler":
        return extract_constraints(kahler_form(n), kahler_targets(n))
    if kind == "quaternionic":
        return extract_constraints(quaternionic_form(n), quaternionic_targets(n))
    if kind == "spin9":
        return extract_constraints(spin9_form(spec), spin9_targets())
    raise ValueError(f"unknown geometry kind: {kind}")


def verify_hessian_checks(omega: Form, constraints: ConstraintSet, rng: np.random.Generator,
                          trials: int = 50) -> float:
    """Sanity pairing: matrices satisfying the constraints keep the
    designated coefficients of T(a, omega) at zero."""
    worst = 0.0
    dense = constraints.dense()
    if dense.size == 0:
        return 0.0
    coords = constraints.coordinates()
    q, _ = np.linalg.qr(dense.T)
    for _ in range(trials):
        a = rng.uniform(-1.0, 1.0, (omega.n, omega.n))
        a = 0.5 * (a + a.T)
        vec = np.array([a[i, j] if i == j else a[i, j] + a[j, i] for (i, j) in coords])
        # project onto the null space of the constraint rows
        vec = vec - q @ (q.T @ vec)
        b = np.zeros_like(a)
        for k, (i, j) in enumerate(coords):
            if i == j:
                b[i, i] = vec[k]
            else:
                b[i, j] = b[j, i] = vec[k] / 2.0
        worst = max(worst, float(np.abs(constraints.evaluate(b)).max()))
    return worst
