"""Linear codes over a FieldSpec and the exhaustive oracles run against them.

Words, matrices and syndromes hold canonical field indices. Products go through
galois arrays; every enumeration checks its budget up front and raises
``BudgetExceeded`` rather than truncating.
"""

import functools
import itertools
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from trslab.models import CosetRow
from trslab.services.field_service import FieldSpec

logger = logging.getLogger(__name__)

_CHUNK = 1 << 15


class BudgetExceeded(RuntimeError):
    """An enumeration would exceed its explicit budget."""


def check_budget(needed: int, budget: int, what: str) -> None:
    if needed > budget:
        logger.warning("Refusing %s: needs %d, budget %d", what, needed, budget)
        raise BudgetExceeded(f"{what} needs {needed} evaluations, budget is {budget}")


@dataclass(eq=False)
class LinearCode:
    field: FieldSpec
    G: np.ndarray
    H: np.ndarray
    _G_gf: object = dataclass_field(init=False, repr=False)
    _H_gf: object = dataclass_field(init=False, repr=False)

    def __post_init__(self):
        self.G = np.asarray(self.G, dtype=np.int64).reshape(-1, np.shape(self.G)[-1])
        self.H = np.asarray(self.H, dtype=np.int64).reshape(-1, self.G.shape[1])
        self._G_gf = self.field.to_gf(self.G)
        self._H_gf = self.field.to_gf(self.H)
        k, n = self.G.shape
        if int(np.linalg.matrix_rank(self._G_gf)) != k:
            raise ValueError("generator matrix is not of full rank")
        if self.H.shape[0] != n - k or (n > k and int(np.linalg.matrix_rank(self._H_gf)) != n - k):
            raise ValueError("parity-check matrix must have rank n - k")
        if np.any((self._G_gf @ self._H_gf.T).view(np.ndarray)):
            raise ValueError("H G^T is not zero")

    @classmethod
    def from_generator(cls, field: FieldSpec, G) -> "LinearCode":
        G_gf = field.to_gf(np.asarray(G, dtype=np.int64))
        H = field.from_gf(G_gf.null_space()) if G_gf.shape[0] < G_gf.shape[1] else np.zeros((0, G_gf.shape[1]))
        return cls(field, G, H)

    @property
    def n(self) -> int:
        return self.G.shape[1]

    @property
    def k(self) -> int:
        return self.G.shape[0]

    @property
    def redundancy(self) -> int:
        return self.n - self.k

    def encode(self, message) -> np.ndarray:
        return self.field.from_gf(self.field.to_gf(np.asarray(message, dtype=np.int64)) @ self._G_gf)

    def syndrome(self, word) -> tuple[int, ...]:
        return tuple(int(a) for a in self.syndromes(np.asarray(word, dtype=np.int64)[None, :])[0])

    def syndromes(self, words: np.ndarray) -> np.ndarray:
        """Row-wise H u^T for an (N, n) array of words."""
        if self.redundancy == 0:
            return np.zeros((len(words), 0), dtype=np.int64)
        return self.field.from_gf(self.field.to_gf(words) @ self._H_gf.T)

    def contains(self, word) -> bool:
        return not any(self.syndrome(word))

    def codeword_chunks(self, budget: int) -> Iterator[np.ndarray]:
        """All q^k codewords in message order, a chunk at a time."""
        q, k = self.field.q, self.k
        check_budget(q**k, budget, "codeword enumeration")
        radix = q ** np.arange(k - 1, -1, -1, dtype=np.int64)
        for start in range(0, q**k, _CHUNK):
            idx = np.arange(start, min(start + _CHUNK, q**k), dtype=np.int64)
            digits = (idx[:, None] // radix) % q
            yield self.field.from_gf(self.field.gf(digits) @ self._G_gf)


def hamming(u, v=None) -> int:
    u = np.asarray(u)
    if v is None:
        return int(np.count_nonzero(u))
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    return int(np.count_nonzero(u != v))


def min_distance(code: LinearCode, budget: int = 10**7) -> int:
    best = code.n + 1
    first = True
    for chunk in code.codeword_chunks(budget):
        weights = np.count_nonzero(chunk, axis=1)
        if first:
            weights[0] = code.n + 1
            first = False
        best = min(best, int(weights.min()))
    return best


def is_mds(code: LinearCode, budget: int = 10**7) -> bool:
    return min_distance(code, budget) == code.n - code.k + 1


# ============================================================
# Coset leaders
# ============================================================


def syndrome_codes(field: FieldSpec, syndromes: np.ndarray) -> np.ndarray:
    """Mixed-radix code sum a_i q^(r-1-i) of each syndrome row."""
    r = syndromes.shape[1]
    radix = field.q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    return syndromes @ radix


def syndrome_from_code(field: FieldSpec, code: int, r: int) -> tuple[int, ...]:
    digits = []
    for _ in range(r):
        code, d = divmod(code, field.q)
        digits.append(d)
    return tuple(reversed(digits))


def _in_span(code: LinearCode, support: tuple[int, ...], s: np.ndarray) -> bool:
    cols = code.H[:, list(support)]
    return code.field.rank(np.column_stack([cols, s])) == code.field.rank(cols)


def syndrome_weight(code: LinearCode, syndrome, budget: int = 10**7) -> int:
    """Minimal coset weight of one syndrome, by the smallest support whose columns span it.

    H has rank n - k, so a syndrome no (n-k-1)-support reaches has weight n - k.
    """
    s = np.asarray(syndrome, dtype=np.int64)
    if not s.any():
        return 0
    n, r = code.n, code.redundancy
    spent = 0
    for w in range(1, r):
        spent += math.comb(n, w)
        check_budget(spent, budget, f"span search at weight {w}")
        if any(_in_span(code, support, s) for support in itertools.combinations(range(n), w)):
            return w
    return r


def coset_leader(code: LinearCode, syndrome, weight: int | None = None, budget: int = 10**7) -> np.ndarray:
    """Lexicographically smallest word of minimal weight with the given syndrome."""
    field, n = code.field, code.n
    s = np.asarray(syndrome, dtype=np.int64)
    w = syndrome_weight(code, s, budget) if weight is None else weight
    if w == 0:
        return np.zeros(n, dtype=np.int64)
    best = None
    for support in itertools.combinations(range(n), w):
        cols = code.H[:, list(support)]
        if field.rank(cols) == w:
            reduced = field.from_gf(field.to_gf(np.column_stack([cols, s])).row_reduce())
            if reduced[w:, w].any():
                continue
            values = reduced[:w, w][None, :]
        else:
            check_budget((field.q - 1) ** w, budget, "leader search on a dependent support")
            values = np.array(list(itertools.product(range(1, field.q), repeat=w)), dtype=np.int64)
            hits = ~(field.from_gf(field.to_gf(values) @ field.to_gf(cols).T) != s).any(axis=1)
            values = values[hits]
        for v in values:
            if not v.all():
                continue
            word = np.zeros(n, dtype=np.int64)
            word[list(support)] = v
            if best is None or tuple(word) < tuple(best):
                best = word
    if best is None:
        raise RuntimeError(f"no word of weight {w} has syndrome {s.tolist()}")
    return best


@dataclass(eq=False)
class CosetTable:
    code: LinearCode
    weights: np.ndarray  # leader weight per syndrome code, int8

    @property
    def field(self) -> FieldSpec:
        return self.code.field

    @property
    def redundancy(self) -> int:
        return self.code.redundancy

    @functools.cached_property
    def covering_radius(self) -> int:
        return int(self.weights.max())

    def code_of(self, syndrome) -> int:
        return int(syndrome_codes(self.field, np.asarray([syndrome], dtype=np.int64))[0])

    def weight_of(self, syndrome) -> int:
        return int(self.weights[self.code_of(syndrome)])

    def deep_mask(self) -> np.ndarray:
        return self.weights == self.covering_radius

    def leader(self, syndrome) -> np.ndarray:
        return coset_leader(self.code, syndrome, self.weight_of(syndrome))

    def __len__(self) -> int:
        return len(self.weights)

    def __getitem__(self, syndrome) -> CosetRow:
        return self._row(self.code_of(syndrome), with_leader=True)

    def _row(self, code: int, with_leader: bool = False) -> CosetRow:
        syndrome = syndrome_from_code(self.field, code, self.redundancy)
        weight = int(self.weights[code])
        return CosetRow(
            syndrome=list(syndrome),
            leader_weight=weight,
            leader=coset_leader(self.code, syndrome, weight).tolist() if with_leader else None,
            is_deep_hole=weight == self.covering_radius,
        )

    def rows(self, with_leaders: bool = False) -> Iterator[CosetRow]:
        for code in range(len(self.weights)):
            yield self._row(code, with_leaders)


def coset_leaders(code: LinearCode, budget: int = 10**7) -> CosetTable:
    """Minimal coset weight of every syndrome, by increasing error weight.

    Patterns are enumerated with first nonzero value 1 and each new syndrome is
    marked together with its scalar multiples. The fill stops after weight
    n - k - 1: the rank of H bounds the covering radius by n - k, so whatever is
    still unreached has weight exactly n - k.
    """
    field, n, r = code.field, code.n, code.redundancy
    q = field.q
    size = q**r
    spent = size
    check_budget(spent, budget, "syndrome table")
    weights = np.full(size, -1, dtype=np.int8)
    weights[0] = 0
    filled = 1
    scalars = np.arange(2, q, dtype=np.int64)[:, None, None]

    for w in range(1, r):
        if filled == size:
            break
        patterns = math.comb(n, w) * (q - 1) ** (w - 1)
        spent += patterns
        check_budget(spent, budget, f"coset fill at weight {w}")
        values = np.array([(1, *rest) for rest in itertools.product(range(1, q), repeat=w - 1)], dtype=np.int64)
        for support in itertools.combinations(range(n), w):
            words = np.zeros((len(values), n), dtype=np.int64)
            words[:, list(support)] = values
            syn = code.syndromes(words)
            codes = syndrome_codes(field, syn)
            fresh = weights[codes] == -1
            if not fresh.any():
                continue
            new_codes, first = np.unique(codes[fresh], return_index=True)
            weights[new_codes] = w
            scaled = field.vmul(scalars, syn[fresh][first][None, :, :]).reshape(-1, r)
            weights[syndrome_codes(field, scaled)] = w
        filled = int(np.count_nonzero(weights >= 0))
        logger.info("coset fill: weight %d reached %d/%d syndromes", w, filled, size)

    weights[weights == -1] = r
    return CosetTable(code, weights)


@dataclass(frozen=True)
class CoveringRadius:
    radius: int
    method: str  # "certified": a syndrome of weight n - k was found; "table": full coset fill
    witness: tuple[int, ...] | None = None


def covering_radius(code: LinearCode, candidates=(), budget: int = 10**7) -> CoveringRadius:
    """rho(C), certified by a candidate syndrome of weight n - k when one is given, else from the table."""
    r = code.redundancy
    for syndrome in candidates:
        if syndrome_weight(code, syndrome, budget) == r:
            return CoveringRadius(r, "certified", tuple(int(v) for v in syndrome))
    return CoveringRadius(coset_leaders(code, budget).covering_radius, "table")


def error_distance(code: LinearCode, u, table: CosetTable | None = None, budget: int = 10**7) -> int:
    """d(u, C): the coset weight when a table is given, else a scan over the code."""
    u = np.asarray(u, dtype=np.int64)
    if len(u) != code.n:
        raise ValueError(f"word length {len(u)} does not match code length {code.n}")
    if table is not None:
        return table.weight_of(code.syndrome(u))
    return min(int(np.count_nonzero(chunk != u, axis=1).min()) for chunk in code.codeword_chunks(budget))


# ============================================================
# Subcodes of MDS codes
# ============================================================


@dataclass(frozen=True)
class SubcodeReport:
    covering_radius: int
    expected: int
    words_checked: int
    failures: int

    @property
    def passed(self) -> bool:
        return self.covering_radius == self.expected and self.failures == 0


def subcode_deep_holes(
    C0: LinearCode, C: LinearCode, coset_budget: int = 10**7, codeword_budget: int = 10**7
) -> SubcodeReport:
    """Checks rho(C) = n - k and that every word of C0 minus C is a deep hole of C."""
    if C.n != C0.n or C.k + 1 != C0.k:
        raise ValueError(f"expected a dimension gap of 1, got [{C0.n},{C0.k}] over [{C.n},{C.k}]")
    field = C.field
    if field.rank(np.vstack([C0.G, C.G])) != C0.k:
        raise ValueError("C is not a subcode of C0")
    expected = C.n - C.k
    weights: dict[tuple[int, ...], int] = {}  # keyed by the syndrome scaled to a leading 1
    checked = failures = 0
    for chunk in C0.codeword_chunks(codeword_budget):
        syn = C.syndromes(chunk)
        codes = syndrome_codes(field, syn)
        outside = np.flatnonzero(codes != 0)
        checked += len(outside)
        _, first, counts = np.unique(codes[outside], return_index=True, return_counts=True)
        for i, count in zip(first.tolist(), counts.tolist()):
            s = syn[outside[i]]
            lead = field.inv(int(s[np.flatnonzero(s)[0]]))
            key = tuple(field.vmul(lead, s).tolist())
            if key not in weights:
                weights[key] = syndrome_weight(C, s, coset_budget)
            failures += count * (weights[key] != expected)
    # the rank of H caps rho at n - k, so one syndrome of that weight settles it
    rho = expected if expected in weights.values() else coset_leaders(C, coset_budget).covering_radius
    return SubcodeReport(rho, expected, checked, failures)


def random_subcode(C0: LinearCode, rng: np.random.Generator) -> LinearCode:
    """A random one-codimensional subcode of C0."""
    field = C0.field
    while True:
        M = rng.integers(0, field.q, size=(C0.k - 1, C0.k))
        if field.rank(M) == C0.k - 1:
            return LinearCode.from_generator(field, field.matmul(M, C0.G))
