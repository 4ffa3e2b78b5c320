"""Root data, Weyl combinatorics and exact character computations.

All vectors live in a single rational ambient space: the coefficient space of
the simple roots of some base system, with the invariant form given by a Gram
matrix normalized so long roots of the base have squared length 2.  Subsystems
(folded and orbit systems, stabilizer subsystems) are realized in the same
ambient space and reuse the same form.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import cos, factorial, fsum, pi, sin

from .linalg import (
    Matrix,
    Vec,
    ZERO,
    ONE,
    bilinear,
    coords_in_basis,
    identity,
    invariant_factors,
    is_zero_vec,
    mat,
    mat_det,
    mat_mul,
    mat_vec,
    rank_of,
    vadd,
    vneg,
    vscale,
    vsub,
    zero_vec,
)

DEFAULT_WEYL_CAP = 10**6


def resolve_weyl_cap(cap: int | None) -> int:
    """Explicit cap, else the TWINEFOLD_WEYL_CAP env var, else the default."""
    if cap is not None:
        return cap
    import os

    env = os.environ.get("TWINEFOLD_WEYL_CAP")
    return int(env) if env else DEFAULT_WEYL_CAP

_WEYL_ORDERS = {
    "A": lambda n: factorial(n + 1),
    "B": lambda n: 2**n * factorial(n),
    "C": lambda n: 2**n * factorial(n),
    "D": lambda n: 2 ** (n - 1) * factorial(n),
    "E6": lambda n: 51840,
    "E7": lambda n: 2903040,
    "E8": lambda n: 696729600,
    "F4": lambda n: 1152,
    "G2": lambda n: 12,
}


class RootSystemError(ValueError):
    pass


def parse_type_label(label: str) -> tuple[str, int]:
    """Split e.g. 'C3' into ('C', 3)."""
    family = "".join(ch for ch in label if ch.isalpha())
    rank = int(label[len(family):])
    return family, rank


def classical_weyl_order(label: str) -> int:
    family, rank = parse_type_label(label)
    if family in ("E", "F", "G"):
        return _WEYL_ORDERS[label](rank)
    return _WEYL_ORDERS[family](rank)


# ---------------------------------------------------------------------------
# Cartan matrices of the simple types
# ---------------------------------------------------------------------------


def standard_cartan_matrix(family: str, rank: int) -> tuple[tuple[int, ...], ...]:
    """Cartan matrix A[i][j] = <alpha_j, alpha_i^vee> in Bourbaki numbering."""
    n = rank
    a = [[2 * int(i == j) for j in range(n)] for i in range(n)]

    def chain(i, j):
        a[i][j] = -1
        a[j][i] = -1

    if family == "A":
        if n < 1:
            raise RootSystemError("A_n needs n >= 1")
        for i in range(n - 1):
            chain(i, i + 1)
    elif family in ("B", "C"):
        if n < 2:
            raise RootSystemError(f"{family}_n needs n >= 2")
        for i in range(n - 1):
            chain(i, i + 1)
        # B: last simple root short; C: last simple root long
        if family == "B":
            a[n - 2][n - 1] = -1
            a[n - 1][n - 2] = -2
        else:
            a[n - 2][n - 1] = -2
            a[n - 1][n - 2] = -1
    elif family == "D":
        if n < 4:
            raise RootSystemError("D_n needs n >= 4")
        for i in range(n - 3):
            chain(i, i + 1)
        chain(n - 3, n - 2)
        chain(n - 3, n - 1)
    elif family == "E":
        if n != 6:
            raise RootSystemError("only E6 is supported")
        # Bourbaki: node 2 attaches to node 4 of the chain 1-3-4-5-6
        pairs = [(0, 2), (2, 3), (3, 4), (4, 5), (1, 3)]
        for i, j in pairs:
            chain(i, j)
    elif family == "F":
        if n != 4:
            raise RootSystemError("only F4 is supported")
        chain(0, 1)
        chain(2, 3)
        a[1][2] = -1
        a[2][1] = -2
    elif family == "G":
        if n != 2:
            raise RootSystemError("only G2 is supported")
        # alpha_1 long, alpha_2 short
        a[0][1] = -1
        a[1][0] = -3
    else:
        raise RootSystemError(f"unknown family {family!r}")
    return tuple(tuple(row) for row in a)


def _root_half_lengths(family: str, rank: int) -> tuple[Fraction, ...]:
    """d_i = (alpha_i, alpha_i)/2 with long roots normalized to length^2 = 2."""
    n = rank
    one = Fraction(1)
    if family in ("A", "D", "E"):
        return (one,) * n
    if family == "B":
        return (one,) * (n - 1) + (Fraction(1, 2),)
    if family == "C":
        return (Fraction(1, 2),) * (n - 1) + (one,)
    if family == "F":
        return (one, one, Fraction(1, 2), Fraction(1, 2))
    if family == "G":
        return (one, Fraction(1, 3))
    raise RootSystemError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# core containers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Invariant-factor form d_1 | d_2 | ... of a finite abelian group."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self):
        for d, e in itertools.pairwise(self.invariant_factors):
            if e % d != 0:
                raise ValueError("invariant factors must form a divisor chain")
        if any(d <= 1 for d in self.invariant_factors):
            raise ValueError("invariant factors must exceed 1")

    @property
    def order(self) -> int:
        out = 1
        for d in self.invariant_factors:
            out *= d
        return out

    @property
    def is_trivial(self) -> bool:
        return not self.invariant_factors


@dataclass(frozen=True)
class Lattice:
    """Z-span of linearly independent rational vectors."""

    basis: tuple[Vec, ...]
    ambient_dim: int

    def __post_init__(self):
        if self.basis and rank_of(self.basis) != len(self.basis):
            raise ValueError("lattice basis must be linearly independent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def coords_of(self, v: Vec) -> Vec | None:
        return coords_in_basis(self.basis, v)

    def contains(self, v: Vec) -> bool:
        c = self.coords_of(v)
        return c is not None and all(e.denominator == 1 for e in c)


def lattice(basis, ambient_dim: int) -> Lattice:
    return Lattice(tuple(basis), ambient_dim)


def is_sublattice(sub: Lattice, sup: Lattice) -> bool:
    return all(sup.contains(b) for b in sub.basis)


def lattice_eq(a: Lattice, b: Lattice) -> bool:
    return is_sublattice(a, b) and is_sublattice(b, a)


def lattice_quotient(sub: Lattice, sup: Lattice) -> FiniteAbelianGroup:
    """Invariant factors of sup/sub for full-rank sublattices."""
    if sub.rank != sup.rank:
        raise ValueError("lattice ranks differ; quotient is infinite")
    rows = []
    for b in sub.basis:
        c = sup.coords_of(b)
        if c is None or any(e.denominator != 1 for e in c):
            raise ValueError("first lattice is not contained in the second")
        rows.append([int(e) for e in c])
    factors = invariant_factors(rows) if rows else ()
    if len(factors) != sub.rank:
        raise ValueError("degenerate quotient")
    return FiniteAbelianGroup(tuple(d for d in factors if d != 1))


def lattice_index(sub: Lattice, sup: Lattice) -> int:
    return lattice_quotient(sub, sup).order


# ---------------------------------------------------------------------------
# sparse exponential-sum polynomials
# ---------------------------------------------------------------------------


class FourierPolynomial:
    """Sparse integer combination of formal exponentials e^mu.

    Keys are ambient vectors (the weights mu); multiplication is convolution,
    conjugation negates all weights.  This is the exact carrier of characters
    restricted to a torus.
    """

    __slots__ = ("terms", "lattice_tag")

    def __init__(self, terms=None, lattice_tag: str = ""):
        self.terms: dict[Vec, int] = {}
        if terms:
            for k, v in dict(terms).items():
                if v != 0:
                    self.terms[k] = int(v)
        self.lattice_tag = lattice_tag

    @classmethod
    def constant(cls, dim: int, value: int = 1, lattice_tag: str = "") -> "FourierPolynomial":
        return cls({zero_vec(dim): value} if value else {}, lattice_tag)

    def coeff(self, mu: Vec) -> int:
        return self.terms.get(mu, 0)

    def constant_term(self, dim: int) -> int:
        return self.terms.get(zero_vec(dim), 0)

    @property
    def total_mass(self) -> int:
        return sum(self.terms.values())

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, FourierPolynomial) and self.terms == other.terms

    def __add__(self, other: "FourierPolynomial") -> "FourierPolynomial":
        out = dict(self.terms)
        for k, v in other.terms.items():
            c = out.get(k, 0) + v
            if c:
                out[k] = c
            else:
                out.pop(k, None)
        return FourierPolynomial(out, self.lattice_tag)

    def __sub__(self, other: "FourierPolynomial") -> "FourierPolynomial":
        return self + other.scaled(-1)

    def scaled(self, c: int) -> "FourierPolynomial":
        if c == 0:
            return FourierPolynomial({}, self.lattice_tag)
        return FourierPolynomial({k: c * v for k, v in self.terms.items()}, self.lattice_tag)

    def __mul__(self, other: "FourierPolynomial") -> "FourierPolynomial":
        out: dict[Vec, int] = {}
        small, big = sorted((self.terms, other.terms), key=len)
        for ka, va in small.items():
            for kb, vb in big.items():
                k = vadd(ka, kb)
                c = out.get(k, 0) + va * vb
                if c:
                    out[k] = c
                else:
                    out.pop(k, None)
        return FourierPolynomial(out, self.lattice_tag)

    def conj(self) -> "FourierPolynomial":
        return FourierPolynomial({vneg(k): v for k, v in self.terms.items()}, self.lattice_tag)

    def evaluate(self, gram: Matrix, xi: Vec) -> complex:
        """Numeric value sum_mu c_mu e^{2 pi i (mu, xi)}.

        Phases are reduced mod 1 exactly before exponentiation and the parts
        are accumulated with fsum, so the result is accurate to a few ulps
        even with heavy cancellation.
        """
        gx = mat_vec(gram, xi)
        res, ims = [], []
        for muv, c in self.terms.items():
            phase = sum((a * b for a, b in zip(muv, gx)), ZERO)
            angle = 2 * pi * float(phase - (phase.numerator // phase.denominator))
            res.append(c * cos(angle))
            ims.append(c * sin(angle))
        return complex(fsum(res), fsum(ims))

    def __repr__(self):
        return f"FourierPolynomial({len(self.terms)} terms)"


# ---------------------------------------------------------------------------
# Weyl elements
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeylElement:
    matrix: Matrix
    word: tuple[int, ...]

    @property
    def det(self) -> int:
        return int(mat_det(self.matrix))

    @property
    def length(self) -> int:
        return len(self.word)

    def apply(self, v: Vec) -> Vec:
        return mat_vec(self.matrix, v)


class WeylOverflowError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# RootDatum
# ---------------------------------------------------------------------------


class RootDatum:
    """A realized root system with the exact form of its ambient space.

    Immutable after construction; all derived quantities are precomputed or
    cached, and every operation is a pure function of the inputs.
    """

    def __init__(
        self,
        type_label: str,
        simple_roots: tuple[Vec, ...],
        ambient_gram: Matrix,
        reduced: bool = True,
        extra_positive_roots: tuple[Vec, ...] = (),
    ):
        self.type_label = type_label
        self.simple_roots = tuple(simple_roots)
        self.ambient_gram = ambient_gram
        self.rank = len(simple_roots)
        self.ambient_dim = len(ambient_gram)
        self.reduced = reduced

        g = ambient_gram
        self.cartan = tuple(
            tuple(
                _as_int(2 * bilinear(g, a_i, a_j) / bilinear(g, a_i, a_i))
                for a_j in simple_roots
            )
            for a_i in simple_roots
        )
        # gram matrix of the simple roots themselves
        self.gram = tuple(
            tuple(bilinear(g, a, b) for b in simple_roots) for a in simple_roots
        )

        pos_coords = _positive_roots_by_closure(self.cartan)
        self.positive_roots = tuple(
            self._from_coords(c) for c in pos_coords
        ) + tuple(extra_positive_roots)
        self._pos_coords = pos_coords

        # fundamental weights: <w_i, alpha_j^vee> = delta_ij inside the span
        cinv = _fraction_inverse(self.cartan)
        self.fundamental_weights = tuple(
            self._from_coords(tuple(cinv[j][i] for j in range(self.rank)))
            for i in range(self.rank)
        )
        half = Fraction(1, 2)
        self.weyl_vector = _vsum(
            (vscale(half, a) for a in self.positive_roots), self.ambient_dim
        )
        rho_alt = _vsum(self.fundamental_weights, self.ambient_dim)
        if self.reduced and self.weyl_vector != rho_alt:
            raise RootSystemError(
                "half-sum of positive roots disagrees with the sum of "
                "fundamental weights"
            )

        self.highest_root = self._dominant_root(long=True)
        self.highest_short_root = self._dominant_root(long=False)

        self._weyl_cache: list[WeylElement] | None = None
        self._refl_cache: dict[int, Matrix] = {}
        self._basis_solver = None

    # -- basic geometry ----------------------------------------------------

    def inner(self, u: Vec, v: Vec) -> Fraction:
        return bilinear(self.ambient_gram, u, v)

    def norm_sq(self, v: Vec) -> Fraction:
        return self.inner(v, v)

    def coroot(self, alpha: Vec) -> Vec:
        return vscale(2 / self.norm_sq(alpha), alpha)

    def pair_coroot(self, v: Vec, alpha: Vec) -> Fraction:
        return 2 * self.inner(v, alpha) / self.norm_sq(alpha)

    def reflect(self, v: Vec, alpha: Vec) -> Vec:
        return vsub(v, vscale(self.pair_coroot(v, alpha), alpha))

    def simple_reflection_matrix(self, i: int) -> Matrix:
        m = self._refl_cache.get(i)
        if m is None:
            cols = [
                self.reflect(_unit(self.ambient_dim, j), self.simple_roots[i])
                for j in range(self.ambient_dim)
            ]
            m = tuple(tuple(cols[j][r] for j in range(self.ambient_dim)) for r in range(self.ambient_dim))
            self._refl_cache[i] = m
        return m

    def coords_of(self, v: Vec) -> Vec | None:
        """Coordinates of v in the simple-root basis (None if outside span)."""
        return coords_in_basis(self.simple_roots, v)

    def _from_coords(self, coords) -> Vec:
        out = zero_vec(self.ambient_dim)
        for c, a in zip(coords, self.simple_roots, strict=True):
            if c:
                out = vadd(out, vscale(c, a))
        return out

    # -- dominance and integrality ----------------------------------------

    def is_dominant(self, v: Vec) -> bool:
        return all(self.inner(v, a) >= 0 for a in self.simple_roots)

    def is_integral(self, v: Vec) -> bool:
        return all(self.pair_coroot(v, a).denominator == 1 for a in self.simple_roots)

    def is_dominant_integral(self, v: Vec) -> bool:
        return all(
            (p := self.pair_coroot(v, a)) >= 0 and p.denominator == 1
            for a in self.simple_roots
        )

    def make_dominant(self, v: Vec) -> tuple[Vec, Matrix]:
        """Dominant Weyl-chamber representative and the matrix achieving it."""
        m = identity(self.ambient_dim)
        cur = v
        while True:
            for i, a in enumerate(self.simple_roots):
                if self.inner(cur, a) < 0:
                    cur = self.reflect(cur, a)
                    m = mat_mul(self.simple_reflection_matrix(i), m)
                    break
            else:
                return cur, m

    def weyl_orbit(self, v: Vec) -> set[Vec]:
        seen = {v}
        frontier = [v]
        while frontier:
            nxt = []
            for u in frontier:
                for a in self.simple_roots:
                    w = self.reflect(u, a)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen

    # -- Weyl group traversal ----------------------------------------------

    def weyl_elements(self, cap: int | None = None):
        """Yield every Weyl element once, with a reduced word (BFS order)."""
        cap = resolve_weyl_cap(cap)
        if self._weyl_cache is not None:
            yield from self._weyl_cache
            return
        acc: list[WeylElement] = []
        ident = WeylElement(identity(self.ambient_dim), ())
        seen = {ident.matrix}
        frontier = [ident]
        acc.append(ident)
        yield ident
        while frontier:
            nxt = []
            for w in frontier:
                for i in range(self.rank):
                    m = mat_mul(self.simple_reflection_matrix(i), w.matrix)
                    if m not in seen:
                        if len(seen) >= cap:
                            raise WeylOverflowError(
                                f"Weyl group exceeds the traversal cap {cap}"
                            )
                        seen.add(m)
                        el = WeylElement(m, (i,) + w.word)
                        nxt.append(el)
                        acc.append(el)
                        yield el
            frontier = nxt
        self._weyl_cache = acc

    def weyl_order(self, cap: int | None = None) -> int:
        return sum(1 for _ in self.weyl_elements(cap))

    def longest_element_matrix(self) -> Matrix:
        """Matrix of w_0, computed by folding -rho to the dominant chamber."""
        _, m = self.make_dominant(vneg(self.weyl_vector))
        return m

    # -- misc ----------------------------------------------------------------

    def _dominant_root(self, long: bool) -> Vec | None:
        """Dominant root of extreme length; None for reducible systems."""
        lengths = {self.norm_sq(a) for a in self.positive_roots}
        target = max(lengths) if long else min(lengths)
        for beta in self.positive_roots:
            if self.norm_sq(beta) == target and self.is_dominant(beta):
                return beta
        return None

    def __repr__(self):
        return f"RootDatum({self.type_label}, rank={self.rank})"


def _unit(n: int, j: int) -> Vec:
    return tuple(ONE if i == j else ZERO for i in range(n))


def _vsum(vectors, dim: int) -> Vec:
    out = zero_vec(dim)
    for v in vectors:
        out = vadd(out, v)
    return out


def _as_int(x: Fraction) -> int:
    if x.denominator != 1:
        raise RootSystemError(f"expected an integer, got {x}")
    return int(x)


def _fraction_inverse(int_matrix) -> Matrix:
    from .linalg import mat_inv

    return mat_inv(mat(int_matrix))


def _positive_roots_by_closure(cartan) -> list[tuple[int, ...]]:
    """Positive roots as integer simple-root coordinate tuples.

    Reflection closure starting from the simple roots: reflect everything by
    every simple reflection until the set stabilizes, then keep the vectors
    with nonnegative coordinates.
    """
    rank = len(cartan)
    simple = [tuple(int(i == j) for j in range(rank)) for i in range(rank)]

    def reflect(coords, i):
        # <beta, alpha_i^vee> = sum_j c_j A[i][j]
        pairing = sum(c * cartan[i][j] for j, c in enumerate(coords))
        out = list(coords)
        out[i] -= pairing
        return tuple(out)

    roots = set(simple) | {tuple(-c for c in s) for s in simple}
    frontier = set(roots)
    while frontier:
        nxt = set()
        for beta in frontier:
            for i in range(rank):
                gamma = reflect(beta, i)
                if gamma not in roots:
                    roots.add(gamma)
                    nxt.add(gamma)
        frontier = nxt
    positive = [r for r in roots if all(c >= 0 for c in r)]
    positive.sort(key=lambda r: (sum(r), r))
    if 2 * len(positive) != len(roots):
        raise RootSystemError("closure did not split into positive/negative halves")
    return positive


# ---------------------------------------------------------------------------
# construction and classification
# ---------------------------------------------------------------------------

_ROOT_COUNTS = {
    "A": lambda n: n * (n + 1),
    "B": lambda n: 2 * n * n,
    "C": lambda n: 2 * n * n,
    "D": lambda n: 2 * n * (n - 1),
    "E": lambda n: 72,
    "F": lambda n: 48,
    "G": lambda n: 12,
}


def build_root_datum(type_label: str, rank: int | None = None) -> RootDatum:
    """Realize a simple type in its simple-root coefficient space.

    Long roots have squared length 2.  'BC' builds the non-reduced system as a
    B_n datum augmented with the doubled short roots; no Weyl machinery runs
    on those extra vectors.
    """
    if rank is None:
        family, rank = parse_type_label(type_label)
    else:
        family = type_label
    label = f"{family}{rank}"
    if family == "BC":
        if rank < 1:
            raise RootSystemError("BC_n needs n >= 1")
        base = build_root_datum("B", rank) if rank >= 2 else build_root_datum("A", 1)
        if rank == 1:
            # BC1 = {±v, ±2v} with v short: rescale the A1 realization
            g = mat_scale(Fraction(1, 4), base.ambient_gram)
            short = base.simple_roots[0]
            return RootDatum(
                "BC1", (short,), g, reduced=False,
                extra_positive_roots=(vscale(2, short),),
            )
        doubled = tuple(
            vscale(2, beta)
            for beta in base.positive_roots
            if base.norm_sq(beta) == 1
        )
        return RootDatum(
            label, base.simple_roots, base.ambient_gram,
            reduced=False, extra_positive_roots=doubled,
        )
    cartan = standard_cartan_matrix(family, rank)
    d = _root_half_lengths(family, rank)
    gram = tuple(
        tuple(d[i] * cartan[i][j] for j in range(rank)) for i in range(rank)
    )
    # sanity: the Gram matrix must come out symmetric
    if gram != tuple(zip(*gram)):
        raise RootSystemError("inconsistent length assignment")
    simple = tuple(_unit(rank, i) for i in range(rank))
    datum = RootDatum(label, simple, gram)
    expected = _ROOT_COUNTS[family](rank)
    if 2 * len(datum.positive_roots) != expected:
        raise RootSystemError(
            f"{label}: closure produced {2 * len(datum.positive_roots)} roots, "
            f"expected {expected}"
        )
    return datum


def root_datum_from_simple_roots(
    simple_roots, ambient_gram: Matrix, label: str | None = None
) -> RootDatum:
    """Realize the subsystem generated by the given simple roots."""
    simple_roots = tuple(simple_roots)
    if label is None:
        label = classify_system(simple_roots, ambient_gram)
    datum = RootDatum(label, simple_roots, ambient_gram)
    return datum


def cartan_matrices_match(a, b) -> bool:
    """Permutation equivalence of two integer Cartan matrices."""
    n = len(a)
    if len(b) != n:
        return False
    rows_a = sorted(sorted(row) for row in a)
    rows_b = sorted(sorted(row) for row in b)
    if rows_a != rows_b:
        return False
    for perm in itertools.permutations(range(n)):
        if all(a[perm[i]][perm[j]] == b[i][j] for i in range(n) for j in range(n)):
            return True
    return False


def classify_simple_system(simple_roots, ambient_gram: Matrix) -> str:
    """Type label of a realized simple system, by Cartan-matrix matching.

    B2/C2 are abstractly isomorphic; this returns 'B2' for that shape and
    callers with more context may relabel (verified by is_of_type).
    """
    n = len(simple_roots)
    cartan = [
        [
            _as_int(
                2 * bilinear(ambient_gram, a, b) / bilinear(ambient_gram, a, a)
            )
            for b in simple_roots
        ]
        for a in simple_roots
    ]
    candidates = [("A", n)]
    if n >= 2:
        candidates += [("B", n), ("C", n)]
    if n >= 4:
        candidates.append(("D", n))
    if n == 6:
        candidates.append(("E", 6))
    if n == 4:
        candidates.append(("F", 4))
    if n == 2:
        candidates.append(("G", 2))
    for family, rank in candidates:
        if cartan_matrices_match(cartan, standard_cartan_matrix(family, rank)):
            return f"{family}{rank}"
    raise RootSystemError("simple system does not match any supported type")


def classify_system(simple_roots, ambient_gram: Matrix) -> str:
    """Type label of a realized system, reducible ones as 'X+Y' (sorted)."""
    n = len(simple_roots)
    if n == 0:
        return "0"
    # connected components of the Coxeter graph
    adj = [
        [i != j and bilinear(ambient_gram, simple_roots[i], simple_roots[j]) != 0
         for j in range(n)]
        for i in range(n)
    ]
    comps: list[list[int]] = []
    seen: set[int] = set()
    for start in range(n):
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if adj[i][j] and j not in seen:
                    seen.add(j)
                    comp.append(j)
                    stack.append(j)
        comps.append(sorted(comp))
    labels = [
        classify_simple_system([simple_roots[i] for i in comp], ambient_gram)
        for comp in comps
    ]
    return "+".join(sorted(labels))


def is_of_type(simple_roots, ambient_gram: Matrix, label: str) -> bool:
    family, rank = parse_type_label(label)
    if len(simple_roots) != rank:
        return False
    cartan = [
        [
            _as_int(2 * bilinear(ambient_gram, a, b) / bilinear(ambient_gram, a, a))
            for b in simple_roots
        ]
        for a in simple_roots
    ]
    return cartan_matrices_match(cartan, standard_cartan_matrix(family, rank))


# ---------------------------------------------------------------------------
# Weyl traversal entry point
# ---------------------------------------------------------------------------


def weyl_traverse(datum: RootDatum, cap: int | None = None):
    """Iterate the Weyl group; raises WeylOverflowError beyond ``cap``."""
    if not datum.reduced:
        raise RootSystemError("no Weyl machinery on non-reduced systems")
    return datum.weyl_elements(cap)


# ---------------------------------------------------------------------------
# dimensions, multiplicities, characters
# ---------------------------------------------------------------------------


def weyl_dimension(datum: RootDatum, lam: Vec) -> int:
    """Dimension by the product formula prod (lam+rho, a) / (rho, a)."""
    if not datum.is_dominant_integral(lam):
        raise RootSystemError("weight must be dominant and integral")
    rho = datum.weyl_vector
    num = ONE
    den = ONE
    shifted = vadd(lam, rho)
    for a in datum.positive_roots:
        num *= datum.inner(shifted, a)
        den *= datum.inner(rho, a)
    return _as_int(num / den)


class _CoordFrame:
    """Simple-root coordinate frame of a datum, for fast weight combinatorics."""

    def __init__(self, datum: RootDatum):
        self.datum = datum
        self.cartan = datum.cartan
        self.rank = datum.rank
        # gram of the simple roots
        self.g = datum.gram
        self.rho = self.coords_of(datum.weyl_vector)

    def coords_of(self, v: Vec):
        c = self.datum.coords_of(v)
        if c is None:
            raise RootSystemError("vector lies outside the root span")
        return c

    def inner(self, u, v) -> Fraction:
        return sum(
            (
                ui * vj * self.g[i][j]
                for i, ui in enumerate(u)
                if ui
                for j, vj in enumerate(v)
                if vj
            ),
            ZERO,
        )

    def pairing(self, c, i) -> Fraction:
        return sum((cj * self.cartan[i][j] for j, cj in enumerate(c) if cj), ZERO)

    def reflect(self, c, i):
        out = list(c)
        out[i] -= self.pairing(c, i)
        return tuple(out)

    def make_dominant(self, c):
        cur = c
        while True:
            for i in range(self.rank):
                if self.pairing(cur, i) < 0:
                    cur = self.reflect(cur, i)
                    break
            else:
                return cur

    def orbit(self, c):
        seen = {c}
        frontier = [c]
        while frontier:
            nxt = []
            for u in frontier:
                for i in range(self.rank):
                    w = self.reflect(u, i)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
            frontier = nxt
        return seen


def freudenthal_multiplicities(datum: RootDatum, lam: Vec) -> dict[Vec, int]:
    """Weight multiplicities of the irrep with highest weight ``lam``.

    Returns dominant-weight multiplicities, keyed by ambient vectors; the full
    weight system is the union of the Weyl orbits of the keys.
    """
    if not datum.is_dominant_integral(lam):
        raise RootSystemError("weight must be dominant and integral")
    frame = _CoordFrame(datum)
    lam_c = frame.coords_of(lam)

    def in_hull(c) -> bool:
        dom = frame.make_dominant(c)
        return all(
            (d := li - mi).denominator == 1 and d >= 0
            for li, mi in zip(lam_c, dom, strict=True)
        )

    # all weights by saturation downward from lam
    weights = {lam_c}
    frontier = [lam_c]
    units = [tuple(int(i == j) for j in range(frame.rank)) for i in range(frame.rank)]
    while frontier:
        nxt = []
        for c in frontier:
            for u in units:
                w = tuple(a - b for a, b in zip(c, u))
                if w not in weights and in_hull(w):
                    weights.add(w)
                    nxt.append(w)
        frontier = nxt

    dominant = [c for c in weights if all(frame.pairing(c, i) >= 0 for i in range(frame.rank))]
    dominant.sort(key=lambda c: (-frame.inner(c, frame.rho), c))

    pos = [frame.coords_of(a) for a in datum.positive_roots]
    lam_rho = tuple(a + b for a, b in zip(lam_c, frame.rho))
    nlam = frame.inner(lam_rho, lam_rho)

    mults: dict[tuple, int] = {lam_c: 1}
    for mu in dominant:
        if mu == lam_c:
            continue
        total = ZERO
        for a in pos:
            j = 1
            while True:
                nu = tuple(m + j * ai for m, ai in zip(mu, a))
                if not in_hull(nu):
                    break
                m_nu = mults.get(frame.make_dominant(nu), 0)
                if m_nu:
                    total += m_nu * frame.inner(nu, a)
                j += 1
        mu_rho = tuple(m + r for m, r in zip(mu, frame.rho))
        denom = nlam - frame.inner(mu_rho, mu_rho)
        mults[mu] = _as_int(2 * total / denom)

    out = {}
    for c, m in mults.items():
        if m:
            out[datum._from_coords(c)] = m
    return out


def irreducible_character(datum: RootDatum, lam: Vec) -> FourierPolynomial:
    """Exact character of the irrep with highest weight ``lam``.

    Freudenthal multiplicities on the dominant cone, then Weyl-orbit
    expansion; the result is W-invariant with highest coefficient 1.
    """
    frame = _CoordFrame(datum)
    mults = freudenthal_multiplicities(datum, lam)
    terms: dict[Vec, int] = {}
    for mu, m in mults.items():
        for c in frame.orbit(frame.coords_of(mu)):
            terms[datum._from_coords(c)] = m
    return FourierPolynomial(terms, lattice_tag=datum.type_label)


def decompose_into_irreducibles(
    datum: RootDatum, poly: FourierPolynomial
) -> dict[Vec, int]:
    """Write a W-invariant polynomial as an integer combination of characters.

    Highest-term peel-off; raises if the input is not a virtual character on
    the weight lattice of the datum.
    """
    rho = datum.weyl_vector
    remaining = FourierPolynomial(poly.terms)
    out: dict[Vec, int] = {}
    while remaining:
        mu = max(
            remaining.terms, key=lambda v: (datum.inner(v, rho), v)
        )
        if not datum.is_dominant_integral(mu):
            raise RootSystemError(
                "input is not Weyl-invariant: highest remaining term "
                f"{mu} is not dominant integral"
            )
        m = remaining.terms[mu]
        out[mu] = out.get(mu, 0) + m
        remaining = remaining - irreducible_character(datum, mu).scaled(m)
    return {k: v for k, v in out.items() if v}
