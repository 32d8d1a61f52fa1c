"""Computable wreath-style products over a shifted torus grid.

An element is a rows x cols grid of base-group values plus an integer
shift pair. Shifts act on grids by cyclic translation (indices reduce
mod the grid shape) but add among themselves without reduction: the top
factor is the free abelian group of rank 2, not the finite grid.
"""
from __future__ import annotations

import itertools
from abc import ABC, abstractmethod
from dataclasses import dataclass

from .errors import InputRejected


class BaseGroup(ABC):
    """Finite group with hashable elements."""

    @property
    @abstractmethod
    def identity(self): ...

    @abstractmethod
    def op(self, a, b): ...

    @abstractmethod
    def inv(self, a): ...

    @abstractmethod
    def elements(self): ...

    @property
    @abstractmethod
    def order(self) -> int: ...

    @abstractmethod
    def describe(self) -> str: ...


class CyclicGroup(BaseGroup):
    def __init__(self, k: int):
        if not isinstance(k, int) or k < 1:
            raise ValueError(f"cyclic group order must be a positive integer, got {k!r}")
        self.k = k

    @property
    def identity(self):
        return 0

    def op(self, a, b):
        return (a + b) % self.k

    def inv(self, a):
        return (-a) % self.k

    def elements(self):
        return range(self.k)

    @property
    def order(self) -> int:
        return self.k

    def describe(self) -> str:
        return "1" if self.k == 1 else f"Z{self.k}"

    def __repr__(self):
        return f"CyclicGroup({self.k})"


class DirectProductGroup(BaseGroup):
    """Componentwise product; elements are tuples, one slot per factor."""

    def __init__(self, factors):
        self.factors = tuple(factors)
        if not self.factors:
            raise ValueError("direct product needs at least one factor")

    @property
    def identity(self):
        return tuple(f.identity for f in self.factors)

    def op(self, a, b):
        return tuple(f.op(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def elements(self):
        return itertools.product(*(f.elements() for f in self.factors))

    @property
    def order(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.order
        return n

    def describe(self) -> str:
        return " x ".join(f.describe() for f in self.factors)

    def __repr__(self):
        return f"DirectProductGroup({self.factors!r})"


def parse_atoms(text: str):
    """Atom shorthand: comma-separated tokens, each '1' or 'Z<k>'."""
    groups = []
    for tok in text.split(","):
        tok = tok.strip()
        if tok == "1":
            groups.append(CyclicGroup(1))
            continue
        if tok[:1] in ("Z", "z") and tok[1:].isdigit() and int(tok[1:]) >= 1:
            groups.append(CyclicGroup(int(tok[1:])))
            continue
        raise InputRejected("bad-request",
                            f"bad atom spec {tok!r}; expected '1' or 'Z<k>'")
    return tuple(groups)


@dataclass(frozen=True)
class WreathElement:
    grid: tuple  # rows x cols nested tuples of base elements
    shift: tuple[int, int]


class WreathGroup:
    """Engine for one fixed base group and grid shape.

    shift_rule exists so tests can install a deliberately wrong action;
    every operation that moves a grid goes through it.
    """

    def __init__(self, base: BaseGroup, rows: int, cols: int, shift_rule=None):
        if rows < 1 or cols < 1:
            raise ValueError("grid shape must be at least 1 x 1")
        self.base = base
        self.rows = rows
        self.cols = cols
        self._shift_rule = shift_rule if shift_rule is not None else self.shift_action

    def element(self, grid, shift=(0, 0)) -> WreathElement:
        grid = tuple(tuple(row) for row in grid)
        if len(grid) != self.rows or any(len(r) != self.cols for r in grid):
            raise ValueError(f"grid is not {self.rows} x {self.cols}")
        k, l = shift
        return WreathElement(grid, (int(k), int(l)))

    def identity(self) -> WreathElement:
        e = self.base.identity
        return WreathElement(tuple(tuple(e for _ in range(self.cols))
                                   for _ in range(self.rows)), (0, 0))

    def shift_action(self, grid, shift):
        k, l = shift
        return tuple(tuple(grid[(i + k) % self.rows][(j + l) % self.cols]
                           for j in range(self.cols))
                     for i in range(self.rows))

    def multiply(self, x: WreathElement, y: WreathElement) -> WreathElement:
        moved = self._shift_rule(y.grid, x.shift)
        grid = tuple(tuple(self.base.op(a, b) for a, b in zip(ra, rb))
                     for ra, rb in zip(x.grid, moved))
        return WreathElement(grid, (x.shift[0] + y.shift[0], x.shift[1] + y.shift[1]))

    def inverse(self, x: WreathElement) -> WreathElement:
        inv_grid = tuple(tuple(self.base.inv(a) for a in row) for row in x.grid)
        neg = (-x.shift[0], -x.shift[1])
        return WreathElement(self._shift_rule(inv_grid, neg), neg)

    def sigma(self, grid) -> WreathElement:
        """Inclusion of the map part: grid -> (grid, (0, 0))."""
        return self.element(grid, (0, 0))

    def proj(self, x: WreathElement) -> tuple[int, int]:
        """Projection onto the shift part."""
        return x.shift

    def grids(self):
        """All grids over a finite base, deterministic order."""
        cells = self.rows * self.cols
        for flat in itertools.product(self.base.elements(), repeat=cells):
            yield tuple(flat[i * self.cols:(i + 1) * self.cols]
                        for i in range(self.rows))

    def kernel_size(self) -> int:
        return self.base.order ** (self.rows * self.cols)

    def render(self, x: WreathElement) -> str:
        flat = ", ".join(str(v) for row in x.grid for v in row)
        return f"({flat}; ({x.shift[0]},{x.shift[1]}))"


def corrupted_wreath(base: BaseGroup, rows: int, cols: int) -> WreathGroup:
    """Engine whose shift action is off by one column: a negative control."""
    reference = WreathGroup(base, rows, cols)

    def bad(grid, shift):
        return reference.shift_action(grid, (shift[0], shift[1] + 1))

    return WreathGroup(base, rows, cols, shift_rule=bad)


def pointwise_product(base: BaseGroup, g1, g2):
    return tuple(tuple(base.op(a, b) for a, b in zip(r1, r2))
                 for r1, r2 in zip(g1, g2))


def check_group_axioms(wg: WreathGroup, pool, *, rng=None,
                       triple_budget=300_000, samples=2_000):
    """Identity, inverse, and associativity laws over a pool of elements.

    Associativity runs over all pool triples when that fits the budget,
    otherwise over seeded random triples. Returns None when every law
    holds, else a description of the first violated identity.
    """
    pool = list(pool)
    e = wg.identity()
    for x in pool:
        if wg.multiply(e, x) != x:
            return f"identity law e*x = x fails at x = {wg.render(x)}"
        if wg.multiply(x, e) != x:
            return f"identity law x*e = x fails at x = {wg.render(x)}"
        ix = wg.inverse(x)
        if wg.multiply(x, ix) != e or wg.multiply(ix, x) != e:
            return f"inverse law fails at x = {wg.render(x)}"
    n = len(pool)
    if n ** 3 <= triple_budget:
        triples = itertools.product(pool, repeat=3)
    else:
        if rng is None:
            raise ValueError("pool too large for exhaustive triples; pass rng")
        triples = [(rng.choice(pool), rng.choice(pool), rng.choice(pool))
                   for _ in range(samples)]
    for x, y, z in triples:
        if wg.multiply(wg.multiply(x, y), z) != wg.multiply(x, wg.multiply(y, z)):
            return ("associativity fails at "
                    f"{wg.render(x)}, {wg.render(y)}, {wg.render(z)}")
    return None


def check_exact_sequence(wg: WreathGroup, *, max_enum=10_000, rng=None, samples=400):
    """The map part injects, the shift part projects, and they splice exactly.

    Checks: sigma lands in ker(proj) and is injective; sigma is a
    homomorphism (uses multiply, so a corrupted shift action surfaces
    here); proj is additive; the kernel count equals |base|^(rows*cols).
    Returns None or the violated identity.
    """
    if wg.kernel_size() <= max_enum:
        all_grids = list(wg.grids())
    else:
        if rng is None:
            raise ValueError("kernel too large to enumerate; pass rng")
        pool_iter = wg.grids()
        all_grids = [next(pool_iter) for _ in range(samples)]
    seen = set()
    for grid in all_grids:
        x = wg.sigma(grid)
        if wg.proj(x) != (0, 0):
            return "sigma image escapes ker(proj)"
        seen.add(x)
    if len(seen) != len(all_grids):
        return "sigma is not injective"
    if wg.kernel_size() <= max_enum and len(seen) != wg.kernel_size():
        return (f"kernel count {len(seen)} differs from "
                f"|base|^(rows*cols) = {wg.kernel_size()}")
    if rng is None:
        pairs = itertools.product(all_grids, repeat=2) \
            if len(all_grids) ** 2 <= 40_000 else \
            zip(all_grids, reversed(all_grids))
    else:
        pairs = [(rng.choice(all_grids), rng.choice(all_grids)) for _ in range(samples)]
    for g1, g2 in pairs:
        lhs = wg.multiply(wg.sigma(g1), wg.sigma(g2))
        rhs = wg.sigma(pointwise_product(wg.base, g1, g2))
        if lhs != rhs:
            return "sigma is not a homomorphism under the installed shift action"
    probe = [(0, 0), (1, 0), (0, 1), (2, -3), (-1, 4)]
    for (a1, a2), (b1, b2) in itertools.product(probe, repeat=2):
        x = wg.element(wg.identity().grid, (a1, a2))
        y = wg.element(wg.identity().grid, (b1, b2))
        if wg.proj(wg.multiply(x, y)) != (a1 + b1, a2 + b2):
            return "proj is not additive on shifts"
    return None


def tau_reindex(rows: int, cols: int, atom_count: int, family: dict, transports: dict):
    """Assemble per-disk elements into one grid over the index torus.

    family[(i, j, k)] is an element attached to disk orbit i at grid
    position (j, k), i running 1..atom_count; transports[(i, j, k)] maps
    it into the reference copy for orbit i. The output grid holds, at
    (j, k), the tuple of transported values across i. Missing entries
    are an error.
    """
    grid = []
    for j in range(rows):
        row = []
        for k in range(cols):
            entry = []
            for i in range(1, atom_count + 1):
                key = (i, j, k)
                if key not in family:
                    raise ValueError(f"family is missing entry {key}")
                if key not in transports:
                    raise ValueError(f"transports are missing entry {key}")
                entry.append(transports[key](family[key]))
            row.append(tuple(entry))
        grid.append(tuple(row))
    return tuple(grid)
