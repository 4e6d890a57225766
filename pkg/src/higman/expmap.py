"""Bijections f of Z/p^m with f^4 = id that almost satisfy f(x+1) = k f(x).

Two independent routes to the optimum on small moduli:

* :func:`brute_oracle` generates every permutation whose cycles have length
  1, 2 or 4 and scores each one.
* :func:`search_best` runs a depth-first search that assigns f(0), f(1), ...
  in order, keeps the cycle-length constraint incrementally and prunes with
  an upper bound on the number of matches.  Without a budget it is exact.
"""

from __future__ import annotations

import csv
import io
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from .zmod import inv_mod, is_prime


class CapExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class CycleFunction:
    p: int
    m: int
    k: int
    table: tuple

    def __post_init__(self):
        if not is_prime(self.p) or self.m < 0:
            raise ValueError(f"bad modulus {self.p}^{self.m}")
        if (self.k - 1) % self.p:
            raise ValueError(f"p={self.p} does not divide k-1")
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        size = self.size
        if len(self.table) != size:
            raise ValueError(f"table has {len(self.table)} entries, expected {size}")
        if any(not 0 <= v < size for v in self.table):
            raise ValueError("table entries must lie in [0, p^m)")

    @property
    def size(self) -> int:
        return self.p**self.m

    @classmethod
    def identity(cls, p: int, m: int, k: int) -> CycleFunction:
        return cls(p, m, k, tuple(range(p**m)))

    def __call__(self, x: int) -> int:
        return self.table[x % self.size]


@dataclass(frozen=True)
class VerifyReport:
    is_bijection: bool
    four_periodic: bool
    match_count: int
    epsilon: Fraction
    breakpoints: int

    def as_dict(self) -> dict:
        return {
            "is_bijection": self.is_bijection,
            "four_periodic": self.four_periodic,
            "match_count": self.match_count,
            "epsilon": str(self.epsilon),
            "breakpoints": self.breakpoints,
        }


def match_count(table: Sequence[int], k: int) -> int:
    size = len(table)
    return sum(1 for x in range(size) if table[(x + 1) % size] == k * table[x] % size)


def verify(f: CycleFunction) -> VerifyReport:
    size, table, k = f.size, f.table, f.k
    bijective = sorted(table) == list(range(size))
    four = all(table[table[table[table[x]]]] == x for x in range(size))
    matches = match_count(table, k)
    # a(x) = f(x) k^-x; k^size = 1 mod size, so the wraparound needs no care
    kinv = inv_mod(k, size) if size > 1 else 0
    a = [table[x] * pow(kinv, x, size) % size if size > 1 else 0 for x in range(size)]
    breaks = sum(1 for x in range(size) if a[(x + 1) % size] != a[x])
    return VerifyReport(bijective, four, matches, 1 - Fraction(matches, size), breaks)


def kx_orbits(size: int, k: int) -> list:
    """Cycles of y -> k*y on Z/size (a permutation since k is a unit)."""
    seen, out = set(), []
    for y in range(size):
        if y in seen:
            continue
        orbit, z = [], y
        while z not in seen:
            seen.add(z)
            orbit.append(z)
            z = k * z % size
        out.append(orbit)
    return out


def match_ceiling(size: int, k: int) -> int:
    """Matched steps follow y -> k*y and cannot close a whole orbit unless it is everything."""
    orbits = kx_orbits(size, k)
    return size if len(orbits) == 1 else size - len(orbits)


# -- exhaustive oracle ---------------------------------------------------------

def involution_like_perms(size: int):
    """Every permutation of range(size) with all cycle lengths in {1, 2, 4}."""
    f = [-1] * size

    def rec():
        try:
            x = f.index(-1)
        except ValueError:
            yield tuple(f)
            return
        free = [y for y in range(x + 1, size) if f[y] == -1]
        f[x] = x
        yield from rec()
        for y in free:
            f[x], f[y] = y, x
            yield from rec()
            f[y] = -1
        for a in free:
            for b in free:
                if b == a:
                    continue
                for c in free:
                    if c == a or c == b:
                        continue
                    f[x], f[a], f[b], f[c] = a, b, c, x
                    yield from rec()
                    f[a] = f[b] = f[c] = -1
        f[x] = -1

    yield from rec()


def brute_oracle(p: int, m: int, k: int, cap: int = 9) -> tuple:
    """(max match_count, lexicographically least optimal witness) by exhaustion."""
    size = p**m
    if size > cap:
        raise CapExceeded(f"p^m = {size} exceeds the exhaustive cap {cap}")
    k_red = k % size
    best, witness = -1, None
    for table in involution_like_perms(size):
        score = match_count(table, k_red)
        if score > best or (score == best and table < witness):
            best, witness = score, table
    return best, CycleFunction(p, m, k, witness)


# -- depth-first search ----------------------------------------------------------

@dataclass
class SearchResult:
    function: CycleFunction
    report: VerifyReport
    strategy: str
    nodes: int
    complete: bool
    budget_exceeded: bool
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "strategy": self.strategy,
            "modulus": self.function.size,
            "k": self.function.k,
            "nodes": self.nodes,
            "complete": self.complete,
            "budget_exceeded": self.budget_exceeded,
            "report": self.report.as_dict(),
        }
        out.update(self.extra)
        return out


class _Budget:
    def __init__(self, nodes: int | None, seconds: float | None):
        self.nodes = nodes
        self.deadline = None if seconds is None else time.monotonic() + seconds
        self.used = 0
        self.exceeded = False

    def tick(self) -> bool:
        self.used += 1
        if self.nodes is not None and self.used > self.nodes:
            self.exceeded = True
        elif self.deadline is not None and self.used % 1024 == 0 and time.monotonic() > self.deadline:
            self.exceeded = True
        return self.exceeded


def _dfs(size: int, k: int, budget: _Budget, prefer: Callable | None = None) -> tuple:
    """Branch and bound over f(0), f(1), ...; returns (best, table, complete)."""
    f = [-1] * size
    finv = [-1] * size
    ceiling = match_ceiling(size, k)
    best = [-1, None]

    def path_back(x):
        start, length = x, 1
        while finv[start] != -1:
            start = finv[start]
            length += 1
            if start == x:
                break
        return start, length

    def path_fwd(y):
        end, length = y, 1
        while f[end] != -1:
            end = f[end]
            length += 1
        return length

    def allowed(x, y):
        if finv[y] != -1:
            return False
        start, back = path_back(x)
        if y == start:
            return back in (1, 2, 4)
        return back + path_fwd(y) <= 4

    orbits = kx_orbits(size, k)
    kinv = inv_mod(k, size) if size > 1 else 0

    def remaining_bound(x):
        # matched steps among unused values follow y -> k*y; an orbit lying
        # wholly among the unused values cannot have all of its steps used
        free = [finv[y] == -1 for y in range(size)]
        edges = 0
        for orbit in orbits:
            if len(orbit) == 1:
                continue
            inside = sum(1 for y in orbit if free[y] and free[k * y % size])
            if inside == len(orbit) and len(orbit) < size:
                inside -= 1
            edges += inside
        if free[k * f[x - 1] % size]:
            edges += 1
        if free[kinv * f[0] % size]:
            edges += 1
        return min(edges, size - x + 1)

    def rec(x, matches):
        if budget.tick():
            return
        if x == size:
            if f[0] == k * f[size - 1] % size:
                matches += 1
            if matches > best[0]:
                best[0], best[1] = matches, tuple(f)
            return
        if x > 0 and matches + remaining_bound(x) <= best[0]:
            return
        order = []
        if prefer is not None:
            order.extend(v for v in prefer(x, f) if 0 <= v < size)
        if x > 0:
            order.append(k * f[x - 1] % size)
        order.extend(range(size))
        tried = set()
        for y in order:
            if y in tried:
                continue
            tried.add(y)
            if not allowed(x, y):
                continue
            f[x], finv[y] = y, x
            gain = 1 if x > 0 and y == k * f[x - 1] % size else 0
            rec(x + 1, matches + gain)
            f[x], finv[y] = -1, -1
            if budget.exceeded or best[0] >= ceiling:
                return

    rec(0, 0)
    return best[0], best[1], not budget.exceeded


def _parse_budget(budget) -> tuple:
    """``None``, an int node count, or a string like ``"10s"`` / ``"50000"``."""
    if budget is None:
        return None, None
    if isinstance(budget, (int,)):
        return budget, None
    if isinstance(budget, float):
        return None, budget
    text = str(budget).strip().lower()
    if text.endswith("s"):
        return None, float(text[:-1])
    return int(text), None


def search_best(p: int, m: int, k: int, strategy: str = "backtrack", budget=None,
                seed: int = 0, blocks: int = 3, restarts: int = 8,
                time_limit: float | None = None) -> SearchResult:
    """Best f with f^4 = id found by ``strategy`` within ``budget``.

    ``exhaustive`` is the unbudgeted search and proves optimality;
    ``backtrack`` is the same search cut off by the budget;
    ``block_ansatz`` seeds the value order from tables f(x) = c_j k^x that
    are constant-coefficient on ``blocks`` random blocks.
    """
    size = p**m
    k_red = k % size if size > 1 else 0
    nodes, seconds = _parse_budget(budget)
    if time_limit is not None:
        seconds = time_limit if seconds is None else min(seconds, time_limit)
    if strategy == "exhaustive":
        if size > 27:
            raise CapExceeded(f"exhaustive search refused for p^m = {size}")
        nodes = seconds = None
    if strategy in ("exhaustive", "backtrack"):
        b = _Budget(nodes, seconds)
        best, table, complete = _dfs(size, k_red, b)
        if table is None:
            raise CapExceeded("budget too small to find any admissible table")
        f = CycleFunction(p, m, k, table)
        return SearchResult(f, verify(f), strategy, b.used, complete, b.exceeded)
    if strategy == "block_ansatz":
        return _block_ansatz(p, m, k, nodes, seconds, seed, blocks, restarts)
    raise ValueError(f"unknown strategy {strategy!r}")


def ansatz_table(size: int, k: int, cuts: Sequence[int], consts: Sequence[int]) -> tuple:
    """f(x) = c_j * k^x on the j-th block delimited by ``cuts``."""
    table, j = [], 0
    bounds = list(cuts) + [size]
    for x in range(size):
        while x >= bounds[j]:
            j += 1
        table.append(consts[j] * pow(k, x, size) % size)
    return tuple(table)


def _block_ansatz(p, m, k, nodes, seconds, seed, blocks, restarts) -> SearchResult:
    size = p**m
    rng = random.Random(seed)
    per_restart = None if nodes is None else max(1, nodes // restarts)
    deadline = None if seconds is None else seconds / restarts
    best = None
    used = 0
    rejected = 0
    exceeded = False
    for _ in range(restarts):
        nb = max(1, min(blocks, size))
        cuts = sorted(rng.sample(range(1, size), nb - 1)) if size > 1 and nb > 1 else []
        consts = [rng.randrange(size) for _ in range(len(cuts) + 1)]
        seed_table = ansatz_table(size, k % size, cuts, consts)
        if not verify(CycleFunction(p, m, k, seed_table)).is_bijection:
            rejected += 1

        def prefer(x, f, seed_table=seed_table):
            return [seed_table[x]]

        b = _Budget(per_restart, deadline)
        score, table, _ = _dfs(size, k % size, b, prefer)
        used += b.used
        exceeded = exceeded or b.exceeded
        if table is not None and (best is None or score > best[0]):
            best = (score, table)
    if best is None:
        raise CapExceeded("budget too small to find any admissible table")
    f = CycleFunction(p, m, k, best[1])
    return SearchResult(f, verify(f), "block_ansatz", used, False, exceeded,
                        {"ansatz_rejected": rejected, "restarts": restarts})


# -- CSV ----------------------------------------------------------------------------

def to_csv(f: CycleFunction) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "f(x)"])
    writer.writerows(enumerate(f.table))
    return buf.getvalue()


def from_csv(text: str, p: int, m: int, k: int) -> CycleFunction:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if rows and not rows[0][0].strip().lstrip("-").isdigit():
        rows = rows[1:]
    table = dict((int(x), int(y)) for x, y in rows)
    size = p**m
    if sorted(table) != list(range(size)):
        raise ValueError(f"CSV must list every x in [0, {size})")
    return CycleFunction(p, m, k, tuple(table[x] for x in range(size)))
