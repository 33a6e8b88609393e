"""Exact order dimension by covering critical pairs with reversible sets.

A set S of incomparable pairs is reversible when P together with the
reversed pairs {y < x : (x, y) in S} is still acyclic.  The dimension of a
non-chain poset is the least t such that its critical pairs split into t
reversible sets; each set then yields one linear extension.
"""
from __future__ import annotations

import heapq
import time
import multiprocessing
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .graph import BudgetExceeded
from .poset import Poset, _bits, critical_pairs, topological_order


class DimensionBudgetExceeded(BudgetExceeded):
    """Timeout of :func:`exact_dimension`; carries the bounds reached so far."""

    def __init__(self, lower: int, upper: int, witness, stats):
        self.lower = lower
        self.upper = upper
        self.witness = witness
        self.stats = stats
        super().__init__(f"{lower} <= dim <= {upper}")


@dataclass
class SearchStats:
    nodes: int = 0
    prunes: int = 0
    elapsed: float = 0.0
    refuted: list[int] = field(default_factory=list)

    def merge(self, other: "SearchStats") -> None:
        self.nodes += other.nodes
        self.prunes += other.prunes


@dataclass
class DimCertificate:
    value: int
    witness: list[list[str]]
    classes: list[list[tuple[str, str]]]
    lower_bound: str  # "trivial", "clique" or "exhausted"
    clique: list[tuple[str, str]]
    stats: SearchStats

    def report(self) -> str:
        lines = [f"dim = {self.value}"]
        if self.lower_bound == "exhausted":
            lines.append(
                f"lower bound: no cover by {self.value - 1} reversible sets "
                f"(search exhausted, {self.stats.nodes} nodes, {self.stats.prunes} prunes)"
            )
        elif self.lower_bound == "clique":
            pairs = " ".join(f"({a},{b})" for a, b in self.clique)
            lines.append(f"lower bound: {len(self.clique)} pairwise non-reversible critical pairs {pairs}")
        else:
            lines.append("lower bound: trivial")
        lines.append(f"elapsed: {self.stats.elapsed:.3f}s")
        for i, (cls, ext) in enumerate(zip(self.classes, self.witness), start=1):
            lines.append(f"class {i}: " + " ".join(f"({a},{b})" for a, b in cls))
            lines.append(f"L{i}: " + " ".join(ext))
        return "\n".join(lines) + "\n"


# -- reversibility -----------------------------------------------------------

def _check_incomparable(p: Poset, S) -> list[tuple[int, int]]:
    out = []
    for x, y in S:
        i, j = p.index(x), p.index(y)
        if i == j or p.up[i] >> j & 1 or p.up[j] >> i & 1:
            raise ValueError(f"pair ({x},{y}) is not incomparable")
        out.append((i, j))
    return out


def is_reversible(p: Poset, S: Iterable[tuple[str, str]]) -> bool:
    """True iff some linear extension puts y before x for every (x, y) in S."""
    pairs = _check_incomparable(p, S)
    n = len(p)
    succ = [set(_bits(p.up[i])) for i in range(n)]
    for i, j in pairs:
        succ[j].add(i)
    indeg = [0] * n
    for i in range(n):
        for j in succ[i]:
            indeg[j] += 1
    ready = [i for i in range(n) if indeg[i] == 0]
    seen = 0
    while ready:
        i = ready.pop()
        seen += 1
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
    return seen == n


def has_alternating_cycle(p: Poset, S: Iterable[tuple[str, str]]) -> bool:
    """Cycle in the digraph on S with (x, y) -> (u, v) whenever u <= y."""
    pairs = _check_incomparable(p, S)
    k = len(pairs)
    succ = []
    for _, y in pairs:
        below_y = p.down[y] | (1 << y)
        succ.append([b for b, (u, _) in enumerate(pairs) if below_y >> u & 1])
    colour = [0] * k
    for root in range(k):
        if colour[root]:
            continue
        colour[root] = 1
        stack = [(root, iter(succ[root]))]
        while stack:
            node, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                colour[node] = 2
                stack.pop()
            elif colour[nxt] == 1:
                return True
            elif colour[nxt] == 0:
                colour[nxt] = 1
                stack.append((nxt, iter(succ[nxt])))
    return False


def linear_extensions(p: Poset):
    """Every linear extension of p (exponential; small posets only)."""
    n = len(p)
    els = p.elements
    full = (1 << n) - 1

    def rec(placed: int, seq: list[int]):
        if placed == full:
            yield [els[i] for i in seq]
            return
        for i in range(n):
            if not placed >> i & 1 and p.down[i] & ~placed == 0:
                seq.append(i)
                yield from rec(placed | 1 << i, seq)
                seq.pop()

    yield from rec(0, [])


def brute_force_dimension(p: Poset, max_elements: int = 8) -> int:
    """Least t such that t linear extensions reverse every incomparable pair.

    Enumerates all linear extensions once; independent of critical pairs.
    """
    if len(p) > max_elements:
        raise ValueError(f"brute force is limited to {max_elements} elements")
    inc = p.incomparable_pairs()
    if not inc:
        return 1
    pair_bit = {pr: 1 << k for k, pr in enumerate(inc)}
    full = (1 << len(inc)) - 1
    masks = set()
    for ext in linear_extensions(p):
        where = {x: i for i, x in enumerate(ext)}
        m = 0
        for (a, b), bit in pair_bit.items():
            if where[b] < where[a]:
                m |= bit
        masks.add(m)
    masks = sorted(masks, key=lambda m: -m.bit_count())

    def index(family):
        # holders[b]: bitset over the family members that reverse pair b
        holders = [0] * len(inc)
        for i, m in enumerate(family):
            for b in _bits(m):
                holders[b] |= 1 << i
        return holders

    def supersets(mask: int, holders, everyone: int) -> int:
        common = everyone
        for b in _bits(mask):
            common &= holders[b]
            if not common:
                break
        return common

    # an extension is useless if another one reverses a strict superset
    holders = index(masks)
    everyone = (1 << len(masks)) - 1
    maximal = [m for m in masks if supersets(m, holders, everyone).bit_count() == 1]
    holders = index(maximal)
    everyone = (1 << len(maximal)) - 1

    def one_covers(uncovered: int) -> bool:
        return supersets(uncovered, holders, everyone) != 0

    def cover(uncovered: int, t: int) -> bool:
        if uncovered == 0:
            return True
        if t == 1:
            return one_covers(uncovered)
        low = uncovered & -uncovered
        return any(cover(uncovered & ~m, t - 1) for m in maximal if m & low)

    t = 1
    while not cover(full, t):
        t += 1
    return t


# -- conflict-driven search --------------------------------------------------

class _Cover:
    """Search for t linear orders that together reverse every given pair.

    Variable ``v = k * t + c`` reads "order c puts y_k before x_k" for pair
    k = (x_k, y_k); literal ``2v`` is that statement, ``2v + 1`` its negation
    (x_k before y_k).  Each true literal is an arc in order c, and the search
    keeps every order's arcs together with P acyclic, with the transitive
    closure kept per order.  Whatever that closure decides about another
    pair is propagated, and the reason is read back lazily as the shortest
    chain of arcs behind it.  Each pair needs a true literal in some order
    (one clause per pair).  Conflicts are analysed to the first unique
    implication point; the learnt clause drives a backjump, and branching
    follows conflict activity with restarts.

    Learnt clauses refer to positions in ``pairs`` and stay valid for any
    extension of the list with the same seed, so they can be handed on.
    """

    def __init__(self, up, down, pairs, t, deadline, seed, order=None, learnt=None):
        self.n = len(up)
        self.base_up = list(up)
        self.t = t
        self.deadline = deadline
        self.stats = SearchStats()
        self.pairs: list[tuple[int, int]] = []
        self.m = 0
        self.value: list[int] = []
        self.level: list[int] = []
        self.reason: list = []
        self.seen: list[bool] = []
        self.activity: list[float] = []
        self.watches: list[list[list[int]]] = []
        self.true_count: list[int] = []
        self.phase: list[int] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.learnt: list[list[int]] = []
        self.lbd: list[int] = []
        self.up = [list(up) for _ in range(t)]
        self.down = [list(down) for _ in range(t)]
        self.arcs: list[list[tuple[int, int, int]]] = [[] for _ in range(t)]
        self.saved: list[tuple[int, int, list, list]] = []  # (trail index, order, up, down)
        # pairs by endpoint: bitmask of partners and partner -> pair index
        self.ys_of = [0] * self.n
        self.xs_of = [0] * self.n
        self.pair_of_x: list[dict[int, int]] = [{} for _ in range(self.n)]
        self.pair_of_y: list[dict[int, int]] = [{} for _ in range(self.n)]
        self.inc = 1.0
        self.heap: list[tuple[float, int]] = []
        self.parked: list[list[int]] = [[]]
        self.ok = True
        weight = None
        if order is not None:
            weight = [0] * len(pairs)
            for r, k in enumerate(order):
                weight[k] = len(pairs) - r
        self.extend(pairs, weight)
        for c, k in enumerate(seed):
            self._fact(2 * (k * t + c))
        for lits in learnt or ():
            self.add_clause(list(lits))
        if self.ok and self._propagate() is not None:
            self.ok = False
        self.seeded = self.ok

    def extend(self, pairs, weight=None) -> bool:
        """Add pairs to the problem (at the root); False if now infeasible.

        ``weight`` gives each new pair's initial branching priority.
        """
        self._backtrack(0)
        t = self.t
        base = self.m
        for i, (x, y) in enumerate(pairs):
            k = base + i
            self.pairs.append((x, y))
            self.ys_of[x] |= 1 << y
            self.xs_of[y] |= 1 << x
            self.pair_of_x[x][y] = k
            self.pair_of_y[y][x] = k
            self.true_count.append(0)
            self.phase.append(-1)
            w = (len(pairs) - i if weight is None else weight[i]) * 1e-6
            for c in range(t):
                self.value += (-1, -1)
                self.level.append(0)
                self.reason.append(None)
                self.seen.append(False)
                self.watches += ([], [])
                self.activity.append(w + (t - c) * 1e-9)
                heapq.heappush(self.heap, (-self.activity[-1], k * t + c))
        self.m += len(pairs)
        for k in range(base, self.m):
            x, y = self.pairs[k]
            cl = [2 * (k * t + c) for c in range(t)]
            for c in range(t):  # what the root orders already decide
                if self.up[c][y] >> x & 1:
                    self._fact(cl[c])
                elif self.up[c][x] >> y & 1:
                    self._fact(cl[c] + 1)
            self._attach(cl, False)
        if self.ok and self._propagate() is not None:
            self.ok = False
        return self.ok

    # -- assignment ----------------------------------------------------------

    def _assign(self, lit: int, why) -> None:
        v = lit >> 1
        self.value[lit] = 1
        self.value[lit ^ 1] = 0
        self.level[v] = len(self.trail_lim)
        self.reason[v] = why
        self.trail.append(lit)
        if not lit & 1:
            self.true_count[v // self.t] += 1

    def _fact(self, lit: int) -> None:
        val = self.value[lit]
        if val == 0:
            self.ok = False
        elif val < 0:
            self._assign(lit, None)

    def add_clause(self, lits: list[int]) -> None:
        """Add a learnt clause valid at the root (the search must be at level 0)."""
        self._attach(lits, True)

    def _attach(self, lits: list[int], learnt: bool) -> None:
        if not self.ok:
            return
        # root-level false literals can go; a root-level true one satisfies the clause
        lits = [q for q in dict.fromkeys(lits) if self.value[q] != 0]
        if any(self.value[q] == 1 for q in lits):
            return
        if not lits:
            self.ok = False
            return
        if len(lits) == 1:
            self._fact(lits[0])
        else:
            self.watches[lits[0]].append(lits)
            self.watches[lits[1]].append(lits)
        if learnt:
            self.learnt.append(lits)
            if len(lits) > 1:
                self.lbd.append(len(lits))

    def _backtrack(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        value, t, true_count, heap, act = self.value, self.t, self.true_count, self.heap, self.activity
        for lit in self.trail[stop:]:
            v = lit >> 1
            value[lit] = value[lit ^ 1] = -1
            self.reason[v] = None
            if not lit & 1:
                true_count[v // t] -= 1
                self.phase[v // t] = v % t
            heapq.heappush(heap, (-act[v], v))
        del self.trail[stop:]
        saved = self.saved
        while saved and saved[-1][0] >= stop:
            _, c, up, down = saved.pop()
            self.up[c] = up
            self.down[c] = down
            self.arcs[c].pop()
        for parked in self.parked[lvl + 1:]:
            for v in parked:
                heapq.heappush(heap, (-act[v], v))
        del self.parked[lvl + 1:]
        del self.trail_lim[lvl:]
        self.qhead = stop
        if len(heap) > 8 * len(act) + 1024:
            self.heap = [(-act[v], v) for v in range(len(act)) if value[2 * v] < 0]
            heapq.heapify(self.heap)

    # -- propagation ---------------------------------------------------------

    def _propagate(self):
        """Unit propagation plus the order theory; returns a conflict clause or None."""
        value, watches, trail = self.value, self.watches, self.trail
        while self.qhead < len(trail):
            lit = trail[self.qhead]
            self.qhead += 1
            false_lit = lit ^ 1
            ws = watches[false_lit]
            keep = []
            conflict = None
            for i, cl in enumerate(ws):
                if cl[0] == false_lit:
                    cl[0], cl[1] = cl[1], false_lit
                first = cl[0]
                if value[first] == 1:
                    keep.append(cl)
                    continue
                for p in range(2, len(cl)):
                    q = cl[p]
                    if value[q] != 0:
                        cl[1], cl[p] = q, false_lit
                        watches[q].append(cl)
                        break
                else:
                    keep.append(cl)
                    if value[first] == 0:
                        keep.extend(ws[i + 1:])
                        conflict = cl
                        break
                    self._assign(first, cl)
            watches[false_lit] = keep
            if conflict is not None:
                return conflict
            conflict = self._theory(lit)
            if conflict is not None:
                return conflict
        return None

    def _theory(self, lit: int):
        """Add the arc of a new literal to its order and propagate the closure."""
        v = lit >> 1
        k, c = divmod(v, self.t)
        x, y = self.pairs[k]
        f, g = (x, y) if lit & 1 else (y, x)  # arc f -> g
        up, down = self.up[c], self.down[c]
        if up[f] >> g & 1:
            return None
        if up[g] >> f & 1:
            self.stats.prunes += 1
            return [lit ^ 1] + [q ^ 1 for q in self._chain(c, g, f, len(self.arcs[c]))]
        old_up = list(up)
        self.saved.append((self.qhead - 1, c, old_up, list(down)))
        lo = down[f] | (1 << f)
        hi = up[g] | (1 << g)
        rest = lo
        while rest:
            low = rest & -rest
            up[low.bit_length() - 1] |= hi
            rest ^= low
        rest = hi
        while rest:
            low = rest & -rest
            down[low.bit_length() - 1] |= lo
            rest ^= low
        self.arcs[c].append((f, g, lit))
        why = (c, len(self.arcs[c]))
        t, value = self.t, self.value
        ys_of, xs_of = self.ys_of, self.xs_of
        rest = lo
        while rest:
            low = rest & -rest
            rest ^= low
            a = low.bit_length() - 1
            fresh = hi & ~old_up[a]
            hit = fresh & ys_of[a]  # a < y now: order c keeps pair (a, y)
            if hit:
                at = self.pair_of_x[a]
                while hit:
                    low = hit & -hit
                    hit ^= low
                    q = 2 * (at[low.bit_length() - 1] * t + c) + 1
                    if value[q] < 0:
                        self._assign(q, why)
            hit = fresh & xs_of[a]  # a < x now: order c reverses pair (x, a)
            if hit:
                at = self.pair_of_y[a]
                while hit:
                    low = hit & -hit
                    hit ^= low
                    q = 2 * (at[low.bit_length() - 1] * t + c)
                    if value[q] < 0:
                        self._assign(q, why)
        return None

    def _chain(self, c: int, a: int, b: int, narcs: int) -> list[int]:
        """Literals of a shortest chain of arcs showing a < b in order c."""
        base = self.base_up
        reach = base[a] | (1 << a)
        adder: dict[int, tuple[int, int]] = {}
        todo = self.arcs[c][:narcs]
        while not reach >> b & 1:
            grown = reach
            rest = []
            for arc in todo:
                f, g, q = arc
                if reach >> f & 1:
                    new = (base[g] | (1 << g)) & ~grown
                    for e in _bits(new):
                        adder[e] = (f, q)
                    grown |= new
                else:
                    rest.append(arc)
            if grown == reach:
                raise AssertionError("order relation without a chain of arcs")
            reach, todo = grown, rest
        lits = []
        e = b
        while e in adder:
            e, q = adder[e]
            lits.append(q)
        return lits

    def _reason(self, v: int) -> list[int]:
        why = self.reason[v]
        if isinstance(why, tuple):
            c, narcs = why
            k = v // self.t
            x, y = self.pairs[k]
            lit = 2 * v if self.value[2 * v] == 1 else 2 * v + 1
            a, b = (x, y) if lit & 1 else (y, x)
            why = [lit] + [q ^ 1 for q in self._chain(c, a, b, narcs)]
            self.reason[v] = why
        return why

    # -- conflict analysis ---------------------------------------------------

    def _analyze(self, conflict: list[int]) -> tuple[list[int], int]:
        seen, level, trail = self.seen, self.level, self.trail
        here = len(self.trail_lim)
        learnt = [0]
        marked = []
        count = 0
        idx = len(trail) - 1
        clause, skip = conflict, None
        while True:
            for q in clause:
                if q == skip:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = True
                    marked.append(v)
                    self._bump(v)
                    if level[v] == here:
                        count += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            skip = trail[idx]
            idx -= 1
            count -= 1
            if not count:
                break
            clause = self._reason(skip >> 1)
        learnt[0] = skip ^ 1
        for v in marked:
            seen[v] = False
        back = 0
        if len(learnt) > 1:
            best = max(range(1, len(learnt)), key=lambda i: level[learnt[i] >> 1])
            learnt[1], learnt[best] = learnt[best], learnt[1]
            back = level[learnt[1] >> 1]
        return learnt, back

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.inc
        if act[v] > 1e100:
            for i in range(len(act)):
                act[i] *= 1e-100
            self.inc *= 1e-100
            self.heap = [(-act[u], u) for u in range(len(act))]
            heapq.heapify(self.heap)
        else:
            heapq.heappush(self.heap, (-act[v], v))

    # -- search --------------------------------------------------------------

    def _decide(self) -> Optional[int]:
        """Most active open literal of a pair with no reversing order yet."""
        heap, act, value, t = self.heap, self.activity, self.value, self.t
        parked = self.parked[-1]
        while heap:
            neg, v = heapq.heappop(heap)
            if -neg != act[v] or value[2 * v] >= 0:
                continue
            k = v // t
            if self.true_count[k]:
                parked.append(v)
                continue
            ph = self.phase[k]
            if ph >= 0 and ph != v % t and value[2 * (k * t + ph)] < 0:
                heapq.heappush(heap, (neg, v))
                v = k * t + ph
            return 2 * v
        return None

    def tick(self) -> None:
        self.stats.nodes += 1
        if self.deadline is not None and self.stats.nodes & 255 == 0 and time.monotonic() > self.deadline:
            raise _Timeout(self.stats)

    def solve(self) -> bool:
        """Run to completion; on success the model stays in place."""
        if not self.ok:
            return False
        conflicts, restart_at, luby_i = 0, 64 * _luby(1), 1
        while True:
            conflict = self._propagate()
            if conflict is not None:
                if not self.trail_lim:
                    self.ok = False
                    return False
                conflicts += 1
                self.tick()
                learnt, back = self._analyze(conflict)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                    self.learnt.append(learnt)
                else:
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self.learnt.append(learnt)
                    self.lbd.append(len({self.level[q >> 1] for q in learnt}))
                    self._assign(learnt[0], learnt)
                self.inc /= 0.95
                continue
            if conflicts >= restart_at:
                luby_i += 1
                restart_at = conflicts + 64 * _luby(luby_i)
                self._backtrack(0)
            lit = self._decide()
            if lit is None:
                return True
            self.tick()
            self.trail_lim.append(len(self.trail))
            self.parked.append([])
            self._assign(lit, None)

    def assume(self, lits) -> bool:
        """Fix literals at the root; False if that is already contradictory."""
        for q in lits:
            self._fact(q)
        if self.ok and self._propagate() is not None:
            self.ok = False
        return self.ok

    def frontier(self, size: int) -> list[list[int]]:
        """Cubes (root literal sets) that jointly cover the search space."""
        level = [[]]
        expanded = True
        while expanded and len(level) < size:
            expanded = False
            nxt = []
            for cube in level:
                k = self._open_pair(cube)
                if k is None:
                    nxt.append(cube)
                    continue
                expanded = True
                for c in range(self.t):
                    cand = cube + [2 * (k * self.t + c)]
                    if self._consistent(cand):
                        nxt.append(cand)
            level = nxt
        return level

    def _open_pair(self, cube) -> Optional[int]:
        if not self._consistent(cube, keep=True):
            return None
        best = None
        for k in range(self.m):
            if not self.true_count[k]:
                best = k
                break
        self._backtrack(0)
        return best

    def _consistent(self, cube, keep: bool = False) -> bool:
        self.trail_lim.append(len(self.trail))
        self.parked.append([])
        ok = True
        for q in cube:
            if self.value[q] == 0:
                ok = False
                break
            if self.value[q] < 0:
                self._assign(q, None)
            if self._propagate() is not None:
                ok = False
                break
        if not keep or not ok:
            self._backtrack(0)
        return ok

    def classes(self) -> list[list[int]]:
        """Pairs per order: each pair joins the first order that reverses it."""
        out = [[] for _ in range(self.t)]
        for k in range(self.m):
            c = next(c for c in range(self.t) if self.value[2 * (k * self.t + c)] == 1)
            out[c].append(k)
        return out

    def shareable(self, limit: int = 8) -> list[list[int]]:
        """Learnt clauses worth passing on (short or low literal-block distance)."""
        out = [cl for cl in self.learnt if len(cl) == 1]
        longs = [cl for cl in self.learnt if len(cl) > 1]
        out += [cl for cl, d in zip(longs, self.lbd) if d <= limit]
        return out


def _luby(i: int) -> int:
    """The Luby restart sequence 1, 1, 2, 1, 1, 2, 4, ... (1-based)."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    if (1 << k) - 1 == i:
        return 1 << (k - 1)
    return _luby(i - (1 << (k - 1)) + 1)


class _Timeout(Exception):
    pass


def _conflicts(p: Poset, pairs) -> list[int]:
    """Bitmask per pair of the pairs it cannot share a class with (2-cycles)."""
    le = [p.down[i] | (1 << i) for i in range(len(p))]  # le[i]: elements <= i
    out = []
    for k, (x, y) in enumerate(pairs):
        m = 0
        for j, (u, v) in enumerate(pairs):
            if le[y] >> u & 1 and le[v] >> x & 1:
                m |= 1 << j
        out.append(m)
    return out


def _greedy_clique(conf: list[int]) -> list[int]:
    order = sorted(range(len(conf)), key=lambda k: (-conf[k].bit_count(), k))
    best: list[int] = []
    for start in order[: min(len(order), 64)]:
        clique = [start]
        cand = conf[start]
        for k in order:
            if cand >> k & 1:
                clique.append(k)
                cand &= conf[k]
        if len(clique) > len(best):
            best = clique
    return best


def _greedy_cover(p: Poset, pairs, clique, rank) -> list[list[int]]:
    """First-fit cover in priority order, used as the initial upper bound."""
    classes = [[k] for k in clique]
    ups, downs = _closures(p, pairs, classes, len(classes))
    taken = set(clique)
    for k in sorted(range(len(pairs)), key=lambda k: rank[k]):
        if k in taken:
            continue
        x, y = pairs[k]
        for c in range(len(classes)):
            if not ups[c][x] >> y & 1:
                _add_arc(ups[c], downs[c], y, x)
                classes[c].append(k)
                break
        else:
            classes.append([k])
            ups.append(list(p.up))
            downs.append(list(p.down))
            _add_arc(ups[-1], downs[-1], y, x)
    return [sorted(cls) for cls in classes]


def _extensions(p: Poset, pairs, classes) -> list[list[str]]:
    els = p.elements
    return [
        topological_order(p, [(els[pairs[k][1]], els[pairs[k][0]]) for k in cls])
        for cls in classes
    ]


def exact_dimension(p: Poset, budget_ms: Optional[int] = 60_000, jobs: int = 1) -> DimCertificate:
    """Exact dimension with a verified witness realizer.

    ``budget_ms=None`` disables the deadline.  On timeout raises
    DimensionBudgetExceeded with the best bounds found.  With ``jobs > 1``
    subtrees are searched in worker processes; the certificate is the one the
    sequential search would return.
    """
    from .realizer import verify_realizer

    start = time.monotonic()
    deadline = None if budget_ms is None else start + budget_ms / 1000.0
    stats = SearchStats()

    def finish(value, classes, how, clique_pairs):
        witness = _extensions(p, pairs, classes) if classes else [topological_order(p)]
        report = verify_realizer(p, witness)
        if not report.passed:
            raise AssertionError(f"internal error: witness fails verification: {report.summary()}")
        stats.elapsed = time.monotonic() - start
        return DimCertificate(
            value=value,
            witness=witness,
            classes=[[(p.elements[pairs[k][0]], p.elements[pairs[k][1]]) for k in cls] for cls in classes],
            lower_bound=how,
            clique=[(p.elements[pairs[k][0]], p.elements[pairs[k][1]]) for k in clique_pairs],
            stats=stats,
        )

    pairs = [(p.index(a), p.index(b)) for a, b in critical_pairs(p)]
    if not pairs:
        # chain (or empty poset): one extension suffices
        return finish(1, [], "trivial", [])
    conf = _conflicts(p, pairs)
    clique = _greedy_clique(conf)
    # branching priority: most conflicting pairs first
    rank = [0] * len(pairs)
    for r, k in enumerate(sorted(range(len(pairs)), key=lambda k: (-conf[k].bit_count(), k))):
        rank[k] = r
    lower = max(2, len(clique))
    best = _greedy_cover(p, pairs, clique, rank)
    upper = len(best)
    how = "clique" if len(clique) >= 2 and lower == len(clique) else "trivial"
    t = lower
    while t < upper:
        try:
            found, sub = _feasible(p, pairs, t, deadline, clique, jobs, rank)
        except _Timeout as exc:
            stats.merge(exc.args[0])
            stats.elapsed = time.monotonic() - start
            raise DimensionBudgetExceeded(t, upper, _extensions(p, pairs, best), stats) from None
        stats.merge(sub)
        if found is not None:
            best = [cls for cls in found if cls]
            break
        stats.refuted.append(t)
        how = "exhausted"
        t += 1
    return finish(len(best), best, how, clique)


def _feasible(p: Poset, pairs, t: int, deadline, clique, jobs: int, rank):
    """Cover all critical pairs with t classes: (classes or None, stats).

    With ``jobs > 1`` the same sequential search runs in one worker while
    others search disjoint cubes of the space; the sequential answer is the
    one returned, unless the cubes prove infeasibility first -- an answer
    the sequential search would have to give as well.
    """
    if jobs <= 1:
        return _cegar(p, pairs, t, deadline, clique, rank)
    probe_pairs = list(clique) + sorted((k for k in range(len(pairs)) if k not in set(clique)),
                                        key=lambda k: rank[k])[:16]
    probe = _Cover(p.up, p.down, [pairs[k] for k in probe_pairs], t, deadline, range(len(clique)))
    stats = SearchStats()
    if not probe.seeded:
        return None, stats
    cubes = [[(probe_pairs[(q >> 1) // t], (q >> 1) % t) for q in cube]
             for cube in probe.frontier(4 * jobs)]
    if not cubes:
        return None, stats
    args = (p, pairs, t, deadline, clique, rank)
    tasks = [(0, args + ((),))] + [(i, args + (tuple(cube),)) for i, cube in enumerate(cubes, start=1)]
    open_cubes = len(cubes)
    with multiprocessing.get_context("spawn").Pool(jobs) as pool:
        for idx, kind, classes, sub_stats in pool.imap_unordered(_cegar_worker, tasks):
            if kind == "timeout":
                stats.merge(sub_stats)
                raise _Timeout(stats)
            if idx == 0:
                return classes, sub_stats
            stats.merge(sub_stats)
            if kind == "unsat":
                open_cubes -= 1
                if not open_cubes:
                    return None, stats
    raise AssertionError("sequential search returned no answer")


def _cegar_worker(task):
    idx, args = task
    try:
        classes, stats = _cegar(*args)
    except _Timeout as exc:
        return idx, "timeout", None, exc.args[0]
    return idx, ("sat" if classes is not None else "unsat"), classes, stats


def _cegar(p: Poset, pairs, t: int, deadline, clique, rank, cube=()):
    """Feasibility by lazily growing the set of pairs the search must cover.

    The search starts from the clique (plus any cube pairs).  Each solution
    is extended first-fit to the remaining pairs; the first few that do not
    fit join the search, which continues incrementally.  Refuting a subset
    refutes the whole problem.  ``cube`` fixes some (pair, class) choices.
    """
    active = list(clique) + [k for k, _ in cube if k not in set(clique)]
    at = {k: i for i, k in enumerate(active)}
    order = sorted(range(len(active)), key=lambda j: rank[active[j]])
    s = _Cover(p.up, p.down, [pairs[k] for k in active], t, deadline, range(len(clique)), order)
    try:
        if not s.seeded or not s.assume([2 * (at[k] * t + c) for k, c in cube]):
            return None, s.stats
        in_active = set(active)
        while True:
            if not s.solve():
                return None, s.stats
            classes = [[active[j] for j in cls] for cls in s.classes()]
            ups, downs = _closures(p, pairs, classes, t)
            failed = []
            for k, (x, y) in enumerate(pairs):
                if k in in_active:
                    continue
                for c in range(t):
                    up, down = ups[c], downs[c]
                    if not up[x] >> y & 1:
                        _add_arc(up, down, y, x)
                        classes[c].append(k)
                        break
                else:
                    failed.append(k)
            if not failed:
                return [sorted(cls) for cls in classes], s.stats
            batch = failed[:8]
            active += batch
            in_active.update(batch)
            s.extend([pairs[k] for k in batch], [len(pairs) - rank[k] for k in batch])
    except _Timeout:
        raise _Timeout(s.stats) from None


def _add_arc(up, down, y, x) -> None:
    """Record y < x (and its consequences) in a closed relation."""
    lo = down[y] | (1 << y)
    hi = up[x] | (1 << x)
    for a in _bits(lo):
        up[a] |= hi
    for b in _bits(hi):
        down[b] |= lo


def _closures(p: Poset, pairs, classes, t):
    ups = [list(p.up) for _ in range(t)]
    downs = [list(p.down) for _ in range(t)]
    for c, cls in enumerate(classes):
        for k in cls:
            x, y = pairs[k]
            _add_arc(ups[c], downs[c], y, x)
    return ups, downs
