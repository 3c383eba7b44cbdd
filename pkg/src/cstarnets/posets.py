"""Finite posets and the edge-path presentation of their fundamental group.

A finite poset is modelled by its order complex: vertices are the elements,
edges are comparable pairs, and triangles are 2-chains a < b < c.  The
fundamental group of that complex is presented by the non-tree edges of a
breadth-first spanning tree of the comparability graph, with one triangle
relator per 2-chain.  Words are read in traversal order, so the transport
of a concatenation w1.w2 is transport(w2) composed with transport(w1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from collections import deque

import sympy
from sympy.matrices.normalforms import smith_normal_form

from .errors import DisconnectedPoset, MalformedLoop, RelatorViolation
from .reports import ValidationReport


class Poset:
    """Finite poset given by an element order and a <= relation.

    Reflexive pairs may be omitted from the input; the constructor applies
    the reflexive-transitive closure and records what it added.  Axiom
    violations (antisymmetry breaches surviving closure, disconnectedness)
    are surfaced by :func:`validate_poset`, not the constructor.
    """

    def __init__(self, elements, leq):
        self.elements = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise ValueError("duplicate element identifiers")
        self.index = {e: i for i, e in enumerate(self.elements)}
        for a, b in leq:
            if a not in self.index or b not in self.index:
                raise ValueError(f"pair ({a!r}, {b!r}) mentions unknown element")
        pairs = {(a, b) for a, b in leq}
        added = set()
        for e in self.elements:
            if (e, e) not in pairs:
                pairs.add((e, e))
                added.add((e, e))
        changed = True
        while changed:
            changed = False
            by_first = {}
            for a, b in pairs:
                by_first.setdefault(a, []).append(b)
            for a, b in list(pairs):
                for c in by_first.get(b, ()):
                    if (a, c) not in pairs:
                        pairs.add((a, c))
                        added.add((a, c))
                        changed = True
        self.leq_pairs = frozenset(pairs)
        self.closure_added = frozenset(added)

    # -- relation queries ------------------------------------------------

    def leq(self, a, b) -> bool:
        return (a, b) in self.leq_pairs

    def lt(self, a, b) -> bool:
        return a != b and (a, b) in self.leq_pairs

    def comparable(self, a, b) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def upper_bounds(self, a, b):
        return [o for o in self.elements if self.leq(a, o) and self.leq(b, o)]

    def lower_bounds(self, a, b):
        return [o for o in self.elements if self.leq(o, a) and self.leq(o, b)]

    def minimum(self):
        for m in self.elements:
            if all(self.leq(m, o) for o in self.elements):
                return m
        return None

    def maximum(self):
        for m in self.elements:
            if all(self.leq(o, m) for o in self.elements):
                return m
        return None

    def hasse_pairs(self):
        """Covering relations (a, b): a < b with nothing strictly between."""
        out = []
        for a in self.elements:
            for b in self.elements:
                if not self.lt(a, b):
                    continue
                if any(self.lt(a, c) and self.lt(c, b) for c in self.elements):
                    continue
                out.append((a, b))
        return out

    def comparability_edges(self):
        """Comparable pairs as (lower, upper), in element order."""
        out = []
        for i, a in enumerate(self.elements):
            for b in self.elements[i + 1:]:
                if self.lt(a, b):
                    out.append((a, b))
                elif self.lt(b, a):
                    out.append((b, a))
        return out

    def neighbors(self, a):
        """Comparability-graph neighbors of a, in element order."""
        return [b for b in self.elements if b != a and self.comparable(a, b)]

    def two_chains(self):
        """Strict chains a < b < c in element-order enumeration."""
        out = []
        for a in self.elements:
            for b in self.elements:
                if not self.lt(a, b):
                    continue
                for c in self.elements:
                    if self.lt(b, c):
                        out.append((a, b, c))
        return out

    def is_connected(self) -> bool:
        if not self.elements:
            return True
        seen = {self.elements[0]}
        queue = deque(seen)
        while queue:
            a = queue.popleft()
            for b in self.neighbors(a):
                if b not in seen:
                    seen.add(b)
                    queue.append(b)
        return len(seen) == len(self.elements)

    def sub(self, subset):
        subset = [e for e in self.elements if e in set(subset)]
        pairs = [(a, b) for a, b in self.leq_pairs if a in set(subset) and b in set(subset)]
        return Poset(subset, pairs)

    def __repr__(self):
        return f"Poset({list(self.elements)!r})"


def validate_poset(p: Poset, tol: float = 1e-10) -> ValidationReport:
    """Report every axiom violation of the stored relation."""
    report = ValidationReport("poset", tol)
    for e in p.elements:
        if not p.leq(e, e):
            report.violation(f"missing reflexive pair ({e}, {e})")
    for a, b in p.leq_pairs:
        if a != b and p.leq(b, a):
            if p.index[a] < p.index[b]:
                report.violation(f"antisymmetry breach: {a} <= {b} and {b} <= {a}")
    for a, b in p.leq_pairs:
        for c in p.elements:
            if p.leq(b, c) and not p.leq(a, c):
                report.violation(f"transitivity gap: {a} <= {b} <= {c} but not {a} <= {c}")
    if not p.is_connected():
        report.violation("comparability graph is disconnected")
    return report


def directedness(p: Poset):
    """(upward, downward) directedness flags by exhaustive pair scan."""
    upward = all(p.upper_bounds(a, b) for a in p.elements for b in p.elements)
    downward = all(p.lower_bounds(a, b) for a in p.elements for b in p.elements)
    return upward, downward


# -- group presentations ------------------------------------------------


@dataclass
class GroupPresentation:
    """Edge-path presentation of the fundamental group at a base element.

    generators name non-tree comparability edges; each generator is
    oriented as an upward crossing of its edge.  Relator words use signed
    1-based generator indices in traversal order.  abelianization lists
    elementary divisors (torsion first, then one 0 per free rank).
    """

    base: object
    generators: tuple[str, ...]
    generator_edges: tuple[tuple, ...]
    relators: tuple[tuple[int, ...], ...]
    abelianization: tuple[int, ...]
    classification: str
    tree_parent: dict = field(default_factory=dict, repr=False)
    tree_edges: frozenset = field(default_factory=frozenset, repr=False)
    edge_to_generator: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return len(self.generators)

    def is_trivial(self) -> bool:
        return self.classification == "trivial"


def free_reduce(word):
    out = []
    for letter in word:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(letter)
    return tuple(out)


def cyclic_reduce(word):
    word = list(free_reduce(word))
    while len(word) >= 2 and word[0] == -word[-1]:
        word = word[1:-1]
    return tuple(word)


def _canonical_relator(word):
    """Least rotation over the word and its inverse; classifies duplicates."""
    word = cyclic_reduce(word)
    if not word:
        return ()
    candidates = []
    for w in (word, tuple(-x for x in reversed(word))):
        for i in range(len(w)):
            candidates.append(w[i:] + w[:i])
    return min(candidates)


def _substitute(word, gen, replacement):
    """Replace +-gen in word by replacement / its inverse, then reduce."""
    out = []
    inv = [-x for x in reversed(replacement)]
    for letter in word:
        if letter == gen:
            out.extend(replacement)
        elif letter == -gen:
            out.extend(inv)
        else:
            out.append(letter)
    return free_reduce(out)


def simplify_presentation(generators, relators, max_rounds=10000):
    """Free/cyclic reduction plus elimination of generators occurring
    exactly once in some relator, iterated to fixpoint.

    Returns (kept generator indices, relators over the kept generators).
    Only Tietze transformations are used, so the presented group is
    unchanged.
    """
    gens = list(range(1, len(generators) + 1))
    rels = [cyclic_reduce(r) for r in relators]
    rels = [r for r in rels if r]
    for _ in range(max_rounds):
        seen = set()
        deduped = []
        for r in rels:
            key = _canonical_relator(r)
            if key and key not in seen:
                seen.add(key)
                deduped.append(r)
        rels = deduped
        target = None
        for ridx, r in enumerate(rels):
            for g in gens:
                occurrences = sum(1 for letter in r if abs(letter) == g)
                if occurrences == 1:
                    target = (ridx, g, r)
                    break
            if target:
                break
        if target is None:
            break
        ridx, g, r = target
        pos = next(i for i, letter in enumerate(r) if abs(letter) == g)
        rotated = r[pos:] + r[:pos]
        # rotated = (+-g, w): solve g = w^-1 (or w when the sign is negative)
        tail = rotated[1:]
        replacement = tuple(-x for x in reversed(tail)) if rotated[0] == g else tail
        rels = [
            cyclic_reduce(_substitute(other, g, replacement))
            for i, other in enumerate(rels)
            if i != ridx
        ]
        rels = [r2 for r2 in rels if r2]
        gens.remove(g)
    return gens, rels


def _abelianization(num_generators, relators):
    """Elementary divisors of the relator matrix via Smith normal form."""
    if num_generators == 0:
        return ()
    if not relators:
        return (0,) * num_generators
    rows = []
    for r in relators:
        row = [0] * num_generators
        for letter in r:
            row[abs(letter) - 1] += 1 if letter > 0 else -1
        rows.append(row)
    m = sympy.Matrix(rows)
    snf = smith_normal_form(m, domain=sympy.ZZ)
    divisors = []
    for i in range(min(snf.shape)):
        d = int(snf[i, i])
        if d != 0:
            divisors.append(abs(d))
    rank = len(divisors)
    torsion = tuple(d for d in divisors if d > 1)
    return torsion + (0,) * (num_generators - rank)


def bfs_tree(p: Poset, base):
    """Breadth-first spanning tree of the comparability graph; ties broken
    by declared element order.  Returns (parent edge map, tree edge set)."""
    if base not in p.index:
        raise ValueError(f"unknown base element {base!r}")
    parent = {base: None}
    tree_edges = set()
    queue = deque([base])
    while queue:
        a = queue.popleft()
        for b in p.neighbors(a):
            if b not in parent:
                parent[b] = a
                lo, hi = (a, b) if p.lt(a, b) else (b, a)
                tree_edges.add((lo, hi))
                queue.append(b)
    if len(parent) != len(p.elements):
        raise DisconnectedPoset("comparability graph is disconnected")
    return parent, frozenset(tree_edges)


def pi1_presentation(p: Poset, base) -> GroupPresentation:
    """Edge-path group of the order complex of p, based at base.

    Generators are the non-tree edges (oriented upward); relators come from
    2-chains a < b < c via the triangle identity "cross (a,b) then (b,c)
    equals cross (a,c)".  The returned presentation is Tietze-simplified;
    classification is "trivial", "free of rank n", or "undetermined",
    alongside abelianization divisors which are always computed.
    """
    parent, tree_edges = bfs_tree(p, base)
    edges = p.comparability_edges()
    non_tree = [e for e in edges if e not in tree_edges]
    edge_to_generator = {e: i + 1 for i, e in enumerate(non_tree)}

    def letter(lo, hi):
        g = edge_to_generator.get((lo, hi))
        return (g,) if g else ()

    raw_relators = []
    for a, b, c in p.two_chains():
        word = letter(a, b) + letter(b, c) + tuple(-x for x in letter(a, c))
        word = cyclic_reduce(word)
        if word:
            raw_relators.append(word)

    kept, simplified = simplify_presentation(
        [f"g{i}" for i in range(len(non_tree))], raw_relators
    )
    renumber = {old: new + 1 for new, old in enumerate(kept)}
    relators = tuple(
        tuple((1 if x > 0 else -1) * renumber[abs(x)] for x in r) for r in simplified
    )
    kept_edges = tuple(non_tree[g - 1] for g in kept)
    generators = tuple(f"g{i}" for i in range(len(kept_edges)))
    if not generators:
        classification = "trivial"
    elif not relators:
        classification = f"free of rank {len(generators)}"
    else:
        classification = "undetermined"
    abel = _abelianization(len(generators), relators)
    final_map = {}
    for e, old in edge_to_generator.items():
        if old in renumber:
            final_map[e] = renumber[old]
    return GroupPresentation(
        base=base,
        generators=generators,
        generator_edges=kept_edges,
        relators=relators,
        abelianization=abel,
        classification=classification,
        tree_parent=parent,
        tree_edges=tree_edges,
        edge_to_generator=final_map,
    )


# -- loops and words ----------------------------------------------------


@dataclass(frozen=True)
class EdgeLoop:
    """Closed edge path: steps are ((lower, upper), +1) for an upward
    crossing and ((lower, upper), -1) for a downward one."""

    base: object
    steps: tuple

    def validate(self, p: Poset):
        pos = self.base
        for (lo, hi), direction in self.steps:
            if not p.lt(lo, hi):
                raise MalformedLoop(f"({lo}, {hi}) is not an upward-oriented edge")
            if direction not in (1, -1):
                raise MalformedLoop(f"bad direction {direction!r}")
            start, end = (lo, hi) if direction == 1 else (hi, lo)
            if start != pos:
                raise MalformedLoop(f"step starts at {start}, expected {pos}")
            pos = end
        if pos != self.base:
            raise MalformedLoop(f"loop ends at {pos}, not base {self.base}")

    def reversed(self):
        return EdgeLoop(
            self.base,
            tuple((e, -d) for e, d in reversed(self.steps)),
        )

    def concat(self, other: "EdgeLoop") -> "EdgeLoop":
        if other.base != self.base:
            raise MalformedLoop("cannot concatenate loops at different bases")
        return EdgeLoop(self.base, self.steps + other.steps)


def loop_word(p: Poset, loop: EdgeLoop, pres: GroupPresentation):
    """Read off the signed non-tree generators along the loop.

    The result is freely reduced and written in traversal order.
    """
    if loop.base != pres.base:
        raise MalformedLoop(
            f"loop base {loop.base!r} differs from presentation base {pres.base!r}"
        )
    loop.validate(p)
    word = []
    for edge, direction in loop.steps:
        g = pres.edge_to_generator.get(edge)
        if g:
            word.append(direction * g)
    return free_reduce(word)


def tree_path(p: Poset, pres: GroupPresentation, target):
    """Edge steps from the presentation base to target along the tree."""
    chain = []
    node = target
    while node != pres.base:
        par = pres.tree_parent[node]
        lo, hi = (par, node) if p.lt(par, node) else (node, par)
        direction = 1 if (lo, hi) == (par, node) else -1
        chain.append(((lo, hi), direction))
        node = par
    chain.reverse()
    return tuple(chain)


def generator_loop(p: Poset, pres: GroupPresentation, gen_index: int) -> EdgeLoop:
    """The canonical loop representing generator gen_index (1-based):
    base -> lower endpoint along the tree, upward across the edge, back."""
    lo, hi = pres.generator_edges[gen_index - 1]
    to_lo = tree_path(p, pres, lo)
    from_hi = tuple((e, -d) for e, d in reversed(tree_path(p, pres, hi)))
    return EdgeLoop(pres.base, to_lo + (((lo, hi), 1),) + from_hi)


# -- characters ---------------------------------------------------------


@dataclass(frozen=True)
class Character:
    """Unit-circle character of the presented group."""

    values: tuple[complex, ...]

    def of_generator(self, g: int) -> complex:
        return self.values[g - 1]

    def of_word(self, word) -> complex:
        out = 1.0 + 0.0j
        for letter in word:
            v = self.values[abs(letter) - 1]
            out *= v if letter > 0 else v.conjugate()
        return out


def evaluate_character(pres: GroupPresentation, values, tol: float = 1e-10) -> Character:
    """Build a character from one unit-modulus value per generator.

    Raises RelatorViolation naming the first relator whose evaluation is
    not 1 within tolerance.
    """
    if len(values) != len(pres.generators):
        raise ValueError(
            f"need {len(pres.generators)} values, got {len(values)}"
        )
    vals = tuple(complex(v) for v in values)
    for v in vals:
        if abs(abs(v) - 1.0) > tol:
            raise ValueError(f"value {v!r} is not unit modulus")
    chi = Character(vals)
    for r in pres.relators:
        val = chi.of_word(r)
        if abs(val - 1.0) > tol:
            raise RelatorViolation(r, val)
    return chi
