"""Finite-dimensional C*-algebras as direct sums of full matrix blocks.

Elements are tuples of complex block matrices.  Morphisms are stored in
Bratteli normal form: an integer multiplicity matrix plus one unitary per
target block.  Composition, injectivity, and invertibility then reduce to
exact integer/permutation arithmetic, with unitaries carrying all the
numerical content.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .errors import NotInvertible, ShapeMismatch

VALIDATION_TOL = 1e-10
IDENTITY_TOL = 1e-12


def operator_norm(m) -> float:
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, 2))


@dataclass(frozen=True)
class FinDimCStar:
    """Direct sum of full matrix algebras, encoded by block sizes."""

    blocks: tuple[int, ...]

    def __post_init__(self):
        if any(n <= 0 for n in self.blocks):
            raise ValueError("block sizes must be positive")

    @property
    def dim(self) -> int:
        return sum(n * n for n in self.blocks)

    @property
    def total_size(self) -> int:
        return sum(self.blocks)

    def zero(self) -> "AlgElement":
        return AlgElement(self, tuple(np.zeros((n, n), dtype=complex) for n in self.blocks))

    def one(self) -> "AlgElement":
        return AlgElement(self, tuple(np.eye(n, dtype=complex) for n in self.blocks))

    def basis(self):
        """Matrix units in deterministic (block, row, col) order."""
        out = []
        for b, n in enumerate(self.blocks):
            for i in range(n):
                for j in range(n):
                    data = [np.zeros((m, m), dtype=complex) for m in self.blocks]
                    data[b][i, j] = 1.0
                    out.append(AlgElement(self, tuple(data)))
        return out

    def element(self, *block_matrices) -> "AlgElement":
        return AlgElement(self, tuple(np.asarray(m, dtype=complex) for m in block_matrices))

    def random_element(self, rng, hermitian=False) -> "AlgElement":
        data = []
        for n in self.blocks:
            m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            if hermitian:
                m = (m + m.conj().T) / 2
            data.append(m)
        return AlgElement(self, tuple(data))

    def from_vec(self, v) -> "AlgElement":
        v = np.asarray(v, dtype=complex)
        data = []
        at = 0
        for n in self.blocks:
            data.append(v[at:at + n * n].reshape(n, n))
            at += n * n
        return AlgElement(self, tuple(data))

    def __repr__(self):
        return f"FinDimCStar{self.blocks}"


ZERO_ALGEBRA = FinDimCStar(())


@dataclass(frozen=True)
class AlgElement:
    algebra: FinDimCStar
    data: tuple

    def __post_init__(self):
        if len(self.data) != len(self.algebra.blocks):
            raise ShapeMismatch("block count mismatch")
        for m, n in zip(self.data, self.algebra.blocks):
            if m.shape != (n, n):
                raise ShapeMismatch(f"block shape {m.shape} != ({n}, {n})")

    def _binary(self, other, op):
        if other.algebra != self.algebra:
            raise ShapeMismatch("elements of different algebras")
        return AlgElement(self.algebra, tuple(op(a, b) for a, b in zip(self.data, other.data)))

    def __add__(self, other):
        return self._binary(other, np.add)

    def __sub__(self, other):
        return self._binary(other, np.subtract)

    def __mul__(self, other):
        if isinstance(other, AlgElement):
            return self._binary(other, np.matmul)
        return AlgElement(self.algebra, tuple(complex(other) * m for m in self.data))

    def __rmul__(self, scalar):
        return AlgElement(self.algebra, tuple(complex(scalar) * m for m in self.data))

    def adjoint(self) -> "AlgElement":
        return AlgElement(self.algebra, tuple(m.conj().T for m in self.data))

    @property
    def norm(self) -> float:
        return max((operator_norm(m) for m in self.data), default=0.0)

    def vec(self):
        if not self.data:
            return np.zeros(0, dtype=complex)
        return np.concatenate([m.reshape(-1) for m in self.data])

    def allclose(self, other, tol=VALIDATION_TOL) -> bool:
        return (self - other).norm < tol


class StarMorphism:
    """Unital *-morphism between block algebras in Bratteli normal form.

    The image of t in target block j is
        u_j . blockdiag(mult[j][i] copies of t_i, i in source order) . u_j*.
    """

    def __init__(self, source: FinDimCStar, target: FinDimCStar, mult, conjugators):
        self.source = source
        self.target = target
        self.mult = np.asarray(mult, dtype=int)
        if self.mult.shape != (len(target.blocks), len(source.blocks)):
            raise ShapeMismatch(
                f"multiplicity shape {self.mult.shape} != "
                f"({len(target.blocks)}, {len(source.blocks)})"
            )
        if np.any(self.mult < 0):
            raise ValueError("multiplicities must be nonnegative")
        self.conjugators = tuple(np.asarray(u, dtype=complex) for u in conjugators)
        if len(self.conjugators) != len(target.blocks):
            raise ShapeMismatch("need one conjugator per target block")
        for u, n in zip(self.conjugators, target.blocks):
            if u.shape != (n, n):
                raise ShapeMismatch(f"conjugator shape {u.shape} != ({n}, {n})")

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, algebra: FinDimCStar) -> "StarMorphism":
        k = len(algebra.blocks)
        return cls(
            algebra,
            algebra,
            np.eye(k, dtype=int),
            tuple(np.eye(n, dtype=complex) for n in algebra.blocks),
        )

    @classmethod
    def ad(cls, algebra: FinDimCStar, unitaries) -> "StarMorphism":
        """Inner automorphism t |-> u t u* blockwise."""
        if isinstance(unitaries, np.ndarray):
            unitaries = (unitaries,)
        k = len(algebra.blocks)
        return cls(algebra, algebra, np.eye(k, dtype=int), tuple(unitaries))

    # -- structure checks -------------------------------------------------

    def is_unital(self) -> bool:
        src = np.array(self.source.blocks, dtype=int)
        for j, n in enumerate(self.target.blocks):
            filled = int(self.mult[j] @ src) if len(src) else 0
            if filled != n:
                return False
        return True

    def is_injective(self) -> bool:
        return all(int(self.mult[:, i].sum()) >= 1 for i in range(len(self.source.blocks)))

    def is_automorphism(self) -> bool:
        if self.source.blocks == () and self.target.blocks == ():
            return True
        m = self.mult
        if m.shape[0] != m.shape[1]:
            return False
        if not np.array_equal(m @ m.T, np.eye(m.shape[0], dtype=int)):
            return False
        for j in range(m.shape[0]):
            i = int(np.argmax(m[j]))
            if self.source.blocks[i] != self.target.blocks[j]:
                return False
        return True

    def unitarity_residual(self) -> float:
        out = 0.0
        for u in self.conjugators:
            n = u.shape[0]
            out = max(out, operator_norm(u.conj().T @ u - np.eye(n)))
        return out

    # -- action ------------------------------------------------------------

    def apply(self, t: AlgElement) -> AlgElement:
        if t.algebra != self.source:
            raise ShapeMismatch("element not in the source algebra")
        out = []
        for j, n in enumerate(self.target.blocks):
            pieces = []
            for i in range(len(self.source.blocks)):
                pieces.extend([t.data[i]] * int(self.mult[j, i]))
            if pieces:
                diag = _blockdiag(pieces, n)
            else:
                diag = np.zeros((n, n), dtype=complex)
            u = self.conjugators[j]
            out.append(u @ diag @ u.conj().T)
        return AlgElement(self.target, tuple(out))

    def as_matrix(self):
        """Dense matrix of the action on vectorized elements."""
        cols = [self.apply(e).vec() for e in self.source.basis()]
        if not cols:
            return np.zeros((self.target.dim, 0), dtype=complex)
        return np.stack(cols, axis=1)

    def residual(self, other: "StarMorphism") -> float:
        """Operator-norm distance between the two actions."""
        if self.source != other.source or self.target != other.target:
            raise ShapeMismatch("morphisms with different signatures")
        if self.source.dim == 0:
            return 0.0
        return operator_norm(self.as_matrix() - other.as_matrix())

    def equals(self, other: "StarMorphism", tol=VALIDATION_TOL) -> bool:
        return self.residual(other) < tol

    # -- algebra -----------------------------------------------------------

    def after(self, first: "StarMorphism") -> "StarMorphism":
        """Composite self o first in Bratteli form.

        The permutation reshuffling the 'grouped by intermediate block'
        layout into the 'grouped by source block' layout is absorbed into
        the conjugators, so multiplicities multiply exactly.
        """
        if first.target != self.source:
            raise ShapeMismatch("composition signature mismatch")
        if first.source.dim == 0:
            return StarMorphism(
                first.source,
                self.target,
                np.zeros((len(self.target.blocks), 0), dtype=int),
                tuple(np.eye(n, dtype=complex) for n in self.target.blocks),
            )
        mult = self.mult @ first.mult
        conjugators = []
        src_sizes = first.source.blocks
        mid_sizes = self.source.blocks
        for j, n in enumerate(self.target.blocks):
            v_blocks = []
            layout = []  # source block index per copy, in (mid, src) order
            for b in range(len(mid_sizes)):
                for _ in range(int(self.mult[j, b])):
                    v_blocks.append(first.conjugators[b])
                    for i in range(len(src_sizes)):
                        layout.extend([i] * int(first.mult[b, i]))
            if v_blocks:
                v = _blockdiag(v_blocks, n)
            else:
                v = np.zeros((n, n), dtype=complex)
            perm = _regroup_permutation(layout, src_sizes, n)
            conjugators.append(self.conjugators[j] @ v @ perm)
        return StarMorphism(first.source, self.target, mult, tuple(conjugators))

    def inverse(self) -> "StarMorphism":
        if not self.is_automorphism():
            raise NotInvertible("multiplicity matrix is not a block permutation")
        k = len(self.target.blocks)
        inv_mult = self.mult.T
        conjugators = [None] * k
        for j in range(k):
            i = int(np.argmax(self.mult[j]))  # source block landing in target j
            conjugators[i] = self.conjugators[j].conj().T
        return StarMorphism(self.target, self.source, inv_mult, tuple(conjugators))

    def __repr__(self):
        return f"StarMorphism({self.source} -> {self.target}, mult={self.mult.tolist()})"


def _blockdiag(pieces, expected):
    total = sum(p.shape[0] for p in pieces)
    out = np.zeros((total, total), dtype=complex)
    at = 0
    for p in pieces:
        n = p.shape[0]
        out[at:at + n, at:at + n] = p
        at += n
    if total != expected:
        raise ShapeMismatch(f"block diagonal fills {total} of {expected} dims (non-unital)")
    return out

def _regroup_permutation(layout, src_sizes, n):
    """Permutation sending the canonical source-grouped coordinate layout
    to the given per-copy layout (entries of layout are source block
    indices in their current order)."""
    counts = [0] * len(src_sizes)
    for i in layout:
        counts[i] += 1
    offsets = np.zeros(len(src_sizes), dtype=int)
    at = 0
    for i, c in enumerate(counts):
        offsets[i] = at
        at += c * src_sizes[i]
    used = [0] * len(src_sizes)
    perm = np.zeros((n, n), dtype=complex)
    row = 0
    for i in layout:
        size = src_sizes[i]
        col = offsets[i] + used[i] * size
        for d in range(size):
            perm[row + d, col + d] = 1.0
        used[i] += 1
        row += size
    if row != n:
        raise ShapeMismatch("layout does not fill the target block")
    return perm


def morphism_hom_residual(m: StarMorphism, rng=None, samples=6) -> float:
    """Numeric check that the stored data is a *-homomorphism: preserves
    products, adjoints, and (for nonzero sources) the unit on random pairs."""
    if m.source.dim == 0:
        return 0.0
    rng = rng or np.random.default_rng(0)
    out = 0.0
    for _ in range(samples):
        s = m.source.random_element(rng)
        t = m.source.random_element(rng)
        out = max(out, (m.apply(s * t) - m.apply(s) * m.apply(t)).norm)
        out = max(out, (m.apply(s.adjoint()) - m.apply(s).adjoint()).norm)
        out = max(out, (m.apply(s + t) - (m.apply(s) + m.apply(t))).norm)
    out = max(out, (m.apply(m.source.one()) - m.target.one()).norm if m.is_unital() else 0.0)
    return out


def random_unitary(rng, n: int):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def unitary_conjugacy(u, v, tol=VALIDATION_TOL) -> bool:
    """Unitaries are conjugate iff their eigenvalue multisets agree.

    Matching is by minimum-cost assignment, which is robust against
    arbitrary eigenvalue ordering returned by the solver.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        return False
    if u.size == 0:
        return True
    eu = np.linalg.eigvals(u)
    ev = np.linalg.eigvals(v)
    cost = np.abs(eu[:, None] - ev[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max()) < max(tol, 1e-8)


def spectra_match_up_to_phase(u, v, tol=1e-8) -> bool:
    """True iff spec(u) = lambda * spec(v) for some unit scalar lambda.

    This is conjugacy of the inner automorphisms ad(u), ad(v) on a full
    matrix block, where the implementing unitary is only defined up to a
    phase."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != v.shape:
        return False
    if u.size == 0:
        return True
    eu = np.linalg.eigvals(u)
    ev = np.linalg.eigvals(v)
    for candidate in eu[0] / ev:
        if abs(abs(candidate) - 1.0) > 1e-6:
            continue
        if unitary_conjugacy(u, candidate * v, tol):
            return True
    return False
