"""Generic finite-semigroup engine.

Elements are opaque: a :class:`SemigroupTable` stores them in a list and the
multiplication as an integer Cayley table, so the same code serves
transformations under either product, normal cones and linked pairs.  Green's
relations are computed from principal ideals, with no knowledge of what the
elements are; that is what makes the engine usable as an oracle.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Sequence

import numpy as np

from .errors import AssociativityError, ClosureError

__all__ = [
    "SemigroupTable", "GreenData", "EggBox", "HomomorphismReport",
    "build_semigroup", "green_classes", "idempotents", "is_regular_element",
    "regular_elements", "egg_box", "verify_homomorphism", "subsemigroup",
]

EXHAUSTIVE_ASSOC_LIMIT = 300
SAMPLED_TRIPLES = 200_000


@dataclass(frozen=True, eq=False)
class SemigroupTable:
    elements: tuple
    table: np.ndarray
    index: dict = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def mul(self, i: int, j: int) -> int:
        return int(self.table[i, j])

    def product(self, x, y):
        """Multiply two element values."""
        return self.elements[self.table[self.index[x], self.index[y]]]

    def __contains__(self, x) -> bool:
        return x in self.index

    @classmethod
    def from_table(cls, elements: Sequence[Hashable], table, check_assoc: bool = True,
                   seed: int = 0) -> "SemigroupTable":
        elements = tuple(elements)
        index = {e: i for i, e in enumerate(elements)}
        if len(index) != len(elements):
            raise ValueError("elements are not distinct")
        t = np.asarray(table, dtype=np.int64)
        n = len(elements)
        if t.shape != (n, n):
            raise ValueError(f"table shape {t.shape} does not match {n} elements")
        bad = np.argwhere((t < 0) | (t >= n))
        if len(bad):
            i, j = bad[0]
            raise ClosureError(elements[i], elements[j], int(t[i, j]))
        t.setflags(write=False)
        S = cls(elements, t, index)
        if check_assoc:
            witness = associativity_witness(S, seed=seed)
            if witness is not None:
                raise AssociativityError(*(elements[k] for k in witness))
        return S


def build_semigroup(elements: Sequence[Hashable], product: Callable[[Any, Any], Any],
                    check_assoc: bool = True, seed: int = 0) -> SemigroupTable:
    """Materialize ``product`` on ``elements`` (duplicates dropped, first
    occurrence wins).  Raises ClosureError / AssociativityError with a witness."""
    uniq = list(dict.fromkeys(elements))
    index = {e: i for i, e in enumerate(uniq)}
    n = len(uniq)
    table = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(uniq):
        for j, y in enumerate(uniq):
            z = product(x, y)
            k = index.get(z)
            if k is None:
                raise ClosureError(x, y, z)
            table[i, j] = k
    return SemigroupTable.from_table(uniq, table, check_assoc=check_assoc, seed=seed)


def associativity_witness(S: SemigroupTable, seed: int = 0):
    """First failing index triple, or None.  Exhaustive up to 300 elements,
    otherwise a fixed-seed sample of triples."""
    t = S.table
    n = len(S)
    if n <= EXHAUSTIVE_ASSOC_LIMIT:
        for i in range(n):
            left = t[t[i, :], :]        # (i*j)*k
            right = t[i, t]             # i*(j*k)
            diff = np.argwhere(left != right)
            if len(diff):
                j, k = diff[0]
                return i, int(j), int(k)
        return None
    rng = np.random.default_rng(seed)
    i, j, k = rng.integers(0, n, size=(3, SAMPLED_TRIPLES))
    bad = np.flatnonzero(t[t[i, j], k] != t[i, t[j, k]])
    if len(bad):
        b = bad[0]
        return int(i[b]), int(j[b]), int(k[b])
    return None


def subsemigroup(S: SemigroupTable, members) -> SemigroupTable:
    """Restrict S to ``members`` (element values).  Raises ClosureError if
    they are not closed."""
    idx = np.array([S.index[m] for m in members], dtype=np.int64)
    pos = -np.ones(len(S), dtype=np.int64)
    pos[idx] = np.arange(len(idx))
    sub = pos[S.table[np.ix_(idx, idx)]]
    bad = np.argwhere(sub < 0)
    if len(bad):
        i, j = bad[0]
        raise ClosureError(members[i], members[j], S.elements[S.table[idx[i], idx[j]]])
    return SemigroupTable.from_table([S.elements[k] for k in idx], sub, check_assoc=False)


# ---------------------------------------------------------------- Green

def _classes_from_rows(mat: np.ndarray) -> np.ndarray:
    """Class id per row: rows equal <=> same id; ids by first appearance."""
    packed = np.packbits(mat, axis=1)
    _, first, inverse = np.unique(packed, axis=0, return_index=True, return_inverse=True)
    inverse = inverse.reshape(-1)
    order = np.argsort(first)
    relabel = np.empty_like(order)
    relabel[order] = np.arange(len(order))
    return relabel[inverse]


def _renumber(labels) -> np.ndarray:
    seen: dict = {}
    return np.array([seen.setdefault(v, len(seen)) for v in labels], dtype=np.int64)


@dataclass(frozen=True, eq=False)
class GreenData:
    L: np.ndarray
    R: np.ndarray
    D: np.ndarray
    H: np.ndarray

    def members(self, relation: str, cid: int) -> list[int]:
        return [int(i) for i in np.flatnonzero(getattr(self, relation) == cid)]

    def classes(self, relation: str) -> list[list[int]]:
        ids = getattr(self, relation)
        return [self.members(relation, c) for c in range(int(ids.max()) + 1)]

    def count(self, relation: str) -> int:
        return int(getattr(self, relation).max()) + 1

    def related(self, relation: str, i: int, j: int) -> bool:
        ids = getattr(self, relation)
        return bool(ids[i] == ids[j])

    def to_json(self, S: SemigroupTable, label=str) -> dict:
        return {rel: [[label(S.elements[i]) for i in cls] for cls in self.classes(rel)]
                for rel in "LRDH"}


def green_classes(S: SemigroupTable) -> GreenData:
    """L, R, H, D from principal (monoid-completed) ideals.

    aS^1 = {a} U row(a) and S^1a = {a} U column(a) are already closed, so the
    ideal is read off the table.  D is the transitive closure of L U R."""
    n = len(S)
    t = S.table
    right = np.zeros((n, n), dtype=bool)
    left = np.zeros((n, n), dtype=bool)
    rows = np.arange(n)
    right[rows[:, None], t] = True
    left[rows[:, None], t.T] = True
    right[rows, rows] = True
    left[rows, rows] = True
    R = _classes_from_rows(right)
    L = _classes_from_rows(left)
    H = _renumber(zip(L.tolist(), R.tolist()))
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ids in (L, R):
        first: dict[int, int] = {}
        for i, c in enumerate(ids.tolist()):
            if c in first:
                a, b = find(i), find(first[c])
                if a != b:
                    parent[a] = b
            else:
                first[c] = i
    D = _renumber(find(i) for i in range(n))
    return GreenData(L=L, R=R, D=D, H=H)


def idempotents(S: SemigroupTable) -> list:
    idx = np.flatnonzero(S.table[np.arange(len(S)), np.arange(len(S))] == np.arange(len(S)))
    return [S.elements[i] for i in idx]


def is_regular_element(S: SemigroupTable, a) -> bool:
    """Exhaustive search for x with a*x*a = a."""
    i = S.index[a]
    return bool(np.any(S.table[S.table[i, :], i] == i))


def regular_elements(S: SemigroupTable) -> list:
    t = S.table
    n = len(S)
    ok = [bool(np.any(t[t[i, :], i] == i)) for i in range(n)]
    return [S.elements[i] for i in range(n) if ok[i]]


# ---------------------------------------------------------------- egg-box

@dataclass(frozen=True)
class EggBox:
    rows: tuple            # R-class labels
    cols: tuple            # L-class labels
    cells: tuple           # cells[r][c] = tuple of elements
    groups: tuple          # groups[r][c] = bool

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def cell(self, row, col):
        return self.cells[self.rows.index(row)][self.cols.index(col)]

    def is_group(self, row, col) -> bool:
        return self.groups[self.rows.index(row)][self.cols.index(col)]

    def hsizes(self) -> set[int]:
        return {len(c) for r in self.cells for c in r}

    def to_json(self, label=str) -> dict:
        return {
            "rows": [str(r) for r in self.rows],
            "cols": [str(c) for c in self.cols],
            "cells": [[[label(x) for x in cell] for cell in row] for row in self.cells],
            "groups": [list(g) for g in self.groups],
        }

    def dumps(self, label=str) -> str:
        return json.dumps(self.to_json(label))


def egg_box(S: SemigroupTable, green: GreenData, d_class_id: int,
            row_label=None, col_label=None, row_key=None, col_key=None,
            element_key=None) -> EggBox:
    """Grid of H-classes of one D-class.

    ``row_label(x)`` / ``col_label(x)`` name the R- / L-class of an element
    (default: the class id).  Keys order rows/columns; defaults sort by label.
    """
    if not 0 <= d_class_id < green.count("D"):
        raise KeyError(f"unknown D-class id {d_class_id}")
    members = green.members("D", d_class_id)
    row_label = row_label or (lambda x: int(green.R[S.index[x]]))
    col_label = col_label or (lambda x: int(green.L[S.index[x]]))
    by_r: dict[int, Any] = {}
    by_l: dict[int, Any] = {}
    for i in members:
        by_r.setdefault(int(green.R[i]), row_label(S.elements[i]))
        by_l.setdefault(int(green.L[i]), col_label(S.elements[i]))
    r_ids = sorted(by_r, key=lambda r: (row_key or (lambda v: v))(by_r[r]))
    l_ids = sorted(by_l, key=lambda c: (col_key or (lambda v: v))(by_l[c]))
    idem = set(np.flatnonzero(S.table[np.arange(len(S)), np.arange(len(S))] == np.arange(len(S))).tolist())
    cells, groups = [], []
    for r in r_ids:
        crow, grow = [], []
        for c in l_ids:
            cell = [i for i in members if green.R[i] == r and green.L[i] == c]
            elems = [S.elements[i] for i in cell]
            if element_key is not None:
                elems.sort(key=element_key)
            crow.append(tuple(elems))
            grow.append(any(i in idem for i in cell))
        cells.append(tuple(crow))
        groups.append(tuple(grow))
    return EggBox(tuple(by_r[r] for r in r_ids), tuple(by_l[c] for c in l_ids),
                  tuple(cells), tuple(groups))


# ---------------------------------------------------------------- morphisms

@dataclass(frozen=True)
class HomomorphismReport:
    homomorphism: bool
    injective: bool
    surjective: bool
    witness: Any = None       # (a, b, map(ab), map(a)map(b)) or ("not in target", a, image)

    @property
    def isomorphism(self) -> bool:
        return self.homomorphism and self.injective and self.surjective

    def __bool__(self) -> bool:
        return self.homomorphism


def verify_homomorphism(mapping: Callable[[Any], Any], S: SemigroupTable,
                        T: SemigroupTable, anti: bool = False) -> HomomorphismReport:
    """Check map(ab) = map(a)map(b) on all pairs (map(b)map(a) if ``anti``)."""
    img = np.empty(len(S), dtype=np.int64)
    for i, a in enumerate(S.elements):
        y = mapping(a)
        if y not in T.index:
            return HomomorphismReport(False, False, False, ("not in target", a, y))
        img[i] = T.index[y]
    lhs = img[S.table]
    rhs = T.table[img[:, None], img[None, :]] if not anti else T.table[img[None, :], img[:, None]]
    bad = np.argwhere(lhs != rhs)
    injective = len(set(img.tolist())) == len(S)
    surjective = len(set(img.tolist())) == len(T)
    if len(bad):
        i, j = bad[0]
        a, b = S.elements[i], S.elements[j]
        return HomomorphismReport(False, injective, surjective,
                                  (a, b, T.elements[lhs[i, j]], T.elements[rhs[i, j]]))
    return HomomorphismReport(True, injective, surjective)
