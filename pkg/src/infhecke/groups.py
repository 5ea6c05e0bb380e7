from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from flint import fmpq_mat

from .cyclotomic import CyclotomicNumber
from .linalg import CycloMatrix

DEFAULT_CAP = 10_000


class GroupTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class GroupParams:
    d: int
    e: int
    r: int

    def __post_init__(self):
        if min(self.d, self.e, self.r) < 1:
            raise ValueError("d, e, r must be positive")
        if (self.d * self.e, self.e, self.r) in {(2, 2, 2), (1, 1, 1)}:
            raise ValueError(f"G({self.d * self.e},{self.e},{self.r}) is excluded")

    @property
    def m(self) -> int:
        return self.d * self.e

    def order(self) -> int:
        return math.factorial(self.r) * self.d**self.r * self.e ** (self.r - 1)

    def name(self) -> str:
        return f"G({self.m},{self.e},{self.r})"


@dataclass(frozen=True)
class MonomialElement:
    """g e_i = z^exps[i] e_perm[i] with z a primitive m-th root of unity."""

    perm: tuple[int, ...]
    exps: tuple[int, ...]
    m: int

    def __mul__(self, o: MonomialElement) -> MonomialElement:
        p, a = self.perm, self.exps
        return MonomialElement(
            tuple(p[j] for j in o.perm),
            tuple((o.exps[i] + a[o.perm[i]]) % self.m for i in range(len(p))),
            self.m,
        )

    def inverse(self) -> MonomialElement:
        r = len(self.perm)
        perm = [0] * r
        exps = [0] * r
        for i, j in enumerate(self.perm):
            perm[j] = i
            exps[j] = (-self.exps[i]) % self.m
        return MonomialElement(tuple(perm), tuple(exps), self.m)

    def is_identity(self) -> bool:
        return all(p == i for i, p in enumerate(self.perm)) and not any(self.exps)

    @classmethod
    def identity(cls, r: int, m: int) -> MonomialElement:
        return cls(tuple(range(r)), (0,) * r, m)

    def matrix(self, n: int | None = None) -> CycloMatrix:
        n = self.m if n is None else n
        r = len(self.perm)
        entries = [[0] * r for _ in range(r)]
        for i, (p, a) in enumerate(zip(self.perm, self.exps)):
            entries[p][i] = CyclotomicNumber.zeta(n, a * (n // self.m))
        return CycloMatrix.from_entries(n, entries)

    def perm_sign(self) -> int:
        seen = [False] * len(self.perm)
        sign = 1
        for i in range(len(self.perm)):
            if not seen[i]:
                j, length = i, 0
                while not seen[j]:
                    seen[j] = True
                    j = self.perm[j]
                    length += 1
                if length % 2 == 0:
                    sign = -sign
        return sign

    def extend(self, r: int) -> MonomialElement:
        """Image in rank r fixing the added coordinates."""
        k = len(self.perm)
        return MonomialElement(self.perm + tuple(range(k, r)), self.exps + (0,) * (r - k), self.m)

    def __repr__(self):
        return f"MonomialElement(perm={self.perm}, exps={self.exps}, m={self.m})"


def ambient_generator(name: str, r: int, m: int) -> MonomialElement:
    if name == "t":
        return MonomialElement(tuple(range(r)), (1,) + (0,) * (r - 1), m)
    if name.startswith("s") and name[1:].isdigit():
        i = int(name[1:])
        perm = list(range(r))
        perm[i - 1], perm[i] = perm[i], perm[i - 1]
        return MonomialElement(tuple(perm), (0,) * r, m)
    raise ValueError(f"unknown generator {name!r}")


def evaluate_word(word: Sequence[str], r: int, m: int) -> MonomialElement:
    g = MonomialElement.identity(r, m)
    for name in word:
        g = g * ambient_generator(name, r, m)
    return g


@dataclass
class Group:
    """A finite monomial group enumerated breadth-first from its generators.

    ``elements[i] = elements[parent[i]] * generators[parent_gen[i]]``.
    """

    r: int
    m: int
    gen_names: list[str]
    generators: list[MonomialElement]
    gen_words: list[list[str]]  # words in the ambient generators t, s1, ...
    params: GroupParams | None = None
    cap: int = DEFAULT_CAP
    _elements: list[MonomialElement] | None = field(default=None, repr=False)

    def _enumerate(self) -> None:
        ident = MonomialElement.identity(self.r, self.m)
        elements = [ident]
        index = {ident: 0}
        parent, parent_gen = [-1], [-1]
        queue = deque([0])
        while queue:
            i = queue.popleft()
            x = elements[i]
            for k, g in enumerate(self.generators):
                y = x * g
                if y not in index:
                    if len(elements) >= self.cap:
                        raise GroupTooLarge(f"more than {self.cap} elements")
                    index[y] = len(elements)
                    elements.append(y)
                    parent.append(i)
                    parent_gen.append(k)
                    queue.append(index[y])
        self._elements = elements
        self._index = index
        self._parent = parent
        self._parent_gen = parent_gen

    @property
    def elements(self) -> list[MonomialElement]:
        if self._elements is None:
            self._enumerate()
        return self._elements

    @property
    def index(self) -> dict[MonomialElement, int]:
        self.elements
        return self._index

    @property
    def parent(self) -> list[int]:
        self.elements
        return self._parent

    @property
    def parent_gen(self) -> list[int]:
        self.elements
        return self._parent_gen

    @property
    def order(self) -> int:
        return len(self.elements)

    def word(self, i: int) -> list[int]:
        """Generator indices whose product is elements[i]."""
        out = []
        while self.parent[i] >= 0:
            out.append(self.parent_gen[i])
            i = self.parent[i]
        return out[::-1]

    @cached_property
    def inverse_index(self) -> list[int]:
        idx = self.index
        return [idx[g.inverse()] for g in self.elements]

    def mult_index(self, i: int, j: int) -> int:
        return self.index[self.elements[i] * self.elements[j]]

    def power_index(self, i: int, k: int) -> int:
        g = MonomialElement.identity(self.r, self.m)
        x = self.elements[i]
        for _ in range(k):
            g = g * x
        return self.index[g]

    @cached_property
    def square_index(self) -> list[int]:
        idx = self.index
        return [idx[g * g] for g in self.elements]

    def name(self) -> str:
        return self.params.name() if self.params else f"<{','.join(self.gen_names)}>"


def generator_names(params: GroupParams) -> list[str]:
    d, e, r = params.d, params.e, params.r
    s = [f"s{i}" for i in range(1, r)]
    if e == 1:
        return (["t"] if d > 1 else []) + s
    head = [f"t^{e}"] if d > 1 else []
    return head + (["s1'"] if r >= 2 else []) + s


def generator_word(name: str, m: int) -> list[str]:
    if name == "s1'":
        return ["t", "s1"] + ["t"] * (m - 1)
    if name.startswith("t^"):
        return ["t"] * int(name[2:])
    return [name]


def construct(params: GroupParams, cap: int = DEFAULT_CAP) -> Group:
    """G(de,e,r) as a group of monomial matrices."""
    if params.order() > cap:
        raise GroupTooLarge(f"{params.name()} has order {params.order()} > cap {cap}")
    names = generator_names(params)
    words = [generator_word(n, params.m) for n in names]
    gens = [evaluate_word(w, params.r, params.m) for w in words]
    W = Group(params.r, params.m, names, gens, words, params=params, cap=cap)
    if W.order != params.order():
        raise AssertionError(f"{params.name()}: enumerated {W.order} elements, expected {params.order()}")
    return W


def ambient(params: GroupParams, cap: int = 10**6) -> Group:
    """G(de,1,r) with generators t, s1, ..., s_{r-1}."""
    m, r = params.m, params.r
    names = (["t"] if m > 1 else []) + [f"s{i}" for i in range(1, r)]
    gens = [ambient_generator(n, r, m) for n in names]
    p = GroupParams(m, 1, r) if (m, r) != (1, 1) else None
    return Group(r, m, names, gens, [[n] for n in names], params=p, cap=cap)


def subgroup(W: Group, gen_names: Sequence[str]) -> Group:
    """Subgroup generated by the named generators of W."""
    pos = [W.gen_names.index(n) for n in gen_names]
    return Group(
        W.r,
        W.m,
        list(gen_names),
        [W.generators[k] for k in pos],
        [W.gen_words[k] for k in pos],
        params=None,
        cap=W.cap,
    )


def word_factor(g: MonomialElement) -> list[str]:
    """Word in t, s1, ..., s_{r-1} evaluating to g (left-to-right product)."""
    r = len(g.perm)
    line = list(g.perm)
    swaps = []
    for i in range(r):
        for j in range(r - 1 - i):
            if line[j] > line[j + 1]:
                line[j], line[j + 1] = line[j + 1], line[j]
                swaps.append(j)
    word = [f"s{j + 1}" for j in reversed(swaps)]
    for k, a in enumerate(g.exps):
        if a:
            tk = _t_word(k)
            word.extend(tk * a)
    return word


def _t_word(k: int) -> list[str]:
    # t_1 = t, t_{k+1} = s_k t_k s_k
    w = ["t"]
    for i in range(1, k + 1):
        w = [f"s{i}"] + w + [f"s{i}"]
    return w


# ------------------------------------------------------------ reflections


@dataclass
class ReflectionSet:
    elements: list[MonomialElement]
    indices: list[int]  # positions in the group's element list
    class_partition: list[list[int]]  # blocks of positions into `elements`

    @property
    def num_classes(self) -> int:
        return len(self.class_partition)

    def class_of(self) -> list[int]:
        out = [0] * len(self.elements)
        for c, block in enumerate(self.class_partition):
            for i in block:
                out[i] = c
        return out


def _matrix_rank_minus_identity(g: MonomialElement) -> int:
    M = g.matrix() - CycloMatrix.identity(g.m, len(g.perm))
    return M.rank()


def reflections(W: Group) -> ReflectionSet:
    """All involutions g with rank(g - 1) = 1, with their conjugacy classes."""
    elems, idx = [], []
    for i, g in enumerate(W.elements):
        if g.is_identity() or not (g * g).is_identity():
            continue
        if _matrix_rank_minus_identity(g) == 1:
            elems.append(g)
            idx.append(i)
    pos = {g: k for k, g in enumerate(elems)}
    conj = [(h, h.inverse()) for h in W.generators]
    seen = [False] * len(elems)
    classes = []
    for k in range(len(elems)):
        if seen[k]:
            continue
        block, queue = [k], [k]
        seen[k] = True
        while queue:
            x = elems[queue.pop()]
            for h, hi in conj:
                y = pos[h * x * hi]
                if not seen[y]:
                    seen[y] = True
                    block.append(y)
                    queue.append(y)
        classes.append(sorted(block))
    return ReflectionSet(elems, idx, classes)


def sign_character(W: Group) -> list[int]:
    """Determinant of each element, as +-1."""
    out = []
    for g in W.elements:
        s = sum(g.exps) % W.m
        if (2 * s) % W.m:
            raise ValueError("determinant is not +-1; sign character needs d <= 2")
        out.append(g.perm_sign() * (-1 if s else 1))
    return out


def rational_matrix(g: MonomialElement) -> fmpq_mat:
    """Permutation-with-signs matrix when all exponents give +-1."""
    r = len(g.perm)
    M = fmpq_mat(r, r)
    for i, (p, a) in enumerate(zip(g.perm, g.exps)):
        if (2 * a) % g.m:
            raise ValueError("entry is not +-1")
        M[p, i] = -1 if a else 1
    return M
