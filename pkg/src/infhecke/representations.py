from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence

from flint import fmpq, fmpq_mat

from .cyclotomic import CyclotomicNumber, cyclo_from_json, cyclo_to_json
from .groups import Group, GroupParams, ambient, construct, evaluate_word, word_factor
from .linalg import CycloMatrix

Partition = tuple[int, ...]


# ------------------------------------------------------------ partitions


@lru_cache(maxsize=None)
def partitions(n: int, largest: int | None = None) -> tuple[Partition, ...]:
    largest = n if largest is None else largest
    if n == 0:
        return ((),)
    out = []
    for k in range(min(n, largest), 0, -1):
        for rest in partitions(n - k, k):
            out.append((k,) + rest)
    return tuple(out)


def conjugate_partition(lam: Partition) -> Partition:
    return tuple(sum(1 for x in lam if x > j) for j in range(lam[0])) if lam else ()


def hook_dimension(lam: Partition) -> int:
    conj = conjugate_partition(lam)
    hooks = 1
    for i, row in enumerate(lam):
        for j in range(row):
            hooks *= (row - j - 1) + (conj[j] - i - 1) + 1
    return math.factorial(sum(lam)) // hooks


@dataclass(frozen=True, order=True)
class Multipartition:
    parts: tuple[Partition, ...]

    @property
    def size(self) -> int:
        return sum(sum(p) for p in self.parts)

    @property
    def level(self) -> int:
        return len(self.parts)

    @property
    def support(self) -> int:
        return sum(1 for p in self.parts if p)

    @property
    def descents(self) -> int:
        return sum(sum(1 for j in range(len(p)) if j == len(p) - 1 or p[j] > p[j + 1]) for p in self.parts if p)

    def shift(self, k: int) -> Multipartition:
        m = self.level
        return Multipartition(tuple(self.parts[(i - k) % m] for i in range(m)))

    def conjugate(self) -> Multipartition:
        return Multipartition(tuple(conjugate_partition(p) for p in self.parts))

    def dual_sign_twist(self) -> Multipartition:
        """Label ((l^{m-1})', ..., (l^0)') of the dual twisted by the sign."""
        return Multipartition(tuple(conjugate_partition(p) for p in reversed(self.parts)))

    def dimension(self) -> int:
        out = math.factorial(self.size)
        for p in self.parts:
            out = out // math.factorial(sum(p)) * hook_dimension(p)
        return out

    def label(self) -> str:
        return "(" + ",".join("[" + ",".join(map(str, p)) + "]" for p in self.parts) + ")"

    @classmethod
    def parse(cls, text: str) -> Multipartition:
        text = text.strip()
        if text.startswith("(") and text.endswith(")"):
            text = text[1:-1]
        parts = []
        for chunk in text.replace(";", ",").split("]"):
            chunk = chunk.strip(" ,")
            if not chunk:
                continue
            if not chunk.startswith("["):
                raise ValueError(f"bad multipartition {text!r}")
            body = chunk[1:].strip()
            parts.append(tuple(int(x) for x in body.split(",") if x.strip()))
        return cls(tuple(parts))

    def __str__(self):
        return self.label()


def multipartitions(r: int, m: int) -> list[Multipartition]:
    out = []

    def rec(remaining: int, k: int, acc: list):
        if k == m - 1:
            for p in partitions(remaining):
                out.append(Multipartition(tuple(acc + [p])))
            return
        for size in range(remaining, -1, -1):
            for p in partitions(size):
                rec(remaining - size, k + 1, acc + [p])

    rec(r, 0, [])
    return out


def aut_order(lam: Multipartition, e: int, step: int = 1) -> int:
    """Order of the stabilizer of lam in the group of shifts by multiples of step."""
    m = lam.level
    if m % step:
        raise ValueError("step must divide the level")
    return sum(1 for j in range(m // step) if lam.shift(j * step) == lam)


# ------------------------------------------------------------ tableaux

Tableau = tuple[tuple[int, int, int], ...]  # entry k -> (component, row, col)


def standard_tableaux(lam: Multipartition) -> list[Tableau]:
    """Standard multitableaux as placement tuples, entry k at index k-1."""
    out: list[Tableau] = []
    shape = [list(p) for p in lam.parts]
    r = lam.size

    def rec(k: int, acc: list):
        if k == 0:
            out.append(tuple(reversed(acc)))
            return
        for c, part in enumerate(shape):
            for row in range(len(part)):
                length = part[row]
                if length and (row + 1 == len(part) or part[row + 1] < length):
                    part[row] -= 1
                    acc.append((c, row, length - 1))
                    rec(k - 1, acc)
                    acc.pop()
                    part[row] += 1

    rec(r, [])
    out.sort()
    return out


# ------------------------------------------------------------ representations


@dataclass
class Representation:
    group: Group
    n: int
    dim: int
    gens: dict[str, CycloMatrix]
    label: str
    multipartition: Multipartition | None = None
    component: int | None = None
    is_ambient: bool = False  # generators t, s_i of G(m,1,r)
    _images: list[CycloMatrix] | None = field(default=None, repr=False)
    _character: Character | None = field(default=None, repr=False)

    def image_of_word(self, word: Sequence[str]) -> CycloMatrix:
        out = CycloMatrix.identity(self.n, self.dim)
        for name in word:
            out = out @ self.gens[name]
        return out

    def images(self) -> list[CycloMatrix]:
        if self._images is None:
            W = self.group
            gens = [self.gens[nm] for nm in W.gen_names]
            imgs = [CycloMatrix.identity(self.n, self.dim)]
            for i in range(1, W.order):
                imgs.append(imgs[W.parent[i]] @ gens[W.parent_gen[i]])
            self._images = imgs
        return self._images

    def evaluate_index(self, i: int) -> CycloMatrix:
        if self._images is not None:
            return self._images[i]
        W = self.group
        out = CycloMatrix.identity(self.n, self.dim)
        for k in W.word(i):
            out = out @ self.gens[W.gen_names[k]]
        return out

    def evaluate(self, g) -> CycloMatrix:
        if self.is_ambient:
            return self.image_of_word(word_factor(g))
        return self.evaluate_index(self.group.index[g])

    def character(self) -> Character:
        if self._character is None:
            self._character = Character(self.group, [m.trace() for m in self.images()])
        return self._character

    def forget_images(self) -> None:
        self._images = None


@dataclass
class Character:
    group: Group
    values: list[CyclotomicNumber]

    def __post_init__(self):
        self._key = None

    @property
    def degree(self) -> int:
        return int(self.values[0].to_rational())

    def key(self) -> tuple:
        if self._key is None:
            self._key = tuple(self.values)
        return self._key

    def __eq__(self, o) -> bool:
        return isinstance(o, Character) and self.key() == o.key()

    def __hash__(self):
        return hash(self.key())

    def twist(self, eta: Sequence[int]) -> Character:
        return Character(self.group, [v if s == 1 else -v for v, s in zip(self.values, eta)])

    def dual(self) -> Character:
        inv = self.group.inverse_index
        return Character(self.group, [self.values[inv[i]] for i in range(len(self.values))])

    def at_powers(self, k: int) -> list[CyclotomicNumber]:
        W = self.group
        return [self.values[W.power_index(i, k)] for i in range(W.order)]


def inner(chi: Character, psi: Character) -> Fraction:
    """(1/|W|) sum chi(g) psi(g^-1)."""
    W = chi.group
    inv = W.inverse_index
    acc = None
    for i, v in enumerate(chi.values):
        term = v * psi.values[inv[i]]
        acc = term if acc is None else acc + term
    val = acc / W.order
    return val.to_rational()


def inner_real(chi: Character, signs: Sequence[int]) -> Fraction:
    """<chi, eta> for a +-1-valued linear character eta."""
    acc = None
    for v, s in zip(chi.values, signs):
        t = v if s == 1 else -v
        acc = t if acc is None else acc + t
    return (acc / chi.group.order).to_rational()


def exterior_power_character(chi: Character, k: int) -> Character:
    """Character of the k-th exterior power, via Newton's identities."""
    W = chi.group
    n = chi.values[0].n
    powers = [None] + [chi.at_powers(j) for j in range(1, k + 1)]
    out = []
    for i in range(W.order):
        e = [CyclotomicNumber.from_rational(n, 1)]
        for j in range(1, k + 1):
            acc = CyclotomicNumber.from_rational(n, 0)
            for t in range(1, j + 1):
                term = e[j - t] * powers[t][i]
                acc = acc + term if t % 2 == 1 else acc - term
            e.append(acc / j)
        out.append(e[k])
    return Character(W, out)


def symmetric_square_values(chi: Character, sign: int) -> list[CyclotomicNumber]:
    """(chi(g)^2 + sign*chi(g^2)) / 2."""
    sq = chi.group.square_index
    return [(v * v + (chi.values[sq[i]] if sign > 0 else -chi.values[sq[i]])) / 2 for i, v in enumerate(chi.values)]


def bilinear_type(rho: Representation | Character, eta: Sequence[int], eps: Sequence[int]) -> str:
    """'symmetric', 'alternating' or 'none' for the embedding eps*eta -> rho* (x) rho*."""
    chi = rho.character() if isinstance(rho, Representation) else rho
    dual = chi.dual()
    target = [a * b for a, b in zip(eps, eta)]
    sym = inner_real(Character(chi.group, symmetric_square_values(dual, +1)), target)
    alt = inner_real(Character(chi.group, symmetric_square_values(dual, -1)), target)
    if sym > 1 or alt > 1 or sym + alt > 1:
        raise AssertionError(f"multiplicities {sym}, {alt} impossible for an irreducible")
    if sym == 1:
        return "symmetric"
    if alt == 1:
        return "alternating"
    return "none"


# ------------------------------------------------------------ seminormal model


def _content(pos) -> int:
    return pos[2] - pos[1]


def seminormal_model(lam: Multipartition, group: Group | None = None) -> Representation:
    """Seminormal model of the irreducible of G(m,1,r) labelled by lam, m = level."""
    m, r = lam.level, lam.size
    tabs = standard_tableaux(lam)
    index = {T: i for i, T in enumerate(tabs)}
    N = len(tabs)
    gens: dict[str, CycloMatrix] = {}
    if m > 1:
        entries = [[0] * N for _ in range(N)]
        for T, i in index.items():
            entries[i][i] = CyclotomicNumber.zeta(m, T[0][0])
        gens["t"] = CycloMatrix.from_entries(m, entries)
    for s in range(1, r):
        M = fmpq_mat(N, N)
        for T, i in index.items():
            a, b = T[s - 1], T[s]
            if a[0] == b[0] and a[1] == b[1]:
                M[i, i] = 1
                continue
            if a[0] == b[0] and a[2] == b[2]:
                M[i, i] = -1
                continue
            swapped = list(T)
            swapped[s - 1], swapped[s] = b, a
            j = index[tuple(swapped)]
            if a[0] != b[0]:
                M[j, i] = 1
                continue
            da = _content(b) - _content(a)
            M[i, i] = fmpq(1, da)
            M[j, i] = 1 if da < 0 else 1 - fmpq(1, da * da)
        gens[f"s{s}"] = CycloMatrix.from_rational(m, M)
    if group is None:
        group = ambient(GroupParams(m, 1, r)) if (m, r) != (1, 1) else None
    return Representation(group, m, N, gens, lam.label(), multipartition=lam, is_ambient=True)


# ------------------------------------------------------------ Clifford splitting


def _shift_tableau(T: Tableau, k: int, m: int) -> Tableau:
    return tuple(((c + k) % m, row, col) for c, row, col in T)


def clifford_split(rho: Representation, W: Group, index_e: int) -> list[Representation]:
    """Components of the restriction of an ambient model to G(m, index_e, r).

    The shift U: v_T -> v_{shift(T)} by s0 = m/A commutes with the subgroup and
    satisfies U^A = 1 (it permutes each orbit of A tableaux cyclically), so the
    component for omega = z_A^j is spanned by sum_k omega^(-jk) U^k v_T.
    """
    lam = rho.multipartition
    m = lam.level
    step = m // index_e
    A = aut_order(lam, index_e, step)
    if A == 1:
        gens = {nm: rho.image_of_word(w) for nm, w in zip(W.gen_names, W.gen_words)}
        return [Representation(W, rho.n, rho.dim, gens, lam.label(), multipartition=lam, component=0)]
    s0 = m // A
    tabs = standard_tableaux(lam)
    index = {T: i for i, T in enumerate(tabs)}
    reps, seen = [], set()
    for T in tabs:
        if T in seen:
            continue
        orbit = [T]
        for k in range(1, A):
            orbit.append(_shift_tableau(T, k * s0, m))
        seen.update(orbit)
        reps.append([index[x] for x in orbit])
    N, k_dim = rho.dim, len(reps)
    full = {nm: rho.image_of_word(w) for nm, w in zip(W.gen_names, W.gen_words)}
    U = fmpq_mat(N, N)
    for orbit in reps:
        for k in range(A):
            U[orbit[(k + 1) % A], orbit[k]] = 1
    Um = CycloMatrix.from_rational(rho.n, U)
    for nm, g in full.items():
        if Um @ g != g @ Um:
            raise AssertionError(f"shift does not commute with {nm}")
    out = []
    for j in range(A):
        B = [[0] * k_dim for _ in range(N)]
        for col, orbit in enumerate(reps):
            for k, row in enumerate(orbit):
                B[row][col] = CyclotomicNumber.zeta(m, (-j * k * s0) % m)
        Bm = CycloMatrix.from_entries(rho.n, B)
        sel = [orbit[0] for orbit in reps]
        gens = {nm: g.submatrix(sel, range(N)) @ Bm for nm, g in full.items()}
        out.append(Representation(W, rho.n, k_dim, gens, f"{lam.label()}:{j}", multipartition=lam, component=j))
    return out


# ------------------------------------------------------------ Irr(W)


def orbit_representatives(params: GroupParams) -> list[tuple[Multipartition, int]]:
    """Canonical labels of shift orbits with their stabilizer orders."""
    m, step = params.m, params.d
    seen, out = set(), []
    for lam in multipartitions(params.r, m):
        if lam in seen:
            continue
        orbit = {lam.shift(j * step) for j in range(params.e)}
        seen |= orbit
        canon = min(orbit, key=_label_key)
        out.append((canon, aut_order(canon, params.e, step)))
    out.sort(key=lambda x: _label_key(x[0]))
    return out


def _label_key(lam: Multipartition):
    return tuple(tuple(-x for x in p) if p else (1,) for p in lam.parts)


def irreducibles(W: Group) -> list[Representation]:
    params = W.params
    if params is None:
        raise ValueError("irreducibles need a series group")
    out = []
    for lam, _ in orbit_representatives(params):
        model = seminormal_model(lam, group=None)
        out.extend(clifford_split(model, W, params.e))
    return out


def restriction_mults(chi: Character, W0: Group, irr0: Sequence[Character]) -> list[Fraction]:
    """Multiplicities of the restriction of chi (on W) to W0 in each irreducible of W0."""
    W = chi.group
    vals = [chi.values[W.index[g.extend(W.r)]] for g in W0.elements]
    res = Character(W0, vals)
    return [inner(res, psi) for psi in irr0]


# ------------------------------------------------------------ derived constructions


def dual(rho: Representation) -> Representation:
    gens = {nm: g.inverse().transpose() for nm, g in rho.gens.items()}
    return Representation(rho.group, rho.n, rho.dim, gens, f"dual{rho.label}", is_ambient=rho.is_ambient)


def tensor_linear(rho: Representation, eta: Representation) -> Representation:
    if eta.dim != 1:
        raise ValueError("eta must have degree 1")
    gens = {nm: g.scale(eta.gens[nm].entry(0, 0)) for nm, g in rho.gens.items()}
    return Representation(rho.group, rho.n, rho.dim, gens, f"{rho.label}*{eta.label}", is_ambient=rho.is_ambient)


def wedge_matrix(M: CycloMatrix, k: int) -> CycloMatrix:
    """Matrix of Lambda^k M on the basis of k-subsets in lexicographic order."""
    n, N = M.n, M.rows
    subsets = list(itertools.combinations(range(N), k))
    pos = {S: i for i, S in enumerate(subsets)}
    cols = [[M.entry(i, j) for i in range(N)] for j in range(N)]
    zero = CyclotomicNumber.from_rational(n, 0)
    out = [[zero] * len(subsets) for _ in subsets]
    for c, S in enumerate(subsets):
        vec = {(): CyclotomicNumber.from_rational(n, 1)}
        for j in S:
            new: dict = {}
            for I, coef in vec.items():
                for l, x in enumerate(cols[j]):
                    if x.is_zero() or l in I:
                        continue
                    sign = -1 if sum(1 for a in I if a > l) % 2 else 1
                    key = tuple(sorted(I + (l,)))
                    term = coef * x if sign == 1 else -(coef * x)
                    new[key] = new[key] + term if key in new else term
            vec = new
        for I, coef in vec.items():
            out[pos[I]][c] = coef
    return CycloMatrix.from_entries(n, out) if subsets else CycloMatrix.zero(n, 0)


def wedge_derivation(X: CycloMatrix, k: int) -> CycloMatrix:
    """Matrix of the derivation action of X on Lambda^k."""
    n, N = X.n, X.rows
    subsets = list(itertools.combinations(range(N), k))
    pos = {S: i for i, S in enumerate(subsets)}
    zero = CyclotomicNumber.from_rational(n, 0)
    out = [[zero] * len(subsets) for _ in subsets]
    for c, S in enumerate(subsets):
        for idx, j in enumerate(S):
            rest = S[:idx] + S[idx + 1:]
            for l in range(N):
                x = X.entry(l, j)
                if x.is_zero() or l in rest:
                    continue
                # replace e_j at position idx by e_l, then sort
                seq = list(S)
                seq[idx] = l
                inversions = sum(1 for a in range(k) for b in range(a + 1, k) if seq[a] > seq[b])
                key = tuple(sorted(seq))
                r_ = pos[key]
                out[r_][c] = out[r_][c] + (x if inversions % 2 == 0 else -x)
    return CycloMatrix.from_entries(n, out)


def exterior_power(rho: Representation, k: int) -> Representation:
    if not 0 <= k <= rho.dim:
        raise ValueError("k out of range")
    gens = {nm: wedge_matrix(g, k) for nm, g in rho.gens.items()}
    return Representation(rho.group, rho.n, math.comb(rho.dim, k), gens, f"L{k}{rho.label}", is_ambient=rho.is_ambient)


# ------------------------------------------------------------ file format


def rep_to_json(rho: Representation) -> dict:
    doc = {
        "field": {"cyclotomic": rho.n},
        "dim": rho.dim,
        "generators": [
            {"name": nm, "matrix": [[cyclo_to_json(x) for x in row] for row in g.entries()]}
            for nm, g in rho.gens.items()
        ],
        "label": rho.label,
    }
    p = rho.group.params if rho.group is not None else None
    if p is not None:
        doc["group"] = {"d": p.d, "e": p.e, "r": p.r}
    return doc


def rep_from_json(doc: dict) -> Representation:
    if "cyclotomic" not in doc.get("field", {}):
        raise ValueError("not a cyclotomic representation file")
    n = int(doc["field"]["cyclotomic"])
    dim = int(doc["dim"])
    gens = {}
    for g in doc["generators"]:
        rows = [[cyclo_from_json(x) for x in row] for row in g["matrix"]]
        if len(rows) != dim or any(len(r) != dim for r in rows):
            raise ValueError(f"generator {g['name']} is not {dim}x{dim}")
        gens[g["name"]] = CycloMatrix.from_entries(n, rows)
    group = None
    if "group" in doc:
        gp = doc["group"]
        params = GroupParams(int(gp["d"]), int(gp["e"]), int(gp["r"]))
        names = set(gens)
        group = ambient(params) if params.e == 1 or "t" in names else construct(params)
        if set(group.gen_names) != names:
            group = construct(params)
    ambient_names = group is not None and group.gen_names == [nm for nm in group.gen_names if nm == "t" or nm[1:].isdigit()]
    return Representation(group, n, dim, gens, doc.get("label", ""), is_ambient=bool(ambient_names and group.params and group.params.e == 1))


def save_rep(rho: Representation, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(rep_to_json(rho), fh, indent=1)


def load_rep(path: str) -> Representation:
    with open(path) as fh:
        return rep_from_json(json.load(fh))
