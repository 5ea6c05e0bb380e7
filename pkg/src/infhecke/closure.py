"""Lie algebras generated by reflection images.

A closure is grown generator-first: every new basis element x contributes the
brackets [g, x] for the independent generators g.  Left-normed brackets span
the generated algebra, so this reaches the full closure while never
re-bracketing a stable pair.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from flint import fmpq, fmpq_mat, nmod_mat

from .classification import Classification, GroupData, classify, lie_dim
from .cyclotomic import BadPrime, CyclotomicNumber, admissible_primes, euler_phi, root_of_unity_mod_p
from .groups import Group
from .linalg import CycloMatrix, Echelon, intertwiners
from .representations import Representation, wedge_derivation, wedge_matrix

log = logging.getLogger(__name__)

DEFAULT_ORACLE_CAP = 400


def _grow(gens: Sequence, key: Callable, bracket: Callable, ech: Echelon, limit: int | None = None) -> list:
    """Semi-naive closure.  `key(x)` gives the rows to insert for x."""
    basis, active = [], []
    for g in gens:
        if ech.insert(key(g)):
            basis.append(g)
            active.append(g)
    frontier = list(basis)
    while frontier:
        new = []
        for x in frontier:
            for g in active:
                y = bracket(g, x)
                if ech.insert(key(y)):
                    new.append(y)
                    basis.append(y)
            if limit is not None and len(basis) > limit:
                return basis
        frontier = new
    return basis


@dataclass
class LieBasis:
    """A basis of the Lie closure, over Q(z_n) or over F_p."""

    size: int
    elements: list
    modulus: int | None = None
    n: int = 1

    @property
    def dim(self) -> int:
        return len(self.elements)


def _zeta_rows(phi: int):
    def key(X: CycloMatrix):
        if X.is_zero():
            return []
        rows, Y = [], X
        for _ in range(phi):
            rows.append(Y.flat())
            Y = Y.mul_zeta()
        return rows
    return key


def _bracket(a, b):
    return a @ b - b @ a


def bracket_closure(gens: Sequence[CycloMatrix], limit: int | None = None) -> LieBasis:
    """Lie subalgebra of gl_N(Q(z)) generated by gens, as a Q(z)-basis."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return LieBasis(0, [])
    n, N = gens[0].n, gens[0].rows
    phi = euler_phi(n)
    ech = Echelon(phi * N * N)
    basis = _grow(gens, _zeta_rows(phi), _bracket, ech, limit)
    return LieBasis(N, basis, None, n)


def _nmod_bracket(a: nmod_mat, b: nmod_mat) -> nmod_mat:
    return a * b - b * a


def _nmod_rows(X: nmod_mat):
    ent = [int(v) for v in X.entries()]
    return [ent] if any(ent) else []


def bracket_closure_mod_p(gens: Sequence[nmod_mat], p: int) -> LieBasis:
    gens = [g for g in gens if any(int(v) for v in g.entries())]
    if not gens:
        return LieBasis(0, [], p)
    N = gens[0].nrows()
    ech = Echelon(N * N, modulus=p)
    return LieBasis(N, _grow(gens, _nmod_rows, _nmod_bracket, ech), p)


@dataclass
class ModPResult:
    dim: int
    prime: int
    root: int
    first_prime: int
    retries: int


def closure_mod_p(gens: Sequence[CycloMatrix], p: int | None = None, start: int = 11) -> ModPResult:
    """Closure dimension after reducing modulo an admissible prime.

    With p given, a BadPrime from the reduction propagates.  Otherwise primes
    p = 1 mod n from `start` upward are tried until the reduction succeeds.
    """
    gens = [g for g in gens if not g.is_zero()]
    n = gens[0].n if gens else 1
    if p is not None:
        root = root_of_unity_mod_p(n, p)
        red = [g.to_nmod(p, root) for g in gens]
        return ModPResult(bracket_closure_mod_p(red, p).dim, p, root.value, p, 0)
    retries, first = 0, None
    for q in admissible_primes(n, start):
        first = q if first is None else first
        root = root_of_unity_mod_p(n, q)
        try:
            red = [g.to_nmod(q, root) for g in gens]
        except BadPrime:
            retries += 1
            continue
        return ModPResult(bracket_closure_mod_p(red, q).dim, q, root.value, first, retries)
    raise RuntimeError("no admissible prime")  # pragma: no cover


# ------------------------------------------------------------ per representation


@dataclass
class ReflectionImages:
    images: list[CycloMatrix]  # rho(s), in reflection order
    class_scalars: list[CyclotomicNumber]  # rho(T_c) / #c, per class
    class_of: list[int]

    def primes(self) -> list[CycloMatrix]:
        """The images rho(s') = rho(s) - rho(T_c)/#c."""
        out = []
        for A, c in zip(self.images, self.class_of):
            out.append(A - CycloMatrix.scalar(A.n, A.rows, self.class_scalars[c]))
        return out


def reflection_images(rho: Representation, data: GroupData) -> ReflectionImages:
    imgs = [rho.evaluate_index(i) for i in data.refl.indices]
    scalars = []
    for block in data.refl.class_partition:
        T = imgs[block[0]]
        for k in block[1:]:
            T = T + imgs[k]
        c = T.scalar_value()
        if c is None:
            raise AssertionError(f"class sum is not scalar on {rho.label}")
        scalars.append(c / len(block))
    return ReflectionImages(imgs, scalars, data.refl.class_of())


def rep_hecke_dims(rho: Representation, data: GroupData) -> tuple[int, int]:
    """(dim rho(H), dim rho(H'))."""
    ri = reflection_images(rho, data)
    return bracket_closure(ri.images).dim, bracket_closure(ri.primes()).dim


# ------------------------------------------------------------ group algebra


class GroupAlgebra:
    """Q W with basis the group elements, acted on by reflections."""

    def __init__(self, data: GroupData):
        self.data = data
        W = data.W
        self.W = W
        idx = W.index
        self.left = []
        self.right = []
        for s in data.refl.indices:
            g = W.elements[s]
            self.left.append([idx[g * x] for x in W.elements])
            self.right.append([idx[x * g] for x in W.elements])

    def reflection_vector(self, k: int) -> list[fmpq]:
        v = [fmpq(0)] * self.W.order
        v[self.data.refl.indices[k]] = fmpq(1)
        return v

    def class_sum(self, c: int) -> list[fmpq]:
        v = [fmpq(0)] * self.W.order
        for k in self.data.refl.class_partition[c]:
            v[self.data.refl.indices[k]] = fmpq(1)
        return v

    def prime_vector(self, k: int) -> list[fmpq]:
        c = self.data.refl.class_of()[k]
        size = len(self.data.refl.class_partition[c])
        v = [-x / size for x in self.class_sum(c)]
        v[self.data.refl.indices[k]] += 1
        return v

    def bracket(self, k: int, x: Sequence[fmpq]) -> list[fmpq]:
        """[s_k, x] for the k-th reflection."""
        L, R = self.left[k], self.right[k]
        return [x[L[i]] - x[R[i]] for i in range(len(x))]

    def closure(self, derived: bool = False) -> LieBasis:
        nrefl = len(self.data.refl.indices)
        gens = [(k, self.prime_vector(k) if derived else self.reflection_vector(k)) for k in range(nrefl)]
        ech = Echelon(self.W.order)

        def key(item):
            v = item[1]
            return [v] if any(x != 0 for x in v) else []

        def br(g, x):
            return (None, self.bracket(g[0], x[1]))

        basis = _grow(gens, key, br, ech)
        out = LieBasis(self.W.order, [v for _, v in basis])
        out.echelon = ech
        return out


def joint_closure_oracle(data: GroupData, cap: int = DEFAULT_ORACLE_CAP) -> int:
    """dim of the Lie algebra generated by the reflections inside Q W."""
    if data.W.order > cap:
        raise ValueError(f"|W| = {data.W.order} exceeds oracle cap {cap}")
    return GroupAlgebra(data).closure().dim


@dataclass
class CenterReport:
    num_classes: int
    dim_H: int
    dim_H_prime: int
    class_sums_in_H: bool
    class_sums_central: bool

    @property
    def ok(self) -> bool:
        return self.class_sums_in_H and self.class_sums_central and self.dim_H - self.dim_H_prime == self.num_classes

    def to_json(self) -> dict:
        return {"num_classes": self.num_classes, "dim_H": self.dim_H, "dim_H_prime": self.dim_H_prime,
                "class_sums_in_H": self.class_sums_in_H, "class_sums_central": self.class_sums_central,
                "ok": self.ok}


def center_check(data: GroupData, algebra: GroupAlgebra | None = None) -> CenterReport:
    A = algebra or GroupAlgebra(data)
    H = A.closure()
    Hp = A.closure(derived=True)
    sums = [A.class_sum(c) for c in range(data.refl.num_classes)]
    inside = all(H.echelon.contains(t) for t in sums)
    central = all(
        not any(x != 0 for x in A.bracket(k, t))
        for t in sums for k in range(len(data.refl.indices))
    )
    return CenterReport(data.refl.num_classes, H.dim, Hp.dim, inside, central)


@dataclass
class CompactSplitReport:
    dim_H: int
    dim_plus: int
    dim_minus: int
    reflections_odd: bool

    @property
    def ok(self) -> bool:
        return self.dim_plus + self.dim_minus == self.dim_H and self.reflections_odd

    def to_json(self) -> dict:
        return {"dim_H": self.dim_H, "dim_plus": self.dim_plus, "dim_minus": self.dim_minus, "ok": self.ok}


def compact_split_check(data: GroupData, algebra: GroupAlgebra | None = None) -> CompactSplitReport:
    """dim(H cap QW+) + dim(H cap QW-) against dim H."""
    A = algebra or GroupAlgebra(data)
    H = A.closure()
    k = H.dim
    eps = data.eps
    plus = [i for i, s in enumerate(eps) if s == 1]
    minus = [i for i, s in enumerate(eps) if s == -1]
    B = H.echelon.rows
    ent = B.entries()
    width = data.W.order

    def rank_on(cols):
        M = fmpq_mat(k, len(cols), [ent[r * width + c] for r in range(k) for c in cols])
        return M.rank()

    dim_plus = k - rank_on(minus)  # vanishing W- coordinates
    dim_minus = k - rank_on(plus)
    odd = all(eps[i] == -1 for i in data.refl.indices)
    return CompactSplitReport(k, dim_plus, dim_minus, odd)


# ------------------------------------------------------------ matrix-side checks


def invariant_form(rho: Representation, data: GroupData, eta: Sequence[int]) -> CycloMatrix | None:
    """B with t(rho g) B (rho g) = eps(g) eta(g) B on the generators of W, or None."""
    W = data.W
    pairs = []
    for name, g in zip(W.gen_names, W.generators):
        A = rho.gens[name]
        c = data.eps[W.index[g]] * eta[W.index[g]]
        Q = A.inverse().transpose()
        pairs.append((A, Q if c == 1 else -Q))
    sols = intertwiners(pairs, rho.n, rho.dim)
    if len(sols) > 1:
        raise AssertionError("invariant form is not unique")
    return sols[0] if sols else None


def form_symmetry(B: CycloMatrix) -> str:
    if B.transpose() == B:
        return "symmetric"
    if B.transpose() == -B:
        return "alternating"
    return "none"


def antisymmetry_check(B: CycloMatrix, primes: Sequence[CycloMatrix]) -> bool:
    """t(X) B + B X = 0 for every generator X of rho(H')."""
    return all((X.transpose() @ B + B @ X).is_zero() for X in primes)


def duality_intertwiner(rho: Representation, data: GroupData) -> CycloMatrix | None:
    """X with X(-rho(s)) = (-t rho(s)) X for all reflections s, if one exists."""
    imgs = [rho.evaluate_index(i) for i in data.refl.indices]
    sols = intertwiners([(-A, -A.transpose()) for A in imgs], rho.n, rho.dim)
    return sols[0] if sols else None


def ad_identity_check(images: Sequence[CycloMatrix], basis: Sequence[CycloMatrix]) -> bool:
    """ad(a)^2 x = 2(x - a x a) for involutions a."""
    for a in images:
        for x in basis:
            ax = a @ x - x @ a
            if a @ ax - ax @ a != (x - a @ x @ a).scale(2):
                return False
    return True


def operator_identity_check(images: Sequence[CycloMatrix], signs: Sequence[int], k: int) -> bool:
    """dL^k(eta(s) R(s)) = eta(s)(k-1) Id + eta(s) L^k(R(s)) for each reflection."""
    for A, e in zip(images, signs):
        lhs = wedge_derivation(A if e == 1 else -A, k)
        wedge = wedge_matrix(A, k)
        rhs = CycloMatrix.scalar(A.n, wedge.rows, (k - 1) * e) + (wedge if e == 1 else -wedge)
        if lhs != rhs:
            return False
    return True


# ------------------------------------------------------------ verification


@dataclass
class RepVerdict:
    label: str
    dim: int
    predicted_L: str
    predicted_dim: int
    modp_dim: int | None = None
    modp_prime: int | None = None
    modp_first_prime: int | None = None
    exact_dim: int | None = None
    form: str | None = None
    antisymmetric: bool | None = None
    verdict: str = "pending"

    def to_json(self) -> dict:
        out = {"label": self.label, "dim": self.dim, "predicted_L": self.predicted_L,
               "predicted_dim": self.predicted_dim, "modp_dim": self.modp_dim,
               "modp_prime": self.modp_prime, "verdict": self.verdict}
        if self.exact_dim is not None:
            out["exact_dim"] = self.exact_dim
        if self.form is not None:
            out["form"] = self.form
            out["antisymmetric"] = self.antisymmetric
        return out


@dataclass
class VerifyReport:
    group: str
    order: int
    reps: list[RepVerdict]
    center_dim: int
    predicted_total: int
    center: CenterReport | None = None
    compact: CompactSplitReport | None = None
    oracle_dim: int | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        good = all(r.verdict == "pass" for r in self.reps)
        if self.center is not None:
            good = good and self.center.ok
        if self.compact is not None:
            good = good and self.compact.ok
        if self.oracle_dim is not None:
            good = good and self.oracle_dim == self.predicted_total
        return good

    def to_json(self) -> dict:
        return {
            "group": self.group,
            "order": self.order,
            "representations": [r.to_json() for r in self.reps],
            "center_dim": self.center_dim,
            "predicted_total": self.predicted_total,
            "oracle_dim": self.oracle_dim,
            "center_check": None if self.center is None else self.center.to_json(),
            "compact_split": None if self.compact is None else self.compact.to_json(),
            "ok": self.ok,
        }


def verify_rep(
    data: GroupData,
    result: Classification,
    i: int,
    exact: bool = False,
    prime: int | None = None,
) -> RepVerdict:
    """Closure check for the i-th irreducible.

    The representation is first closed modulo a prime.  The exact closure is
    skipped only when the mod-p value already meets the prediction and the
    generators are certified to lie in the predicted algebra (trace zero, or
    antisymmetric for the invariant form).
    """
    rho, rec = data.irr[i], result.records[i]
    v = RepVerdict(rec.label, rec.dim, rec.L_type, rec.predicted_dim)
    primes = reflection_images(rho, data).primes()
    mp = closure_mod_p(primes, p=prime)
    v.modp_dim, v.modp_prime, v.modp_first_prime = mp.dim, mp.prime, mp.first_prime
    certified = False
    if rec.partner is not None:
        B = invariant_form(rho, data, data.linear[rec.partner])
        v.form = "none" if B is None else form_symmetry(B)
        v.antisymmetric = B is not None and antisymmetry_check(B, primes)
        certified = v.antisymmetric
    elif not rec.in_LambdaRef or rec.in_QRef:
        certified = all(X.trace().is_zero() for X in primes)
    if rec.dim == 1:
        certified = True
    if exact or mp.dim != rec.predicted_dim or not certified:
        v.exact_dim = bracket_closure(primes).dim
        v.verdict = "pass" if v.exact_dim == rec.predicted_dim else "fail"
    else:
        v.verdict = "pass"
    if v.form is not None and v.form != rec.form_type:
        v.verdict = "fail"
    return v


def verify_theorem1(
    data: GroupData,
    result: Classification | None = None,
    exact: bool = False,
    oracle: bool = False,
    oracle_cap: int = DEFAULT_ORACLE_CAP,
    prime: int | None = None,
    rep_verdicts: list[RepVerdict] | None = None,
) -> VerifyReport:
    """Per-representation closure dims against the prediction, plus group-level checks.

    `rep_verdicts` lets a caller supply verdicts computed elsewhere (for
    instance in worker processes).
    """
    result = result or classify(data)
    W = data.W
    if rep_verdicts is None:
        rep_verdicts = [verify_rep(data, result, i, exact, prime) for i in range(len(data.irr))]
    report = VerifyReport(W.name(), W.order, rep_verdicts, data.refl.num_classes, result.prediction.total_dim)
    if oracle:
        if W.order <= oracle_cap:
            A = GroupAlgebra(data)
            report.center = center_check(data, A)
            report.compact = compact_split_check(data, A)
            report.oracle_dim = report.center.dim_H
        else:
            report.notes.append(f"oracle skipped: |W| = {W.order} > {oracle_cap}")
    return report
