"""Invariant sesquilinear forms for Hecke algebra models over Q(q).

A model assigns to each braid generator b a matrix R(b) over Q(q) with
(R(b) - q)(R(b) + 1/q) = 0.  The bar involution q -> 1/q is written bar().
The form J solves  bar(tR(b)) J = J R(b)^-1,  is normalized so that
J(1) = Id and tJ = bar(J), and is then evaluated on |q| = 1 where it is
Hermitian.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from flint import fmpq_poly

from .linalg import det_dense, inverse_dense, matmul_dense, nullspace, transpose_dense
from .ratfunc import RationalFunction, bar_involution

Matrix = list[list[RationalFunction]]

ZERO_BAND = 1e-9
BOUNDARY_TOL = 1e-12


class ModelError(ValueError):
    pass


class RelationError(ModelError):
    pass


class FormError(ModelError):
    pass


def _rf(x) -> RationalFunction:
    return x if isinstance(x, RationalFunction) else RationalFunction.const(x)


def identity(n: int) -> Matrix:
    return [[_rf(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat_eq(A: Matrix, B: Matrix) -> bool:
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def mat_sub(A: Matrix, B: Matrix) -> Matrix:
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_add_scalar(A: Matrix, c: RationalFunction) -> Matrix:
    return [[a + c if i == j else a for j, a in enumerate(row)] for i, row in enumerate(A)]


def mat_bar(A: Matrix) -> Matrix:
    return [[bar_involution(a) for a in row] for row in A]


def _mul(A: Matrix, B: Matrix) -> Matrix:
    return matmul_dense(A, B, _rf(0))


@dataclass
class HeckeModel:
    dim: int
    names: list[str]
    gens: dict[str, Matrix]
    relations: list[tuple[str, str, str]] = field(default_factory=list)  # (kind, a, b)
    label: str = ""

    def check_relations(self) -> None:
        """Raise RelationError naming the first violated relation."""
        q = RationalFunction.q()
        qi = 1 / q
        for nm in self.names:
            S = self.gens[nm]
            if len(S) != self.dim or any(len(r) != self.dim for r in S):
                raise ModelError(f"generator {nm} is not {self.dim}x{self.dim}")
            P = _mul(mat_add_scalar(S, -q), mat_add_scalar(S, qi))
            if any(not x.is_zero() for row in P for x in row):
                raise RelationError(f"(σ−q)(σ+q⁻¹) ≠ 0 for generator {nm}")
        for kind, a, b in self.relations:
            A, B = self.gens[a], self.gens[b]
            if kind == "commute":
                if not mat_eq(_mul(A, B), _mul(B, A)):
                    raise RelationError(f"{a}{b} ≠ {b}{a}")
            elif kind.startswith("braid"):
                length = int(kind[5:] or 3)
                lhs, rhs = identity(self.dim), identity(self.dim)
                for k in range(length):
                    lhs = _mul(lhs, A if k % 2 == 0 else B)
                    rhs = _mul(rhs, B if k % 2 == 0 else A)
                if not mat_eq(lhs, rhs):
                    w1 = "".join(a if k % 2 == 0 else b for k in range(length))
                    w2 = "".join(b if k % 2 == 0 else a for k in range(length))
                    raise RelationError(f"{w1} ≠ {w2}")
            else:
                raise ModelError(f"unknown relation type {kind!r}")

    def at_one(self, name: str) -> list[list[Fraction]]:
        return [[x.at_one() for x in row] for row in self.gens[name]]


def _frac_rf(num: Sequence, den: Sequence = (1,)) -> RationalFunction:
    return RationalFunction(fmpq_poly(list(num)), fmpq_poly(list(den)))


def builtin_d4() -> HeckeModel:
    """Reflection representation of the D4 Hecke algebra (Hoefsmit form).

    Generators b1, b2, b4 commute pairwise; each braids with b3.
    """
    q = RationalFunction.q()
    qi = 1 / q
    h = (q - qi) / 2
    k = (q + qi) / 2
    z = _rf(0)
    b1 = [[q, z, z, z], [z, q, z, z], [z, z, h, -k], [z, z, -k, h]]
    b2 = [[q, z, z, z], [z, q, z, z], [z, z, h, k], [z, z, k, h]]
    b3 = [
        [q, z, z, z],
        [z, _frac_rf([-1, 0, 1], [0, 1, 0, 1]), _frac_rf([0, 2], [1, 0, 1]), z],
        [z, _frac_rf([1, 0, 0, 0, 1], [0, 1, 0, 1]), _frac_rf([0, -1, 0, 1], [1, 0, 1]), z],
        [z, z, z, q],
    ]
    b4 = [
        [_frac_rf([-1, 0, 1], [0, 1, 0, 0, 0, 1]), _frac_rf([0, 1, 0, 1], [1, 0, 0, 0, 1]), z, z],
        [_frac_rf([1, 0, 0, 0, 0, 0, 1], [0, 1, 0, 0, 0, 1]), _frac_rf([0, 0, 0, -1, 0, 1], [1, 0, 0, 0, 1]), z, z],
        [z, z, q, z],
        [z, z, z, q],
    ]
    rels = [("commute", "b1", "b2"), ("commute", "b1", "b4"), ("commute", "b2", "b4"),
            ("braid", "b1", "b3"), ("braid", "b2", "b3"), ("braid", "b4", "b3")]
    return HeckeModel(4, ["b1", "b2", "b3", "b4"], {"b1": b1, "b2": b2, "b3": b3, "b4": b4}, rels, "D4 reflection")


# ------------------------------------------------------------ solving


def _solve_linear(blocks: list[tuple[Matrix, Matrix]], n: int) -> list[Matrix]:
    """Basis of {X : L X = X R} over Q(q) for every (L, R)."""
    zero = _rf(0)
    rows = []
    for L, R in blocks:
        for k in range(n):
            for l in range(n):
                row = [zero] * (n * n)
                for i in range(n):
                    if not L[k][i].is_zero():
                        row[i * n + l] = row[i * n + l] + L[k][i]
                    if not R[i][l].is_zero():
                        row[k * n + i] = row[k * n + i] - R[i][l]
                if any(not x.is_zero() for x in row):
                    rows.append(row)
    sols = nullspace(rows, zero, lambda x: x.is_zero())
    return [[v[k * n:(k + 1) * n] for k in range(n)] for v in sols]


@dataclass
class InvariantForm:
    J: Matrix
    J0: Matrix
    nu: RationalFunction
    model: HeckeModel

    def evaluate(self, x: float) -> np.ndarray:
        z = cmath.exp(1j * x)
        return np.array([[a.evaluate(z) for a in row] for row in self.J], dtype=complex)

    def is_diagonal(self) -> bool:
        return all(self.J[i][j].is_zero() for i in range(len(self.J)) for j in range(len(self.J)) if i != j)

    def to_json(self) -> dict:
        return {"J": [[a.to_json() for a in row] for row in self.J],
                "J_text": [[str(a).replace("RationalFunction", "") for a in row] for row in self.J]}


def check_form(J: Matrix, model: HeckeModel) -> dict[str, bool]:
    n = model.dim
    hermitian = mat_eq(transpose_dense(J), mat_bar(J))
    try:
        unit = all(J[i][j].at_one() == (1 if i == j else 0) for i in range(n) for j in range(n))
    except ZeroDivisionError:
        unit = False
    invariant = True
    for nm in model.names:
        R = model.gens[nm]
        lhs = _mul(mat_bar(transpose_dense(R)), J)
        rhs = _mul(J, inverse_dense(R, _rf(0)))
        if not mat_eq(lhs, rhs):
            invariant = False
            break
    return {"hermitian": hermitian, "unit_at_one": unit, "invariant": invariant}


def solve_form(model: HeckeModel) -> InvariantForm:
    n = model.dim
    gens = [model.gens[nm] for nm in model.names]
    comm = _solve_linear([(R, R) for R in gens], n)
    if len(comm) != 1:
        raise FormError(f"commutant has dimension {len(comm)}; model is not absolutely irreducible")
    blocks = [(mat_bar(transpose_dense(R)), inverse_dense(R, _rf(0))) for R in gens]
    sols = _solve_linear(blocks, n)
    if len(sols) != 1:
        raise FormError(f"form equation has a {len(sols)}-dimensional solution space")
    J0 = sols[0]
    flat = [x for row in J0 for x in row]
    last = next(x for x in reversed(flat) if not x.is_zero())
    J0 = [[x / last for x in row] for row in J0]
    nonzero = [x for row in J0 for x in row if not x.is_zero()]
    v = min(x.valuation_at_one() for x in nonzero)
    if v:
        shift = RationalFunction(fmpq_poly([-1, 1])) ** (-v)
        J0 = [[x * shift for x in row] for row in J0]
    try:
        at1 = [[x.at_one() for x in row] for row in J0]
    except ZeroDivisionError:  # pragma: no cover - excluded by the valuation shift
        raise FormError("pole at q = 1 after clearing (q-1) powers")
    c = at1[0][0]
    if c == 0 or any(at1[i][j] != (c if i == j else 0) for i in range(n) for j in range(n)):
        raise FormError(f"J0(1) is not a nonzero scalar matrix: {at1}")
    J0 = [[x / c for x in row] for row in J0]
    i, j = next((i, j) for i in range(n) for j in range(n) if not J0[i][j].is_zero())
    nu = J0[j][i] / bar_involution(J0[i][j])
    J = [[2 * x / (1 + nu) for x in row] for row in J0]
    checks = check_form(J, model)
    if not all(checks.values()):
        raise FormError(f"normalized form fails checks: {checks}")
    return InvariantForm(J, J0, nu, model)


# ------------------------------------------------------------ signatures


def _unit_circle_angles(p: fmpq_poly, lo: float, hi: float) -> list[float]:
    out = []
    if p.degree() <= 0:
        return out
    _, factors = p.factor()
    for f, _mult in factors:
        for z, _m in f.complex_roots():
            w = complex(z)
            if abs(abs(w) - 1) < 1e-9:
                x = cmath.phase(w)
                if lo < x <= hi + 1e-15:
                    out.append(x)
    return out


def exact_boundaries(form: InvariantForm, hi: float = math.pi / 2) -> list[float]:
    """Angles in (0, hi] where det J vanishes or an entry of J has a pole."""
    det = det_dense(form.J, _rf(0))
    cands = _unit_circle_angles(det.num, 0.0, hi)
    for row in form.J:
        for a in row:
            cands.extend(_unit_circle_angles(a.den, 0.0, hi))
    out: list[float] = []
    for x in sorted(cands):
        if not out or x - out[-1] > 1e-10:
            out.append(x)
    return out


def signature_at(form: InvariantForm, x: float) -> tuple[int, int] | None:
    """(positive, negative) eigenvalue counts, or None inside the zero band."""
    M = form.evaluate(x)
    if np.max(np.abs(M - M.conj().T)) > 1e-9 * max(1.0, np.max(np.abs(M))):
        raise FormError(f"form is not Hermitian at x = {x}")
    ev = np.linalg.eigvalsh((M + M.conj().T) / 2)
    if np.min(np.abs(ev)) < ZERO_BAND:
        return None
    return int(np.sum(ev > 0)), int(np.sum(ev < 0))


def _bisect(form: InvariantForm, a: float, b: float, sa) -> float:
    while b - a > BOUNDARY_TOL:
        m = (a + b) / 2
        sm = signature_at(form, m)
        if sm == sa:
            a = m
        else:
            b = m
    return (a + b) / 2


@dataclass
class ScanResult:
    intervals: list[dict]
    boundaries: list[float]
    indeterminate: list[float]

    def to_json(self) -> list[dict]:
        return self.intervals


def signature_scan(form: InvariantForm, samples: int = 2000, hi: float = math.pi / 2) -> ScanResult:
    bounds = exact_boundaries(form, hi)
    xs = [hi * (k + 1) / samples for k in range(samples)]
    sigs = []
    indet = []
    for x in xs:
        s = signature_at(form, x)
        if s is None and not any(abs(x - b) < 1e-6 for b in bounds):
            indet.append(x)
        sigs.append(s)
    extra = []
    for k in range(1, len(xs)):
        a, b = xs[k - 1], xs[k]
        sa, sb = sigs[k - 1], sigs[k]
        if sa is None or sb is None or sa == sb:
            continue
        if any(a <= t <= b for t in bounds):
            continue
        extra.append(_bisect(form, a, b, sa))
    cuts = sorted(bounds + extra)
    edges = [0.0] + [c for c in cuts if c < hi] + [hi]
    intervals = []
    for lo, up in zip(edges, edges[1:]):
        if up - lo < 1e-12:
            continue
        mids = [s for x, s in zip(xs, sigs) if lo < x < up and s is not None]
        sig = signature_at(form, (lo + up) / 2)
        if sig is None and mids:
            sig = mids[len(mids) // 2]
        intervals.append({"from": lo, "to": up, "signature": None if sig is None else list(sig)})
    return ScanResult(intervals, cuts, indet)


# ------------------------------------------------------------ files


def export_model(model: HeckeModel) -> dict:
    doc = {
        "field": {"function_field": True},
        "dim": model.dim,
        "generators": [{"name": nm, "matrix": [[a.to_json() for a in row] for row in model.gens[nm]]}
                       for nm in model.names],
        "label": model.label,
    }
    if model.relations:
        doc["relations"] = [{"type": k, "generators": [a, b]} for k, a, b in model.relations]
    return doc


def model_from_json(doc: dict) -> HeckeModel:
    if not doc.get("field", {}).get("function_field"):
        raise ModelError("model file must declare a function field")
    n = int(doc["dim"])
    names, gens = [], {}
    for g in doc["generators"]:
        M = [[RationalFunction.from_json(a) for a in row] for row in g["matrix"]]
        if len(M) != n or any(len(r) != n for r in M):
            raise ModelError(f"generator {g['name']} is not {n}x{n}")
        names.append(g["name"])
        gens[g["name"]] = M
    rels = []
    for r in doc.get("relations", []):
        a, b = r["generators"]
        if a not in gens or b not in gens:
            raise ModelError(f"relation mentions unknown generator {a!r} or {b!r}")
        rels.append((r["type"], a, b))
    model = HeckeModel(n, names, gens, rels, doc.get("label", ""))
    model.check_relations()
    return model


def load_model(path: str) -> HeckeModel:
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"cannot parse {path}: {exc}") from exc
    return model_from_json(doc)


def save_model(model: HeckeModel, path: str) -> None:
    with open(path, "w") as fh:
        json.dump(export_model(model), fh, indent=1)

