"""Reflection-type taxonomy of the irreducible representations of G(de,e,r).

All isomorphism tests are character equalities.  Degree-one characters are
stored as +-1 sign lists over the element enumeration of the group.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

from .groups import Group, GroupParams, ReflectionSet, construct, reflections, sign_character
from .representations import (
    Character,
    Multipartition,
    Representation,
    bilinear_type,
    exterior_power_character,
    inner,
    irreducibles,
)

REPORT_VERSION = 1


class ClassificationError(RuntimeError):
    pass


def lie_dim(kind: str, d: int) -> int:
    if kind == "linear":
        return d * d - 1
    if kind == "orthogonal":
        return d * (d - 1) // 2
    if kind == "symplectic":
        return d * (d + 1) // 2
    raise ValueError(kind)


@dataclass
class ClassificationRecord:
    label: str
    dim: int
    multipartition: Multipartition | None
    component: int | None
    is_reflection_rep: bool = False
    in_QRef: bool = False
    in_LambdaRef: bool = False
    X_group: list[int] = field(default_factory=list)  # indices into linear characters
    partner: int | None = None  # eta (index into linear characters) with rho* (x) eps = rho (x) eta
    L_type: str = "linear"
    form_type: str | None = None
    approx_class_id: int = -1
    base_dim: int | None = None  # dim of the underlying reflection rep for LambdaRef members
    predicted_dim: int = 0

    def to_json(self, linear_labels: list[str]) -> dict:
        return {
            "label": self.label,
            "dim": self.dim,
            "is_reflection_rep": self.is_reflection_rep,
            "in_QRef": self.in_QRef,
            "in_LambdaRef": self.in_LambdaRef,
            "X_group": [linear_labels[i] for i in self.X_group],
            "partner": None if self.partner is None else linear_labels[self.partner],
            "L_type": self.L_type,
            "approx_class_id": self.approx_class_id,
            "predicted_dim": self.predicted_dim,
        }


@dataclass
class TheoremOnePrediction:
    center_dim: int
    qref_classes: list[dict]
    irrprime_classes: list[dict]

    @property
    def total_dim(self) -> int:
        return (
            self.center_dim
            + sum(c["dim"] ** 2 - 1 for c in self.qref_classes)
            + sum(lie_dim(c["L_type"], c["dim"]) for c in self.irrprime_classes)
        )

    def to_json(self) -> dict:
        return {
            "center_dim": self.center_dim,
            "qref_classes": self.qref_classes,
            "irrprime_classes": self.irrprime_classes,
            "total_dim": self.total_dim,
        }


class GroupData:
    """Irreducibles, characters, reflections and degree-one characters of W."""

    def __init__(self, W: Group):
        self.W = W
        self.irr: list[Representation] = irreducibles(W)
        self.irr.sort(key=_rep_key)
        self.refl: ReflectionSet = reflections(W)
        self.eps: list[int] = sign_character(W)

    @classmethod
    def of(cls, params: GroupParams, cap: int | None = None) -> GroupData:
        return cls(construct(params) if cap is None else construct(params, cap))

    @cached_property
    def chars(self) -> list[Character]:
        return [rho.character() for rho in self.irr]

    @cached_property
    def char_index(self) -> dict[Character, int]:
        return {c: i for i, c in enumerate(self.chars)}

    @cached_property
    def class_reps(self) -> list[int]:
        """Element index of one reflection per class."""
        return [self.refl.indices[block[0]] for block in self.refl.class_partition]

    @cached_property
    def linear(self) -> list[list[int]]:
        """Degree-one characters as sign lists; trivial first, then by values on classes."""
        out = []
        for c in self.chars:
            if c.degree != 1:
                continue
            vals = []
            for v in c.values:
                q = v.to_rational() if v.is_rational() else None
                if q not in (1, -1):
                    break
                vals.append(int(q))
            else:
                out.append(vals)
        out.sort(key=lambda s: [-s[i] for i in self.class_reps])
        expected = 2 ** self.refl.num_classes
        if len(out) != expected:
            raise ClassificationError(f"{len(out)} sign characters, expected {expected}")
        return out

    @cached_property
    def linear_labels(self) -> list[str]:
        out = []
        for s in self.linear:
            if all(x == 1 for x in s):
                out.append("1")
            elif s == self.eps:
                out.append("eps")
            else:
                out.append("eta[" + ",".join("+" if s[i] == 1 else "-" for i in self.class_reps) + "]")
        return out

    def find(self, chi: Character) -> int | None:
        return self.char_index.get(chi)

    def twist_index(self, i: int, eta: list[int]) -> int:
        j = self.find(self.chars[i].twist(eta))
        if j is None:
            raise ClassificationError("twist of an irreducible is not irreducible")
        return j

    def dual_eps_index(self, i: int, eta: list[int]) -> int:
        """Index of rho* (x) eps (x) eta."""
        j = self.find(self.chars[i].dual().twist(self.eps).twist(eta))
        if j is None:
            raise ClassificationError("dual twist of an irreducible is not irreducible")
        return j


def _rep_key(rho: Representation):
    return (rho.dim, rho.label, rho.component or 0)


def linear_characters(data: GroupData) -> list[list[int]]:
    return data.linear


def is_reflection_rep(data: GroupData, i: int) -> bool:
    chi = data.chars[i]
    n = chi.degree
    if n < 2:
        return False
    for k in data.refl.indices:
        v = chi.values[k]
        if not v.is_rational() or v.to_rational() not in (n, n - 2):
            return False
    return True


def x_group(data: GroupData, i: int) -> list[int]:
    """Indices eta of sign characters with eta(s) = -1 forcing rho(s) = +-1."""
    chi = data.chars[i]
    n = chi.degree
    out = []
    for k, eta in enumerate(data.linear):
        ok = True
        for s in data.refl.indices:
            if eta[s] == -1:
                v = chi.values[s]
                if not (v.is_rational() and abs(v.to_rational()) == n):
                    ok = False
                    break
        if ok:
            out.append(k)
    return out


class _UnionFind:
    def __init__(self, n: int):
        self.p = list(range(n))

    def find(self, x: int) -> int:
        while self.p[x] != x:
            self.p[x] = self.p[self.p[x]]
            x = self.p[x]
        return x

    def union(self, a: int, b: int) -> None:
        a, b = self.find(a), self.find(b)
        if a != b:
            self.p[max(a, b)] = min(a, b)


@dataclass
class Classification:
    data: GroupData
    records: list[ClassificationRecord]
    classes: list[list[int]]  # approx classes as lists of record indices
    prediction: TheoremOnePrediction

    def to_json(self) -> dict:
        W = self.data.W
        p = W.params
        labels = self.data.linear_labels
        return {
            "version": REPORT_VERSION,
            "group": {"d": p.d, "e": p.e, "r": p.r, "name": p.name(), "order": W.order},
            "reflection_classes": self.data.refl.num_classes,
            "linear_characters": labels,
            "records": [r.to_json(labels) for r in self.records],
            "prediction": self.prediction.to_json(),
        }


def classify(data: GroupData) -> Classification:
    n_irr = len(data.irr)
    lin = data.linear
    recs = [
        ClassificationRecord(rho.label, rho.dim, rho.multipartition, rho.component)
        for rho in data.irr
    ]
    for i, rec in enumerate(recs):
        rec.is_reflection_rep = is_reflection_rep(data, i)
        rec.X_group = x_group(data, i)

    # QRef, then LambdaRef from exterior powers of reflection reps
    for i, rec in enumerate(recs):
        if rec.is_reflection_rep:
            for eta in lin:
                j = data.twist_index(i, eta)
                recs[j].in_QRef = True
                recs[j].in_LambdaRef = True
                recs[j].base_dim = recs[j].base_dim or rec.dim
    for i, rec in enumerate(recs):
        if not rec.is_reflection_rep:
            continue
        for k in range(0, rec.dim + 1):
            ch = exterior_power_character(data.chars[i], k)
            j = data.find(ch)
            if j is None:
                raise ClassificationError(f"exterior power {k} of {rec.label} is reducible")
            for eta in lin:
                t = data.twist_index(j, eta)
                recs[t].in_LambdaRef = True
                if recs[t].base_dim is None and recs[t].dim > 1:
                    recs[t].base_dim = rec.dim
    for rec in recs:
        if rec.dim == 1:
            rec.in_LambdaRef = True

    uf = _UnionFind(n_irr)
    for i, rec in enumerate(recs):
        for k in rec.X_group:
            uf.union(i, data.twist_index(i, lin[k]))
            uf.union(i, data.dual_eps_index(i, lin[k]))
    blocks: dict[int, list[int]] = {}
    for i in range(n_irr):
        blocks.setdefault(uf.find(i), []).append(i)
    classes = sorted(blocks.values(), key=lambda b: min(_rep_key(data.irr[i]) for i in b))
    for cid, block in enumerate(classes):
        for i in block:
            recs[i].approx_class_id = cid

    for i, rec in enumerate(recs):
        if rec.in_LambdaRef:
            rec.L_type = "linear"
            if rec.dim == 1:
                rec.predicted_dim = 0
            else:
                rec.predicted_dim = (rec.base_dim or rec.dim) ** 2 - 1
            continue
        partners = [k for k in rec.X_group if data.dual_eps_index(i, lin[k]) == i]
        if len(partners) > 1:
            raise ClassificationError(f"{rec.label}: several self-duality twists")
        if partners:
            rec.partner = partners[0]
            kind = bilinear_type(data.chars[i], lin[rec.partner], data.eps)
            if kind == "none":
                raise ClassificationError(f"{rec.label}: expected invariant form missing")
            rec.form_type = kind
            rec.L_type = "orthogonal" if kind == "symmetric" else "symplectic"
        rec.predicted_dim = lie_dim(rec.L_type, rec.dim)

    qref, irrp = [], []
    for block in classes:
        lead = recs[block[0]]
        if lead.in_QRef:
            qref.append({"label": lead.label, "dim": lead.dim, "members": [recs[i].label for i in block]})
        elif not lead.in_LambdaRef:
            irrp.append({"label": lead.label, "dim": lead.dim, "L_type": lead.L_type,
                         "members": [recs[i].label for i in block]})
    pred = TheoremOnePrediction(data.refl.num_classes, qref, irrp)
    return Classification(data, recs, classes, pred)


def theorem1_prediction(data: GroupData) -> TheoremOnePrediction:
    return classify(data).prediction


def lambda_ref_predicate(lam: Multipartition) -> bool:
    """Shape test for members of LambdaRef minus QRef of G(e,e,r), dim > 1."""
    r = lam.size
    parts = [p for p in lam.parts if p]
    if len(parts) == 1:
        p = parts[0]
        return any(p == (r - k,) + (1,) * k for k in range(2, r - 2))
    if len(parts) == 2:
        for a, b in (parts, parts[::-1]):
            for k in range(2, r - 1):
                if a == (r - k,) and b == (1,) * k:
                    return True
    return False


def lambda_ref_shapes(result: Classification) -> dict:
    """Compare the definitional LambdaRef minus QRef set with the shape list."""
    p = result.data.W.params
    if p.d != 1 or p.r < 3:
        raise ValueError("shape list applies to G(e,e,r), r >= 3")
    computed = {r.label for r in result.records if r.in_LambdaRef and not r.in_QRef and r.dim > 1}
    predicted = {r.label for r in result.records if r.multipartition is not None
                 and not r.in_QRef and r.dim > 1 and lambda_ref_predicate(r.multipartition)}
    return {"computed": sorted(computed), "predicted": sorted(predicted),
            "agree": computed == predicted}
