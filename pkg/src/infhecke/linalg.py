"""Matrices over Q(z_n), incremental echelon forms, and small dense solvers."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from flint import fmpq, fmpq_mat, nmod_mat

from .cyclotomic import (
    BadPrime,
    CyclotomicNumber,
    PrimeResidue,
    as_cyclotomic,
    euler_phi,
    rational_mod_p,
    zeta_powers,
)


def _q(c) -> fmpq:
    if isinstance(c, fmpq):
        return c
    if isinstance(c, Fraction):
        return fmpq(c.numerator, c.denominator)
    return fmpq(c)


def _frac(c: fmpq) -> Fraction:
    return Fraction(int(c.p), int(c.q))


@lru_cache(maxsize=None)
def _reduction(n: int) -> tuple[tuple[fmpq, ...], ...]:
    phi = euler_phi(n)
    pw = zeta_powers(n)
    return tuple(tuple(fmpq(v) for v in pw[k % n]) for k in range(2 * phi - 1))


class CycloMatrix:
    """A matrix sum_k z^k M_k with rational components M_0..M_{phi-1}."""

    __slots__ = ("n", "rows", "cols", "comps")

    def __init__(self, n: int, comps: Sequence[fmpq_mat]):
        if len(comps) != euler_phi(n):
            raise ValueError("wrong number of components")
        self.n = n
        self.comps = tuple(comps)
        self.rows = comps[0].nrows()
        self.cols = comps[0].ncols()

    @classmethod
    def zero(cls, n: int, rows: int, cols: int | None = None) -> CycloMatrix:
        cols = rows if cols is None else cols
        return cls(n, [fmpq_mat(rows, cols) for _ in range(euler_phi(n))])

    @classmethod
    def identity(cls, n: int, size: int) -> CycloMatrix:
        return cls.scalar(n, size, 1)

    @classmethod
    def scalar(cls, n: int, size: int, c) -> CycloMatrix:
        c = as_cyclotomic(c, n)
        comps = []
        for a in c.coeffs:
            m = fmpq_mat(size, size)
            if a:
                qa = _q(a)
                for i in range(size):
                    m[i, i] = qa
            comps.append(m)
        return cls(n, comps)

    @classmethod
    def from_rational(cls, n: int, m: fmpq_mat) -> CycloMatrix:
        return cls(n, [m] + [fmpq_mat(m.nrows(), m.ncols()) for _ in range(euler_phi(n) - 1)])

    @classmethod
    def from_entries(cls, n: int, entries: Sequence[Sequence]) -> CycloMatrix:
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        phi = euler_phi(n)
        comps = [fmpq_mat(rows, cols) for _ in range(phi)]
        for i, row in enumerate(entries):
            for j, x in enumerate(row):
                if isinstance(x, CyclotomicNumber):
                    x = as_cyclotomic(x, n)
                    for k, c in enumerate(x.coeffs):
                        if c:
                            comps[k][i, j] = _q(c)
                elif x:
                    comps[0][i, j] = _q(x)
        return cls(n, comps)

    def entry(self, i: int, j: int) -> CyclotomicNumber:
        return CyclotomicNumber(self.n, [_frac(c[i, j]) for c in self.comps])

    def entries(self) -> list[list[CyclotomicNumber]]:
        return [[self.entry(i, j) for j in range(self.cols)] for i in range(self.rows)]

    def is_rational(self) -> bool:
        return all(_is_zero(c) for c in self.comps[1:])

    def __add__(self, o: CycloMatrix) -> CycloMatrix:
        return CycloMatrix(self.n, [a + b for a, b in zip(self.comps, o.comps)])

    def __sub__(self, o: CycloMatrix) -> CycloMatrix:
        return CycloMatrix(self.n, [a - b for a, b in zip(self.comps, o.comps)])

    def __neg__(self) -> CycloMatrix:
        return CycloMatrix(self.n, [-a for a in self.comps])

    def __matmul__(self, o: CycloMatrix) -> CycloMatrix:
        if self.n != o.n:
            raise ValueError("conductor mismatch")
        phi = len(self.comps)
        if phi == 1:
            return CycloMatrix(self.n, [self.comps[0] * o.comps[0]])
        prods: list = [None] * (2 * phi - 1)
        for a, A in enumerate(self.comps):
            if _is_zero(A):
                continue
            for b, B in enumerate(o.comps):
                if _is_zero(B):
                    continue
                P = A * B
                prods[a + b] = P if prods[a + b] is None else prods[a + b] + P
        return CycloMatrix(self.n, _reduce_products(self.n, prods, self.rows, o.cols))

    def scale(self, c) -> CycloMatrix:
        c = as_cyclotomic(c, self.n)
        phi = len(self.comps)
        prods: list = [None] * (2 * phi - 1)
        for a, ca in enumerate(c.coeffs):
            if not ca:
                continue
            qa = _q(ca)
            for b, B in enumerate(self.comps):
                P = B * qa
                prods[a + b] = P if prods[a + b] is None else prods[a + b] + P
        return CycloMatrix(self.n, _reduce_products(self.n, prods, self.rows, self.cols))

    def mul_zeta(self) -> CycloMatrix:
        phi = len(self.comps)
        if self.n <= 2:
            return self if self.n == 1 else -self
        top = self.comps[-1]
        red = _reduction(self.n)[phi]
        comps = []
        for j in range(phi):
            m = self.comps[j - 1] if j else fmpq_mat(self.rows, self.cols)
            if red[j] != 0:
                m = m + top * red[j]
            comps.append(m)
        return CycloMatrix(self.n, comps)

    def transpose(self) -> CycloMatrix:
        return CycloMatrix(self.n, [c.transpose() for c in self.comps])

    def trace(self) -> CyclotomicNumber:
        return CyclotomicNumber(self.n, [_frac(sum((c[i, i] for i in range(self.rows)), fmpq(0))) for c in self.comps])

    def __eq__(self, o) -> bool:
        if not isinstance(o, CycloMatrix):
            return NotImplemented
        return self.n == o.n and self.comps == o.comps

    __hash__ = None

    def is_zero(self) -> bool:
        return all(_is_zero(c) for c in self.comps)

    def scalar_value(self) -> CyclotomicNumber | None:
        """c if the matrix equals c * Id, else None."""
        if self.rows != self.cols:
            return None
        c = self.entry(0, 0) if self.rows else CyclotomicNumber.from_rational(self.n, 0)
        return c if self == CycloMatrix.scalar(self.n, self.rows, c) else None

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> CycloMatrix:
        comps = []
        for c in self.comps:
            m = fmpq_mat(len(rows), len(cols))
            for a, i in enumerate(rows):
                for b, j in enumerate(cols):
                    v = c[i, j]
                    if v != 0:
                        m[a, b] = v
            comps.append(m)
        return CycloMatrix(self.n, comps)

    def embed(self, m: int) -> CycloMatrix:
        if m % self.n:
            raise ValueError(f"conductor {self.n} does not divide {m}")
        if m == self.n:
            return self
        step = m // self.n
        pw = zeta_powers(m)
        phi = euler_phi(m)
        comps = [fmpq_mat(self.rows, self.cols) for _ in range(phi)]
        for k, c in enumerate(self.comps):
            if _is_zero(c):
                continue
            for j, v in enumerate(pw[(k * step) % m]):
                if v:
                    comps[j] = comps[j] + c * v
        return CycloMatrix(m, comps)

    def regular(self) -> fmpq_mat:
        """Rational matrix of the Q-linear map on Q(z)^cols (coordinates blockwise)."""
        phi = len(self.comps)
        red = _reduction(self.n)
        big = fmpq_mat(self.rows * phi, self.cols * phi)
        for k, c in enumerate(self.comps):
            if _is_zero(c):
                continue
            for l in range(phi):  # column basis vector z^l, product z^(k+l)
                img = red[k + l]
                for j in range(phi):
                    if img[j] == 0:
                        continue
                    w = img[j]
                    for r_ in range(self.rows):
                        for s_ in range(self.cols):
                            v = c[r_, s_]
                            if v != 0:
                                big[r_ * phi + j, s_ * phi + l] += v * w
        return big

    def rank(self) -> int:
        return self.regular().rank() // len(self.comps)

    def inverse(self) -> CycloMatrix:
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        phi = len(self.comps)
        inv = self.regular().inv()
        comps = [fmpq_mat(self.rows, self.cols) for _ in range(phi)]
        for i in range(self.rows):
            for j in range(self.cols):
                for k in range(phi):
                    v = inv[i * phi + k, j * phi]
                    if v != 0:
                        comps[k][i, j] = v
        out = CycloMatrix(self.n, comps)
        return out

    def power(self, k: int) -> CycloMatrix:
        if k < 0:
            return self.inverse().power(-k)
        out = CycloMatrix.identity(self.n, self.rows)
        base = self
        while k:
            if k & 1:
                out = out @ base
            base = base @ base
            k >>= 1
        return out

    def flat(self) -> list[fmpq]:
        out: list[fmpq] = []
        for c in self.comps:
            out.extend(c.entries())
        return out

    @classmethod
    def from_flat(cls, n: int, rows: int, cols: int, data: Sequence) -> CycloMatrix:
        size = rows * cols
        return cls(n, [fmpq_mat(rows, cols, list(data[k * size:(k + 1) * size])) for k in range(euler_phi(n))])

    def to_nmod(self, p: int, root: PrimeResidue) -> nmod_mat:
        powers = [pow(root.value, k, p) for k in range(len(self.comps))]
        out = [0] * (self.rows * self.cols)
        for k, c in enumerate(self.comps):
            if _is_zero(c):
                continue
            for idx, v in enumerate(c.entries()):
                if v != 0:
                    out[idx] += rational_mod_p(_frac(v), p) * powers[k]
        return nmod_mat(self.rows, self.cols, [x % p for x in out], p)

    def __repr__(self):
        return f"CycloMatrix(n={self.n}, {self.rows}x{self.cols}, {self.entries()!r})"


def _is_zero(m) -> bool:
    return not any(v != 0 for v in m.entries())


def _reduce_products(n: int, prods: list, rows: int, cols: int) -> list[fmpq_mat]:
    phi = euler_phi(n)
    red = _reduction(n)
    out = [prods[k] if k < len(prods) and prods[k] is not None else fmpq_mat(rows, cols) for k in range(phi)]
    for k in range(phi, 2 * phi - 1):
        P = prods[k]
        if P is None:
            continue
        for j, v in enumerate(red[k]):
            if v != 0:
                out[j] = out[j] + P * v
    return out


def block_diagonal(blocks: Sequence[CycloMatrix]) -> CycloMatrix:
    n = blocks[0].n
    size = sum(b.rows for b in blocks)
    comps = [fmpq_mat(size, size) for _ in range(euler_phi(n))]
    off = 0
    for b in blocks:
        for k, c in enumerate(b.comps):
            for i in range(b.rows):
                for j in range(b.cols):
                    v = c[i, j]
                    if v != 0:
                        comps[k][off + i, off + j] = v
        off += b.rows
    return CycloMatrix(n, comps)


# ------------------------------------------------------------ echelon state


class Echelon:
    """Reduced row echelon basis of a growing subspace of K^width.

    ``K`` is Q (modulus None) or F_p.  Vectors are inserted in batches; each
    batch is reduced against the current basis and the independent residue
    is echelonized and merged, so the stored rows stay in reduced form.
    """

    def __init__(self, width: int, modulus: int | None = None):
        self.width = width
        self.modulus = modulus
        self.rows = None  # matrix k x width or None
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def _mat(self, nrows: int, ncols: int, data=None):
        if self.modulus is None:
            return fmpq_mat(nrows, ncols, data) if data is not None else fmpq_mat(nrows, ncols)
        if data is None:
            return nmod_mat(nrows, ncols, self.modulus)
        return nmod_mat(nrows, ncols, [int(x) % self.modulus for x in data], self.modulus)

    def _columns(self, m, cols: Sequence[int]):
        nr, nc = m.nrows(), m.ncols()
        ent = m.entries()
        data = [ent[i * nc + j] for i in range(nr) for j in cols]
        return self._mat(nr, len(cols), data)

    def reduce(self, m):
        """Residues of the rows of m modulo the current span."""
        if self.rows is None:
            return m
        return m - self._columns(m, self.pivots) * self.rows

    def insert(self, vectors: Sequence[Sequence]) -> list[list]:
        """Insert vectors; return reduced rows spanning the new directions."""
        vectors = [v for v in vectors]
        if not vectors:
            return []
        data = [x for v in vectors for x in v]
        C = self._mat(len(vectors), self.width, data)
        R = self.reduce(C)
        Rr, rank = R.rref()
        if rank == 0:
            return []
        ent = Rr.entries()
        new_rows = [ent[i * self.width:(i + 1) * self.width] for i in range(rank)]
        new_piv = []
        for row in new_rows:
            for j, v in enumerate(row):
                if v != 0:
                    new_piv.append(j)
                    break
        N = self._mat(rank, self.width, [x for row in new_rows for x in row])
        if self.rows is None:
            self.rows = N
        else:
            B = self.rows - self._columns(self.rows, new_piv) * N
            k = B.nrows()
            self.rows = self._mat(k + rank, self.width, B.entries() + N.entries())
        self.pivots.extend(new_piv)
        return new_rows

    def contains(self, v: Sequence) -> bool:
        R = self.reduce(self._mat(1, self.width, list(v)))
        return all(x == 0 for x in R.entries())

    def basis_rows(self) -> list[list]:
        if self.rows is None:
            return []
        ent = self.rows.entries()
        return [ent[i * self.width:(i + 1) * self.width] for i in range(self.rank)]


# ------------------------------------------------------------ dense solvers


def nullspace(rows: list[list], zero, is_zero: Callable = None) -> list[list]:
    """Basis of {x : A x = 0} over any exact field given as a list of rows."""
    is_zero = is_zero or (lambda x: x == zero)
    if not rows:
        return []
    A = [list(r) for r in rows]
    nr, nc = len(A), len(A[0])
    pivots = []
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if not is_zero(A[i][c])), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(nr):
            if i != r and not is_zero(A[i][c]):
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for f in free:
        x = [zero] * nc
        x[f] = zero + 1
        for i, c in enumerate(pivots):
            x[c] = zero - A[i][f]
        basis.append(x)
    return basis


def inverse_dense(M: list[list], zero) -> list[list]:
    n = len(M)
    one = zero + 1
    A = [list(row) + [one if i == j else zero for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next((i for i in range(c, n) if not A[i][c] == zero), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        inv = 1 / A[c][c]
        A[c] = [x * inv for x in A[c]]
        for i in range(n):
            if i != c and not A[i][c] == zero:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


def det_dense(M: list[list], zero):
    n = len(M)
    A = [list(r) for r in M]
    det = zero + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if not A[i][c] == zero), None)
        if piv is None:
            return zero
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c]
        inv = 1 / A[c][c]
        for i in range(c + 1, n):
            if not A[i][c] == zero:
                f = A[i][c] * inv
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return det


def matmul_dense(A: list[list], B: list[list], zero) -> list[list]:
    return [[sum((A[i][k] * B[k][j] for k in range(len(B))), zero) for j in range(len(B[0]))] for i in range(len(A))]


def transpose_dense(A: list[list]) -> list[list]:
    return [list(r) for r in zip(*A)]


def rational_nullspace(M: fmpq_mat) -> list[list[fmpq]]:
    """Basis of the right kernel of a rational matrix."""
    nc = M.ncols()
    if M.nrows() == 0:
        return [[fmpq(1) if i == j else fmpq(0) for i in range(nc)] for j in range(nc)]
    R, rank = M.rref()
    pivots = []
    for i in range(rank):
        for j in range(nc):
            if R[i, j] != 0:
                pivots.append(j)
                break
    pset = set(pivots)
    out = []
    for f in range(nc):
        if f in pset:
            continue
        x = [fmpq(0)] * nc
        x[f] = fmpq(1)
        for i, c in enumerate(pivots):
            x[c] = -R[i, f]
        out.append(x)
    return out


def stack(mats: Sequence[CycloMatrix]) -> CycloMatrix:
    """Vertical concatenation."""
    n = mats[0].n
    cols = mats[0].cols
    rows = sum(m.rows for m in mats)
    comps = []
    for k in range(euler_phi(n)):
        data = []
        for m in mats:
            data.extend(m.comps[k].entries())
        comps.append(fmpq_mat(rows, cols, data))
    return CycloMatrix(n, comps)


def cyclo_nullspace(M: CycloMatrix) -> list[list[CyclotomicNumber]]:
    """A Q(z)-basis of the right kernel of M."""
    phi = len(M.comps)
    qbasis = rational_nullspace(M.regular())
    out: list[list[CyclotomicNumber]] = []
    seen = Echelon(M.cols * phi)
    for v in qbasis:
        vec = [CyclotomicNumber(M.n, [_frac(v[u * phi + j]) for j in range(phi)]) for u in range(M.cols)]
        mults = []
        w = vec
        z = CyclotomicNumber.zeta(M.n)
        for _ in range(phi):
            mults.append([_q(c) for x in w for c in x.coeffs])
            w = [x * z for x in w]
        if seen.insert(mults):
            out.append(vec)
    return out


def intertwiners(pairs: Sequence[tuple[CycloMatrix, CycloMatrix]], n: int, size: int) -> list[CycloMatrix]:
    """Q(z)-basis of {X : X P = Q X for every (P, Q) in pairs}."""
    phi = euler_phi(n)
    blocks = []
    for P, Q in pairs:
        comps = []
        for c in range(phi):
            Pc, Qc = P.comps[c], Q.comps[c]
            E = fmpq_mat(size * size, size * size)
            for k in range(size):
                for l in range(size):
                    row = k * size + l
                    for i in range(size):
                        v = Pc[i, l]
                        if v != 0:
                            E[row, k * size + i] += v
                        w = Qc[k, i]
                        if w != 0:
                            E[row, i * size + l] -= w
            comps.append(E)
        blocks.append(CycloMatrix(n, comps))
    if not blocks:
        return []
    sols = cyclo_nullspace(stack(blocks))
    return [CycloMatrix.from_entries(n, [v[k * size:(k + 1) * size] for k in range(size)]) for v in sols]


__all__ = [
    "BadPrime",
    "CycloMatrix",
    "Echelon",
    "block_diagonal",
    "cyclo_nullspace",
    "intertwiners",
    "rational_nullspace",
    "stack",
    "det_dense",
    "inverse_dense",
    "matmul_dense",
    "nullspace",
    "transpose_dense",
]
