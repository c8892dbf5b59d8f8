"""Sublattices of Z^n kept in row Hermite normal form.

Row-vector convention: a lattice is the Z-span of its basis rows and a
matrix A acts on the right, v -> v A.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import (
    as_rat,
    charpoly,
    common_denominator,
    det,
    identity,
    left_nullspace,
    mat_inv,
    monic_integral_part,
    to_int,
    vec_mat,
)


class _Infinite:
    """Marker for an infinite index."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITE"

    def __str__(self):
        return "infinite"

    def __reduce__(self):
        return (_Infinite, ())


INFINITE = _Infinite()


def is_finite(x) -> bool:
    return x is not INFINITE


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


# ---------------------------------------------------------------------------
# Hermite normal form

def hnf_with_transform(M, ncols: int | None = None):
    """Row HNF with transform.

    Returns ``(H, U)`` where U is unimodular (len(M) square), ``U M`` has the
    HNF rows H on top followed by zero rows.  The trailing rows of U are a
    Z-basis of the integer left kernel of M.
    """
    rows = [[to_int(x) for x in r] for r in M]
    m = len(rows)
    n = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    r = 0
    for c in range(n):
        if r == m:
            break
        nz = [i for i in range(r, m) if rows[i][c] != 0]
        if not nz:
            continue
        # bring the smallest entry up first to keep numbers small
        best = min(nz, key=lambda i: abs(rows[i][c]))
        rows[r], rows[best] = rows[best], rows[r]
        U[r], U[best] = U[best], U[r]
        for i in range(r + 1, m):
            b = rows[i][c]
            if b == 0:
                continue
            a = rows[r][c]
            if b % a == 0:
                q = b // a
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
                U[i] = [x - q * y for x, y in zip(U[i], U[r])]
                continue
            g, s, t = xgcd(a, b)
            ag, bg = a // g, b // g
            ri, rr = rows[i], rows[r]
            ui, ur = U[i], U[r]
            rows[r] = [s * x + t * y for x, y in zip(rr, ri)]
            rows[i] = [ag * y - bg * x for x, y in zip(rr, ri)]
            U[r] = [s * x + t * y for x, y in zip(ur, ui)]
            U[i] = [ag * y - bg * x for x, y in zip(ur, ui)]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
            U[r] = [-x for x in U[r]]
        p = rows[r][c]
        for k in range(r):
            q = rows[k][c] // p
            if q:
                rows[k] = [x - q * y for x, y in zip(rows[k], rows[r])]
                U[k] = [x - q * y for x, y in zip(U[k], U[r])]
        r += 1
    return [tuple(x) for x in rows[:r]], [tuple(x) for x in U]


def hnf(M, n: int | None = None) -> "Lattice":
    """Lattice spanned by the rows of M (ambient rank n, inferred when possible)."""
    if n is None:
        if not M:
            raise ValueError("ambient rank needed for an empty generator list")
        n = len(M[0])
    H, _ = hnf_with_transform(M, n)
    return Lattice(n, tuple(H))


def integer_left_kernel(M, ncols: int | None = None) -> list[tuple]:
    """Z-basis of {u in Z^m : u M = 0}."""
    H, U = hnf_with_transform(M, ncols)
    return U[len(H):]


# ---------------------------------------------------------------------------
# Smith normal form

def snf(M):
    """Smith normal form: ``(D, U, V)`` with U M V = D, U and V unimodular.

    D is diagonal with nonnegative entries, each dividing the next.
    """
    A = [[to_int(x) for x in r] for r in M]
    m = len(A)
    n = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q row_src
        A[dst] = [x + q * y for x, y in zip(A[dst], A[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            done = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        done = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        done = False
            if not done:
                continue
            p = A[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return (
        tuple(tuple(r) for r in A),
        tuple(tuple(r) for r in U),
        tuple(tuple(r) for r in V),
    )


def invariant_factors(M) -> list[int]:
    D, _, _ = snf(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


# ---------------------------------------------------------------------------
# lattices

@dataclass(frozen=True)
class Lattice:
    """Sublattice of Z^n; ``basis`` is the canonical row HNF, so equality is syntactic."""

    n: int
    basis: tuple

    @classmethod
    def zero(cls, n: int) -> "Lattice":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "Lattice":
        return cls(n, tuple(identity(n)))

    @classmethod
    def from_rows(cls, rows, n: int | None = None) -> "Lattice":
        rows = [tuple(r) for r in rows]
        if n is None and not rows:
            raise ValueError("ambient rank needed for an empty generator list")
        return hnf(rows, n if n is not None else len(rows[0]))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def is_zero(self) -> bool:
        return not self.basis

    def is_full_rank(self) -> bool:
        return self.rank == self.n

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis]

    def residue(self, v) -> tuple:
        """Canonical representative of v + L: pivot entries reduced into [0, pivot)."""
        v = [to_int(x) for x in v]
        if len(v) != self.n:
            raise ValueError(f"vector length {len(v)} does not match ambient rank {self.n}")
        for row, p in zip(self.basis, self.pivots()):
            q = v[p] // row[p]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return tuple(v)

    def __contains__(self, v) -> bool:
        return not any(self.residue(v))

    def member(self, v) -> bool:
        return v in self

    def coords(self, v):
        """Integer coordinates of v in the HNF basis, or None if v is not in L."""
        v = [to_int(x) for x in v]
        out = []
        for row, p in zip(self.basis, self.pivots()):
            q, r = divmod(v[p], row[p])
            if r:
                return None
            out.append(q)
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        if any(v):
            return None
        return tuple(out)

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(r in self for r in other.basis)

    def __le__(self, other: "Lattice") -> bool:
        return other.contains_lattice(self)

    def __add__(self, other: "Lattice") -> "Lattice":
        return lattice_sum(self, other)

    def __and__(self, other: "Lattice") -> "Lattice":
        return intersect(self, other)

    def scaled(self, k: int) -> "Lattice":
        return hnf([tuple(k * x for x in r) for r in self.basis], self.n)

    def to_rows(self) -> list[list[int]]:
        return [list(r) for r in self.basis]

    def __repr__(self):
        return f"Lattice(n={self.n}, basis={[list(r) for r in self.basis]})"


def lattice_sum(L1: Lattice, L2: Lattice) -> Lattice:
    _check_same(L1, L2)
    return hnf(list(L1.basis) + list(L2.basis), L1.n)


def intersect(L1: Lattice, L2: Lattice) -> Lattice:
    _check_same(L1, L2)
    if L1.is_zero() or L2.is_zero():
        return Lattice.zero(L1.n)
    stacked = list(L1.basis) + [tuple(-x for x in r) for r in L2.basis]
    ker = integer_left_kernel(stacked, L1.n)
    r1 = L1.rank
    rows = [vec_mat(u[:r1], L1.basis) for u in ker]
    return hnf(rows, L1.n) if rows else Lattice.zero(L1.n)


def index(big: Lattice, small: Lattice):
    """[big : small]; INFINITE when small has lower rank."""
    _check_same(big, small)
    if not big.contains_lattice(small):
        raise ValueError("index needs the second lattice inside the first")
    if small.rank < big.rank:
        return INFINITE
    if big.rank == 0:
        return 1
    C = [big.coords(r) for r in small.basis]
    return abs(to_int(det(C)))


def saturate(L: Lattice) -> Lattice:
    """Isolator of L in Z^n: the Q-span of L intersected with Z^n."""
    if L.is_zero():
        return L
    _, _, V = snf(L.basis)
    Vinv = mat_inv(V)
    return hnf([tuple(to_int(x) for x in row) for row in Vinv[: L.rank]], L.n)


def is_saturated(L: Lattice) -> bool:
    return saturate(L) == L


def map_image(L: Lattice, A, m: int | None = None) -> Lattice:
    """Lattice spanned by the rows of (basis of L) * A; the rows must be integral."""
    if m is None:
        m = len(A[0]) if A and A[0] else 0
    rows = []
    for r in L.basis:
        img = vec_mat(r, A)
        if any(as_rat(x).denominator != 1 for x in img):
            raise ValueError(f"image of basis row {list(r)} is not integral")
        rows.append(tuple(to_int(x) for x in img))
    return hnf(rows, m) if rows else Lattice.zero(m)


def map_preimage(L: Lattice, A, n: int | None = None) -> Lattice:
    """{v in Z^n : v A in L} for a rational n x k matrix A."""
    if n is None:
        n = len(A)
    if n == 0:
        return Lattice.zero(0)
    D = common_denominator(x for r in A for x in r)
    Ai = [tuple(to_int(as_rat(x) * D) for x in r) for r in A]
    DB = [tuple(-D * x for x in r) for r in L.basis]
    ker = integer_left_kernel(Ai + DB, L.n)
    rows = [u[:n] for u in ker]
    return hnf(rows, n) if rows else Lattice.zero(n)


def rational_kernel_lattice(M) -> Lattice:
    """Saturated lattice of integer vectors v with v M = 0."""
    n = len(M)
    basis = left_nullspace(M)
    if not basis:
        return Lattice.zero(n)
    return saturate(hnf(basis, n))


def restricted_matrix(L: Lattice, A):
    """Matrix of v -> v A on the basis of an A-invariant lattice L (rows = basis)."""
    if L.is_zero():
        return ()
    out = []
    for r in L.basis:
        img = tuple(to_int(x) for x in vec_mat(r, A))
        c = L.coords(img)
        if c is None:
            raise ValueError("lattice is not invariant under the map")
        out.append(c)
    return tuple(out)


def invariant_core(H: Lattice, A) -> Lattice:
    """Largest sublattice K of H with K A contained in K.

    Any such K spans a subspace on which A has a monic integral
    characteristic polynomial, so K lies in the kernel of g(A) where g is the
    monic integral part of charpoly(A).  Starting the descending chain
    L <- L meet preimage(L) inside that kernel makes it terminate.
    """
    n = H.n
    if H.is_zero():
        return H
    g = monic_integral_part(charpoly(A))
    if g.degree == 0:
        return Lattice.zero(n)
    P = rational_kernel_lattice(g.eval_matrix(A))
    L = intersect(H, P)
    while True:
        nxt = intersect(L, map_preimage(L, A, n))
        if nxt == L:
            return L
        L = nxt


def quotient_charpoly(K: Lattice, A):
    """charpoly of the map induced by A on Q^n / span(K) (K must be A-invariant)."""
    chi = charpoly(A)
    if K.is_zero():
        return chi
    sub = charpoly(restricted_matrix(K, A))
    q, r = divmod(chi, sub)
    if not r.is_zero():
        raise ArithmeticError("restricted charpoly does not divide the full one")
    return q


def _check_same(L1: Lattice, L2: Lattice):
    if L1.n != L2.n:
        raise ValueError(f"ambient ranks differ: {L1.n} vs {L2.n}")
