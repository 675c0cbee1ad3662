"""Exact dense linear algebra over the rationals and over prime fields.

Scalars are `fractions.Fraction` over the rationals and canonical integer
residues in ``[0, p)`` over a prime field.  All routines are deterministic:
identical inputs yield identical outputs, including every basis choice.
Row reduction over the rationals clears denominators and eliminates
fraction-free (with gcd stripping) to keep intermediate integers small.
"""

from __future__ import annotations

import itertools
from fractions import Fraction


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


class Field:
    """The rationals (``p is None``) or the field of integers mod a prime."""

    __slots__ = ("p",)

    def __init__(self, p=None):
        if p is not None and not _is_prime(p):
            raise ValueError("modulus %r is not prime" % (p,))
        object.__setattr__(self, "p", p)

    def __setattr__(self, *a):
        raise AttributeError("Field is immutable")

    @property
    def is_rational(self):
        return self.p is None

    def __eq__(self, other):
        return isinstance(other, Field) and self.p == other.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "QQ" if self.p is None else "GF(%d)" % self.p

    # scalar arithmetic ----------------------------------------------------

    @property
    def zero(self):
        return Fraction(0) if self.p is None else 0

    @property
    def one(self):
        return Fraction(1) if self.p is None else 1

    def of(self, n):
        """Canonical image of an integer (or Fraction, over the rationals)."""
        if self.p is None:
            return Fraction(n)
        return int(n) % self.p

    def add(self, a, b):
        return a + b if self.p is None else (a + b) % self.p

    def sub(self, a, b):
        return a - b if self.p is None else (a - b) % self.p

    def mul(self, a, b):
        return a * b if self.p is None else (a * b) % self.p

    def neg(self, a):
        return -a if self.p is None else (-a) % self.p

    def inv(self, a):
        if self.p is None:
            if a == 0:
                raise ZeroDivisionError("inverse of 0")
            return 1 / Fraction(a)
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of 0 mod %d" % self.p)
        return pow(a, -1, self.p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def parse(self, text):
        """Parse a scalar literal: ``p/q`` over the rationals, an integer mod p."""
        text = text.strip()
        if self.p is None:
            return Fraction(text)
        return int(text) % self.p

    def fmt(self, a):
        return str(a)

    def rand(self, rng, bound=9):
        """Seeded random scalar; small integers over the rationals."""
        if self.p is None:
            return Fraction(rng.randint(-bound, bound))
        return rng.randrange(self.p)

    def rand_nonzero(self, rng, bound=9):
        while True:
            a = self.rand(rng, bound)
            if a != 0:
                return a


QQ = Field()

_gf_cache = {}


def GF(p):
    if p not in _gf_cache:
        _gf_cache[p] = Field(p)
    return _gf_cache[p]


# ---------------------------------------------------------------------------
# matrices


class Mat:
    """Immutable dense matrix over a fixed field, acting on column vectors."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field, rows, ncols=None):
        rows = tuple(tuple(r) for r in rows)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise ValueError("ragged rows")
            if ncols is not None and ncols != width:
                raise ValueError("ncols mismatch")
            ncols = width
        elif ncols is None:
            ncols = 0
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "nrows", len(rows))
        object.__setattr__(self, "ncols", ncols)
        object.__setattr__(self, "rows", rows)

    def __setattr__(self, *a):
        raise AttributeError("Mat is immutable")

    # constructors ---------------------------------------------------------

    @staticmethod
    def zero(field, nrows, ncols):
        z = field.zero
        return Mat(field, [[z] * ncols for _ in range(nrows)], ncols)

    @staticmethod
    def identity(field, n):
        z, o = field.zero, field.one
        return Mat(field, [[o if i == j else z for j in range(n)] for i in range(n)], n)

    @staticmethod
    def from_cols(field, cols, nrows=None):
        cols = [tuple(c) for c in cols]
        if cols:
            nrows = len(cols[0])
        elif nrows is None:
            nrows = 0
        return Mat(field, [[c[i] for c in cols] for i in range(nrows)], len(cols))

    @staticmethod
    def row_vector(field, v):
        return Mat(field, [tuple(v)], len(tuple(v)))

    @staticmethod
    def col_vector(field, v):
        v = tuple(v)
        return Mat(field, [[x] for x in v], 1)

    # basic access ---------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return self.rows[i]

    def col(self, j):
        return tuple(r[j] for r in self.rows)

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.field == other.field
            and self.nrows == other.nrows
            and self.ncols == other.ncols
            and self.rows == other.rows
        )

    def __hash__(self):
        return hash((self.field, self.nrows, self.ncols, self.rows))

    def __repr__(self):
        return "Mat(%r, %d x %d)" % (self.field, self.nrows, self.ncols)

    def pretty(self):
        return "\n".join("[" + "  ".join(self.field.fmt(x) for x in r) + "]" for r in self.rows)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        self._same_shape(other)
        add = self.field.add
        return Mat(
            self.field,
            [tuple(add(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __sub__(self, other):
        self._same_shape(other)
        sub = self.field.sub
        return Mat(
            self.field,
            [tuple(sub(a, b) for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows)],
            self.ncols,
        )

    def __neg__(self):
        neg = self.field.neg
        return Mat(self.field, [tuple(neg(a) for a in r) for r in self.rows], self.ncols)

    def scale(self, c):
        mul = self.field.mul
        return Mat(self.field, [tuple(mul(c, a) for a in r) for r in self.rows], self.ncols)

    def __mul__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        if self.field != other.field:
            raise ValueError("field mismatch")
        if self.ncols != other.nrows:
            raise ValueError(
                "dimension mismatch: %dx%d times %dx%d"
                % (self.nrows, self.ncols, other.nrows, other.ncols)
            )
        p = self.field.p
        ocols = list(zip(*other.rows)) if other.rows else [()] * other.ncols
        out = []
        if p is None:
            zero = Fraction(0)
            for r in self.rows:
                out.append(
                    tuple(
                        sum((a * b for a, b in zip(r, c) if a and b), zero)
                        for c in ocols
                    )
                )
        else:
            for r in self.rows:
                out.append(tuple(sum(a * b for a, b in zip(r, c)) % p for c in ocols))
        return Mat(self.field, out, other.ncols)

    def apply(self, v):
        """Matrix times a column vector given (and returned) as a tuple."""
        v = tuple(v)
        if len(v) != self.ncols:
            raise ValueError("vector length mismatch")
        p = self.field.p
        if p is None:
            zero = Fraction(0)
            return tuple(sum((a * b for a, b in zip(r, v) if a and b), zero) for r in self.rows)
        return tuple(sum(a * b for a, b in zip(r, v)) % p for r in self.rows)

    def transpose(self):
        if not self.rows:
            return Mat(self.field, [()] * self.ncols, 0)
        return Mat(self.field, list(zip(*self.rows)), self.nrows)

    def is_zero(self):
        z = self.field.zero
        return all(a == z for r in self.rows for a in r)

    def is_identity(self):
        if self.nrows != self.ncols:
            return False
        z, o = self.field.zero, self.field.one
        return all(
            a == (o if i == j else z) for i, r in enumerate(self.rows) for j, a in enumerate(r)
        )

    def _same_shape(self, other):
        if self.field != other.field or self.nrows != other.nrows or self.ncols != other.ncols:
            raise ValueError("shape or field mismatch")

    # block operations -----------------------------------------------------

    @staticmethod
    def vstack(mats):
        mats = list(mats)
        if not mats:
            raise ValueError("vstack of nothing")
        ncols = mats[0].ncols
        f = mats[0].field
        rows = []
        for m in mats:
            if m.ncols != ncols or m.field != f:
                raise ValueError("vstack mismatch")
            rows.extend(m.rows)
        return Mat(f, rows, ncols)

    @staticmethod
    def hstack(mats):
        mats = list(mats)
        if not mats:
            raise ValueError("hstack of nothing")
        nrows = mats[0].nrows
        f = mats[0].field
        for m in mats:
            if m.nrows != nrows or m.field != f:
                raise ValueError("hstack mismatch")
        rows = [sum((m.rows[i] for m in mats), ()) for i in range(nrows)]
        return Mat(f, rows, sum(m.ncols for m in mats))

    @staticmethod
    def block_diag(field, mats):
        mats = list(mats)
        n = sum(m.nrows for m in mats)
        c = sum(m.ncols for m in mats)
        out = [[field.zero] * c for _ in range(n)]
        i0 = j0 = 0
        for m in mats:
            for i, r in enumerate(m.rows):
                for j, a in enumerate(r):
                    out[i0 + i][j0 + j] = a
            i0 += m.nrows
            j0 += m.ncols
        return Mat(field, out, c)

    @staticmethod
    def kron(A, B):
        """Kronecker product; index ``(i, j)`` of the product is ``i * B.n + j``."""
        if A.field != B.field:
            raise ValueError("field mismatch")
        f = A.field
        rows = []
        for ra in A.rows:
            for rb in B.rows:
                row = []
                for a in ra:
                    if a == f.zero:
                        row.extend([f.zero] * B.ncols)
                    else:
                        row.extend(f.mul(a, b) for b in rb)
                rows.append(row)
        return Mat(f, rows, A.ncols * B.ncols)

    def submatrix(self, row_idx, col_idx):
        return Mat(
            self.field,
            [tuple(self.rows[i][j] for j in col_idx) for i in row_idx],
            len(tuple(col_idx)),
        )

    # reduction ------------------------------------------------------------

    def rref(self):
        """Reduced row echelon form; returns ``(R, pivot_columns)``."""
        rows, pivots = _rref_rows(self.field, [list(r) for r in self.rows], self.ncols)
        return Mat(self.field, rows, self.ncols), tuple(pivots)

    def rank(self):
        return len(self.rref()[1])

    def right_kernel(self):
        """Canonical basis of ``{x : A x = 0}``, one row per basis vector.

        Derived from the reduced echelon form, so it is deterministic and
        itself echelonized along the free columns.
        """
        R, pivots = self.rref()
        f = self.field
        piv_set = set(pivots)
        free = [j for j in range(self.ncols) if j not in piv_set]
        rows = []
        for fc in free:
            v = [f.zero] * self.ncols
            v[fc] = f.one
            for i, pc in enumerate(pivots):
                v[pc] = f.neg(R.rows[i][fc])
            rows.append(v)
        return Mat(f, rows, self.ncols)

    def inverse(self):
        """Exact inverse, or ``None`` if the matrix is singular."""
        if self.nrows != self.ncols:
            return None
        aug = Mat.hstack([self, Mat.identity(self.field, self.nrows)])
        R, pivots = aug.rref()
        if list(pivots[: self.nrows]) != list(range(self.nrows)) or len(pivots) != self.nrows:
            return None
        return Mat(self.field, [r[self.nrows:] for r in R.rows], self.nrows)

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows


def _rref_rows(field, rows, ncols):
    """In-place RREF of a list of row lists; returns (rows, pivot columns)."""
    if field.p is None:
        return _rref_qq(rows, ncols)
    return _rref_fp(field.p, rows, ncols)


def _rref_fp(p, rows, ncols):
    nrows = len(rows)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if rows[i][c] % p:
                pr = i
                break
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = pow(rows[r][c], -1, p)
        rows[r] = [(x * inv) % p for x in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                m = rows[i][c]
                rows[i] = [(a - m * b) % p for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in rows], pivots


def _int_rows(rows):
    """Clear denominators and strip content, rowwise."""
    from math import gcd

    out = []
    for row in rows:
        den = 1
        for x in row:
            if x:
                den = den * x.denominator // gcd(den, x.denominator)
        ints = [int(x * den) for x in row]
        g = 0
        for x in ints:
            g = gcd(g, x)
        if g > 1:
            ints = [x // g for x in ints]
        out.append(ints)
    return out


def _rref_qq(rows, ncols):
    from math import gcd

    work = _int_rows([[Fraction(x) for x in row] for row in rows])
    nrows = len(work)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if work[i][c]:
                pr = i
                break
        if pr is None:
            continue
        work[r], work[pr] = work[pr], work[r]
        a = work[r][c]
        for i in range(nrows):
            if i != r and work[i][c]:
                b = work[i][c]
                new = [a * x - b * y for x, y in zip(work[i], work[r])]
                g = 0
                for x in new:
                    g = gcd(g, x)
                if g > 1:
                    new = [x // g for x in new]
                work[i] = new
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    out = []
    for i, row in enumerate(work):
        if i < len(pivots):
            a = Fraction(row[pivots[i]])
            out.append(tuple(Fraction(x) / a for x in row))
        else:
            out.append(tuple(Fraction(x) for x in row))
    return out, pivots


# ---------------------------------------------------------------------------
# solving


def solve(A, b):
    """Solve ``A x = b`` exactly.

    ``b`` is a column vector given as a tuple or a one-column ``Mat``.
    Returns ``(x, K)`` where ``x`` is a particular solution tuple (or ``None``
    if the system is inconsistent) and ``K`` is the canonical kernel basis,
    one row per basis vector.
    """
    if isinstance(b, Mat):
        if b.ncols != 1:
            raise ValueError("b must be a column")
        b = b.col(0)
    else:
        b = tuple(b)
    if len(b) != A.nrows:
        raise ValueError("dimension mismatch: %d rows vs b of length %d" % (A.nrows, len(b)))
    f = A.field
    aug = Mat.hstack([A, Mat.col_vector(f, b)])
    R, pivots = aug.rref()
    K = A.right_kernel()
    if pivots and pivots[-1] == A.ncols:
        return None, K
    x = [f.zero] * A.ncols
    for i, pc in enumerate(pivots):
        x[pc] = R.rows[i][A.ncols]
    return tuple(x), K


def rank(A):
    return A.rank()


def invertible_in_span(mats, seed, tries=64, exhaust_ceiling=1 << 16, bound=9):
    """Search for an invertible linear combination of square matrices.

    Over a prime field: seeded random sampling first, then a deterministic
    exhaustive sweep when ``p ** len(mats)`` is at most ``exhaust_ceiling``.
    Over the rationals: seeded random integer coefficients with a retry
    bound.  Returns ``(mat_or_None, conclusive)`` where ``conclusive`` is
    False only for an exhausted rational search.
    """
    import random as _random

    mats = list(mats)
    if not mats:
        return None, True
    f = mats[0].field
    n = mats[0].nrows
    for m in mats:
        if m.field != f or m.nrows != n or m.ncols != n:
            raise ValueError("matrices must be square of equal size over one field")
    if n == 0:
        return Mat.zero(f, 0, 0), True

    def combine(coeffs):
        acc = Mat.zero(f, n, n)
        for c, m in zip(coeffs, mats):
            if c != f.zero:
                acc = acc + m.scale(c)
        return acc

    rng = _random.Random(seed)
    for _ in range(tries):
        coeffs = [f.rand(rng, bound) for _ in mats]
        cand = combine(coeffs)
        if cand.is_invertible():
            return cand, True
    if f.p is not None:
        if f.p ** len(mats) <= exhaust_ceiling:
            for coeffs in itertools.product(range(f.p), repeat=len(mats)):
                if all(c == 0 for c in coeffs):
                    continue
                cand = combine(coeffs)
                if cand.is_invertible():
                    return cand, True
            return None, True
        return None, False
    return None, False


# ---------------------------------------------------------------------------
# subspaces and quotients


class Subspace:
    """A subspace of ``field^ambient`` held as a canonical RREF row basis."""

    __slots__ = ("field", "ambient", "basis", "pivots")

    def __init__(self, field, ambient, rows):
        M = Mat(field, rows, ambient)
        R, pivots = M.rref()
        basis = R.rows[: len(pivots)]
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "pivots", pivots)

    def __setattr__(self, *a):
        raise AttributeError("Subspace is immutable")

    @property
    def dim(self):
        return len(self.basis)

    def basis_mat(self):
        return Mat(self.field, self.basis, self.ambient)

    def reduce(self, v):
        """Subtract the projection onto the subspace along pivot coordinates."""
        f = self.field
        v = list(v)
        for row, pc in zip(self.basis, self.pivots):
            c = v[pc]
            if c != f.zero:
                v = [f.sub(a, f.mul(c, b)) for a, b in zip(v, row)]
        return tuple(v)

    def contains(self, v):
        z = self.field.zero
        return all(a == z for a in self.reduce(v))

    def coords(self, v):
        """Coordinates of ``v`` in the RREF basis; raises if not a member."""
        if not self.contains(v):
            raise ValueError("vector not in subspace")
        v = tuple(v)
        return tuple(v[pc] for pc in self.pivots)

    def add(self, other):
        return Subspace(self.field, self.ambient, list(self.basis) + list(other.basis))

    def intersect(self, other):
        if self.dim == 0 or other.dim == 0:
            return Subspace(self.field, self.ambient, [])
        U = self.basis_mat()
        V = other.basis_mat()
        stacked = Mat.vstack([U, V]).transpose()
        K = stacked.right_kernel()
        rows = []
        for kr in K.rows:
            alpha = kr[: U.nrows]
            vec = Mat.row_vector(self.field, alpha) * U
            rows.append(vec.rows[0])
        return Subspace(self.field, self.ambient, rows)

    def eq(self, other):
        return self.ambient == other.ambient and self.basis == other.basis

    def leq(self, other):
        return all(other.contains(r) for r in self.basis)


def span_rows(field, ambient, rows):
    return Subspace(field, ambient, rows)


class Quotient:
    """Quotient of ``field^ambient`` by a subspace, with projection/section.

    Coordinates on the quotient are the non-pivot (free) coordinates of the
    subspace's RREF basis, which makes the construction canonical.
    """

    __slots__ = ("field", "ambient", "sub", "free", "proj", "sec")

    def __init__(self, sub):
        field, ambient = sub.field, sub.ambient
        piv = set(sub.pivots)
        free = [j for j in range(ambient) if j not in piv]
        proj_rows = []
        for j in free:
            e = [field.zero] * ambient
            e[j] = field.one
            proj_rows.append(e)
        # projection: reduce modulo the subspace, then read free coordinates
        proj_cols = []
        for j in range(ambient):
            e = [field.zero] * ambient
            e[j] = field.one
            red = sub.reduce(e)
            proj_cols.append([red[k] for k in free])
        proj = Mat.from_cols(field, proj_cols, len(free))
        sec_cols = []
        for j in free:
            e = [field.zero] * ambient
            e[j] = field.one
            sec_cols.append(e)
        sec = Mat.from_cols(field, sec_cols, ambient)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "ambient", ambient)
        object.__setattr__(self, "sub", sub)
        object.__setattr__(self, "free", tuple(free))
        object.__setattr__(self, "proj", proj)
        object.__setattr__(self, "sec", sec)

    def __setattr__(self, *a):
        raise AttributeError("Quotient is immutable")

    @property
    def dim(self):
        return len(self.free)

    def descend(self, M):
        """Induced map on the quotient for an ambient endomorphism ``M`` that
        preserves the subspace; verified, raises otherwise."""
        ind = self.proj * M * self.sec
        # well-definedness: M must map the subspace into the subspace
        for row in self.sub.basis:
            img = M.apply(row)
            if not self.sub.contains(img):
                raise ValueError("map does not preserve subspace; cannot descend")
        return ind
