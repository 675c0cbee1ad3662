"""Finite-dimensional modules and bimodules as matrix representations.

A module stores one action matrix per algebra basis vector, acting on
coordinate columns.  On top of that sit the workhorses of the whole
engine: Hom spaces by solving the commutation equations, tensor products
as explicit quotients with retained projection/section data, induction
along algebra morphisms, duals of bimodules, projectivity tests with
splitting witnesses, projective covers over semiperfect data, one-step
Ext computations, projective dimension bounds, and randomized (but
seeded and, over small prime fields, exhaustively concluded) isomorphism
testing.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import opposite_algebra
from .exactlin import Mat, Quotient, Subspace, invertible_in_span, solve


class Module:
    """Left or right module over a structure-constant algebra."""

    __slots__ = ("alg", "dim", "act", "side")

    def __init__(self, alg, dim, act, side="left", check=True):
        act = tuple(act)
        if len(act) != alg.dim:
            raise ValueError("need one action matrix per algebra basis vector")
        for m in act:
            if m.nrows != dim or m.ncols != dim:
                raise ValueError("action matrices must be dim x dim")
        if side not in ("left", "right"):
            raise ValueError("side must be 'left' or 'right'")
        object.__setattr__(self, "alg", alg)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "act", act)
        object.__setattr__(self, "side", side)
        if check:
            errs = self.validate()
            if errs:
                raise ValueError("invalid module: %s" % errs[0])

    def __setattr__(self, *a):
        raise AttributeError("Module is immutable")

    def validate(self):
        errs = []
        A = self.alg
        f = A.field
        if not self.act_vec(A.unit).is_identity():
            errs.append("unit does not act as the identity")
        for i in range(A.dim):
            for j in range(A.dim):
                prod = A.sc[i][j]
                expect = Mat.zero(f, self.dim, self.dim)
                for k, c in enumerate(prod):
                    if c != f.zero:
                        expect = expect + self.act[k].scale(c)
                got = self.act[i] * self.act[j] if self.side == "left" else self.act[j] * self.act[i]
                if got != expect:
                    errs.append("action law fails at basis pair (%d, %d)" % (i, j))
        return errs

    def act_vec(self, a):
        """Action matrix of an algebra element given by coordinates."""
        f = self.alg.field
        acc = Mat.zero(f, self.dim, self.dim)
        for i, c in enumerate(a):
            if c != f.zero:
                acc = acc + self.act[i].scale(c)
        return acc

    def __repr__(self):
        return "Module(dim=%d, %s over %r)" % (self.dim, self.side, self.alg)


def zero_module(alg, side="left"):
    return Module(alg, 0, [Mat.zero(alg.field, 0, 0)] * alg.dim, side, check=False)


def regular_left(alg):
    return Module(alg, alg.dim, alg.left_basis_mats(), "left", check=False)


def regular_right(alg):
    return Module(alg, alg.dim, alg.right_basis_mats(), "right", check=False)


def restrict(phi, M):
    """View a module over the target of a morphism as one over the source."""
    if M.alg != phi.target:
        raise ValueError("module is not over the morphism target")
    act = [M.act_vec(phi(phi.source.basis_vector(i))) for i in range(phi.source.dim)]
    return Module(phi.source, M.dim, act, M.side)


def as_left_over_opposite(M):
    """A right module re-read as a left module over the opposite algebra."""
    if M.side == "left":
        raise ValueError("already a left module")
    return Module(opposite_algebra(M.alg), M.dim, M.act, "left")


class ModuleMorphism:
    """Linear map commuting with the action, stored as target x source."""

    __slots__ = ("source", "target", "mat")

    def __init__(self, source, target, mat, check=True):
        if source.alg != target.alg or source.side != target.side:
            raise ValueError("morphism requires one algebra and one side")
        if mat.nrows != target.dim or mat.ncols != source.dim:
            raise ValueError("morphism matrix must be target.dim x source.dim")
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mat", mat)
        if check and not commutes(source, target, mat):
            raise ValueError("matrix does not commute with the action")

    def __setattr__(self, *a):
        raise AttributeError("ModuleMorphism is immutable")

    def __call__(self, v):
        return self.mat.apply(v)

    def compose(self, other):
        """``self`` after ``other``."""
        return ModuleMorphism(other.source, self.target, self.mat * other.mat, check=False)

    def is_iso(self):
        return self.mat.is_invertible()

    def is_zero(self):
        return self.mat.is_zero()

    def inverse(self):
        inv = self.mat.inverse()
        if inv is None:
            return None
        return ModuleMorphism(self.target, self.source, inv, check=False)

    def __add__(self, other):
        return ModuleMorphism(self.source, self.target, self.mat + other.mat, check=False)

    def __sub__(self, other):
        return ModuleMorphism(self.source, self.target, self.mat - other.mat, check=False)

    def __neg__(self):
        return ModuleMorphism(self.source, self.target, -self.mat, check=False)

    def __repr__(self):
        return "ModuleMorphism(%d -> %d)" % (self.source.dim, self.target.dim)


def commutes(M, N, mat):
    return all(mat * M.act[i] == N.act[i] * mat for i in range(M.alg.dim))


def zero_morphism(M, N):
    return ModuleMorphism(M, N, Mat.zero(M.alg.field, N.dim, M.dim), check=False)


def identity_morphism(M):
    return ModuleMorphism(M, M, Mat.identity(M.alg.field, M.dim), check=False)


class Bimodule:
    """Two commuting actions: a left one and a right one."""

    __slots__ = ("leftalg", "rightalg", "dim", "lact", "ract")

    def __init__(self, leftalg, rightalg, dim, lact, ract, check=True):
        object.__setattr__(self, "leftalg", leftalg)
        object.__setattr__(self, "rightalg", rightalg)
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "lact", tuple(lact))
        object.__setattr__(self, "ract", tuple(ract))
        if check:
            errs = self.validate()
            if errs:
                raise ValueError("invalid bimodule: %s" % errs[0])

    def __setattr__(self, *a):
        raise AttributeError("Bimodule is immutable")

    def validate(self):
        errs = []
        errs += ["left: " + e for e in self.left_module().validate()]
        errs += ["right: " + e for e in self.right_module().validate()]
        for i in range(self.leftalg.dim):
            for j in range(self.rightalg.dim):
                if self.lact[i] * self.ract[j] != self.ract[j] * self.lact[i]:
                    errs.append("actions do not commute at basis pair (%d, %d)" % (i, j))
        return errs

    def left_module(self):
        return Module(self.leftalg, self.dim, self.lact, "left", check=False)

    def right_module(self):
        return Module(self.rightalg, self.dim, self.ract, "right", check=False)

    def __repr__(self):
        return "Bimodule(dim=%d over (%r, %r))" % (self.dim, self.leftalg, self.rightalg)


def regular_bimodule(alg):
    return Bimodule(alg, alg, alg.dim, alg.left_basis_mats(), alg.right_basis_mats(), check=False)


def morphism_bimodule(phi):
    """The target of a morphism as a (target, source)-bimodule."""
    B, A = phi.target, phi.source
    ract = [B.right_mult(phi(A.basis_vector(j))) for j in range(A.dim)]
    return Bimodule(B, A, B.dim, B.left_basis_mats(), ract)


# ---------------------------------------------------------------------------
# Hom spaces


class HomBasis:
    """Canonical basis of the space of module morphisms between two modules."""

    __slots__ = ("source", "target", "mats", "sub")

    def __init__(self, source, target):
        if source.alg != target.alg or source.side != target.side:
            raise ValueError("Hom requires one algebra and one side")
        f = source.alg.field
        m, n = source.dim, target.dim
        rows = []
        for t in range(source.alg.dim):
            aM = source.act[t]
            aN = target.act[t]
            for r in range(n):
                for c in range(m):
                    row = [f.zero] * (n * m)
                    for j in range(m):
                        row[r * m + j] = f.add(row[r * m + j], aM[j, c])
                    for i in range(n):
                        row[i * m + c] = f.sub(row[i * m + c], aN[r, i])
                    rows.append(row)
        A = Mat(f, rows, n * m) if rows else Mat.zero(f, 0, n * m)
        K = A.right_kernel()
        sub = Subspace(f, n * m, [tuple(r) for r in K.rows])
        mats = []
        for v in sub.basis:
            mat = Mat(f, [v[i * m:(i + 1) * m] for i in range(n)], m)
            mats.append(ModuleMorphism(source, target, mat, check=False))
        object.__setattr__(self, "source", source)
        object.__setattr__(self, "target", target)
        object.__setattr__(self, "mats", tuple(mats))
        object.__setattr__(self, "sub", sub)

    def __setattr__(self, *a):
        raise AttributeError("HomBasis is immutable")

    @property
    def dim(self):
        return len(self.mats)

    def coords(self, mat):
        v = tuple(x for row in mat.rows for x in row)
        return self.sub.coords(v)

    def from_coords(self, coeffs):
        f = self.source.alg.field
        acc = Mat.zero(f, self.target.dim, self.source.dim)
        for c, h in zip(coeffs, self.mats):
            if c != f.zero:
                acc = acc + h.mat.scale(c)
        return ModuleMorphism(self.source, self.target, acc, check=False)


def hom_space(M, N):
    """Canonical basis of ``Hom(M, N)`` as a list of morphisms."""
    return list(HomBasis(M, N).mats)


# ---------------------------------------------------------------------------
# sub, quotient, kernel, cokernel, image, direct sums


def submodule(M, vectors):
    """Submodule spanned by the given vectors (closed under the action is
    verified); returns ``(S, incl)``."""
    f = M.alg.field
    sub = Subspace(f, M.dim, list(vectors))
    # close under the action, verifying stability
    for v in sub.basis:
        for i in range(M.alg.dim):
            w = M.act[i].apply(v)
            if not sub.contains(w):
                raise ValueError("span is not action-stable")
    incl = Mat(f, sub.basis, M.dim).transpose()
    act = []
    for i in range(M.alg.dim):
        cols = [sub.coords(M.act[i].apply(v)) for v in sub.basis]
        act.append(Mat.from_cols(f, cols, sub.dim))
    S = Module(M.alg, sub.dim, act, M.side, check=False)
    return S, ModuleMorphism(S, M, incl, check=False)


def quotient_module(M, vectors):
    """Quotient by the submodule spanned by ``vectors``; returns ``(Q, proj)``."""
    f = M.alg.field
    sub = Subspace(f, M.dim, list(vectors))
    for v in sub.basis:
        for i in range(M.alg.dim):
            if not sub.contains(M.act[i].apply(v)):
                raise ValueError("span is not action-stable")
    quot = Quotient(sub)
    act = [quot.proj * M.act[i] * quot.sec for i in range(M.alg.dim)]
    Q = Module(M.alg, quot.dim, act, M.side, check=False)
    return Q, ModuleMorphism(M, Q, quot.proj, check=False)


def kernel(fmor):
    K = fmor.mat.right_kernel()
    return submodule(fmor.source, [tuple(r) for r in K.rows])


def image(fmor):
    cols = [fmor.mat.col(j) for j in range(fmor.mat.ncols)]
    S, incl = submodule(fmor.target, cols)
    f = fmor.source.alg.field
    sub = Subspace(f, fmor.target.dim, cols)
    fac = Mat.from_cols(f, [sub.coords(fmor.mat.col(j)) for j in range(fmor.source.dim)], sub.dim)
    onto = ModuleMorphism(fmor.source, S, fac, check=False)
    return S, incl, onto


def cokernel(fmor):
    cols = [fmor.mat.col(j) for j in range(fmor.mat.ncols)]
    return quotient_module(fmor.target, cols)


def direct_sum(mods):
    if not mods:
        raise ValueError("direct sum of nothing")
    alg = mods[0].alg
    side = mods[0].side
    f = alg.field
    for m in mods:
        if m.alg != alg or m.side != side:
            raise ValueError("direct sum requires one algebra and one side")
    total = sum(m.dim for m in mods)
    act = [Mat.block_diag(f, [m.act[i] for m in mods]) for i in range(alg.dim)]
    D = Module(alg, total, act, side, check=False)
    incls, projs = [], []
    off = 0
    for m in mods:
        rows_in = []
        for i in range(total):
            row = [f.zero] * m.dim
            if off <= i < off + m.dim:
                row[i - off] = f.one
            rows_in.append(row)
        incls.append(ModuleMorphism(m, D, Mat(f, rows_in, m.dim), check=False))
        rows_pr = []
        for i in range(m.dim):
            row = [f.zero] * total
            row[off + i] = f.one
            rows_pr.append(row)
        projs.append(ModuleMorphism(D, m, Mat(f, rows_pr, total), check=False))
        off += m.dim
    return D, incls, projs


# ---------------------------------------------------------------------------
# tensor products as explicit quotients


class Tensored:
    """Tensor product over a middle algebra, as a quotient of the plain
    tensor with projection and section retained.

    The plain tensor index convention is ``(i, j) -> i * dim_y + j``.
    """

    __slots__ = ("field", "dim_x", "dim_y", "quot")

    def __init__(self, field, dim_x, dim_y, xr_acts, yl_acts, middle_dim):
        rows = []
        plain = dim_x * dim_y
        for t in range(middle_dim):
            xa = xr_acts[t]
            ya = yl_acts[t]
            for i in range(dim_x):
                xi = xa.col(i)
                for j in range(dim_y):
                    yj = ya.col(j)
                    row = [field.zero] * plain
                    for i2, c in enumerate(xi):
                        if c != field.zero:
                            row[i2 * dim_y + j] = field.add(row[i2 * dim_y + j], c)
                    for j2, c in enumerate(yj):
                        if c != field.zero:
                            row[i * dim_y + j2] = field.sub(row[i * dim_y + j2], c)
                    rows.append(row)
        sub = Subspace(field, plain, rows)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "dim_x", dim_x)
        object.__setattr__(self, "dim_y", dim_y)
        object.__setattr__(self, "quot", Quotient(sub))

    def __setattr__(self, *a):
        raise AttributeError("Tensored is immutable")

    @property
    def dim(self):
        return self.quot.dim

    def pure(self, vx, vy):
        """Class of the pure tensor of two coordinate vectors."""
        f = self.field
        plain = [f.zero] * (self.dim_x * self.dim_y)
        for i, a in enumerate(vx):
            if a == f.zero:
                continue
            for j, b in enumerate(vy):
                if b != f.zero:
                    plain[i * self.dim_y + j] = f.add(plain[i * self.dim_y + j], f.mul(a, b))
        return self.quot.proj.apply(plain)

    def lift(self, qv):
        return self.quot.sec.apply(qv)

    def project(self, plain):
        return self.quot.proj.apply(plain)

    def descend(self, mat_x, mat_y):
        """Induced endomorphism of the quotient from a pair acting on the
        factors (either may be an identity); verified well-defined."""
        big = Mat.kron(mat_x, mat_y)
        return self.quot.descend(big)

    def descend_to(self, other, mat_x, mat_y):
        """Map between two tensor quotients induced by maps of the factors."""
        big = Mat.kron(mat_x, mat_y)
        # verify relations land in relations
        for row in self.quot.sub.basis:
            img = big.apply(row)
            if not other.quot.sub.contains(img):
                raise ValueError("factor maps do not respect the tensor relations")
        return other.quot.proj * big * self.quot.sec


@dataclass(frozen=True)
class InducedModule:
    """A left module of the form (bimodule tensored over its right algebra
    with a left module), with the quotient bookkeeping retained."""
    bim: Bimodule
    source: Module
    tens: Tensored
    module: Module

    def insert(self, bvec, mvec):
        return self.tens.pure(bvec, mvec)


def bimodule_tensor(bim, M):
    """``B (x)_A M`` for a (C, A)-bimodule and a left A-module."""
    if M.side != "left" or M.alg != bim.rightalg:
        raise ValueError("need a left module over the right algebra of the bimodule")
    f = bim.leftalg.field
    tens = Tensored(f, bim.dim, M.dim, bim.ract, M.act, bim.rightalg.dim)
    act = []
    ident = Mat.identity(f, M.dim)
    for i in range(bim.leftalg.dim):
        act.append(tens.descend(bim.lact[i], ident))
    mod = Module(bim.leftalg, tens.dim, act, "left")
    return InducedModule(bim, M, tens, mod)


def induce(phi, M):
    """Induction along an algebra morphism, with the canonical insertion."""
    ind = bimodule_tensor(morphism_bimodule(phi), M)
    return ind


def induced_unit_map(ind):
    """The canonical linear map ``m -> 1 (x) m`` into an induced module."""
    f = ind.module.alg.field
    cols = []
    one = ind.bim.leftalg.unit
    for j in range(ind.source.dim):
        ej = tuple(f.one if t == j else f.zero for t in range(ind.source.dim))
        cols.append(ind.insert(one, ej))
    return Mat.from_cols(f, cols, ind.module.dim)


def tensor_map(src_ind, dst_ind, fmor):
    """Functoriality: the induced morphism between two tensors with the same
    bimodule, from a morphism of the right-hand modules."""
    if src_ind.bim is not dst_ind.bim and (src_ind.bim.lact != dst_ind.bim.lact
                                           or src_ind.bim.ract != dst_ind.bim.ract):
        raise ValueError("tensor_map requires the same bimodule on both sides")
    f = src_ind.module.alg.field
    ident = Mat.identity(f, src_ind.bim.dim)
    mat = src_ind.tens.descend_to(dst_ind.tens, ident, fmor.mat)
    return ModuleMorphism(src_ind.module, dst_ind.module, mat)


def tensor(Mright, Nleft):
    """Plain tensor over the common algebra of a right and a left module;
    returns the ``Tensored`` quotient data (a vector space)."""
    if Mright.side != "right" or Nleft.side != "left" or Mright.alg != Nleft.alg:
        raise ValueError("tensor needs a right and a left module over one algebra")
    f = Mright.alg.field
    return Tensored(f, Mright.dim, Nleft.dim, Mright.act, Nleft.act, Mright.alg.dim)


def bimodule_tensor_bimodule(b1, b2):
    """Tensor of a (C, A)-bimodule with an (A, D)-bimodule over A."""
    if b1.rightalg != b2.leftalg:
        raise ValueError("middle algebras differ")
    f = b1.leftalg.field
    tens = Tensored(f, b1.dim, b2.dim, b1.ract, b2.lact, b1.rightalg.dim)
    ident1 = Mat.identity(f, b1.dim)
    ident2 = Mat.identity(f, b2.dim)
    lact = [tens.descend(b1.lact[i], ident2) for i in range(b1.leftalg.dim)]
    ract = [tens.descend(ident1, b2.ract[j]) for j in range(b2.rightalg.dim)]
    bim = Bimodule(b1.leftalg, b2.rightalg, tens.dim, lact, ract)
    return bim, tens


# ---------------------------------------------------------------------------
# duals and evaluation


@dataclass(frozen=True)
class DualBimodule:
    """Right dual of a bimodule: all right-linear maps into the right algebra,
    as an (A2, A1)-bimodule; the functional matrices are retained."""
    bim: Bimodule            # the dual, over (A2, A1)
    source: Bimodule         # the original, over (A1, A2)
    funcs: tuple             # one (dim A2 x dim source) matrix per basis functional
    sub: Subspace            # vectorized solution space


def right_dual(bim):
    """``Hom`` of right modules from a bimodule into its right algebra."""
    A1, A2 = bim.leftalg, bim.rightalg
    f = A1.field
    n, m = A2.dim, bim.dim
    rows = []
    for t in range(A2.dim):
        aB = bim.ract[t]
        aA = A2.right_mult(A2.basis_vector(t))
        for r in range(n):
            for c in range(m):
                row = [f.zero] * (n * m)
                for j in range(m):
                    row[r * m + j] = f.add(row[r * m + j], aB[j, c])
                for i in range(n):
                    row[i * m + c] = f.sub(row[i * m + c], aA[r, i])
                rows.append(row)
    A = Mat(f, rows, n * m) if rows else Mat.zero(f, 0, n * m)
    K = A.right_kernel()
    sub = Subspace(f, n * m, [tuple(r) for r in K.rows])
    funcs = tuple(Mat(f, [v[i * m:(i + 1) * m] for i in range(n)], m) for v in sub.basis)

    def fcoords(mat):
        return sub.coords(tuple(x for row in mat.rows for x in row))

    lact = []
    for i in range(A2.dim):
        lm = A2.left_mult(A2.basis_vector(i))
        cols = [fcoords(lm * g) for g in funcs]
        lact.append(Mat.from_cols(f, cols, len(funcs)))
    ract = []
    for j in range(A1.dim):
        la = bim.lact[j]
        cols = [fcoords(g * la) for g in funcs]
        ract.append(Mat.from_cols(f, cols, len(funcs)))
    dual = Bimodule(A2, A1, len(funcs), lact, ract)
    return DualBimodule(dual, bim, funcs, sub)


def evaluation(dual):
    """Evaluation map from (dual tensor original over A1) to A2.

    Returns ``(tensor_bimodule, tensored, ev_matrix)`` where the matrix is
    verified to be a morphism of (A2, A2)-bimodules.
    """
    bim = dual.source
    A2 = bim.rightalg
    f = A2.field
    tbim, tens = bimodule_tensor_bimodule(dual.bim, bim)
    plain_cols = []
    for s in range(dual.bim.dim):
        for t in range(bim.dim):
            ej = tuple(f.one if u == t else f.zero for u in range(bim.dim))
            plain_cols.append(dual.funcs[s].apply(ej))
    plain = Mat.from_cols(f, plain_cols, A2.dim) if plain_cols else Mat.zero(f, A2.dim, 0)
    ev = plain * tens.quot.sec
    # bimodule morphism checks
    for i in range(A2.dim):
        if ev * tbim.lact[i] != A2.left_mult(A2.basis_vector(i)) * ev:
            raise ValueError("evaluation is not left linear")
        if ev * tbim.ract[i] != A2.right_mult(A2.basis_vector(i)) * ev:
            raise ValueError("evaluation is not right linear")
    return tbim, tens, ev


# ---------------------------------------------------------------------------
# projectivity, covers, Ext, projective dimension


def free_cover(M):
    """Surjection onto ``M`` from a free module on the full basis of ``M``."""
    A = M.alg
    f = A.field
    copies = [regular_left(A) if M.side == "left" else regular_right(A) for _ in range(M.dim)]
    if M.dim == 0:
        F = zero_module(A, M.side)
        return F, zero_morphism(F, M)
    F, incls, projs = direct_sum(copies)
    cols = []
    for j in range(M.dim):
        ej = tuple(f.one if t == j else f.zero for t in range(M.dim))
        for i in range(A.dim):
            cols.append(M.act[i].apply(ej))
    eps = Mat.from_cols(f, cols, M.dim)
    return F, ModuleMorphism(F, M, eps)


def is_projective(M):
    """Projectivity with a splitting witness for the free cover.

    Returns ``(flag, section_or_None, (F, eps))``.
    """
    F, eps = free_cover(M)
    if M.dim == 0:
        return True, zero_morphism(M, F), (F, eps)
    hb = HomBasis(M, F)
    f = M.alg.field
    n = M.dim
    rows = []
    rhs = []
    for r in range(n):
        for c in range(n):
            row = []
            for h in hb.mats:
                row.append((eps.mat * h.mat)[r, c])
            rows.append(row)
            rhs.append(f.one if r == c else f.zero)
    A = Mat(f, rows, hb.dim) if rows else Mat.zero(f, 0, hb.dim)
    x, _ = solve(A, rhs)
    if x is None:
        return False, None, (F, eps)
    sec = hb.from_coords(x)
    return True, sec, (F, eps)


@dataclass(frozen=True)
class CoverSummand:
    class_index: int    # index into sp.class_reps
    incl: ModuleMorphism
    proj: ModuleMorphism


def indecomposable_projective(sp, class_index):
    """The projective generated by a representative primitive idempotent."""
    A = sp.algebra
    e = sp.idems[sp.class_reps[class_index]]
    cols = [A.right_mult(e).col(j) for j in range(A.dim)]
    P, _ = submodule(regular_left(A), cols)
    return P


def projective_cover(M, sp):
    """Minimal projective cover over verified semiperfect data.

    Returns ``(P, eps, summands)`` with the kernel verified to lie inside
    ``rad P``.
    """
    A = sp.algebra
    f = A.field
    if M.side != "left":
        raise ValueError("projective covers are implemented for left modules")
    if M.dim == 0:
        Z = zero_module(A)
        return Z, zero_morphism(Z, M), []
    from .algebra import quotient_algebra

    J = sp.rad
    S, projS, _ = quotient_algebra(A, J)
    # top of M
    jm_rows = []
    for v in J.basis:
        av = M.act_vec(v)
        for j in range(M.dim):
            jm_rows.append(av.col(j))
    jm = Subspace(f, M.dim, jm_rows)
    top_q = Quotient(jm)
    top_act = [top_q.proj * M.act[i] * top_q.sec for i in range(A.dim)]

    def top_apply(avec, tv):
        acc = [f.zero] * top_q.dim
        for i, c in enumerate(avec):
            if c != f.zero:
                img = top_act[i].apply(tv)
                acc = [f.add(x, f.mul(c, y)) for x, y in zip(acc, img)]
        return tuple(acc)

    chosen = []  # (class_index, generator vector in M)
    for ci, rep in enumerate(sp.class_reps):
        e = sp.idems[rep]
        ebar = projS.apply(e)
        corner_rows = [S.mul_vec(ebar, S.mul_vec(S.basis_vector(i), ebar)) for i in range(S.dim)]
        corner = Subspace(S.field, S.dim, corner_rows)
        d_e = corner.dim
        # e . top
        acts_e = M.act_vec(e)
        etop_rows = [top_apply(e, top_q.proj.apply(acts_e.col(j))) for j in range(M.dim)]
        etop = Subspace(f, top_q.dim, etop_rows)
        if etop.dim % d_e != 0:
            raise ValueError("corner dimension does not divide the top multiplicity")
        want = etop.dim // d_e
        if want == 0:
            continue
        corner_lifts = [A.mul_vec(e, A.mul_vec(A.basis_vector(i), e)) for i in range(A.dim)]
        picked_span = Subspace(f, top_q.dim, [])
        count = 0
        for j in range(M.dim):
            if count == want:
                break
            w = acts_e.col(j)
            wbar = top_q.proj.apply(w)
            if picked_span.contains(wbar):
                continue
            chosen.append((ci, tuple(w)))
            count += 1
            orbit = [top_apply(cl, wbar) for cl in corner_lifts]
            picked_span = picked_span.add(Subspace(f, top_q.dim, orbit))
        if count != want:
            raise ValueError("could not realize the full top multiplicity")

    if not chosen:
        Z = zero_module(A)
        if M.dim != 0:
            raise ValueError("nonzero module with empty top")
        return Z, zero_morphism(Z, M), []

    parts = [indecomposable_projective(sp, ci) for ci, _ in chosen]
    P, incls, projs = direct_sum(parts)
    cols = []
    for (ci, w), part in zip(chosen, parts):
        e = sp.idems[sp.class_reps[ci]]
        basis_in_A = [A.right_mult(e).col(j) for j in range(A.dim)]
        part_sub = Subspace(f, A.dim, basis_in_A)
        for v in part_sub.basis:
            cols.append(M.act_vec(v).apply(w))
    eps = Mat.from_cols(f, cols, M.dim)
    epsm = ModuleMorphism(P, M, eps)
    if Mat(f, [eps.col(j) for j in range(eps.ncols)], M.dim).rank() != M.dim:
        raise ValueError("projective cover candidate is not surjective")
    # kernel inside rad P
    radp_rows = []
    for v in J.basis:
        av = P.act_vec(v)
        for j in range(P.dim):
            radp_rows.append(av.col(j))
    radp = Subspace(f, P.dim, radp_rows)
    for krow in eps.right_kernel().rows:
        if not radp.contains(krow):
            raise ValueError("cover kernel escapes the radical: not a projective cover")
    summands = [CoverSummand(ci, inc, pr) for (ci, _), inc, pr in zip(chosen, incls, projs)]
    return P, epsm, summands


def ext1(M, N):
    """One-step Ext: presentation by a free cover, then the cokernel of the
    restriction map on Hom spaces.  Returns ``(dim, representatives)`` where
    the representatives are morphisms from the syzygy to ``N``."""
    F, eps = free_cover(M)
    K, incl = kernel(eps)
    hom_FN = HomBasis(F, N)
    hom_KN = HomBasis(K, N)
    if hom_KN.dim == 0:
        return 0, []
    f = M.alg.field
    cols = [hom_KN.coords((g.mat * incl.mat)) for g in hom_FN.mats]
    restr = Mat.from_cols(f, cols, hom_KN.dim) if cols else Mat.zero(f, hom_KN.dim, 0)
    img = Subspace(f, hom_KN.dim, [restr.col(j) for j in range(restr.ncols)])
    quot = Quotient(img)
    reps = []
    for j in quot.free:
        reps.append(hom_KN.from_coords(
            tuple(f.one if t == j else f.zero for t in range(hom_KN.dim))))
    return quot.dim, reps


def pd_at_most(M, n):
    """Projective dimension bound by iterated syzygies of free covers."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    cur = M
    for _ in range(n):
        flag, _, _ = is_projective(cur)
        if flag:
            return True
        F, eps = free_cover(cur)
        cur, _ = kernel(eps)
    flag, _, _ = is_projective(cur)
    return flag


# ---------------------------------------------------------------------------
# isomorphism testing


@dataclass(frozen=True)
class IsoResult:
    iso: object          # ModuleMorphism or None
    conclusive: bool
    reason: str


def iso_test(M, N, seed=0, tries=64, exhaust_ceiling=1 << 16):
    """Probabilistic isomorphism search with conclusive small cases.

    Dimension or Hom-dimension obstructions give conclusive negatives; over
    a small prime field the search falls back to exhaustion, so negatives
    there are conclusive as well.  Over the rationals an unsuccessful search
    is reported as inconclusive.
    """
    if M.dim != N.dim:
        return IsoResult(None, True, "dimension mismatch (%d vs %d)" % (M.dim, N.dim))
    if M.dim == 0:
        return IsoResult(zero_morphism(M, N), True, "both zero")
    hb = HomBasis(M, N)
    if hb.dim == 0:
        return IsoResult(None, True, "Hom space is zero")
    hm = HomBasis(M, M)
    hn = HomBasis(N, N)
    hnm = HomBasis(N, M)
    if hm.dim != hn.dim or hb.dim != hnm.dim:
        return IsoResult(None, True, "Hom dimension obstruction")
    got, conclusive = invertible_in_span([h.mat for h in hb.mats], seed,
                                         tries=tries, exhaust_ceiling=exhaust_ceiling)
    if got is not None:
        return IsoResult(ModuleMorphism(M, N, got, check=False), True, "isomorphism found")
    if conclusive:
        return IsoResult(None, True, "no invertible element in the Hom space (exhausted)")
    return IsoResult(None, False, "no isomorphism found (randomized search exhausted)")
