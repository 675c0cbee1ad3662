"""Small stock algebras and the bundled pullback diagrams used throughout
the test-suite and the self-test scenarios."""

from __future__ import annotations

from .algebra import Algebra, AlgebraMorphism, pullback
from .exactlin import GF, QQ, Mat


def base_field_algebra(field):
    """The field itself as a one-dimensional algebra."""
    return Algebra(field, [[[field.one]]], [field.one], ["1"])


def dual_numbers(field, rad_supplied=False):
    """k[x]/(x^2) with basis (1, x)."""
    o, z = field.one, field.zero
    sc = [
        [[o, z], [z, o]],   # 1*1 = 1, 1*x = x
        [[z, o], [z, z]],   # x*1 = x, x*x = 0
    ]
    rad = [[z, o]] if rad_supplied else None
    return Algebra(field, sc, [o, z], ["1", "x"], rad_basis=rad)


def product_field(field):
    """k x k with the two componentwise idempotent basis vectors."""
    o, z = field.one, field.zero
    sc = [
        [[o, z], [z, z]],
        [[z, z], [z, o]],
    ]
    return Algebra(field, sc, [o, o], ["u", "v"])


def diagram_e1(field):
    """Dual numbers over k mapping onto k by evaluation, against the identity
    of k.  The fiber product is again the dual numbers."""
    R1 = dual_numbers(field, rad_supplied=not (field.p is None or field.p > 2))
    Rp = base_field_algebra(field)
    R2 = base_field_algebra(field)
    o, z = field.one, field.zero
    pi1 = AlgebraMorphism(R1, Rp, Mat(field, [[o, z]], 2), name="pi1")
    pi2 = AlgebraMorphism(R2, Rp, Mat(field, [[o]], 1), name="pi2")
    return pullback(pi1, pi2)


def diagram_e2(field=None):
    """All four corners the base field except a square-zero extension as the
    common target; neither structural map is surjective."""
    field = field if field is not None else GF(2)
    R1 = base_field_algebra(field)
    R2 = base_field_algebra(field)
    Rp = dual_numbers(field, rad_supplied=not (field.p is None or field.p > 2))
    o, z = field.one, field.zero
    pi1 = AlgebraMorphism(R1, Rp, Mat(field, [[o], [z]], 1), name="pi1")
    pi2 = AlgebraMorphism(R2, Rp, Mat(field, [[o], [z]], 1), name="pi2")
    return pullback(pi1, pi2)


def diagram_e3(field=None):
    """k x k projecting onto its first factor, against the identity of k.
    The fiber product is isomorphic to k x k."""
    field = field if field is not None else QQ
    R1 = product_field(field)
    Rp = base_field_algebra(field)
    R2 = base_field_algebra(field)
    o, z = field.one, field.zero
    pi1 = AlgebraMorphism(R1, Rp, Mat(field, [[o, z]], 2), name="pi1")
    pi2 = AlgebraMorphism(R2, Rp, Mat(field, [[o]], 1), name="pi2")
    return pullback(pi1, pi2)
