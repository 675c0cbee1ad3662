from fractions import Fraction

import pytest

from phl.algebra import (
    Algebra,
    AlgebraMorphism,
    Ideal,
    gamma_prime,
    is_nilpotent_ideal,
    is_universally_superfluous_sufficient,
    kernel_ideal,
    lift_idempotents,
    opposite_algebra,
    pullback,
    pullback_radical,
    quotient_algebra,
    radical,
    semiperfect_data,
    triangular,
    validate_algebra,
    verify_radical,
)
from phl.exactlin import GF, QQ, Mat
from phl.samples import (
    base_field_algebra,
    diagram_e1,
    diagram_e2,
    diagram_e3,
    dual_numbers,
    product_field,
)

F2 = GF(2)
F101 = GF(101)


def test_validate_dual_numbers():
    assert validate_algebra(dual_numbers(QQ)) == []
    assert validate_algebra(dual_numbers(F2)) == []


def test_validate_broken_unit():
    o, z = QQ.one, QQ.zero
    sc = [
        [[z, z], [z, o]],
        [[z, o], [z, z]],
    ]
    A = Algebra(QQ, sc, [o, z])
    errs = validate_algebra(A)
    assert any("unit law" in e for e in errs)


def test_e1_pullback_dims():
    data = diagram_e1(F2)
    assert data.R.dim == 2
    assert validate_algebra(data.R) == []
    # elementwise oracle over F2: exactly 4 of the 8 pairs glue
    import itertools

    count = 0
    for a in itertools.product([0, 1], repeat=2):
        for b in itertools.product([0, 1], repeat=1):
            if data.pi1(a) == data.pi2(b):
                count += 1
    assert count == 4 and 2 ** data.R.dim == count


def test_e1_pullback_is_dual_numbers():
    data = diagram_e1(F2)
    # the nilpotent (x, 0) must square to zero and the diagram commute
    assert (data.pi1.mat * data.i1.mat) == (data.pi2.mat * data.i2.mat)
    nilp = [v for v in [data.R.basis_vector(i) for i in range(2)]
            if data.R.mul_vec(v, v) == tuple([F2.zero] * 2) ]
    assert len(nilp) == 1


def test_trivial_diagonal_pullback():
    k = base_field_algebra(QQ)
    ident = AlgebraMorphism(k, k, Mat.identity(QQ, 1), name="id")
    data = pullback(ident, ident)
    assert data.R.dim == 1


def test_e2_pullback_dim1():
    data = diagram_e2(F2)
    assert data.R.dim == 1
    # enumeration oracle: only the diagonal of constants survives
    import itertools

    count = sum(
        1
        for a in itertools.product([0, 1], repeat=1)
        for b in itertools.product([0, 1], repeat=1)
        if data.pi1(a) == data.pi2(b)
    )
    assert count == 2 ** data.R.dim


def test_e3_pullback():
    data = diagram_e3(QQ)
    assert data.R.dim == 2
    # rank-nullity oracle: stacked evaluation map has rank 1
    stacked = Mat.hstack([data.pi1.mat, -data.pi2.mat])
    assert stacked.rank() == 1
    assert data.R.dim == data.R1.dim + data.R2.dim - 1


def test_pullback_target_mismatch():
    k = base_field_algebra(QQ)
    k2 = product_field(QQ)
    f = AlgebraMorphism(k, k, Mat.identity(QQ, 1))
    g = AlgebraMorphism(k, k2, Mat(QQ, [[1], [1]], 1))
    with pytest.raises(ValueError):
        pullback(f, g)


# --- radicals ---------------------------------------------------------------


def test_radical_of_field_is_zero():
    assert radical(base_field_algebra(QQ)).dim == 0
    assert radical(base_field_algebra(F101)).dim == 0


def test_radical_dual_numbers():
    J = radical(dual_numbers(QQ))
    assert J.dim == 1
    assert J.sub.contains((0, 1))


def test_radical_small_char_needs_supplied():
    A = dual_numbers(F2)
    with pytest.raises(ValueError):
        radical(A)
    ok, notes = verify_radical(A, Ideal(A, [(0, 1)]))
    assert ok
    assert any("asserted" in n for n in notes)


def test_verify_radical_rejects_whole_algebra():
    A = dual_numbers(QQ)
    ok, notes = verify_radical(A, Ideal(A, [(1, 0), (0, 1)]))
    assert not ok


def test_verify_radical_rejects_nonmaximal():
    A = product_field(QQ)  # semisimple: the zero ideal is the radical
    ok, _ = verify_radical(A, Ideal(A, []))
    assert ok
    B = dual_numbers(QQ)
    ok, notes = verify_radical(B, Ideal(B, []))
    assert not ok and any("maximal" in n for n in notes)


def test_nilpotency_index():
    A = dual_numbers(QQ)
    J = Ideal(A, [(0, 1)])
    nil, idx = is_nilpotent_ideal(J)
    assert nil and idx == 2
    Z = Ideal(A, [])
    assert is_nilpotent_ideal(Z) == (True, 1)
    U = Ideal(A, [(1, 0), (0, 1)])
    nil, idx = is_nilpotent_ideal(U)
    assert not nil and idx is None


def test_universally_superfluous():
    data = diagram_e1(QQ)
    I1 = kernel_ideal(data.pi1)
    verdict, _ = is_universally_superfluous_sufficient(I1)
    assert verdict == "yes"
    Z = Ideal(data.R1, [])
    assert is_universally_superfluous_sufficient(Z)[0] == "yes"
    # idempotent kernel: criterion is one-sided
    e3 = diagram_e3(QQ)
    K = kernel_ideal(e3.pi1)
    verdict, _ = is_universally_superfluous_sufficient(K)
    assert verdict == "unknown"


def test_kernel_ideal_e1():
    data = diagram_e1(QQ)
    K = kernel_ideal(data.pi1)
    assert K.dim == 1 and K.sub.contains((0, 1))
    assert kernel_ideal(data.pi2).dim == 0


# --- idempotents -------------------------------------------------------------


def test_lift_idempotents_semisimple_identity():
    A = product_field(QQ)
    rad = Ideal(A, [])
    out = lift_idempotents(A, rad, [(1, 0), (0, 1)])
    assert out == [(1, 0), (0, 1)]


def test_lift_idempotents_rejects_non_idempotent():
    A = dual_numbers(QQ)
    rad = Ideal(A, [(0, 1)])
    with pytest.raises(ValueError):
        lift_idempotents(A, rad, [(0, 1)])


def test_semiperfect_dual_numbers():
    sp = semiperfect_data(dual_numbers(QQ))
    assert sp.rad.dim == 1
    assert len(sp.idems) == 1
    assert sp.idems[0] == (1, 0)
    assert all(p.startswith("certified") for p in sp.primitivity)


def test_semiperfect_product_field_splits():
    sp = semiperfect_data(product_field(QQ))
    assert sp.rad.dim == 0
    assert len(sp.idems) == 2
    assert sorted(sp.idems) == [(0, 1), (1, 0)]
    assert len(sp.classes) == 2


def test_semiperfect_supplied_f2():
    A = dual_numbers(F2, rad_supplied=True)
    sp = semiperfect_data(A)
    assert sp.rad.dim == 1 and len(sp.idems) == 1


def test_pullback_radical_formula_e1():
    for field in (QQ, F2, F101):
        data = diagram_e1(field)
        rad1 = Ideal(data.R1, [(0, 1)])
        rad2 = Ideal(data.R2, [])
        radp = Ideal(data.Rp, [])
        J = pullback_radical(data, rad1, rad2, radp)
        assert J.dim == 1
        nil, idx = is_nilpotent_ideal(J)
        assert nil and idx == 2


def test_quotient_algebra():
    A = dual_numbers(QQ)
    Q, proj, sec = quotient_algebra(A, Ideal(A, [(0, 1)]))
    assert Q.dim == 1 and validate_algebra(Q) == []


def test_opposite_is_valid():
    data = diagram_e1(QQ)
    assert validate_algebra(opposite_algebra(data.R)) == []


# --- block matrix algebras ----------------------------------------------------


def test_triangular_dims_and_validity():
    # [[k, k], [0, k[x]/(x^2)]] with k acting by scalars on the corner and
    # k[x]/(x^2) acting through evaluation at zero
    B = base_field_algebra(QQ)
    A = dual_numbers(QQ)
    lact = (Mat.identity(QQ, 1),)
    ract = (Mat.identity(QQ, 1), Mat.zero(QQ, 1, 1))
    tri = triangular(B, A, 1, lact, ract)
    assert tri.alg.dim == 4
    assert validate_algebra(tri.alg) == []
    assert tri.alg.is_idempotent(tri.e_top) and tri.alg.is_idempotent(tri.e_bot)


def test_gamma_prime_dims():
    for make, field in ((diagram_e1, F2), (diagram_e1, QQ), (diagram_e3, QQ)):
        data = make(field)
        pres = gamma_prime(data)
        I1 = kernel_ideal(data.pi1)
        assert pres.alg.dim == data.R.dim + 2 * data.R1.dim + I1.dim
        assert validate_algebra(pres.alg) == []


def test_gamma_prime_bijective_pi1_zero_corner():
    # pi1 bijective forces I1 = 0: upper triangular [[R, R1], [0, R1]]
    k = base_field_algebra(QQ)
    ident = AlgebraMorphism(k, k, Mat.identity(QQ, 1))
    data = pullback(ident, ident)
    pres = gamma_prime(data)
    assert pres.alg.dim == 1 + 1 + 0 + 1
    assert pres.I1.dim == 0


def test_gamma_prime_requires_surjective():
    data = diagram_e2(F2)
    with pytest.raises(ValueError):
        gamma_prime(data)
