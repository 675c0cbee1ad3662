import pytest

from phl.algebra import AlgebraMorphism, semiperfect_data
from phl.exactlin import GF, QQ, Mat
from phl.modules import (
    Bimodule,
    HomBasis,
    Module,
    ModuleMorphism,
    as_left_over_opposite,
    bimodule_tensor,
    cokernel,
    direct_sum,
    evaluation,
    ext1,
    free_cover,
    hom_space,
    identity_morphism,
    image,
    induce,
    induced_unit_map,
    is_projective,
    iso_test,
    kernel,
    morphism_bimodule,
    pd_at_most,
    projective_cover,
    quotient_module,
    regular_left,
    regular_right,
    restrict,
    right_dual,
    submodule,
    tensor,
    tensor_map,
    zero_module,
    zero_morphism,
)
from phl.samples import base_field_algebra, diagram_e1, dual_numbers, product_field

F2 = GF(2)


def simple_at_zero(field):
    """k as a module over k[x]/(x^2): x acts by zero."""
    A = dual_numbers(field, rad_supplied=not (field.p is None or field.p > 2))
    act = [Mat.identity(field, 1), Mat.zero(field, 1, 1)]
    return A, Module(A, 1, act)


# --- hom spaces ----------------------------------------------------------------


def test_hom_field_to_itself():
    k = base_field_algebra(QQ)
    assert len(hom_space(regular_left(k), regular_left(k))) == 1


def test_hom_regular_to_simple():
    A, S = simple_at_zero(QQ)
    hs = hom_space(regular_left(A), S)
    assert len(hs) == 1  # evaluation at zero


def test_hom_to_zero():
    A, S = simple_at_zero(QQ)
    assert hom_space(S, zero_module(A)) == []


# --- tensor / induction ----------------------------------------------------------


def test_tensor_field():
    k = base_field_algebra(QQ)
    t = tensor(regular_right(k), regular_left(k))
    assert t.dim == 1


def test_induce_identity():
    A = dual_numbers(QQ)
    from phl.algebra import identity_morphism as alg_id

    ind = induce(alg_id(A), regular_left(A))
    assert ind.module.dim == A.dim


def test_e1_tensor_collapses_simple():
    # scalars through evaluation at zero: relations force x (x) m = 0
    data = diagram_e1(QQ)
    _, S = simple_at_zero(QQ)
    Sr = restrict_via(data.pi1, S)
    ind = induce(data.pi1, regular_left(data.R1))
    assert ind.module.dim == 1


def restrict_via(phi, M):
    return M


def test_e1_induction_along_i2():
    data = diagram_e1(QQ)
    # R1 is an R-module through i1; inducing it up to R2 kills the nilpotent
    M = restrict(data.i1, regular_left(data.R1))
    ind = induce(data.i2, M)
    assert ind.module.dim == 1


def test_unit_map_lands_correctly():
    data = diagram_e1(QQ)
    M = regular_left(data.R)
    ind = induce(data.i1, M)
    u = induced_unit_map(ind)
    assert u.ncols == M.dim and u.nrows == ind.module.dim


def test_tensor_map_functorial():
    A = dual_numbers(QQ)
    from phl.algebra import identity_morphism as alg_id

    M = regular_left(A)
    indM = induce(alg_id(A), M)
    f = identity_morphism(M)
    g = tensor_map(indM, indM, f)
    assert g.mat.is_identity()


# --- duals and evaluation ----------------------------------------------------------


def test_right_dual_e1():
    data = diagram_e1(QQ)
    B = morphism_bimodule(data.pi2)  # R' as (R', R2)-bimodule
    # R' as (R1, R2)-bimodule: restrict the left side along pi1
    lact = [B.lact and B.lact[0]]
    # build directly: left action of R1 through pi1, right action of R2
    Rp = data.Rp
    lact = [Rp.left_mult(data.pi1(data.R1.basis_vector(i))) for i in range(data.R1.dim)]
    ract = [Rp.right_mult(data.pi2(data.R2.basis_vector(j))) for j in range(data.R2.dim)]
    bim = Bimodule(data.R1, data.R2, Rp.dim, lact, ract)
    dual = right_dual(bim)
    assert dual.bim.dim == 1
    # R1 acts on the dual through pi1: x acts by zero
    assert dual.bim.ract[1].is_zero()


def test_dual_of_regular():
    k = base_field_algebra(QQ)
    dual = right_dual(regular_bimodule_of(k))
    assert dual.bim.dim == 1


def regular_bimodule_of(A):
    from phl.modules import regular_bimodule

    return regular_bimodule(A)


def test_dual_of_zero():
    k = base_field_algebra(QQ)
    z = Bimodule(k, k, 0, [Mat.zero(QQ, 0, 0)], [Mat.zero(QQ, 0, 0)])
    assert right_dual(z).bim.dim == 0


def test_evaluation_product_map():
    k = base_field_algebra(QQ)
    dual = right_dual(regular_bimodule_of(k))
    tbim, tens, ev = evaluation(dual)
    assert ev.nrows == 1 and ev.ncols == tens.dim == 1
    assert ev[0, 0] == 1


# --- kernels, images, cokernels -----------------------------------------------------


def test_kernel_of_identity():
    A, S = simple_at_zero(QQ)
    K, _ = kernel(identity_morphism(S))
    assert K.dim == 0


def test_cokernel_of_zero_map():
    A, S = simple_at_zero(QQ)
    Q, proj = cokernel(zero_morphism(zero_module(A), S))
    assert Q.dim == S.dim


def test_image_and_sum():
    A = dual_numbers(QQ)
    M = regular_left(A)
    x_mult = ModuleMorphism(M, M, A.right_mult((0, 1)))
    img, incl, onto = image(x_mult)
    assert img.dim == 1
    D, incls, projs = direct_sum([M, img])
    assert D.dim == 3
    assert (projs[0].mat * incls[0].mat).is_identity()
    assert (projs[1].mat * incls[0].mat).is_zero()


# --- projectivity -------------------------------------------------------------------


def test_free_is_projective():
    A = dual_numbers(QQ)
    flag, sec, (F, eps) = is_projective(regular_left(A))
    assert flag
    assert (eps.mat * sec.mat).is_identity()


def test_simple_not_projective_over_dual_numbers():
    A, S = simple_at_zero(QQ)
    flag, sec, _ = is_projective(S)
    assert not flag and sec is None


def test_zero_is_projective():
    A = dual_numbers(QQ)
    flag, _, _ = is_projective(zero_module(A))
    assert flag


def test_projective_cover_of_simple():
    field = QQ
    A, S = simple_at_zero(field)
    sp = semiperfect_data(A)
    P, eps, summands = projective_cover(S, sp)
    assert P.dim == 2  # the regular module covers the simple
    assert len(summands) == 1


def test_projective_cover_of_projective_is_iso():
    A = dual_numbers(QQ)
    sp = semiperfect_data(A)
    M = regular_left(A)
    P, eps, _ = projective_cover(M, sp)
    assert P.dim == M.dim and eps.mat.is_invertible()


def test_projective_cover_product_field():
    A = product_field(QQ)
    sp = semiperfect_data(A)
    M = regular_left(A)
    P, eps, summands = projective_cover(M, sp)
    assert P.dim == 2 and len(summands) == 2


# --- ext and pd ----------------------------------------------------------------------


def test_ext1_self_extension_of_simple():
    A, S = simple_at_zero(QQ)
    dim, reps = ext1(S, S)
    assert dim == 1 and len(reps) == 1


def test_ext1_projective_vanishes():
    A = dual_numbers(QQ)
    M = regular_left(A)
    _, S = simple_at_zero(QQ)
    dim, _ = ext1(M, S)
    assert dim == 0


def test_ext1_independent_of_generating_cover():
    # re-run with the module presented inside a bigger direct sum
    A, S = simple_at_zero(QQ)
    D, incls, projs = direct_sum([S, S])
    dim_direct, _ = ext1(D, S)
    assert dim_direct == 2  # additivity cross-check


def test_pd_bounds():
    A = dual_numbers(QQ)
    M = regular_left(A)
    assert pd_at_most(M, 0)
    _, S = simple_at_zero(QQ)
    assert not pd_at_most(S, 5)  # periodic resolution never closes


def test_pd_semisimple():
    A = product_field(QQ)
    sub, _ = submodule(regular_left(A), [(1, 0)])
    assert pd_at_most(sub, 0)


# --- iso testing ----------------------------------------------------------------------


def test_iso_self():
    A = dual_numbers(QQ)
    M = regular_left(A)
    res = iso_test(M, M, seed=3)
    assert res.iso is not None and res.conclusive


def test_iso_dimension_obstruction():
    A, S = simple_at_zero(QQ)
    res = iso_test(S, regular_left(A), seed=0)
    assert res.iso is None and res.conclusive


def test_iso_permuted_presentation():
    A = dual_numbers(F2, rad_supplied=True)
    M = regular_left(A)
    # permuted basis presentation of the same module
    Pm = Mat(F2, [[0, 1], [1, 0]], 2)
    act = [Pm * a * Pm for a in M.act]
    N = Module(A, 2, act)
    res = iso_test(M, N, seed=5)
    assert res.iso is not None
    assert res.iso.mat.is_invertible()


def test_iso_nonisomorphic_conclusive_f2():
    A, S = simple_at_zero(F2)
    M = regular_left(A)
    D1, _, _ = direct_sum([S, S])
    res = iso_test(M, D1, seed=1)
    assert res.iso is None and res.conclusive


# --- hom-tensor adjunction spot check ---------------------------------------------------


def test_hom_tensor_adjunction_dimensions():
    data = diagram_e1(QQ)
    M = regular_left(data.R)
    for N in (regular_left(data.R1), ):
        ind = induce(data.i1, M)
        lhs = len(hom_space(ind.module, N))
        rhs = len(hom_space(M, restrict(data.i1, N)))
        assert lhs == rhs


def test_opposite_side_conversion():
    A = dual_numbers(QQ)
    Mr = regular_right(A)
    Ml = as_left_over_opposite(Mr)
    assert Ml.validate() == []
