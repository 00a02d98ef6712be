import numpy as np
import pytest

from cpnkit import (CPnMap, ExtremeFamilySpec, PositivityError,
                    ValidationError, apply_map, as_cpn, build_extreme_family,
                    commutant, compression_map, cpn_distance, cpn_scale,
                    depolarizing_map, dilate, extension_witness, flatten,
                    identity_map, images_of, intertwiner_space, are_disjoint,
                    is_completely_n_positive, is_extreme, is_pure,
                    make_algebra, map_from_images, matrix_units,
                    nonextreme_decomposition, random_cpn_map, random_element,
                    star_index, trace_map, zero_map)
from cpnkit.linalg import spectral_norm


def vector_state(alg, xi):
    imgs = [np.array([[np.vdot(xi, np.array(e.blocks[0]) @ xi)]])
            for e in matrix_units(alg)]
    return map_from_images(alg, 1, imgs)


def m2():
    return make_algebra((2,))


def test_identity_is_pure():
    assert is_pure(as_cpn(identity_map(m2())))


def test_depolarizing_is_not_pure_commutant_16():
    dep = as_cpn(depolarizing_map(2))
    dil = dilate(dep)
    assert not is_pure(dep, dilation=dil)
    assert commutant(dil.rep).dimension == 16


def test_all_identity_pair_is_pure():
    ident = identity_map(m2())
    rho = CPnMap(((ident, ident), (ident, ident)))
    assert is_pure(rho)


def test_vector_state_is_pure():
    # rank-one compression of a full matrix block
    alg = m2()
    xi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    assert is_pure(as_cpn(vector_state(alg, xi)))


def test_trace_map_not_pure_for_blocks():
    alg = make_algebra((2, 2))
    # unnormalized trace across two blocks has a reducible dilation
    assert not is_pure(as_cpn(trace_map(alg)))


def test_purity_requires_cpn():
    ident = identity_map(m2())
    bad = CPnMap(((ident, 2.0 * ident), (2.0 * ident, ident)))
    with pytest.raises(PositivityError):
        is_pure(bad)


def test_block_identity_commutant_dim_two():
    # frozen: the defining representation of two 2x2 blocks has a
    # two-dimensional commutant
    alg = make_algebra((2, 2))
    dil = dilate(as_cpn(identity_map(alg)))
    assert commutant(dil.rep).dimension == 2
    assert not is_pure(as_cpn(identity_map(alg)))


def test_intertwiner_space_dimensions():
    # frozen: identity vs depolarizing on one 2x2 block leaves a
    # four-dimensional intertwiner space
    alg = m2()
    d_id = dilate(as_cpn(identity_map(alg)))
    d_dep = dilate(as_cpn(depolarizing_map(2)))
    assert len(intertwiner_space(d_id, d_dep)) == 4
    a22 = make_algebra((2, 2))
    d1 = dilate(as_cpn(compression_map(a22, 0)))
    d2 = dilate(as_cpn(compression_map(a22, 1)))
    assert len(intertwiner_space(d1, d2)) == 0


def test_block_compressions_are_disjoint():
    a22 = make_algebra((2, 2))
    b1 = as_cpn(compression_map(a22, 0))
    b2 = as_cpn(compression_map(a22, 1))
    assert are_disjoint(b1, b2)
    assert extension_witness(b1, b2) is None


def test_disjointness_requires_order_one():
    ident = identity_map(m2())
    rho = CPnMap(((ident, zero_map(m2(), 2)), (zero_map(m2(), 2), ident)))
    with pytest.raises(ValidationError):
        are_disjoint(rho, rho)


def test_identity_pair_not_disjoint_with_witness():
    idm = as_cpn(identity_map(m2()))
    assert not are_disjoint(idm, idm)
    wit = extension_witness(idm, idm)
    assert wit is not None
    assert is_completely_n_positive(wit).verdict
    off = max(spectral_norm(img) for img in images_of(wit.entry(0, 1)))
    assert off > 1e-6
    # diagonals of the witness must be the given maps
    assert cpn_distance(as_cpn(wit.entry(0, 0)), idm) <= 1e-12
    assert cpn_distance(as_cpn(wit.entry(1, 1)), idm) <= 1e-12


def test_identity_depolarizing_not_disjoint():
    idm = as_cpn(identity_map(m2()))
    dep = as_cpn(depolarizing_map(2))
    assert not are_disjoint(idm, dep)
    wit = extension_witness(idm, dep)
    assert wit is not None
    assert is_completely_n_positive(wit).verdict


def test_injected_off_diagonal_fails_positivity():
    a22 = make_algebra((2, 2))
    b1 = compression_map(a22, 0)
    b2 = compression_map(a22, 1)
    rng = np.random.default_rng(0)
    for _ in range(5):
        off = random_cpn_map(a22, 2, 1, 2, rng).entries[0][0]
        imgs = images_of(off)
        back = [imgs[star_index(a22, i)].conj().T for i in range(a22.dim)]
        off21 = map_from_images(a22, 2, back)
        candidate = CPnMap(((b1, off), (off21, b2)))
        assert not is_completely_n_positive(candidate).verdict


def test_extreme_family_construction():
    alg = m2()
    u2 = alg.element([np.diag([1.0, -1.0])])
    fam = build_extreme_family(ExtremeFamilySpec(identity_map(alg),
                                                 (alg.unit(), u2)))
    assert fam.n == 2
    assert is_completely_n_positive(fam).verdict
    assert is_pure(fam)
    # frozen: the off-diagonal entry right-multiplies by the signature
    rng = np.random.default_rng(1)
    a = random_element(alg, rng)
    got = apply_map(fam.entry(0, 1), a)
    assert np.allclose(got, np.array(a.blocks[0]) @ np.diag([1.0, -1.0]))
    # evaluating at u1 u2* returns the identity
    assert np.allclose(apply_map(fam.entry(0, 1), u2.adjoint()), np.eye(2))


def test_extreme_family_vector_state():
    # scalar-valued family from a pure state
    alg = m2()
    xi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    base = vector_state(alg, xi)
    u2 = alg.element([np.diag([1.0, -1.0])])
    fam = build_extreme_family(ExtremeFamilySpec(base, (alg.unit(), u2)))
    assert is_pure(fam)
    assert np.allclose(apply_map(fam.entry(0, 0), alg.unit()), [[1.0]])
    assert np.allclose(apply_map(fam.entry(1, 1), alg.unit()), [[1.0]])
    assert np.allclose(apply_map(fam.entry(0, 1), u2.adjoint()), [[1.0]])


def test_extreme_family_validation():
    alg = m2()
    u2 = alg.element([np.diag([1.0, -1.0])])
    with pytest.raises(ValidationError):
        # first unitary must be the unit
        build_extreme_family(ExtremeFamilySpec(identity_map(alg), (u2, u2)))
    with pytest.raises(ValidationError):
        # non-unitary entry
        build_extreme_family(ExtremeFamilySpec(
            identity_map(alg), (alg.unit(), 2.0 * u2)))
    with pytest.raises(ValidationError):
        # non-unital base
        build_extreme_family(ExtremeFamilySpec(
            0.5 * identity_map(alg), (alg.unit(), u2)))
    with pytest.raises(ValidationError):
        # base must be pure
        build_extreme_family(ExtremeFamilySpec(
            depolarizing_map(2), (alg.unit(), u2)))


def test_block_diagonal_pair_extreme():
    a22 = make_algebra((2, 2))
    z = zero_map(a22, 2)
    rho = CPnMap(((compression_map(a22, 0), z), (z, compression_map(a22, 1))))
    rep = is_extreme(rho)
    assert rep.extreme
    assert rep.compression_rank == rep.commutant_dim


def test_identity_extreme():
    assert is_extreme(as_cpn(identity_map(m2()))).extreme


def test_depolarizing_not_extreme_and_decomposes():
    dep = as_cpn(depolarizing_map(2))
    rep = is_extreme(dep)
    assert not rep.extreme
    assert rep.compression_rank < rep.commutant_dim
    dec = nonextreme_decomposition(dep)
    assert 0.0 < dec.beta < 1.0
    avg = dec.beta * dec.part1 + (1.0 - dec.beta) * dec.part2
    scale = cpn_scale(dep)
    assert cpn_distance(avg, dep) <= 1e-9 * scale
    assert cpn_distance(dec.part1, dep) > 1e-6 * scale
    assert cpn_distance(dec.part2, dep) > 1e-6 * scale
    assert is_completely_n_positive(dec.part1).verdict
    assert is_completely_n_positive(dec.part2).verdict
    # both parts stay inside the unital class
    for part in (dec.part1, dec.part2):
        one = part.domain.unit()
        assert np.allclose(apply_map(part.entry(0, 0), one), np.eye(2),
                           atol=1e-9)


def test_nonextreme_decomposition_rejects_extreme_input():
    with pytest.raises(ValidationError):
        nonextreme_decomposition(as_cpn(identity_map(m2())))


def test_extremality_requires_membership():
    # maps outside the unital class are rejected up front
    half = 0.5 * identity_map(m2())
    with pytest.raises(ValidationError):
        is_extreme(as_cpn(half))
    ident = identity_map(m2())
    rho = CPnMap(((ident, 0.5 * ident), (0.5 * ident, ident)))
    with pytest.raises(ValidationError):
        is_extreme(rho)


def test_extreme_family_membership():
    alg = m2()
    u2 = alg.element([np.diag([1.0, -1.0])])
    # with the identity base the off-diagonal at the unit equals u2, so
    # the family lies outside the zero-off-diagonal convex set
    fam = build_extreme_family(ExtremeFamilySpec(identity_map(alg),
                                                 (alg.unit(), u2)))
    with pytest.raises(ValidationError):
        is_extreme(fam)
    # a vector state with <xi, u2 xi> = 0 keeps the family inside the
    # set, where purity forces extremality
    xi = np.array([1.0, 1.0]) / np.sqrt(2.0)
    base = vector_state(alg, xi)
    assert abs(apply_map(base, u2)[0, 0]) < 1e-12
    fam2 = build_extreme_family(ExtremeFamilySpec(base, (alg.unit(), u2)))
    assert is_extreme(fam2).extreme


def test_flatten_consistency_for_witness():
    # extension witnesses remain valid after flattening
    idm = as_cpn(identity_map(m2()))
    wit = extension_witness(idm, idm)
    flat = flatten(wit)
    w = np.linalg.eigvalsh(flat.choi_blocks[0])
    assert w.min() > -1e-9
