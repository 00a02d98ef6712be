"""Structure theory of completely n-positive map matrices: commutants,
purity, disjointness and extreme points.

Purity is decided through the representation commutant: a completely
n-positive [rho_ij] is pure exactly when the minimal dilation
representation is irreducible, i.e. the commutant is the scalars.  Two
completely positive maps are disjoint exactly when no nonzero operator
intertwines their dilation representations, equivalently when the only
joint completion [rho_11, rho_12; rho_21, rho_22] that is completely
2-positive has rho_12 = 0.  Extremality inside the unital-with-zero-
off-diagonal class is decided by injectivity of T -> P T P on the
commutant, P projecting onto span{V_i xi}.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, cstar_norm, distance, is_unitary,
                      star_index)
from .dilation import Representation, StinespringDilation, dilate, rep_apply
from .errors import CertificationError, ValidationError
from .linalg import (commutant_basis_of, herm, intertwiner_basis_of,
                     nullspace, numerical_rank, orth, partial_isometry,
                     spectral_norm)
from .maps import (CPnMap, LinearMap, apply_map, as_cpn, cpn_distance,
                   cpn_scale, is_completely_n_positive, map_from_images,
                   require_cpn)
from .radon import compress


@dataclass(frozen=True, eq=False)
class CommutantBasis:
    """Orthonormal basis (Frobenius inner product) of a representation commutant."""

    rep: Representation
    basis: tuple[np.ndarray, ...]
    commute_residual: float
    adjoint_residual: float

    @property
    def dimension(self) -> int:
        return len(self.basis)


def commutant(rep: Representation, tol: float = 1e-9) -> CommutantBasis:
    """Solve [X, Phi(e)] = 0 over all matrix units by a stacked nullspace.

    Certifies that each basis element commutes and that the span is
    closed under adjoints; failures raise.
    """
    basis = commutant_basis_of(list(rep.images), rep.space_dim, tol)
    commute = 0.0
    for b in basis:
        for img in rep.images:
            commute = max(commute, spectral_norm(b @ img - img @ b))
    adjoint = 0.0
    if basis:
        stack = np.stack([b.ravel() for b in basis], axis=1)  # columns
        proj = stack @ stack.conj().T
        for b in basis:
            v = b.conj().T.ravel()
            adjoint = max(adjoint, float(np.linalg.norm(v - proj @ v)))
    bound = max(tol, 1e4 * np.finfo(float).eps * max(1, rep.space_dim))
    if max(commute, adjoint) > bound * (1.0 + max(
            (spectral_norm(i) for i in rep.images), default=0.0)):
        raise CertificationError(
            f"commutant certificate failed (residuals {commute:.3e}, {adjoint:.3e})")
    return CommutantBasis(rep, tuple(basis), commute, adjoint)


def is_pure(rho: CPnMap, tol: float = 1e-9,
            dilation: StinespringDilation | None = None) -> bool:
    """Purity via irreducibility: the dilation commutant has dimension 1."""
    require_cpn(rho, tol)
    dil = dilation if dilation is not None else dilate(rho, tol)
    return commutant(dil.rep, tol).dimension == 1


def intertwiner_space(d1: StinespringDilation, d2: StinespringDilation,
                      tol: float = 1e-9) -> list[np.ndarray]:
    """Orthonormal basis of {X : X Phi_1(e) = Phi_2(e) X over matrix units}."""
    if d1.source.domain != d2.source.domain:
        raise ValidationError("dilations have different domains")
    return intertwiner_basis_of(list(d1.rep.images), list(d2.rep.images),
                                d1.space_dim, d2.space_dim, tol)


def are_disjoint(rho11: CPnMap, rho22: CPnMap, tol: float = 1e-9) -> bool:
    """Whether the dilation representations admit no nonzero intertwiner.

    Both inputs must be completely positive (n = 1) maps with a common
    domain and codomain.
    """
    _check_pair(rho11, rho22)
    d1 = dilate(rho11, tol)
    d2 = dilate(rho22, tol)
    return len(intertwiner_space(d1, d2, tol)) == 0


def _check_pair(rho11: CPnMap, rho22: CPnMap) -> None:
    if rho11.n != 1 or rho22.n != 1:
        raise ValidationError("disjointness is defined for single maps (n = 1)")
    if rho11.domain != rho22.domain or rho11.codomain_dim != rho22.codomain_dim:
        raise ValidationError("maps must share domain and codomain")


def extension_witness(rho11: CPnMap, rho22: CPnMap,
                      tol: float = 1e-9) -> CPnMap | None:
    """A completely 2-positive completion with nonzero off-diagonal, if any.

    Returns None when the maps are disjoint.  Otherwise a nonzero
    intertwiner X between the dilation representations is polar-
    decomposed into a partial isometry W, and

        rho_12(a) = V_1* Phi_1(a) W* V_2,    rho_21(a) = rho_12(a*)*

    completes [rho_11, rho_12; rho_21, rho_22] to a certified completely
    2-positive map matrix with rho_12 != 0.
    """
    _check_pair(rho11, rho22)
    d1 = dilate(rho11, tol)
    d2 = dilate(rho22, tol)
    basis = intertwiner_space(d1, d2, tol)
    if not basis:
        return None
    w = partial_isometry(basis[0], tol)
    v1 = d1.isometries[0]
    v2 = d2.isometries[0]
    m = rho11.codomain_dim
    alg = rho11.domain
    images12 = [v1.conj().T @ img @ w.conj().T @ v2 for img in d1.rep.images]
    map12 = map_from_images(alg, m, images12)
    # rho_21(a) = rho_12(a*)*: adjoint images under the unit star permutation
    images21 = [images12[star_index(alg, idx)].conj().T for idx in range(alg.dim)]
    map21 = map_from_images(alg, m, images21)
    witness = CPnMap(((rho11.entries[0][0], map12), (map21, rho22.entries[0][0])))
    chk = is_completely_n_positive(witness, tol)
    off_norm = max(spectral_norm(img) for img in images12)
    if not chk.verdict or off_norm <= tol * cpn_scale(witness):
        raise CertificationError(
            f"extension witness certificate failed (cpn {chk.verdict}, "
            f"min eig {chk.min_eig:.3e}, off-diagonal norm {off_norm:.3e})")
    return witness


def _membership_check(rho: CPnMap, tol: float) -> None:
    """rho_ii(1) = I and rho_ij(1) = 0 for i < j, else ValidationError."""
    unit = rho.domain.unit()
    eye = np.eye(rho.codomain_dim)
    scale = cpn_scale(rho)
    bad = []
    for i in range(rho.n):
        for j in range(i, rho.n):
            val = apply_map(rho.entries[i][j], unit)
            target = eye if i == j else np.zeros_like(eye)
            if spectral_norm(val - target) > tol * scale:
                bad.append((i, j))
    if bad:
        raise ValidationError(
            f"map matrix is not unital with zero off-diagonal at the unit; "
            f"failing entries {bad}")


@dataclass(frozen=True)
class ExtremalityReport:
    extreme: bool
    commutant_dim: int
    compression_rank: int


def is_extreme(rho: CPnMap, tol: float = 1e-9,
               dilation: StinespringDilation | None = None) -> ExtremalityReport:
    """Extremality among map matrices with rho_ii(1) = I, rho_ij(1) = 0 (i < j).

    Criterion: T -> P T P is injective on the commutant, where P projects
    onto H_0 = span{V_i xi}.  Membership failures raise ValidationError
    naming the offending entries.
    """
    require_cpn(rho, tol)
    _membership_check(rho, tol)
    dil = dilation if dilation is not None else dilate(rho, tol)
    basis = commutant(dil.rep, tol)
    v_all = np.hstack(dil.isometries)
    q = orth(v_all, tol)
    p = q @ q.conj().T
    if basis.dimension == 0:
        return ExtremalityReport(True, 0, 0)
    stack = np.stack([(p @ b @ p).ravel() for b in basis.basis], axis=1)
    rank = numerical_rank(stack, tol)
    return ExtremalityReport(rank == basis.dimension, basis.dimension, rank)


@dataclass(frozen=True, eq=False)
class ConvexDecomposition:
    """Nontrivial convex split beta * rho_1 + (1 - beta) * rho_2 = rho."""

    beta: float
    part1: CPnMap
    part2: CPnMap
    kernel_element: np.ndarray


def nonextreme_decomposition(rho: CPnMap, tol: float = 1e-9,
                             dilation: StinespringDilation | None = None) -> ConvexDecomposition:
    """Exhibit a certified convex decomposition of a non-extreme map matrix.

    From a Hermitian commutant element T with P T P = 0 and ||T|| = 1,
    the pair T_1 = I + T/2, T_2 = I - T/2 compresses to map matrices in
    the same unital class with (1/2) rho_{T_1} + (1/2) rho_{T_2} = rho,
    both differing from rho.  Raises ValidationError when rho is extreme.
    """
    require_cpn(rho, tol)
    _membership_check(rho, tol)
    dil = dilation if dilation is not None else dilate(rho, tol)
    basis = commutant(dil.rep, tol)
    v_all = np.hstack(dil.isometries)
    q = orth(v_all, tol)
    p = q @ q.conj().T
    stack = np.stack([(p @ b @ p).ravel() for b in basis.basis], axis=1)
    null = nullspace(stack, tol)
    if null.shape[1] == 0:
        raise ValidationError("map matrix is extreme; no decomposition exists")
    coeffs = null[:, 0]
    raw = sum(c * b for c, b in zip(coeffs, basis.basis))
    cand1 = herm(raw)
    cand2 = herm(1j * raw)
    t = cand1 if spectral_norm(cand1) >= spectral_norm(cand2) else cand2
    t = t / spectral_norm(t)
    eye = np.eye(dil.space_dim, dtype=complex)
    part1 = compress(dil, eye + 0.5 * t, tol)
    part2 = compress(dil, eye - 0.5 * t, tol)
    scale = cpn_scale(rho)
    avg = 0.5 * part1 + 0.5 * part2
    if cpn_distance(avg, rho) > tol * scale:
        raise CertificationError("decomposition does not average to the input")
    if cpn_distance(part1, rho) <= tol * scale or cpn_distance(part2, rho) <= tol * scale:
        raise CertificationError("decomposition is trivial")
    for part in (part1, part2):
        _membership_check(part, tol)
        require_cpn(part, tol)
    return ConvexDecomposition(0.5, part1, part2, t)


@dataclass(frozen=True, eq=False)
class ExtremeFamilySpec:
    """Data for the extreme construction: a pure unital base map and unitaries.

    unitaries[0] must be the unit of the domain.
    """

    base: LinearMap
    unitaries: tuple[AlgebraElement, ...]


def build_extreme_family(spec: ExtremeFamilySpec, tol: float = 1e-9) -> CPnMap:
    """rho_ij(a) = V* Phi(u_i)* Phi(a) Phi(u_j) V from a pure unital base.

    The base must be unital, completely positive and pure; each u_i must
    be unitary, with u_1 the unit.  The output is certified completely
    n-positive and pure, with pure unital diagonal entries and
    rho_ij(u_i u_j*) = I.
    """
    phi = spec.base
    alg = phi.domain
    m = phi.codomain_dim
    unit = alg.unit()
    if len(spec.unitaries) == 0:
        raise ValidationError("at least one unitary is required")
    if distance(spec.unitaries[0], unit) > tol * (1.0 + cstar_norm(unit)):
        raise ValidationError("the first unitary must be the unit")
    for idx, u in enumerate(spec.unitaries):
        if u.algebra != alg:
            raise ValidationError(f"unitary {idx} lives in a different algebra")
        if not is_unitary(u, tol):
            raise ValidationError(f"element {idx} is not unitary to tolerance")
    unital_dev = spectral_norm(apply_map(phi, unit) - np.eye(m))
    if unital_dev > tol * (1.0 + max(spectral_norm(b) for b in phi.choi_blocks)):
        raise ValidationError(f"base map is not unital (residual {unital_dev:.3e})")
    base_dil = dilate(as_cpn(phi), tol)
    if not is_pure(as_cpn(phi), tol, dilation=base_dil):
        raise ValidationError("base map is not pure")
    v = base_dil.isometries[0]
    reps = [rep_apply(base_dil.rep, u) for u in spec.unitaries]
    ws = [r @ v for r in reps]
    n = len(ws)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            images = [ws[i].conj().T @ img @ ws[j] for img in base_dil.rep.images]
            row.append(map_from_images(alg, m, images))
        rows.append(tuple(row))
    rho = CPnMap(tuple(rows))
    require_cpn(rho, tol)
    scale = cpn_scale(rho)
    eye = np.eye(m)
    for i in range(n):
        diag = as_cpn(rho.entries[i][i])
        if spectral_norm(apply_map(rho.entries[i][i], unit) - eye) > tol * scale:
            raise CertificationError(f"diagonal entry {i} is not unital")
        if not is_pure(diag, tol):
            raise CertificationError(f"diagonal entry {i} is not pure")
        for j in range(n):
            uij = spec.unitaries[i] @ spec.unitaries[j].adjoint()
            wit = apply_map(rho.entries[i][j], uij)
            if spectral_norm(wit - eye) > tol * scale:
                raise CertificationError(
                    f"witness rho_{i}{j}(u_i u_j*) deviates from the identity")
    if not is_pure(rho, tol):
        raise CertificationError("constructed map matrix is not pure")
    return rho
