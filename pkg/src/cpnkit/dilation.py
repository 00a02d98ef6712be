"""Minimal dilations of completely n-positive map matrices.

A dilation of an n x n map matrix [rho_ij] on A = (+)_k M_{d_k} with
codomain the m x m matrices consists of a *-representation Phi of A on
a finite-dimensional space H and operators V_1, ..., V_n : C^m -> H with

    rho_ij(a) = V_i* Phi(a) V_j        for all a, i, j,

minimal when the vectors Phi(a) V_i xi span H.  The production route
eigendecomposes each flattened Choi block C_k = sum_s w_s w_s*: the kept
eigenpairs give Kraus factors K_s (K_s[x, p] = w_s[p * n m + x]), the
representation block a_k (x) I_{r_k} acts on C^{d_k} (x) C^{r_k}, and
V[(k, p, s), x] = conj(K_s[x, p]).  A second, independent route builds
the same data from the Gram matrix of formal generators
(matrix unit alpha, slot i, basis vector u); it exists as a
cross-checking oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (AlgebraElement, CStarAlgebra, unit_index,
                      unit_index_table, unit_product_index)
from .errors import CertificationError, ValidationError
from .linalg import (herm, nearest_unitary, numerical_rank, orth,
                     solve_sandwich, spectral_norm)
from .maps import (CPnMap, as_cpn, cpn_distance, cpn_scale, flatten,
                   images_of, require_cpn)


@dataclass(frozen=True, eq=False)
class Representation:
    """*-representation of a CStarAlgebra by explicit matrix-unit images."""

    algebra: CStarAlgebra
    space_dim: int
    images: tuple[np.ndarray, ...]
    multiplicities: tuple[int, ...] | None = None

    def __post_init__(self):
        n = int(self.space_dim)
        if n < 0:
            raise ValidationError("space dimension must be nonnegative")
        object.__setattr__(self, "space_dim", n)
        images = tuple(np.array(m, dtype=complex) for m in self.images)
        if len(images) != self.algebra.dim:
            raise ValidationError(
                f"expected {self.algebra.dim} images, got {len(images)}")
        for idx, m in enumerate(images):
            if m.shape != (n, n):
                raise ValidationError(
                    f"image {idx} must have shape {(n, n)}, got {m.shape}")
            m.flags.writeable = False
        object.__setattr__(self, "images", images)
        if self.multiplicities is not None:
            object.__setattr__(self, "multiplicities",
                               tuple(int(r) for r in self.multiplicities))


def rep_apply(rep: Representation, a: AlgebraElement) -> np.ndarray:
    """Evaluate the representation on an algebra element."""
    if a.algebra != rep.algebra:
        raise ValidationError("element is not in the representation's algebra")
    out = np.zeros((rep.space_dim, rep.space_dim), dtype=complex)
    coords = a.coords()
    for c, img in zip(coords, rep.images):
        if c != 0:
            out += c * img
    return out


@dataclass(frozen=True)
class RepresentationReport:
    multiplicative_residual: float
    star_residual: float
    unital_residual: float

    def ok(self, tol: float, scale: float = 1.0) -> bool:
        bound = tol * scale
        return (self.multiplicative_residual <= bound
                and self.star_residual <= bound
                and self.unital_residual <= bound)


def verify_representation(rep: Representation, tol: float = 1e-9) -> RepresentationReport:
    """Residuals of the *-homomorphism axioms on matrix units."""
    alg = rep.algebra
    table = unit_index_table(alg)
    mult = 0.0
    for i in range(alg.dim):
        for j in range(alg.dim):
            prod = unit_product_index(alg, i, j)
            expect = rep.images[prod] if prod is not None \
                else np.zeros((rep.space_dim, rep.space_dim), dtype=complex)
            mult = max(mult, spectral_norm(rep.images[i] @ rep.images[j] - expect))
    star = 0.0
    for idx, (k, p, q) in enumerate(table):
        sidx = unit_index(alg, k, q, p)
        star = max(star, spectral_norm(rep.images[idx].conj().T - rep.images[sidx]))
    eye = np.eye(rep.space_dim, dtype=complex)
    unit_img = sum((rep.images[unit_index(alg, k, p, p)]
                    for k, d in enumerate(alg.block_dims) for p in range(d)),
                   start=np.zeros((rep.space_dim, rep.space_dim), dtype=complex))
    unital = spectral_norm(unit_img - eye)
    return RepresentationReport(mult, star, unital)


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """Representation plus the operators V_i realizing rho_ij = V_i* Phi(.) V_j."""

    rep: Representation
    isometries: tuple[np.ndarray, ...]
    source: CPnMap

    def __post_init__(self):
        vs = tuple(np.array(v, dtype=complex) for v in self.isometries)
        m = self.source.codomain_dim
        if len(vs) != self.source.n:
            raise ValidationError(
                f"expected {self.source.n} operators, got {len(vs)}")
        for i, v in enumerate(vs):
            if v.shape != (self.rep.space_dim, m):
                raise ValidationError(
                    f"operator {i} must have shape {(self.rep.space_dim, m)}, got {v.shape}")
            v.flags.writeable = False
        object.__setattr__(self, "isometries", vs)

    @property
    def space_dim(self) -> int:
        return self.rep.space_dim

    @property
    def n(self) -> int:
        return len(self.isometries)


def dilate(rho: CPnMap, tol: float = 1e-9, rank_tol: float | None = None) -> StinespringDilation:
    """Minimal dilation via eigendecomposition of the flattened Choi blocks.

    Eigenpairs with eigenvalue above rank_tol * (1 + block norm) are kept
    (rank_tol defaults to tol); the zero map yields a zero-dimensional,
    vacuously minimal dilation.  Raises PositivityError when rho is not
    completely n-positive to tol.
    """
    require_cpn(rho, tol)
    if rank_tol is None:
        rank_tol = tol
    n, m = rho.n, rho.codomain_dim
    alg = rho.domain
    flat = flatten(rho)
    kraus: list[list[np.ndarray]] = []
    mults: list[int] = []
    for d, c in zip(alg.block_dims, flat.choi_blocks):
        w, vecs = np.linalg.eigh(herm(c))
        cutoff = rank_tol * (1.0 + (float(np.abs(w).max()) if w.size else 0.0))
        keep = np.nonzero(w > cutoff)[0]
        ks = [np.sqrt(w[s]) * vecs[:, s].reshape(d, n * m).T for s in keep]
        kraus.append(ks)
        mults.append(len(ks))
    space_dim = sum(d * r for d, r in zip(alg.block_dims, mults))
    offsets = np.concatenate([[0], np.cumsum([d * r for d, r in zip(alg.block_dims, mults)])])
    images = []
    for k, d in enumerate(alg.block_dims):
        r = mults[k]
        lo, hi = int(offsets[k]), int(offsets[k + 1])
        for p in range(d):
            for q in range(d):
                img = np.zeros((space_dim, space_dim), dtype=complex)
                if r:
                    e = np.zeros((d, d))
                    e[p, q] = 1.0
                    img[lo:hi, lo:hi] = np.kron(e, np.eye(r))
                images.append(img)
    v = np.zeros((space_dim, n * m), dtype=complex)
    for k, d in enumerate(alg.block_dims):
        lo = int(offsets[k])
        r = mults[k]
        for s, ks in enumerate(kraus[k]):
            # ks has shape (n m, d); rows of V at (k, p, s) hold conj(ks[:, p])
            for p in range(d):
                v[lo + p * r + s, :] = ks[:, p].conj()
    rep = Representation(alg, space_dim, tuple(images), multiplicities=tuple(mults))
    isoms = tuple(v[:, i * m:(i + 1) * m] for i in range(n))
    return StinespringDilation(rep, isoms, rho)


def spanning_matrix(dil: StinespringDilation) -> np.ndarray:
    """Columns Phi(e_alpha) V_i xi_u ordered by (alpha, i, u)."""
    cols = []
    for img in dil.rep.images:
        for vi in dil.isometries:
            cols.append(img @ vi)
    if not cols:
        return np.zeros((dil.space_dim, 0), dtype=complex)
    return np.hstack(cols)


@dataclass(frozen=True)
class DilationReport:
    factor_residual: float
    span_dim: int
    space_dim: int
    minimal: bool
    scale: float

    def ok(self, tol: float) -> bool:
        return self.factor_residual <= tol * self.scale and self.minimal


def verify_dilation(rho: CPnMap, dil: StinespringDilation,
                    tol: float = 1e-9) -> DilationReport:
    """Factorization residual on matrix units, and minimality via span rank."""
    if dil.source.n != rho.n or dil.source.domain != rho.domain \
            or dil.source.codomain_dim != rho.codomain_dim:
        raise ValidationError("dilation and map have incompatible shapes")
    n = rho.n
    scale = cpn_scale(rho)
    entry_images = [[images_of(rho.entries[i][j]) for j in range(n)] for i in range(n)]
    worst = 0.0
    for idx in range(rho.domain.dim):
        img = dil.rep.images[idx]
        for i in range(n):
            left = dil.isometries[i].conj().T @ img
            for j in range(n):
                got = left @ dil.isometries[j]
                worst = max(worst, spectral_norm(got - entry_images[i][j][idx]))
    span = spanning_matrix(dil)
    span_dim = numerical_rank(span, tol)
    return DilationReport(worst, span_dim, dil.space_dim,
                          span_dim == dil.space_dim, scale)


def equivalence_residual(d1: StinespringDilation, d2: StinespringDilation,
                         u: np.ndarray) -> float:
    """max of ||U Phi_1(e) - Phi_2(e) U|| and ||U V_1i - V_2i||."""
    worst = 0.0
    for a, b in zip(d1.rep.images, d2.rep.images):
        worst = max(worst, spectral_norm(u @ a - b @ u))
    for va, vb in zip(d1.isometries, d2.isometries):
        worst = max(worst, spectral_norm(u @ va - vb))
    worst = max(worst, spectral_norm(u @ u.conj().T - np.eye(d2.space_dim)),
                spectral_norm(u.conj().T @ u - np.eye(d1.space_dim)))
    return worst


def unitary_equivalence(d1: StinespringDilation, d2: StinespringDilation,
                        tol: float = 1e-9) -> np.ndarray | None:
    """Unitary U with U Phi_1(.) = Phi_2(.) U and U V_1i = V_2i, if one exists.

    Returns None when the space dimensions differ.  Both inputs must be
    verified minimal dilations of a common map matrix; the unitary is the
    polar factor of the map sending the spanning family of d1 to that of
    d2.  Certification failure raises, never passes silently.
    """
    if d1.space_dim != d2.space_dim:
        return None
    if cpn_distance(d1.source, d2.source) > tol * cpn_scale(d1.source):
        raise ValidationError("dilations do not come from a common map matrix")
    for d in (d1, d2):
        report = verify_dilation(d.source, d, tol)
        if not report.ok(tol):
            raise ValidationError(
                "input is not a verified minimal dilation "
                f"(residual {report.factor_residual:.3e}, minimal {report.minimal})")
    if d1.space_dim == 0:
        return np.zeros((0, 0), dtype=complex)
    x1 = spanning_matrix(d1)
    x2 = spanning_matrix(d2)
    u = nearest_unitary(solve_sandwich(x1, x2))
    scale = cpn_scale(d1.source)
    res = equivalence_residual(d1, d2, u)
    if res > max(tol * scale, 1e3 * np.finfo(float).eps * scale * d1.space_dim):
        raise CertificationError(
            f"intertwining unitary certificate failed (residual {res:.3e})")
    return u


@dataclass(frozen=True)
class ProjectionSet:
    """Projections onto the subspaces generated by each slot of a dilation."""

    projections: tuple[np.ndarray, ...]
    dims: tuple[int, ...]
    commute_residual: float
    fix_residual: float


def component_projections(dil: StinespringDilation, tol: float = 1e-9) -> ProjectionSet:
    """P_i = projection onto span{Phi(e) V_i xi}; each lies in the commutant.

    Certifies [P_i, Phi(e)] = 0 and P_i V_i = V_i; failures raise.
    """
    projections = []
    dims = []
    commute = 0.0
    fix = 0.0
    for vi in dil.isometries:
        cols = [img @ vi for img in dil.rep.images]
        q = orth(np.hstack(cols) if cols else np.zeros((dil.space_dim, 0)), tol)
        p = q @ q.conj().T
        projections.append(p)
        dims.append(q.shape[1])
        for img in dil.rep.images:
            commute = max(commute, spectral_norm(p @ img - img @ p))
        fix = max(fix, spectral_norm(p @ vi - vi))
    scale = cpn_scale(dil.source)
    if max(commute, fix) > max(tol * scale, 1e3 * np.finfo(float).eps * scale * max(1, dil.space_dim)):
        raise CertificationError(
            f"component projection certificate failed (residuals {commute:.3e}, {fix:.3e})")
    return ProjectionSet(tuple(projections), tuple(dims), commute, fix)


def gram_matrix(rho: CPnMap) -> np.ndarray:
    """Gram matrix of the formal generators (alpha, i, u).

    G[(alpha, i, u), (beta, j, v)] = rho_ij(e_alpha* e_beta)[u, v]; built
    from the stored Choi data only, with no reference to any dilation.
    Positive semidefinite, and its rank equals the minimal dilation
    dimension.
    """
    alg = rho.domain
    n, m = rho.n, rho.codomain_dim
    table = unit_index_table(alg)
    entry_images = [[images_of(rho.entries[i][j]) for j in range(n)] for i in range(n)]
    size = alg.dim * n * m
    g = np.zeros((size, size), dtype=complex)
    for ai, (k1, p1, q1) in enumerate(table):
        for bi, (k2, p2, q2) in enumerate(table):
            # e_alpha* e_beta = delta_{k1 k2} delta_{p1 p2} e_{q1 q2}
            if k1 != k2 or p1 != p2:
                continue
            prod = unit_index(alg, k1, q1, q2)
            for i in range(n):
                for j in range(n):
                    blk = entry_images[i][j][prod]
                    rows = slice((ai * n + i) * m, (ai * n + i) * m + m)
                    colz = slice((bi * n + j) * m, (bi * n + j) * m + m)
                    g[rows, colz] = blk
    return g


def dilate_from_gram(rho: CPnMap, tol: float = 1e-9) -> StinespringDilation:
    """Independent dilation route through the generator Gram matrix.

    Orthonormalizes the formal generators by eigendecomposition of the
    Gram matrix, then reads the representation off the index action
    e . e_alpha and the V_i off the unit decomposition.  Kept as a
    cross-checking oracle; dilate() is the production route.
    """
    require_cpn(rho, tol)
    alg = rho.domain
    n, m = rho.n, rho.codomain_dim
    g = gram_matrix(rho)
    w, y = np.linalg.eigh(herm(g))
    cutoff = tol * (1.0 + (float(np.abs(w).max()) if w.size else 0.0))
    keep = np.nonzero(w > cutoff)[0]
    space_dim = len(keep)
    # columns of x are the generator coordinates in an orthonormal basis
    x = (np.sqrt(w[keep])[:, None] * y[:, keep].conj().T)
    table = unit_index_table(alg)
    size = alg.dim * n * m

    def gen_col(alpha: int, i: int, u: int) -> int:
        return (alpha * n + i) * m + u

    images = []
    for eps in range(alg.dim):
        shift = np.zeros((size, size), dtype=complex)
        for alpha in range(alg.dim):
            target = unit_product_index(alg, eps, alpha)
            if target is None:
                continue
            for i in range(n):
                for u in range(m):
                    shift[gen_col(target, i, u), gen_col(alpha, i, u)] = 1.0
        images.append(solve_sandwich(x, x @ shift))
    isoms = []
    for i in range(n):
        vi = np.zeros((space_dim, m), dtype=complex)
        for u in range(m):
            for k, d in enumerate(alg.block_dims):
                for p in range(d):
                    vi[:, u] += x[:, gen_col(unit_index(alg, k, p, p), i, u)]
        isoms.append(vi)
    rep = Representation(alg, space_dim, tuple(images))
    return StinespringDilation(rep, tuple(isoms), rho)


@dataclass(frozen=True)
class DirectSumReport:
    """Outcome of splitting a diagonal map matrix into a direct sum."""

    space_dim: int
    part_dims: tuple[int, ...]
    additive: bool
    unitary: np.ndarray
    residual: float


def diagonal_direct_sum_check(rho: CPnMap, tol: float = 1e-9) -> DirectSumReport:
    """For diagonal [rho_ij], compare dilate(rho) with the direct sum of
    the dilations of the diagonal entries.

    Raises ValidationError when an off-diagonal entry is nonzero beyond
    tol; certifies the intertwining unitary between the two dilations.
    """
    n, m = rho.n, rho.codomain_dim
    scale = cpn_scale(rho)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            off = max(spectral_norm(b) for b in rho.entries[i][j].choi_blocks)
            if off > tol * scale:
                raise ValidationError(
                    f"entry ({i}, {j}) is nonzero: map matrix is not diagonal")
    full = dilate(rho, tol)
    parts = [dilate(as_cpn(rho.entries[i][i]), tol) for i in range(n)]
    part_dims = tuple(p.space_dim for p in parts)
    total = sum(part_dims)
    offsets = np.concatenate([[0], np.cumsum(part_dims)])
    images = []
    for idx in range(rho.domain.dim):
        img = np.zeros((total, total), dtype=complex)
        for i, p in enumerate(parts):
            lo, hi = int(offsets[i]), int(offsets[i + 1])
            img[lo:hi, lo:hi] = p.rep.images[idx]
        images.append(img)
    isoms = []
    for i, p in enumerate(parts):
        vi = np.zeros((total, m), dtype=complex)
        lo, hi = int(offsets[i]), int(offsets[i + 1])
        vi[lo:hi, :] = p.isometries[0]
        isoms.append(vi)
    summed = StinespringDilation(Representation(rho.domain, total, tuple(images)),
                                 tuple(isoms), rho)
    u = unitary_equivalence(full, summed, tol)
    if u is None:
        raise CertificationError(
            f"direct-sum dilation dimension {total} differs from {full.space_dim}")
    res = equivalence_residual(full, summed, u)
    return DirectSumReport(full.space_dim, part_dims,
                           full.space_dim == total, u, res)
