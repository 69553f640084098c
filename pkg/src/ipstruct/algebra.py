"""Matrix *-algebras: recognition, commutants, and canonical decomposition.

A finite-dimensional *-algebra of operators is unitarily equivalent to a
direct sum of full matrix factors with multiplicity,

    A  ~=  sum_k  M_{d_k} (x) 1_{n_k} ,

and this module recovers that shape numerically.  The decomposition strategy
is randomized but seed-deterministic: a generic Hermitian element of the
center splits the support into minimal central sectors, and a generic
Hermitian element of each restricted factor pairs its eigenspaces into the
tensor-product coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DecompositionError, NumericalError
from .spectral import OperatorSpace, operator_space_from_span, subspace_distance
from .tolerances import DEFAULT_TOL, ToleranceConfig

__all__ = [
    "AlgebraCheck",
    "Sector",
    "AlgebraDecomposition",
    "is_algebra",
    "commutant",
    "canonical_decompose",
    "verify_decomposition",
]


@dataclass(frozen=True)
class AlgebraCheck:
    """Result of :func:`is_algebra`; truthiness follows ``closed``."""

    closed: bool
    worst_residual: float
    worst_pair: tuple[int, int] | None

    def __bool__(self) -> bool:
        return self.closed


@dataclass(frozen=True)
class Sector:
    """One factor ``M_d (x) 1_n`` of an algebra.

    ``isometry`` has shape ``(ambient_dim, d * n)``; its columns are ordered
    factor-major, so algebra elements are ``isometry @ kron(M, eye(n)) @
    isometry^dag``.
    """

    d: int
    n: int
    isometry: np.ndarray


@dataclass(frozen=True)
class AlgebraDecomposition:
    ambient_dim: int
    sectors: tuple[Sector, ...]
    support_projector: np.ndarray

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(s.d for s in self.sectors)

    @property
    def cofactors(self) -> tuple[int, ...]:
        return tuple(s.n for s in self.sectors)

    @property
    def algebra_dim(self) -> int:
        return sum(s.d * s.d for s in self.sectors)

    def support_rank(self) -> int:
        return sum(s.d * s.n for s in self.sectors)

    def element(self, blocks) -> np.ndarray:
        """Assemble the algebra element with factor blocks ``blocks[k]``."""
        out = np.zeros((self.ambient_dim, self.ambient_dim), dtype=complex)
        for sector, m in zip(self.sectors, blocks):
            out += sector.isometry @ np.kron(np.asarray(m, dtype=complex),
                                             np.eye(sector.n)) @ sector.isometry.conj().T
        return out


# ---------------------------------------------------------------------------
# recognition
# ---------------------------------------------------------------------------

def is_algebra(space: OperatorSpace, tol: ToleranceConfig = DEFAULT_TOL) -> AlgebraCheck:
    """Check closure of a span under products and adjoints.

    Every pairwise product of basis elements (and every adjoint) is projected
    back onto the span; the certificate carries the worst projection residual
    and the offending pair.  Pair ``(i, -1)`` denotes the adjoint of basis
    element ``i``.
    """
    if space.size == 0:
        return AlgebraCheck(closed=True, worst_residual=0.0, worst_pair=None)
    basis_mat = space.vec_matrix()
    gram = basis_mat.conj().T @ basis_mat
    if np.max(np.abs(gram - np.eye(space.size))) > 1e-8:
        raise NumericalError("operator space basis is not orthonormal")

    def residual(op: np.ndarray) -> float:
        v = op.reshape(-1, order="F")
        coeff = basis_mat.conj().T @ v
        return float(np.linalg.norm(v - basis_mat @ coeff))

    worst = 0.0
    worst_pair: tuple[int, int] | None = None
    for i, a in enumerate(space.basis):
        r = residual(a.conj().T)
        if r > worst:
            worst, worst_pair = r, (i, -1)
        for j, b in enumerate(space.basis):
            r = residual(a @ b)
            if r > worst:
                worst, worst_pair = r, (i, j)
    return AlgebraCheck(closed=worst <= tol.subspace, worst_residual=worst,
                        worst_pair=worst_pair)


def commutant(space: OperatorSpace, tol: ToleranceConfig = DEFAULT_TOL) -> OperatorSpace:
    """All operators (on the same ambient space) commuting with every basis
    element, found as the joint null space of the stacked commutator maps."""
    d = space.dim
    if space.size == 0:
        return operator_space_from_span(np.eye(d * d, dtype=complex), d, tol)
    eye = np.eye(d)
    rows = []
    for b in space.basis:
        # vec([B, X]) = (1 kron B - B^T kron 1) vec(X) in column stacking
        rows.append(np.kron(eye, b) - np.kron(b.T, eye))
    stacked = np.vstack(rows)
    u, s, vh = np.linalg.svd(stacked)
    cut = max(tol.subspace, (s[0] if s.size else 0.0) * tol.rank_rel)
    null_dim = int(np.sum(s <= cut)) + (stacked.shape[1] - len(s) if stacked.shape[1] > len(s) else 0)
    if null_dim == 0:
        return OperatorSpace(dim=d, basis=())
    basis = vh[len(vh) - null_dim:].conj().T
    return operator_space_from_span(basis, d, tol)


# ---------------------------------------------------------------------------
# canonical decomposition
# ---------------------------------------------------------------------------

def _support_basis(space: OperatorSpace, tol: ToleranceConfig) -> np.ndarray:
    acc = np.zeros((space.dim, space.dim), dtype=complex)
    for b in space.basis:
        acc += b @ b.conj().T + b.conj().T @ b
    w, v = np.linalg.eigh((acc + acc.conj().T) / 2.0)
    top = np.max(np.abs(w)) if w.size else 0.0
    keep = w > tol.rank_rel * top if top > 0 else np.zeros_like(w, dtype=bool)
    cols = v[:, keep]
    return cols[:, ::-1]


def _intersect_spans(u1: np.ndarray, u2: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Intersection of two subspaces given by orthonormal column bases."""
    if u1.shape[1] == 0 or u2.shape[1] == 0:
        return np.zeros((u1.shape[0], 0), dtype=complex)
    p1 = u1 @ u1.conj().T
    p2 = u2 @ u2.conj().T
    h = (np.eye(u1.shape[0]) - p1) + (np.eye(u1.shape[0]) - p2)
    w, v = np.linalg.eigh((h + h.conj().T) / 2.0)
    keep = w < tol.subspace * 10
    return v[:, keep]


def _cluster_real(values: np.ndarray, width: float) -> list[np.ndarray]:
    order = np.argsort(values)
    groups: list[list[int]] = [[int(order[0])]]
    for idx in order[1:]:
        if values[idx] - values[groups[-1][-1]] <= width:
            groups[-1].append(int(idx))
        else:
            groups.append([int(idx)])
    return [np.array(g) for g in groups]


def _random_hermitian_in(vec_basis: np.ndarray, dim: int, rng: np.random.Generator) -> np.ndarray:
    k = vec_basis.shape[1]
    coeff = rng.standard_normal(k) + 1j * rng.standard_normal(k)
    z = (vec_basis @ coeff).reshape((dim, dim), order="F")
    return (z + z.conj().T) / 2.0


def _near_integer(value: float, guard: float, what: str) -> int:
    nearest = int(round(value))
    if abs(value - nearest) > guard:
        raise DecompositionError(
            f"{what} = {value:.6f} is not close to an integer",
            residuals={"integer_distance": abs(value - nearest)},
        )
    return nearest


def canonical_decompose(
    space: OperatorSpace,
    seed: int = 0,
    tol: ToleranceConfig = DEFAULT_TOL,
    _attempts: int = 3,
) -> AlgebraDecomposition:
    """Decompose a *-algebra span into matrix factors with multiplicity.

    The input span must be closed under products and adjoints and contain
    its own support projector (the algebra unit).  The sector list is sorted
    descending by factor dimension, then by multiplicity, and the result is
    deterministic for a fixed ``seed``.

    Raises:
        DecompositionError: when eigenvalue clustering stays ambiguous after
            resampling, or recovered dimensions fail the integer guard.
    """
    check = is_algebra(space, tol)
    if not check:
        raise DecompositionError(
            "span is not closed under multiplication "
            f"(worst residual {check.worst_residual:.3e} at pair {check.worst_pair})",
            residuals={"closure_residual": check.worst_residual},
        )
    d_amb = space.dim
    if space.size == 0:
        raise DecompositionError("cannot decompose the zero algebra")

    v_supp = _support_basis(space, tol)
    r = v_supp.shape[1]
    compressed = [v_supp.conj().T @ b @ v_supp for b in space.basis]
    comp_space = operator_space_from_span(
        np.column_stack([c.reshape(-1, order="F") for c in compressed]), r, tol
    )
    if comp_space.size != space.size:
        raise DecompositionError(
            "span dimension changed under support compression",
            residuals={"before": float(space.size), "after": float(comp_space.size)},
        )

    comm = commutant(comp_space, tol)
    center_vecs = _intersect_spans(comp_space.vec_matrix(), comm.vec_matrix(), tol)
    n_sectors = center_vecs.shape[1]
    if n_sectors == 0:
        raise DecompositionError("algebra has an empty center; is the unit present?")

    rng = np.random.default_rng(seed)
    last_error: DecompositionError | None = None
    for _ in range(_attempts):
        try:
            sectors = _decompose_once(comp_space, center_vecs, n_sectors, r, rng, tol)
        except DecompositionError as exc:
            last_error = exc
            continue
        lifted = tuple(
            Sector(d=s.d, n=s.n, isometry=v_supp @ s.isometry) for s in sectors
        )
        ordered = tuple(sorted(lifted, key=lambda s: (-s.d, -s.n)))
        dec = AlgebraDecomposition(
            ambient_dim=d_amb,
            sectors=ordered,
            support_projector=v_supp @ v_supp.conj().T,
        )
        if dec.algebra_dim != space.size:
            raise DecompositionError(
                f"sector dimensions sum to {dec.algebra_dim}, span has {space.size}",
                residuals={"algebra_dim": float(dec.algebra_dim)},
            )
        if dec.support_rank() != r:
            raise DecompositionError(
                f"sector sizes sum to {dec.support_rank()}, support has rank {r}"
            )
        report = verify_decomposition(space, dec, tol)
        if report["max_residual"] > tol.subspace:
            last_error = DecompositionError(
                "decomposition failed verification", residuals=report
            )
            continue
        return dec
    raise last_error or DecompositionError("algebra decomposition failed")


def _decompose_once(comp_space, center_vecs, n_sectors, r, rng, tol):
    # 1. split the support with a generic Hermitian central element
    for _ in range(4):
        h = _random_hermitian_in(center_vecs, r, rng)
        if np.linalg.norm(h) > 1e-10:
            break
    w, v = np.linalg.eigh(h)
    spread = float(w[-1] - w[0]) if len(w) > 1 else 0.0
    width = max(tol.cluster_rel * max(spread, 1.0), 1e-12)
    clusters = _cluster_real(w, width)
    if len(clusters) != n_sectors:
        raise DecompositionError(
            f"central element produced {len(clusters)} clusters, expected {n_sectors}",
            residuals={"clusters": float(len(clusters))},
        )

    sectors = []
    for cluster in clusters:
        q = v[:, cluster]  # r x m_k
        m_k = q.shape[1]
        local = [q.conj().T @ b @ q for b in comp_space.basis]
        local_space = operator_space_from_span(
            np.column_stack([c.reshape(-1, order="F") for c in local]), m_k, tol
        )
        d_k = _near_integer(np.sqrt(local_space.size), tol.integer_guard,
                            "sqrt(sector algebra dimension)")
        if d_k == 0:
            raise DecompositionError("sector carries the zero algebra")
        n_k = _near_integer(m_k / d_k, tol.integer_guard, "sector multiplicity")
        iso_local = _sector_isometry(local_space, d_k, n_k, rng, tol)
        sectors.append(Sector(d=d_k, n=n_k, isometry=q @ iso_local))
    return sectors


def _sector_isometry(local_space: OperatorSpace, d: int, n: int,
                     rng: np.random.Generator, tol: ToleranceConfig) -> np.ndarray:
    """Coordinates in which a single-factor algebra reads ``M_d (x) 1_n``.

    A generic Hermitian algebra element has ``d`` eigenvalues of multiplicity
    ``n``; its eigenspaces are the factor "rows".  Partial isometries taken
    from the algebra transport an orthonormal basis of the first eigenspace
    to all the others, fixing the tensor alignment.
    """
    m = d * n
    if d == 1:
        # abelian factor: any orthonormal basis of the sector works
        return np.eye(m, dtype=complex)
    vec_basis = local_space.vec_matrix()
    h = _random_hermitian_in(vec_basis, m, rng)
    w, v = np.linalg.eigh(h)
    spread = float(w[-1] - w[0]) if len(w) > 1 else 0.0
    width = max(tol.cluster_rel * max(spread, 1.0), 1e-12)
    clusters = _cluster_real(w, width)
    if len(clusters) != d or any(len(c) != n for c in clusters):
        raise DecompositionError(
            "sector element eigenvalues did not split into equal multiplets",
            residuals={"clusters": float(len(clusters))},
        )
    eig_blocks = [v[:, c] for c in clusters]

    coeff = rng.standard_normal(local_space.size) + 1j * rng.standard_normal(local_space.size)
    t = (vec_basis @ coeff).reshape((m, m), order="F")

    w1 = eig_blocks[0]
    columns = [w1]
    for a in range(1, d):
        pa = eig_blocks[a] @ eig_blocks[a].conj().T
        x = pa @ t @ w1
        u, s, vh = np.linalg.svd(x, full_matrices=False)
        if s.size < n or s[-1] < 1e-8 * max(s[0], 1e-30):
            raise DecompositionError(
                "algebra transport between eigenspaces is rank deficient",
                residuals={"min_singular": float(s[-1]) if s.size else 0.0},
            )
        columns.append(u @ vh)
    return np.column_stack(columns)


def verify_decomposition(space: OperatorSpace, dec: AlgebraDecomposition,
                         tol: ToleranceConfig = DEFAULT_TOL) -> dict[str, float]:
    """Residuals certifying a decomposition against the original span.

    Checks isometry orthonormality, mutual sector orthogonality, and that
    the span rebuilt from matrix units equals the input span.
    """
    iso_res = 0.0
    orth_res = 0.0
    for i, s in enumerate(dec.sectors):
        v = s.isometry
        iso_res = max(iso_res, float(np.max(np.abs(v.conj().T @ v - np.eye(s.d * s.n)))))
        for other in dec.sectors[i + 1:]:
            orth_res = max(orth_res, float(np.max(np.abs(v.conj().T @ other.isometry))))

    columns = []
    for s in dec.sectors:
        v = s.isometry
        for a in range(s.d):
            for b in range(s.d):
                unit = np.zeros((s.d, s.d), dtype=complex)
                unit[a, b] = 1.0
                op = v @ np.kron(unit, np.eye(s.n)) @ v.conj().T
                columns.append(op.reshape(-1, order="F"))
    rebuilt = np.column_stack(columns)
    recon = subspace_distance(space.vec_matrix(), rebuilt)

    report = {
        "isometry_residual": iso_res,
        "sector_orthogonality": orth_res,
        "reconstruction_distance": recon,
    }
    report["max_residual"] = max(report.values())
    return report
