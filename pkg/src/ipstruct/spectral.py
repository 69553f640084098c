"""Eigenstructure of channel superoperators.

The asymptotic behaviour of a trace-preserving map is governed by its
peripheral spectrum (eigenvalues on the unit circle).  This module extracts:

* fixed and rotating operator subspaces, for the map and its adjoint;
* the asymptotic projector, i.e. the time-averaged channel that projects
  onto the fixed-point space along the decaying directions;
* the projector onto the full peripheral (unit-modulus) subspace.

Eigenvalues are read off a complex Schur form; eigenvectors for peripheral
eigenvalues are recovered from SVD null spaces, which is safe because the
peripheral spectrum of a trace-preserving positive map is semisimple.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .channels import (
    QuantumChannel,
    Superoperator,
    to_superoperator,
)
from .errors import NumericalError
from .tolerances import DEFAULT_TOL, ToleranceConfig

__all__ = [
    "OperatorSpace",
    "SpectralData",
    "operator_space_from_span",
    "channel_spectrum",
    "fixed_space",
    "fixed_space_adjoint",
    "rotating_space",
    "rotating_space_adjoint",
    "asymptotic_projector",
    "peripheral_projector",
    "subspace_distance",
]


@dataclass(frozen=True)
class OperatorSpace:
    """A subspace of operator space with a Hilbert-Schmidt orthonormal basis."""

    dim: int
    basis: tuple[np.ndarray, ...]

    @property
    def size(self) -> int:
        return len(self.basis)

    def vec_matrix(self) -> np.ndarray:
        """``dim^2 x size`` matrix whose columns are the column-stacked basis."""
        if not self.basis:
            return np.zeros((self.dim**2, 0), dtype=complex)
        return np.column_stack([b.reshape(-1, order="F") for b in self.basis])

    def project_coefficients(self, x: np.ndarray) -> np.ndarray:
        """Hilbert-Schmidt components of ``x`` along the basis."""
        return np.array([np.trace(b.conj().T @ x) for b in self.basis])


@dataclass(frozen=True)
class SpectralData:
    """Eigen-decomposition of a superoperator.

    ``right_vectors`` / ``left_vectors`` hold vectorized eigenoperators in
    their columns (left vectors ``l`` satisfy ``l^dag M = lambda l^dag``).
    The complex Schur factors are retained for projector construction.
    """

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray
    schur_t: np.ndarray
    schur_z: np.ndarray


def operator_space_from_span(
    vectors: np.ndarray, dim: int, tol: ToleranceConfig = DEFAULT_TOL
) -> OperatorSpace:
    """Orthonormalize a set of vectorized operators (columns) into a space.

    Directions with singular value below ``tol.rank_rel`` times the largest
    are dropped, so linearly dependent inputs are harmless.
    """
    v = np.asarray(vectors, dtype=complex)
    if v.ndim != 2 or v.shape[0] != dim * dim:
        raise NumericalError(f"span matrix has shape {v.shape}, expected ({dim*dim}, k)")
    if v.shape[1] == 0:
        return OperatorSpace(dim=dim, basis=())
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    if s.size == 0 or s[0] == 0.0:
        return OperatorSpace(dim=dim, basis=())
    keep = s > tol.rank_rel * s[0]
    ops = tuple(u[:, i].reshape((dim, dim), order="F") for i in range(s.size) if keep[i])
    return OperatorSpace(dim=dim, basis=ops)


# ---------------------------------------------------------------------------
# spectrum
# ---------------------------------------------------------------------------

def _superop_matrix(ch: QuantumChannel | Superoperator | np.ndarray) -> tuple[np.ndarray, int]:
    if isinstance(ch, QuantumChannel):
        if not ch.is_square:
            raise NumericalError("spectral analysis requires a square channel")
        return to_superoperator(ch).matrix, ch.dim_in
    if isinstance(ch, Superoperator):
        if ch.dim_in != ch.dim_out:
            raise NumericalError("spectral analysis requires a square superoperator")
        return ch.matrix, ch.dim_in
    m = np.asarray(ch, dtype=complex)
    d = int(round(np.sqrt(m.shape[0])))
    return m, d


def channel_spectrum(ch, tol: ToleranceConfig = DEFAULT_TOL) -> SpectralData:
    """Full spectral data: eigenvalues from a Schur form, eigenvectors from
    a standard nonsymmetric eigensolve."""
    m, _ = _superop_matrix(ch)
    t, z = scipy.linalg.schur(m, output="complex")
    w, vl, vr = scipy.linalg.eig(m, left=True, right=True)
    return SpectralData(
        eigenvalues=np.diag(t).copy(),
        right_vectors=vr,
        left_vectors=vl,
        schur_t=t,
        schur_z=z,
    )


def _eigenvalues(m: np.ndarray) -> np.ndarray:
    t = scipy.linalg.schur(m, output="complex")[0]
    return np.diag(t).copy()


def _cluster(values: np.ndarray, width: float) -> list[np.ndarray]:
    """Greedy clustering of complex values into groups of pairwise distance
    at most ``width`` (chained)."""
    idx = list(range(len(values)))
    clusters: list[list[int]] = []
    used = [False] * len(values)
    for i in idx:
        if used[i]:
            continue
        group = [i]
        used[i] = True
        frontier = [i]
        while frontier:
            j = frontier.pop()
            for k in idx:
                if not used[k] and abs(values[j] - values[k]) <= width:
                    used[k] = True
                    group.append(k)
                    frontier.append(k)
        clusters.append(np.array(group))
    return clusters


def _nullspace_with_dim(a: np.ndarray, m: int, tol: ToleranceConfig) -> np.ndarray:
    """Orthonormal basis (columns) for the ``m``-dimensional near-null space of ``a``."""
    u, s, vh = np.linalg.svd(a)
    if m > len(s):
        raise NumericalError(f"requested null dimension {m} exceeds matrix size")
    cutoff_ok = s[-m] <= max(tol.subspace, tol.rank_rel * s[0]) * 10
    if not cutoff_ok:
        raise NumericalError(
            "eigenspace extraction failed: singular value "
            f"{s[-m]:.3e} too large for a null direction",
            residuals={"singular_value": float(s[-m])},
        )
    return vh[len(s) - m:].conj().T


def _peripheral_groups(m: np.ndarray, tol: ToleranceConfig):
    """Cluster unit-modulus eigenvalues; returns (list of (lambda, multiplicity),
    eigenvalues array)."""
    w = _eigenvalues(m)
    per = w[np.abs(np.abs(w) - 1.0) < tol.peripheral]
    groups = []
    for cluster in _cluster(per, tol.peripheral):
        vals = per[cluster]
        groups.append((complex(np.mean(vals)), len(cluster)))
    return groups, w


def _eigenspace(m: np.ndarray, lam: complex, mult: int, tol: ToleranceConfig) -> np.ndarray:
    return _nullspace_with_dim(m - lam * np.eye(m.shape[0]), mult, tol)


def _fixed_multiplicity(m: np.ndarray, tol: ToleranceConfig) -> int:
    w = _eigenvalues(m)
    mult = int(np.sum(np.abs(w - 1.0) < tol.peripheral))
    if mult == 0:
        raise NumericalError("no eigenvalue 1 found; is the map trace preserving?")
    return mult


def fixed_space(ch, tol: ToleranceConfig = DEFAULT_TOL) -> OperatorSpace:
    """Operators with ``E(X) = X``, as an orthonormal operator space."""
    m, d = _superop_matrix(ch)
    mult = _fixed_multiplicity(m, tol)
    basis = _eigenspace(m, 1.0, mult, tol)
    return operator_space_from_span(basis, d, tol)


def fixed_space_adjoint(ch, tol: ToleranceConfig = DEFAULT_TOL) -> OperatorSpace:
    """Fixed points of the adjoint map (left fixed points of ``E``)."""
    m, d = _superop_matrix(ch)
    mult = _fixed_multiplicity(m, tol)
    basis = _eigenspace(m.conj().T, 1.0, mult, tol)
    return operator_space_from_span(basis, d, tol)


def _rotating_span(m: np.ndarray, d: int, adjoint_side: bool, tol: ToleranceConfig) -> OperatorSpace:
    groups, _ = _peripheral_groups(m, tol)
    if not groups:
        raise NumericalError("no unit-modulus eigenvalues found")
    blocks = []
    for lam, mult in groups:
        if adjoint_side:
            blocks.append(_eigenspace(m.conj().T, np.conj(lam), mult, tol))
        else:
            blocks.append(_eigenspace(m, lam, mult, tol))
    return operator_space_from_span(np.column_stack(blocks), d, tol)


def rotating_space(ch, tol: ToleranceConfig = DEFAULT_TOL) -> OperatorSpace:
    """Span of eigenoperators with unit-modulus eigenvalues (``|lambda| = 1``
    within ``tol.peripheral``)."""
    m, d = _superop_matrix(ch)
    return _rotating_span(m, d, adjoint_side=False, tol=tol)


def rotating_space_adjoint(ch, tol: ToleranceConfig = DEFAULT_TOL) -> OperatorSpace:
    m, d = _superop_matrix(ch)
    return _rotating_span(m, d, adjoint_side=True, tol=tol)


# ---------------------------------------------------------------------------
# spectral projectors
# ---------------------------------------------------------------------------

def asymptotic_projector(ch, tol: ToleranceConfig = DEFAULT_TOL) -> Superoperator:
    """The time-averaged channel: spectral projector onto the fixed-point
    space along all other spectral components.

    Built from the eigenvalue-1 right/left eigenspaces ``R``, ``L`` as
    ``R (L^dag R)^{-1} L^dag``.

    Raises:
        NumericalError: if the right/left pairing is numerically singular.
    """
    m, d = _superop_matrix(ch)
    mult = _fixed_multiplicity(m, tol)
    r = _eigenspace(m, 1.0, mult, tol)
    l = _eigenspace(m.conj().T, 1.0, mult, tol)
    gram = l.conj().T @ r
    cond = np.linalg.cond(gram)
    if not np.isfinite(cond) or cond > 1e12:
        raise NumericalError(
            "eigenvalue-1 right/left eigenvector pairing is numerically singular",
            residuals={"pairing_condition": float(cond)},
        )
    proj = r @ np.linalg.solve(gram, l.conj().T)
    return Superoperator(dim_in=d, dim_out=d, matrix=proj)


def peripheral_projector(ch, tol: ToleranceConfig = DEFAULT_TOL) -> Superoperator:
    """Spectral projector onto the full unit-modulus subspace.

    Uses an ordered complex Schur form to separate peripheral from interior
    eigenvalues, then solves a Sylvester equation for the coupling block.

    Raises:
        NumericalError: if interior eigenvalues crowd the unit circle
            (cluster gap below ``tol.spectral_gap``), which would make the
            separation meaningless.
    """
    m, d = _superop_matrix(ch)

    def is_peripheral(lam):
        return bool(abs(abs(lam) - 1.0) < tol.peripheral)

    t, z, sdim = scipy.linalg.schur(m, output="complex", sort=is_peripheral)
    n = m.shape[0]
    if sdim == 0:
        raise NumericalError("no unit-modulus eigenvalues found")
    interior = np.diag(t)[sdim:]
    if interior.size:
        gap = 1.0 - float(np.max(np.abs(interior)))
        if gap < tol.spectral_gap:
            raise NumericalError(
                "peripheral spectrum is not separated from the interior",
                residuals={"cluster_gap": gap},
            )
    if sdim == n:
        proj = np.eye(n, dtype=complex)
    else:
        a = t[:sdim, :sdim]
        b = t[sdim:, sdim:]
        c = t[:sdim, sdim:]
        # spectral projector of [[A, C], [0, B]] onto the A-block is
        # [[I, X], [0, 0]] with A X - X B = C
        x = scipy.linalg.solve_sylvester(a, -b, c)
        block = np.zeros((n, n), dtype=complex)
        block[:sdim, :sdim] = np.eye(sdim)
        block[:sdim, sdim:] = x
        proj = z @ block @ z.conj().T
    return Superoperator(dim_in=d, dim_out=d, matrix=proj)


def subspace_distance(a: OperatorSpace | np.ndarray, b: OperatorSpace | np.ndarray) -> float:
    """Operator-norm distance between orthogonal projectors onto two spans.

    Accepts operator spaces or raw matrices whose columns span the spaces.
    Returns 1.0-scale values for genuinely different spans and ~0 for equal
    ones; spans of different dimension always differ.
    """
    def proj(x):
        if isinstance(x, OperatorSpace):
            m = x.vec_matrix()
        else:
            m = np.asarray(x, dtype=complex)
        if m.shape[1] == 0:
            return np.zeros((m.shape[0], m.shape[0]), dtype=complex)
        q, _ = np.linalg.qr(m)
        return q @ q.conj().T

    return float(np.linalg.norm(proj(a) - proj(b), 2))
