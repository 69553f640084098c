"""Preserved structures of a channel: noiseless, rotated, recoverable.

The fixed points of a trace-preserving map form a distorted matrix algebra:
restricted to their support they are unitarily equivalent to

    sum_k  M_{d_k} (x) tau_k ,

where each ``tau_k`` is a fixed density operator on a noise-full cofactor.
This module computes that structure for three notions of preservation:

* ``noiseless``            -- fixed points of the channel itself;
* ``unitarily-noiseless``  -- the rotating (unit-modulus eigenvalue) span,
  preserved up to a recurring unitary;
* ``unconditional``        -- fixed points of ``R_hat o E`` where ``R_hat``
  is the recovery built from the channel applied to the identity, the
  unique structure that survives without initialization control.

It also builds transpose-channel recovery maps for arbitrary support
projectors and checks the leak-in condition for initialization-free use.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .algebra import AlgebraDecomposition, Sector, canonical_decompose, is_algebra
from .channels import (
    QuantumChannel,
    Superoperator,
    adjoint,
    apply_channel,
    apply_superoperator,
    channel_from_kraus,
    compose,
    is_projector,
    is_unital,
    orthonormal_range_basis,
    projector_onto_support,
    to_superoperator,
)
from .errors import DecompositionError, NumericalError, ValidationError
from .spectral import (
    OperatorSpace,
    asymptotic_projector,
    fixed_space,
    fixed_space_adjoint,
    operator_space_from_span,
    peripheral_projector,
    rotating_space,
    rotating_space_adjoint,
)
from .tolerances import DEFAULT_TOL, ToleranceConfig

__all__ = [
    "FixedPointStructure",
    "InitializationFreeReport",
    "transpose_channel",
    "unconditional_recovery",
    "noiseless_structure",
    "unitarily_noiseless_structure",
    "unconditional_structure",
    "unitarily_correctable_structure_unital",
    "fixed_point_structure",
    "initialization_free_check",
]


@dataclass(frozen=True)
class FixedPointStructure:
    """A distorted-algebra structure ``sum_k M_{d_k} (x) tau_k``.

    ``support_projector`` lives on the analyzed (input) space; sector
    isometries are carried by ``algebra``; ``distortion_states`` aligns with
    ``algebra.sectors``.  ``kind`` is one of ``"noiseless"``,
    ``"unitarily-noiseless"``, ``"unconditional"``.
    """

    kind: str
    support_projector: np.ndarray
    algebra: AlgebraDecomposition
    distortion_states: tuple[np.ndarray, ...]
    residuals: Mapping[str, float]

    @property
    def shape(self) -> tuple[int, ...]:
        return self.algebra.shape

    @property
    def cofactors(self) -> tuple[int, ...]:
        return self.algebra.cofactors

    @property
    def support_rank(self) -> int:
        return self.algebra.support_rank()

    def sample_state(self, blocks, weights=None) -> np.ndarray:
        """Assemble ``sum_k p_k V_k (blocks[k] (x) tau_k) V_k^dag``."""
        sectors = self.algebra.sectors
        if weights is None:
            weights = [1.0 / len(sectors)] * len(sectors)
        out = np.zeros((self.algebra.ambient_dim,) * 2, dtype=complex)
        for w, sector, m, tau in zip(weights, sectors, blocks, self.distortion_states):
            out += w * sector.isometry @ np.kron(np.asarray(m, dtype=complex), tau) \
                @ sector.isometry.conj().T
        return out


@dataclass(frozen=True)
class InitializationFreeReport:
    """Per-Kraus leak-in residuals ``|P_k K_i (1 - P0)|`` for one sector."""

    initialization_free: bool
    kraus_residuals: tuple[float, ...]

    def __bool__(self) -> bool:
        return self.initialization_free


# ---------------------------------------------------------------------------
# recovery maps
# ---------------------------------------------------------------------------

def _pinv_sqrt(a: np.ndarray, tol: ToleranceConfig) -> np.ndarray:
    """Pseudo-inverse square root of a PSD matrix on its support."""
    h = (a + a.conj().T) / 2.0
    w, v = np.linalg.eigh(h)
    top = float(np.max(np.abs(w))) if w.size else 0.0
    inv = np.zeros_like(w)
    keep = w > tol.rank_rel * top if top > 0 else np.zeros_like(w, dtype=bool)
    inv[keep] = 1.0 / np.sqrt(w[keep])
    return (v * inv) @ v.conj().T


def transpose_channel(ch: QuantumChannel, projector: np.ndarray,
                      tol: ToleranceConfig = DEFAULT_TOL) -> QuantumChannel:
    """Recovery map for a supported subspace: normalize, reverse, project.

    For support projector ``P`` the Kraus operators are
    ``P K_i^dag E(P)^{-1/2}`` (pseudo-inverse square root on the support of
    ``E(P)``).  Composed with the channel, the result acts unitally on the
    subspace: it maps ``P`` back to ``P``.

    Raises:
        ValidationError: if ``projector`` has the wrong shape or is not an
            orthogonal projector.
        NumericalError: if the channel annihilates the subspace
            (``E(P) = 0``), in which case no recovery map exists.
    """
    p = np.asarray(projector, dtype=complex)
    if p.shape != (ch.dim_in, ch.dim_in):
        raise ValidationError(
            f"projector shape {p.shape} does not match channel input {ch.dim_in}"
        )
    if not is_projector(p, tol):
        raise ValidationError("support matrix is not an orthogonal projector")
    image = apply_channel(ch, p)
    mass = float(np.abs(np.trace(image)))
    if mass <= tol.equality:
        raise NumericalError(
            "channel annihilates the subspace; no recovery map exists",
            residuals={"image_mass": mass},
        )
    norm = _pinv_sqrt(image, tol)
    ks = [p @ k.conj().T @ norm for k in ch.kraus]
    return channel_from_kraus(ks, tol=tol)


def unconditional_recovery(ch: QuantumChannel, tol: ToleranceConfig = DEFAULT_TOL) -> QuantumChannel:
    """The input-blind recovery ``E^dag(E(1)^{-1/2} . E(1)^{-1/2})``.

    This is the transpose channel taken over the full input space; for a
    unital channel it reduces to the adjoint.
    """
    return transpose_channel(ch, np.eye(ch.dim_in, dtype=complex), tol=tol)


# ---------------------------------------------------------------------------
# structure pipelines
# ---------------------------------------------------------------------------

def _partial_trace_factor(m: np.ndarray, d: int, n: int) -> np.ndarray:
    """Trace out the ``d``-dimensional factor of a ``(d*n) x (d*n)`` matrix."""
    return np.einsum("aiaj->ij", m.reshape(d, n, d, n))


def _structure_from_spaces(
    right: OperatorSpace,
    left: OperatorSpace,
    projector_sup: Superoperator,
    fixedness_map: Callable[[np.ndarray], np.ndarray],
    kind: str,
    seed: int,
    tol: ToleranceConfig,
) -> FixedPointStructure:
    d = right.dim
    if right.size != left.size:
        raise NumericalError(
            f"right/left eigenspace dimensions differ ({right.size} vs {left.size})"
        )
    if right.size == 0:
        raise NumericalError("empty fixed space; is the map trace preserving?")

    # support of the preserved span
    acc = np.zeros((d, d), dtype=complex)
    for b in right.basis:
        acc += b @ b.conj().T + b.conj().T @ b
    p0 = projector_onto_support(acc, tol)
    vs = orthonormal_range_basis(p0, tol)
    r = vs.shape[1]

    # compress the adjoint-side span onto the support; this is the algebra
    compressed = [vs.conj().T @ x @ vs for x in left.basis]
    alg_space = operator_space_from_span(
        np.column_stack([c.reshape(-1, order="F") for c in compressed]), r, tol
    )
    if alg_space.size != right.size:
        raise NumericalError(
            "projected adjoint fixed space lost dimensions "
            f"({alg_space.size} vs {right.size})"
        )
    closure = is_algebra(alg_space, tol)
    if not closure:
        raise DecompositionError(
            "projected fixed space of the adjoint is not multiplicatively closed",
            residuals={"closure_residual": closure.worst_residual},
        )

    dec_local = canonical_decompose(alg_space, seed=seed, tol=tol)
    sectors = tuple(
        Sector(d=s.d, n=s.n, isometry=vs @ s.isometry) for s in dec_local.sectors
    )
    dec = AlgebraDecomposition(
        ambient_dim=d, sectors=sectors, support_projector=p0
    )

    # distortion states: average a seeded pure state on each factor and trace
    # the factor out; cross-check independence from the probe state
    rng = np.random.default_rng(seed + 1)
    taus = []
    tau_cross = 0.0
    for sector in sectors:
        samples = []
        for _ in range(2):
            psi = rng.standard_normal(sector.d) + 1j * rng.standard_normal(sector.d)
            psi /= np.linalg.norm(psi)
            probe = sector.isometry @ np.kron(np.outer(psi, psi.conj()),
                                              np.eye(sector.n) / sector.n) \
                @ sector.isometry.conj().T
            image = apply_superoperator(projector_sup, probe)
            m = sector.isometry.conj().T @ image @ sector.isometry
            tau = _partial_trace_factor(m, sector.d, sector.n)
            tau = (tau + tau.conj().T) / 2.0
            tr = float(np.real(np.trace(tau)))
            if abs(tr - 1.0) > 1e-6:
                raise NumericalError(
                    f"distortion state trace {tr:.6f} is far from 1",
                    residuals={"tau_trace": tr},
                )
            samples.append(tau / tr)
        tau_cross = max(tau_cross, float(np.max(np.abs(samples[0] - samples[1]))))
        if tau_cross > tol.subspace:
            raise NumericalError(
                "distortion state depends on the probe state",
                residuals={"tau_cross": tau_cross},
            )
        tau = samples[0]
        w = np.linalg.eigvalsh(tau)
        if w.min() < -1e-9:
            raise NumericalError(
                f"distortion state has negative eigenvalue {w.min():.3e}",
                residuals={"tau_min_eig": float(w.min())},
            )
        taus.append(tau)

    # fixedness of assembled structure states under the analyzed map
    fix_res = 0.0
    for trial in range(2):
        blocks = []
        for sector in sectors:
            g = rng.standard_normal((sector.d, sector.d)) \
                + 1j * rng.standard_normal((sector.d, sector.d))
            rho = g @ g.conj().T
            blocks.append(rho / np.trace(rho))
        weights = rng.random(len(sectors)) + 0.1
        weights /= weights.sum()
        state = FixedPointStructure(
            kind=kind, support_projector=p0, algebra=dec,
            distortion_states=tuple(taus), residuals={},
        ).sample_state(blocks, weights)
        image = fixedness_map(state)
        fix_res = max(fix_res, float(np.max(np.abs(image - state))))
    if fix_res > 1e-6:
        raise DecompositionError(
            "assembled structure states are not fixed by the analyzed map",
            residuals={"fixed_state_residual": fix_res},
        )

    residuals = {
        "algebra_closure": closure.worst_residual,
        "tau_cross_check": tau_cross,
        "fixed_state_residual": fix_res,
    }
    return FixedPointStructure(
        kind=kind,
        support_projector=p0,
        algebra=dec,
        distortion_states=tuple(taus),
        residuals=residuals,
    )


def _require_square(ch: QuantumChannel) -> None:
    if not ch.is_square:
        raise ValidationError("structure analysis requires a square channel")


def noiseless_structure(ch: QuantumChannel, seed: int = 0,
                        tol: ToleranceConfig = DEFAULT_TOL) -> FixedPointStructure:
    """Largest structure fixed outright: algebra shape of ``Fix(E)``.

    Pipeline: fixed spaces of the map and its adjoint, support projector,
    compression of the adjoint side, canonical algebra decomposition,
    distortion-state extraction through the time-averaged channel.
    """
    _require_square(ch)
    right = fixed_space(ch, tol)
    left = fixed_space_adjoint(ch, tol)
    proj = asymptotic_projector(ch, tol)
    return _structure_from_spaces(
        right, left, proj, lambda x: apply_channel(ch, x),
        "noiseless", seed, tol,
    )


def unitarily_noiseless_structure(ch: QuantumChannel, seed: int = 0,
                                  tol: ToleranceConfig = DEFAULT_TOL) -> FixedPointStructure:
    """Structure preserved up to a recurring unitary: built from the span of
    unit-modulus eigenoperators instead of the strictly fixed ones.

    Structure states here are fixed by the peripheral spectral projector
    (the channel merely rotates them within the structure), so that map is
    used for both distortion extraction and the fixedness certificate.
    """
    _require_square(ch)
    right = rotating_space(ch, tol)
    left = rotating_space_adjoint(ch, tol)
    proj = peripheral_projector(ch, tol)
    return _structure_from_spaces(
        right, left, proj, lambda x: apply_superoperator(proj, x),
        "unitarily-noiseless", seed, tol,
    )


def unconditional_structure(ch: QuantumChannel, seed: int = 0,
                            tol: ToleranceConfig = DEFAULT_TOL) -> FixedPointStructure:
    """The unique structure preserved without initialization control.

    Composes the input-blind recovery with the channel and analyzes the
    fixed points of the composite, which acts on the input space even for
    rectangular channels.  The composite is unital, so the structure always
    has full support.
    """
    comp = compose(unconditional_recovery(ch, tol), ch, tol=tol)
    right = fixed_space(comp, tol)
    left = fixed_space_adjoint(comp, tol)
    proj = asymptotic_projector(comp, tol)
    return _structure_from_spaces(
        right, left, proj, lambda x: apply_channel(comp, x),
        "unconditional", seed, tol,
    )


def unitarily_correctable_structure_unital(ch: QuantumChannel, seed: int = 0,
                                           tol: ToleranceConfig = DEFAULT_TOL) -> FixedPointStructure:
    """Structure recoverable by a fixed unitary, valid for unital channels.

    For a unital channel the input-blind recovery is exactly the adjoint, so
    the codes correctable by a unitary are the fixed points of ``E^dag o E``
    and coincide with the unconditional structure; that identity is asserted
    here.  Non-unital channels are rejected: use
    :func:`unconditional_structure` directly for those.
    """
    _require_square(ch)
    if not is_unital(ch, tol):
        raise ValidationError(
            "unitarily-correctable analysis is only valid for unital channels; "
            "for non-unital channels compute unconditional_structure instead"
        )
    comp = compose(adjoint(ch, tol), ch, tol=tol)
    right = fixed_space(comp, tol)
    left = fixed_space_adjoint(comp, tol)
    proj = asymptotic_projector(comp, tol)
    structure = _structure_from_spaces(
        right, left, proj, lambda x: apply_channel(comp, x),
        "unconditional", seed, tol,
    )
    reference = unconditional_structure(ch, seed=seed, tol=tol)
    if sorted(zip(structure.shape, structure.cofactors)) != \
            sorted(zip(reference.shape, reference.cofactors)):
        raise NumericalError(
            "adjoint-composite structure disagrees with the unconditional one "
            f"({structure.shape} vs {reference.shape})"
        )
    return structure


def fixed_point_structure(ch: QuantumChannel, seed: int = 0,
                          tol: ToleranceConfig = DEFAULT_TOL) -> FixedPointStructure:
    """Noiseless structure plus a block-form certificate for the Kraus set.

    In a basis adapted to the support ``P0``, every Kraus operator must be
    block upper triangular -- the support is invariant, so no amplitude
    flows from it into the complement -- and its restriction to ``P0`` must
    commute with the recovered algebra.  Both residuals are recorded in
    ``residuals``.
    """
    structure = noiseless_structure(ch, seed=seed, tol=tol)
    p0 = structure.support_projector
    d = ch.dim_in
    comp = np.eye(d) - p0
    vs = orthonormal_range_basis(p0, tol)

    invariance = 0.0
    for k in ch.kraus:
        invariance = max(invariance, float(np.linalg.norm(comp @ k @ p0)))

    commutation = 0.0
    basis_local = []
    for sector in structure.algebra.sectors:
        v = sector.isometry
        for a in range(sector.d):
            for b in range(sector.d):
                unit = np.zeros((sector.d, sector.d), dtype=complex)
                unit[a, b] = 1.0
                basis_local.append(vs.conj().T @ v @ np.kron(unit, np.eye(sector.n))
                                   @ v.conj().T @ vs)
    for k in ch.kraus:
        k_r = vs.conj().T @ k @ vs
        for b in basis_local:
            commutation = max(commutation,
                              float(np.linalg.norm(k_r @ b - b @ k_r)))

    residuals = dict(structure.residuals)
    residuals["kraus_invariance"] = invariance
    residuals["kraus_commutation"] = commutation
    return FixedPointStructure(
        kind=structure.kind,
        support_projector=structure.support_projector,
        algebra=structure.algebra,
        distortion_states=structure.distortion_states,
        residuals=residuals,
    )


def initialization_free_check(ch: QuantumChannel, structure: FixedPointStructure,
                              sector_index: int,
                              tol: ToleranceConfig = DEFAULT_TOL) -> InitializationFreeReport:
    """Whether a sector keeps its information without support initialization.

    A sector survives arbitrary input preparations exactly when no Kraus
    operator carries amplitude from the support complement into the sector:
    ``P_k K_i (1 - P0) = 0`` for all ``i``.
    """
    _require_square(ch)
    sector = structure.algebra.sectors[sector_index]
    p_k = sector.isometry @ sector.isometry.conj().T
    comp = np.eye(ch.dim_in) - structure.support_projector
    residuals = tuple(
        float(np.linalg.norm(p_k @ k @ comp)) for k in ch.kraus
    )
    return InitializationFreeReport(
        initialization_free=max(residuals) < max(tol.equality, 1e-9),
        kraus_residuals=residuals,
    )
