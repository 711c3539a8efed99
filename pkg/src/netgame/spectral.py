"""Algebraic connectivity, Fiedler vectors and the induced supergradient.

The eigenproblem is solved on the orthogonal complement of the all-ones
vector, so the returned Fiedler vector is orthogonal to ``1`` by construction
even when the graph is disconnected and the zero eigenvalue is repeated.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping

import numpy as np

from .errors import DomainError, NumericalError
from .graph import Link

CLAMP_TOL = 1e-10
MULTIPLICITY_TOL = 1e-6


@dataclass(frozen=True)
class SpectralResult:
    lambda2: float
    fiedler: np.ndarray
    multiplicity_gap: float
    eigenvalues: np.ndarray  # full spectrum of L, ascending
    vectors: np.ndarray = None  # eigenvectors orthogonal to 1, columns ascending

    @property
    def is_simple(self) -> bool:
        return self.multiplicity_gap > MULTIPLICITY_TOL


@lru_cache(maxsize=64)
def complement_basis(n: int) -> np.ndarray:
    """Orthonormal ``n x (n-1)`` basis of the subspace orthogonal to ``1``."""
    ones = np.ones((n, 1)) / np.sqrt(n)
    q, _ = np.linalg.qr(np.hstack([ones, np.eye(n)[:, : n - 1]]))
    basis = q[:, 1:]
    basis.setflags(write=False)
    return basis


def _check_laplacian(L: np.ndarray) -> np.ndarray:
    L = np.asarray(L, dtype=float)
    if L.ndim != 2 or L.shape[0] != L.shape[1]:
        raise DomainError(f"Laplacian must be square, got shape {L.shape}")
    if L.shape[0] < 2:
        raise DomainError("lambda2 needs at least two nodes")
    scale = max(1.0, float(np.abs(L).max()))
    if not np.allclose(L, L.T, rtol=0.0, atol=1e-12 * scale):
        raise DomainError("Laplacian is not symmetric")
    if np.abs(L.sum(axis=1)).max() > 1e-9 * scale:
        raise DomainError("Laplacian rows do not sum to zero")
    return L


def _sign_fix(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(np.abs(v) > 1e-10)
    if nz.size and v[nz[0]] < 0:
        return -v
    return v


def lambda2(L: np.ndarray) -> SpectralResult:
    """Second-smallest Laplacian eigenvalue with a unit Fiedler vector.

    Values within ``1e-10`` below zero are clamped to zero.  When the
    eigenvalue is repeated (``multiplicity_gap <= 1e-6``) the returned
    vector is the one LAPACK produces, normalised so that its first
    nonzero entry is positive.
    """
    L = _check_laplacian(L)
    n = L.shape[0]
    Q = complement_basis(n)
    M = Q.T @ L @ Q
    M = 0.5 * (M + M.T)
    try:
        vals, vecs = np.linalg.eigh(M)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    lam = float(vals[0])
    if lam < 0.0:
        if lam < -CLAMP_TOL * max(1.0, float(vals[-1])):
            raise DomainError(f"matrix is not positive semidefinite (lambda2={lam:.3e})")
        lam = 0.0
    fiedler = _sign_fix(Q @ vecs[:, 0])
    fiedler = fiedler / np.linalg.norm(fiedler)
    gap = float(vals[1] - vals[0]) if n > 2 else float("inf")
    spectrum = np.concatenate([[0.0], np.maximum(vals, 0.0)])
    vectors = Q @ vecs
    vectors[:, 0] = fiedler
    return SpectralResult(lam, fiedler, max(gap, 0.0), np.sort(spectrum), vectors)


def lambda2_value(L: np.ndarray) -> float:
    return lambda2(L).lambda2


def pair_supergradient(fiedler: np.ndarray, us: np.ndarray, ws: np.ndarray) -> np.ndarray:
    """``(v_u - v_w)^2`` for each pair, vectorised."""
    d = fiedler[us] - fiedler[ws]
    return d * d


def lambda2_supergradient(L: np.ndarray, catalog: Iterable[Link] | Mapping) -> dict[int, float]:
    """Map each link id to ``(v_u - v_w)^2`` for the Fiedler vector ``v`` of ``L``.

    This is the derivative of lambda2 with respect to the link's weight when
    lambda2 is simple, and a valid supergradient selection otherwise.
    """
    links = getattr(catalog, "links", catalog)
    links = list(links.values()) if isinstance(links, Mapping) else list(links)
    res = lambda2(L)
    v = res.fiedler
    return {int(e.id): float((v[e.u] - v[e.w]) ** 2) for e in links}
