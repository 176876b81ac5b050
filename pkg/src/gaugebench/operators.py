"""Dense operator algebra on truncated Fock and finite-level spaces.

Everything here works on plain ndarrays.  Composite spaces use a fixed
Kronecker ordering: the matter (slow) index multiplies the Fock (fast)
index, so ``tensor(A_matter, B_fock)`` places the basis state
``|m, n>`` at row ``m * dim_fock + n``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

HERMITICITY_ATOL = 1e-12

KRON_ORDERING = "matter-major"  # matter index slow, Fock index fast


def ladder(dim: int):
    """Annihilation/creation pair on a ``dim``-level Fock truncation.

    ``<n-1|a|n> = sqrt(n)``; all other entries vanish.
    """
    if dim < 2:
        raise ValidationError(f"Fock truncation needs dim >= 2, got {dim}")
    a = np.diag(np.sqrt(np.arange(1.0, dim)), 1)
    return a, a.T.copy()


def number_operator(dim: int) -> np.ndarray:
    return np.diag(np.arange(dim, dtype=float))


def identity(dim: int) -> np.ndarray:
    return np.eye(dim)


def tensor(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with the first factor slow (matter-major)."""
    return np.kron(a, b)


def hermiticity_defect(op: np.ndarray) -> float:
    return float(np.max(np.abs(op - op.conj().T))) if op.size else 0.0


def is_hermitian(op: np.ndarray, atol: float = HERMITICITY_ATOL) -> bool:
    return hermiticity_defect(op) <= atol


def assert_hermitian(op: np.ndarray, atol: float = HERMITICITY_ATOL, name: str = "operator"):
    if op.ndim != 2 or op.shape[0] != op.shape[1]:
        raise ValidationError(f"{name} must be square, got shape {op.shape}")
    defect = hermiticity_defect(op)
    if defect > atol:
        raise ValidationError(
            f"{name} is not Hermitian: max |H - H^dag| = {defect:.3e} > {atol:.1e}"
        )


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with phase-fixed column eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.values.shape[0]


def fix_eigenvector_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real positive.

    Makes eigendecompositions reproducible across LAPACK drivers/platforms.
    Ties resolve to the first maximal index.
    """
    lead_idx = np.argmax(np.abs(vectors), axis=0)
    lead = vectors[lead_idx, np.arange(vectors.shape[1])]
    if np.iscomplexobj(vectors):
        phases = lead / np.abs(lead)
        return vectors * phases.conj()[None, :]
    signs = np.where(lead < 0, -1.0, 1.0)
    return vectors * signs[None, :]


def eig_hermitian(op: np.ndarray, atol: float = HERMITICITY_ATOL) -> EigenSystem:
    """Full eigendecomposition of a Hermitian matrix.

    Raises ``ValidationError`` for non-Hermitian input; the input is never
    symmetrized behind the caller's back.
    """
    assert_hermitian(op, atol=atol, name="eig_hermitian input")
    values, vectors = np.linalg.eigh(op)
    return EigenSystem(values, fix_eigenvector_phases(vectors))


def expm_antihermitian(gen: np.ndarray, atol: float = HERMITICITY_ATOL) -> np.ndarray:
    """Unitary exp(K) for anti-Hermitian K, via eigendecomposition of iK.

    Exact to solver precision (no series truncation).  A real antisymmetric
    generator yields a real orthogonal matrix.
    """
    if gen.ndim != 2 or gen.shape[0] != gen.shape[1]:
        raise ValidationError(f"generator must be square, got shape {gen.shape}")
    defect = float(np.max(np.abs(gen + gen.conj().T))) if gen.size else 0.0
    if defect > atol:
        raise ValidationError(
            f"generator is not anti-Hermitian: max |K + K^dag| = {defect:.3e}"
        )
    herm = 1j * gen
    values, vectors = np.linalg.eigh(herm)
    unitary = (vectors * np.exp(-1j * values)[None, :]) @ vectors.conj().T
    if np.isrealobj(gen):
        return unitary.real
    return unitary


def squeeze_matrix(r: float, dim: int) -> np.ndarray:
    """Single-mode squeeze S(r) = exp[(r/2)(a^2 - a^dag^2)] on ``dim`` levels.

    Real orthogonal on the truncated space (up to cutoff leakage in the top
    rows).  S(0) is the identity and S(-r) = S(r)^T.
    """
    if not np.isfinite(r):
        raise ValidationError(f"squeeze parameter must be finite, got {r}")
    a, adag = ladder(dim)
    if r == 0.0:
        return np.eye(dim)
    gen = 0.5 * r * (a @ a - adag @ adag)
    return expm_antihermitian(gen)
