"""Bare material systems: fluxonium circuits and 1D dipoles.

Internal unit system: hbar = 1, energies in micro-eV, and dimensionless
phase/number variables with the Cooper-pair charge absorbed (2e = 1, so
e^2 = 1/4).  In these units the fluxonium reads

    H_m = 4 E_c n^2 + (E_l / 2) phi^2 - E_J cos(phi - flux_ext)

with [phi, n] = i and maximal frustration at ``flux_ext = pi``.  The
conjugate-momentum operator is reported under the generic name ``xi``;
for the dipole instantiation ``phi -> x`` and ``xi -> p``.
"""

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np
from scipy.linalg import eig_banded
from scipy.special import eval_genlaguerre, gammaln

from .errors import ConvergenceError, ValidationError
from .operators import ladder

ENERGY_CONVERGENCE_RTOL = 1e-8
MOMENTUM_IDENTITY_RTOL = 1e-7

#: Default benchmark energies (micro-eV): E_J = 10 E_l = E_c.
BENCH_E_C = 3.3
BENCH_E_J = 3.3
BENCH_E_L = 0.33


@dataclass(frozen=True)
class CircuitParams:
    """Fluxonium-LC inputs plus numerical cutoffs.

    ``delta = omega / omega_m`` and ``eta = g / omega`` fix the LC mode
    relative to the qubit transition at maximal frustration, so sweeping
    ``flux_ext`` keeps the same physical circuit.
    """

    e_c: float
    e_j: float
    e_l: float
    flux_ext: float = math.pi
    delta: float = 1.0
    eta: float = 1.0
    n_matter: int = 120
    n_keep: int = 20
    n_fock: int = 60

    def __post_init__(self):
        if self.e_c <= 0 or self.e_l <= 0:
            raise ValidationError("E_c and E_l must be positive")
        if self.e_j < 0:
            raise ValidationError("E_J must be non-negative")
        if self.delta <= 0:
            raise ValidationError("delta must be positive")
        if self.eta < 0:
            raise ValidationError("eta must be non-negative")
        if self.n_keep < 2:
            raise ValidationError("n_keep must be at least 2")
        if self.n_matter < 4 * self.n_keep:
            raise ValidationError("n_matter must be at least 4 * n_keep")
        if self.n_fock < 4:
            raise ValidationError("n_fock must be at least 4")

    def replace(self, **kwargs) -> "CircuitParams":
        return replace(self, **kwargs)


def benchmark_circuit(delta: float = 1.0, eta: float = 1.0, **kwargs) -> CircuitParams:
    """Standard fluxonium benchmark (E_l = 0.33 micro-eV, E_J = E_c = 3.3)."""
    return CircuitParams(e_c=BENCH_E_C, e_j=BENCH_E_J, e_l=BENCH_E_L,
                         delta=delta, eta=eta, **kwargs)


@dataclass(frozen=True)
class DipoleParams:
    """1D dipole of mass ``m`` in a bounded-below potential.

    ``kind`` selects the potential family: ``harmonic`` (0.5*k2*x^2),
    ``quartic`` (0.5*k2*x^2 + k4*x^4) or ``tabulated`` (``table_x``,
    ``table_v`` samples on a grid symmetric about 0, linearly
    interpolated on the oscillator-DVR nodes).
    """

    mass: float
    kind: str = "harmonic"
    k2: float = 1.0
    k4: float = 0.0
    table_x: Optional[np.ndarray] = None
    table_v: Optional[np.ndarray] = None
    basis_freq: Optional[float] = None
    n_matter: int = 120
    n_keep: int = 20
    n_fock: int = 60

    def __post_init__(self):
        if self.mass <= 0:
            raise ValidationError("mass must be positive")
        if self.kind not in ("harmonic", "quartic", "tabulated"):
            raise ValidationError(f"unknown potential kind {self.kind!r}")
        if self.kind in ("harmonic", "quartic"):
            if self.k2 <= 0 and self.basis_freq is None:
                raise ValidationError("k2 <= 0 requires an explicit basis_freq")
            if self.kind == "quartic" and self.k4 < 0:
                raise ValidationError("quartic coefficient must be >= 0 (bounded below)")
        if self.kind == "tabulated":
            if self.table_x is None or self.table_v is None:
                raise ValidationError("tabulated potential needs table_x and table_v")
            x = np.asarray(self.table_x, dtype=float)
            if not np.allclose(x, -x[::-1], atol=1e-12 * max(1.0, np.max(np.abs(x)))):
                raise ValidationError("tabulated grid must be symmetric about 0")
            if not np.all(np.isfinite(self.table_v)):
                raise ValidationError("tabulated potential must be bounded")
            if self.basis_freq is None:
                raise ValidationError("tabulated potential needs an explicit basis_freq")
        if self.n_keep < 2:
            raise ValidationError("n_keep must be at least 2")
        if self.n_matter < 4 * self.n_keep:
            raise ValidationError("n_matter must be at least 4 * n_keep")
        if self.n_fock < 4:
            raise ValidationError("n_fock must be at least 4")

    def replace(self, **kwargs) -> "DipoleParams":
        return replace(self, **kwargs)


@dataclass(frozen=True)
class MatterSpectrum:
    """Kept low-energy block of a bare material system.

    ``phi`` holds real position/flux matrix elements (adjacent elements
    rotated non-negative), ``xi`` the purely imaginary conjugate-momentum
    elements, and ``phi_sq`` the kept block of the *squared* operator
    computed in the full basis before projection (so it differs from
    ``phi @ phi`` by the population outside the kept block).

    ``omega_m`` and ``varphi`` are always the transition frequency and
    flux element at maximal frustration, whatever ``flux_ext`` the block
    itself was built at; ``epsilon0`` is the ground energy at the
    requested bias.
    """

    energies: np.ndarray
    phi: np.ndarray
    xi: np.ndarray
    phi_sq: np.ndarray
    omega_m: float
    varphi: float
    epsilon0: float
    inv_mass: float  # 1/m_eff: 8 E_c for the circuit, 1/m for the dipole
    kind: str

    @property
    def n_keep(self) -> int:
        return self.energies.shape[0]

    @property
    def eps10(self) -> float:
        """Qubit splitting at the bias the block was built at."""
        return float(self.energies[1] - self.energies[0])


def exp_i_phi_matrix(scale: float, dim: int) -> np.ndarray:
    """Oscillator-basis matrix of exp(i*phi) for phi = scale*(b + b^dag).

    Each element is the analytic displacement-operator value
    ``sqrt(n!/m!) (i*scale)^{m-n} e^{-scale^2/2} L_n^{m-n}(scale^2)``,
    exact in the untruncated basis (no series or matrix exponential).
    """
    out = np.zeros((dim, dim), dtype=complex)
    x = scale * scale
    if scale == 0.0:
        return np.eye(dim, dtype=complex)
    log_s = math.log(scale)
    for k in range(dim):
        n = np.arange(0, dim - k)
        m = n + k
        lag = eval_genlaguerre(n, k, x)
        amp = np.exp(0.5 * (gammaln(n + 1) - gammaln(m + 1)) + k * log_s - 0.5 * x)
        vals = (1j) ** k * amp * lag
        out[m, n] = vals
        out[n, m] = vals
    return out


def _padded_power(op_builder, dim, power):
    """Truncation of an operator power, evaluated with enough padding to be exact."""
    pad = dim + power
    big = op_builder(pad)
    acc = np.eye(pad)
    for _ in range(power):
        acc = acc @ big
    return acc[:dim, :dim]


def _sign_chain(phi_block: np.ndarray) -> np.ndarray:
    """Signs making adjacent flux elements non-negative, first state positive."""
    n = phi_block.shape[0]
    signs = np.ones(n)
    for i in range(n - 1):
        elem = signs[i] * phi_block[i, i + 1]
        if elem < 0:
            signs[i + 1] = -1.0
        elif elem == 0.0:
            signs[i + 1] = signs[i]
    return signs


def _keep_block(w, v, phi_big, wxi_big, phisq_big, n_keep):
    vk = v[:, :n_keep]
    phi = vk.T @ phi_big @ vk
    wxi = vk.T @ wxi_big @ vk
    phisq = vk.T @ phisq_big @ vk
    signs = _sign_chain(phi)
    phi = signs[:, None] * phi * signs[None, :]
    wxi = signs[:, None] * wxi * signs[None, :]
    phisq = signs[:, None] * phisq * signs[None, :]
    return w[:n_keep].copy(), phi, wxi, phisq


def _validate_block(energies, phi, xi, inv_mass, label):
    xi_scale = np.max(np.abs(xi))
    if xi_scale > 0:
        diag = np.max(np.abs(np.diag(xi)))
        if diag > 1e-9 * xi_scale:
            raise ValidationError(
                f"{label}: momentum diagonal {diag:.2e} exceeds 1e-9 of scale {xi_scale:.2e}"
            )
    if inv_mass > 0:
        expected = 1j * (energies[:, None] - energies[None, :]) * phi / inv_mass
        defect = np.max(np.abs(xi - expected))
        if defect > MOMENTUM_IDENTITY_RTOL * max(xi_scale, 1e-300):
            raise ValidationError(
                f"{label}: momentum identity violated at {defect / max(xi_scale, 1e-300):.2e} "
                f"relative (basis not converged?)"
            )
    sym = np.max(np.abs(phi - phi.T))
    if sym > 1e-12 * max(1.0, np.max(np.abs(phi))):
        raise ValidationError(f"{label}: flux block not symmetric ({sym:.2e})")


def _fluxonium_levels(params: CircuitParams, n_matter: int, flux_ext: float):
    """Diagonalize the fluxonium in the oscillator basis of its quadratic part."""
    omega0 = math.sqrt(8.0 * params.e_c * params.e_l)
    scale = (2.0 * params.e_c / params.e_l) ** 0.25
    h = np.diag(omega0 * (np.arange(n_matter) + 0.5))
    if params.e_j != 0.0:
        disp = exp_i_phi_matrix(scale, n_matter)
        cos_mat = np.real(np.exp(-1j * flux_ext) * disp)
        h = h - params.e_j * cos_mat
    w, v = np.linalg.eigh(h)
    return w, v, scale


def _is_maximal_frustration(flux_ext: float) -> bool:
    d = (flux_ext - math.pi) % (2.0 * math.pi)
    return min(d, 2.0 * math.pi - d) < 1e-12


def build_fluxonium(params: CircuitParams) -> MatterSpectrum:
    """Diagonalize the fluxonium and export its kept low-energy block.

    The Hamiltonian is assembled in the oscillator basis of its quadratic
    part; the cosine uses the analytic displacement-operator elements.
    Basis adequacy is verified by re-solving with the matter dimension
    doubled: if any kept level moves by more than 1e-8 relative, a
    ``ConvergenceError`` carrying both values is raised.
    """
    n_keep = params.n_keep
    w, v, scale = _fluxonium_levels(params, params.n_matter, params.flux_ext)
    w2, _, _ = _fluxonium_levels(params, 2 * params.n_matter, params.flux_ext)
    ref = np.maximum(np.abs(w2[:n_keep]), 1e-12)
    shift = np.abs(w[:n_keep] - w2[:n_keep]) / ref
    if np.max(shift) > ENERGY_CONVERGENCE_RTOL:
        k = int(np.argmax(shift))
        raise ConvergenceError(
            f"fluxonium level {k} moved by {shift[k]:.2e} relative when the matter "
            f"basis doubled ({w[k]:.10g} -> {w2[k]:.10g}); increase n_matter",
            value_coarse=float(w[k]),
            value_fine=float(w2[k]),
        )

    n_m = params.n_matter
    b, bd = ladder(n_m)
    phi_big = scale * (b + bd)
    wxi_big = (bd - b) / (2.0 * scale)  # xi = i * wxi_big
    phisq_big = scale * scale * (b @ b + bd @ bd + np.diag(2.0 * np.arange(n_m) + 1.0))
    energies, phi, wxi, phisq = _keep_block(w, v, phi_big, wxi_big, phisq_big, n_keep)

    if _is_maximal_frustration(params.flux_ext):
        omega_m = float(energies[1] - energies[0])
        varphi = float(phi[0, 1])
    else:
        wf, vf, _ = _fluxonium_levels(params, params.n_matter, math.pi)
        ef, phif, _, _ = _keep_block(wf, vf, phi_big, wxi_big, phisq_big, 2)
        omega_m = float(ef[1] - ef[0])
        varphi = float(phif[0, 1])

    inv_mass = 8.0 * params.e_c
    xi = 1j * wxi
    _validate_block(energies, phi, xi, inv_mass, "fluxonium")
    return MatterSpectrum(
        energies=energies, phi=phi, xi=xi, phi_sq=phisq,
        omega_m=omega_m, varphi=varphi, epsilon0=float(energies[0]),
        inv_mass=inv_mass, kind="fluxonium",
    )


def _dipole_basis_freq(params: DipoleParams) -> float:
    if params.basis_freq is not None:
        return params.basis_freq
    return math.sqrt(params.k2 / params.mass)


def _dipole_hamiltonian(params: DipoleParams, n_matter: int):
    omega0 = _dipole_basis_freq(params)
    zpf = 1.0 / math.sqrt(2.0 * params.mass * omega0)

    def x_op(dim):
        b, bd = ladder(dim)
        return zpf * (b + bd)

    h = np.diag(omega0 * (np.arange(n_matter) + 0.5))
    if params.kind in ("harmonic", "quartic"):
        # residual potential beyond the basis oscillator 0.5*m*omega0^2*x^2
        dk2 = params.k2 - params.mass * omega0 ** 2
        if dk2 != 0.0:
            h = h + 0.5 * dk2 * _padded_power(x_op, n_matter, 2)
        if params.kind == "quartic" and params.k4 != 0.0:
            h = h + params.k4 * _padded_power(x_op, n_matter, 4)
    else:
        nodes, q = np.linalg.eigh(x_op(n_matter))
        v_nodes = np.interp(nodes, np.asarray(params.table_x, dtype=float),
                            np.asarray(params.table_v, dtype=float))
        v_mat = (q * v_nodes[None, :]) @ q.T
        h = h - 0.5 * params.mass * omega0 ** 2 * _padded_power(x_op, n_matter, 2) + v_mat
    w, v = np.linalg.eigh(h)
    return w, v, zpf


def build_dipole(params: DipoleParams) -> MatterSpectrum:
    """Dipole analogue of ``build_fluxonium`` with x, p in the phi, xi slots."""
    n_keep = params.n_keep
    w, v, zpf = _dipole_hamiltonian(params, params.n_matter)
    w2, _, _ = _dipole_hamiltonian(params, 2 * params.n_matter)
    ref = np.maximum(np.abs(w2[:n_keep]), 1e-12)
    shift = np.abs(w[:n_keep] - w2[:n_keep]) / ref
    if np.max(shift) > ENERGY_CONVERGENCE_RTOL:
        k = int(np.argmax(shift))
        raise ConvergenceError(
            f"dipole level {k} moved by {shift[k]:.2e} relative when the matter "
            f"basis doubled; increase n_matter",
            value_coarse=float(w[k]),
            value_fine=float(w2[k]),
        )
    n_m = params.n_matter
    b, bd = ladder(n_m)
    x_big = zpf * (b + bd)
    wp_big = (bd - b) / (2.0 * zpf)
    xsq_big = zpf * zpf * (b @ b + bd @ bd + np.diag(2.0 * np.arange(n_m) + 1.0))
    energies, x_blk, wp_blk, xsq_blk = _keep_block(w, v, x_big, wp_big, xsq_big, n_keep)
    p_blk = 1j * wp_blk
    inv_mass = 1.0 / params.mass
    _validate_block(energies, x_blk, p_blk, inv_mass, "dipole")
    return MatterSpectrum(
        energies=energies, phi=x_blk, xi=p_blk, phi_sq=xsq_blk,
        omega_m=float(energies[1] - energies[0]), varphi=float(x_blk[0, 1]),
        epsilon0=float(energies[0]), inv_mass=inv_mass, kind="dipole",
    )


def grid_reference_levels(params: CircuitParams, n_levels: int = 6,
                          span: float = None, n_points: int = 4001) -> np.ndarray:
    """Independent fluxonium levels from a real-space finite-difference grid.

    Fourth-order stencil on a uniform phase grid; serves as a cross-check
    oracle for the oscillator-basis builder.
    """
    scale = (2.0 * params.e_c / params.e_l) ** 0.25
    if span is None:
        span = 9.0 * scale
    x = np.linspace(-span, span, n_points)
    h = x[1] - x[0]
    pot = 0.5 * params.e_l * x ** 2 - params.e_j * np.cos(x - params.flux_ext)
    k = 4.0 * params.e_c / h ** 2
    bands = np.zeros((3, n_points))
    bands[2] = 2.5 * k + pot
    bands[1, 1:] = -(4.0 / 3.0) * k
    bands[0, 2:] = (1.0 / 12.0) * k
    return eig_banded(bands, lower=False, eigvals_only=True,
                      select="i", select_range=(0, n_levels - 1))


def trk_sum(matter: MatterSpectrum, level: int) -> float:
    """Oscillator-strength sum over the kept block for the given start level.

    For a complete basis the sum equals ``inv_mass / 2`` for every level;
    a finite kept block breaks this, with opposite signs for the first two
    levels once the block shrinks to a qubit.
    """
    eps = matter.energies
    col = matter.phi[:, level]
    return float(np.sum((eps - eps[level]) * np.abs(col) ** 2))
