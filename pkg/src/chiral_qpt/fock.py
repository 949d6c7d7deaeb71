"""Truncated Fock space for two chiral modes times a spin-1/2.

Flat index ordering is fixed as ``s*(N+1)**2 + n_r*(N+1) + n_l`` with
``s = 0`` for spin up and ``s = 1`` for spin down.  Raising beyond the cutoff
maps to zero.  Operators are returned as ``scipy.sparse`` CSR matrices
(dense ``ndarray`` for exponentials).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp

from .errors import TruncationLeakage

UP, DOWN = 0, 1
MODES = ("r", "l")


@dataclass(frozen=True)
class FockBasis:
    cutoff: int

    def __post_init__(self):
        if self.cutoff < 1:
            raise ValueError("cutoff must be >= 1")

    @property
    def n_levels(self) -> int:
        return self.cutoff + 1

    @property
    def orbital_dim(self) -> int:
        return self.n_levels**2

    @property
    def dim(self) -> int:
        return 2 * self.orbital_dim

    def index(self, spin: int, n_r: int, n_l: int) -> int:
        d = self.n_levels
        if spin not in (UP, DOWN) or not (0 <= n_r < d and 0 <= n_l < d):
            raise IndexError(f"state (s={spin}, n_r={n_r}, n_l={n_l}) outside basis")
        return spin * d * d + n_r * d + n_l

    def label(self, index: int) -> tuple[int, int, int]:
        d = self.n_levels
        spin, rest = divmod(index, d * d)
        n_r, n_l = divmod(rest, d)
        return spin, n_r, n_l

    @cached_property
    def spin(self) -> np.ndarray:
        return np.repeat([UP, DOWN], self.orbital_dim)

    @cached_property
    def n_r(self) -> np.ndarray:
        return np.tile(np.repeat(np.arange(self.n_levels), self.n_levels), 2)

    @cached_property
    def n_l(self) -> np.ndarray:
        return np.tile(np.arange(self.n_levels), 2 * self.n_levels)

    @cached_property
    def jz(self) -> np.ndarray:
        """Eigenvalues of J_z = L_z + sigma_z/2 (hbar = 1) on each basis state."""
        return (self.n_r - self.n_l) + np.where(self.spin == UP, 0.5, -0.5)

    def sector(self, jz: float) -> np.ndarray:
        return np.flatnonzero(np.isclose(self.jz, jz))

    def interior(self, margin: int = 2) -> np.ndarray:
        """Indices whose occupations are at most N - margin, where truncation is invisible."""
        top = self.cutoff - margin
        return np.flatnonzero((self.n_r <= top) & (self.n_l <= top))

    def edge(self, depth: int = 1) -> np.ndarray:
        top = self.cutoff - depth + 1
        return np.flatnonzero((self.n_r >= top) | (self.n_l >= top))

    def basis_vector(self, spin: int, n_r: int, n_l: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(spin, n_r, n_l)] = 1.0
        return v


def _single_mode_lower(d: int) -> sp.csr_matrix:
    return sp.diags(np.sqrt(np.arange(1, d, dtype=float)), 1, shape=(d, d), format="csr")


def _embed_orbital(op_orbital) -> sp.csr_matrix:
    return sp.kron(sp.identity(2, format="csr"), op_orbital, format="csr").astype(complex)


def orbital_ladder(basis: FockBasis, mode: str, direction: str = "lower") -> sp.csr_matrix:
    """Ladder operator on the orbital factor only (dimension (N+1)**2)."""
    if mode not in MODES:
        raise ValueError(f"mode must be 'r' or 'l', got {mode!r}")
    a = _single_mode_lower(basis.n_levels)
    eye = sp.identity(basis.n_levels, format="csr")
    op = sp.kron(a, eye) if mode == "r" else sp.kron(eye, a)
    op = op.tocsr().astype(complex)
    if direction == "lower":
        return op
    if direction == "raise":
        return op.conj().T.tocsr()
    raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")


def ladder(basis: FockBasis, mode: str, direction: str = "lower") -> sp.csr_matrix:
    return _embed_orbital(orbital_ladder(basis, mode, direction))


def number(basis: FockBasis, mode: str) -> sp.csr_matrix:
    occ = basis.n_r if mode == "r" else basis.n_l
    return sp.diags(occ.astype(complex), 0, format="csr")


def identity(basis: FockBasis) -> sp.csr_matrix:
    return sp.identity(basis.dim, dtype=complex, format="csr")


def sigma_z(basis: FockBasis) -> sp.csr_matrix:
    return sp.diags(np.where(basis.spin == UP, 1.0, -1.0).astype(complex), 0, format="csr")


def sigma_plus(basis: FockBasis) -> sp.csr_matrix:
    """|up><down| on the spin factor."""
    s = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    return sp.kron(s, sp.identity(basis.orbital_dim), format="csr").astype(complex)


def spin_coupled(basis: FockBasis, orbital_op) -> sp.csr_matrix:
    """sigma^+ (x) orbital_op, i.e. orbital_op placed in the up-down block."""
    s = sp.csr_matrix(np.array([[0.0, 1.0], [0.0, 0.0]]))
    return sp.kron(s, orbital_op, format="csr").astype(complex)


def tilde_ladder(basis: FockBasis, couplings, mode: str, direction: str = "lower") -> sp.csr_matrix:
    """Ladders of the omega_tilde family written on the omega-family basis.

    a~_r = mu_tilde a_r + mu a_l^dag  and  a~_l = mu_tilde a_l + mu a_r^dag,
    which follows from inserting the omega-family quadratures into the
    omega_tilde-family definitions and recombining into chiral components.
    """
    mu, mu_t = couplings.mu, couplings.mu_tilde
    if not (math.isfinite(mu) and math.isfinite(mu_t)):
        raise ValueError("tilde ladders are undefined when xi_tilde == 0 (infinite magnetic width)")
    other = "l" if mode == "r" else "r"
    op = mu_t * ladder(basis, mode, "lower") + mu * ladder(basis, other, "raise")
    op = op.tocsr()
    if direction == "lower":
        return op
    if direction == "raise":
        return op.conj().T.tocsr()
    raise ValueError(f"direction must be 'raise' or 'lower', got {direction!r}")


def cartesian_ladders(basis: FockBasis, couplings=None):
    """(a_x, a_y) from the chiral ladders: a_x = (a_r + a_l)/sqrt2, a_y = i(a_r - a_l)/sqrt2."""
    if couplings is None:
        ar, al = ladder(basis, "r"), ladder(basis, "l")
    else:
        ar, al = tilde_ladder(basis, couplings, "r"), tilde_ladder(basis, couplings, "l")
    ax = (ar + al) / math.sqrt(2.0)
    ay = 1j * (ar - al) / math.sqrt(2.0)
    return ax.tocsr(), ay.tocsr()


def quadratures(basis: FockBasis, couplings=None):
    """Position and momentum operators (x, y, p_x, p_y).

    With ``couplings=None`` the omega-family ladders are used (width 1);
    otherwise the omega_tilde-family ladders with width 1/rho.  Both describe
    the same physical operators.
    """
    width = 1.0 if couplings is None else 1.0 / couplings.width_ratio
    ax, ay = cartesian_ladders(basis, couplings)
    s2 = math.sqrt(2.0)
    x = width * (ax + ax.conj().T) / s2
    y = width * (ay + ay.conj().T) / s2
    px = (ax - ax.conj().T) / (1j * s2 * width)
    py = (ay - ay.conj().T) / (1j * s2 * width)
    return x.tocsr(), y.tocsr(), px.tocsr(), py.tocsr()


def angular_momentum_lz(basis: FockBasis) -> sp.csr_matrix:
    """L_z = n_r - n_l (hbar = 1), spin independent."""
    return sp.diags((basis.n_r - basis.n_l).astype(complex), 0, format="csr")


def lz_from_quadratures(basis: FockBasis, couplings=None) -> sp.csr_matrix:
    x, y, px, py = quadratures(basis, couplings)
    return (x @ py - y @ px).tocsr()


def squeeze_generator(basis: FockBasis, orbital: bool = False) -> sp.csr_matrix:
    """K_+ - K_- with K_+ = a_r^dag a_l^dag."""
    ar = orbital_ladder(basis, "r")
    al = orbital_ladder(basis, "l")
    kp = (ar.conj().T @ al.conj().T).tocsr()
    gen = (kp - kp.conj().T).tocsr()
    return gen if orbital else _embed_orbital(gen)


def _orbital_lz(basis: FockBasis) -> np.ndarray:
    return basis.n_r[: basis.orbital_dim] - basis.n_l[: basis.orbital_dim]


def orbital_expm(basis: FockBasis, op_orbital) -> np.ndarray:
    """Dense exp(op) for an orbital operator that conserves L_z, one L_z block at a time."""
    lz = _orbital_lz(basis)
    op_orbital = sp.csr_matrix(op_orbital)
    out = np.zeros((basis.orbital_dim, basis.orbital_dim), dtype=complex)
    for value in np.unique(lz):
        idx = np.flatnonzero(lz == value)
        out[np.ix_(idx, idx)] = la.expm(op_orbital[idx][:, idx].toarray())
    return out


def orbital_squeeze(basis: FockBasis, z: float) -> np.ndarray:
    """exp(z (K_+ - K_-)) on the orbital factor."""
    return orbital_expm(basis, z * squeeze_generator(basis, orbital=True))


def squeeze_leakage(basis: FockBasis, z: float) -> float:
    """Norm of the exact squeezed vacuum lying beyond the cutoff: tanh(|z|)**(2(N+1))."""
    return math.tanh(abs(z)) ** (2 * basis.n_levels)


def squeeze_unitary(basis: FockBasis, z: float, threshold: float = 1e-8):
    """Two-mode squeeze exp(z (K_+ - K_-)) on the full space.

    Returns ``(U, leakage)`` where leakage is the vacuum-image norm deficit
    of the truncated representation.
    """
    leakage = squeeze_leakage(basis, z)
    if math.sinh(abs(z)) ** 2 > basis.cutoff / 4:
        warnings.warn(
            f"sinh^2|z| = {math.sinh(abs(z))**2:.3g} exceeds N/4 = {basis.cutoff / 4}; "
            "squeezed states will feel the cutoff",
            RuntimeWarning,
            stacklevel=2,
        )
    if leakage > threshold:
        raise TruncationLeakage(
            f"squeeze z={z} leaks {leakage:.3e} beyond cutoff N={basis.cutoff}", leakage
        )
    orb = orbital_squeeze(basis, z)
    return np.kron(np.eye(2), orb), leakage


def apply_squeeze(basis: FockBasis, z: float, vector: np.ndarray) -> np.ndarray:
    """Apply exp(z (K_+ - K_-)) to a full-space vector without forming the full matrix."""
    orb = orbital_squeeze(basis, z)
    v = np.asarray(vector).reshape(2, basis.orbital_dim)
    return (v @ orb.T).reshape(-1)


def is_hermitian(op, atol: float = 1e-12) -> bool:
    diff = op - op.conj().T
    if sp.issparse(diff):
        return diff.count_nonzero() == 0 or abs(diff).max() <= atol
    return float(np.abs(diff).max(initial=0.0)) <= atol


def dump_triplets(op, stream) -> None:
    """Write nonzeros as ``row col re im`` lines (0-based indices)."""
    coo = sp.coo_matrix(op)
    stream.write(f"# shape {coo.shape[0]} {coo.shape[1]} nnz {coo.nnz}\n")
    order = np.lexsort((coo.col, coo.row))
    for k in order:
        val = coo.data[k]
        stream.write(f"{coo.row[k]} {coo.col[k]} {val.real:.17g} {val.imag:.17g}\n")


def load_triplets(stream) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    shape = None
    for line in stream:
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            parts = line[1:].split()
            if parts and parts[0] == "shape":
                shape = (int(parts[1]), int(parts[2]))
            continue
        r, c, re_, im_ = line.split()
        rows.append(int(r))
        cols.append(int(c))
        vals.append(float(re_) + 1j * float(im_))
    return sp.csr_matrix((vals, (rows, cols)), shape=shape, dtype=complex)
