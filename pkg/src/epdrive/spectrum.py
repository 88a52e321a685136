"""Closed-form eigenstructure of the driven two-level non-Hermitian Hamiltonian.

The system is the passive PT dimer

    H = [[2E, J*], [J, 0]],   E = Delta/2 - i*kappa,

in the {|z+>, |z->} basis.  All rates are in rad/us, times in us (hbar = 1).
The eigenstructure is parameterized by a complex mixing angle alpha with
tan(alpha) = |J|/E, whose real part rotates and whose imaginary (hyperbolic)
part boosts the eigenbasis.  Exceptional points sit at J = +/- kappa, Delta = 0.

Conventions:

* For complex coupling J = |J| e^{i phi} the amplitude is taken nonnegative
  and the principal mixing angle has alpha_I >= 0.
* For strictly real coupling the signed amplitude (phi = 0) is used instead,
  so that paths crossing J = 0 stay smooth; the principal alpha_I then carries
  the sign of J.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AtExceptionalPoint, AmbiguousBranch

# Discriminant tolerance for "at an exceptional point", (rad/us)^2.
EP_DISC_TOL = 1e-9

SIGMA_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
SIGMA_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
SIGMA_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
IDENTITY = np.eye(2, dtype=complex)


@dataclass(frozen=True)
class SystemParams:
    """Instantaneous Hamiltonian parameters (Delta, J, kappa)."""

    delta: float
    coupling: complex
    kappa: float

    def __post_init__(self):
        if self.kappa < 0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")

    @property
    def energy(self) -> complex:
        """Complex energy E = Delta/2 - i*kappa (negative zero normalized)."""
        return self.delta / 2.0 + 0.0 - 1j * self.kappa

    @property
    def epsilon(self) -> complex:
        """eps = Delta/2 + i*J for the real-coupling plane (phi = 0)."""
        return self.delta / 2.0 + 1j * complex(self.coupling).real

    def amp_phi(self) -> tuple[float, float]:
        """Coupling amplitude and phase.

        Real couplings keep their sign with phi = 0 (see module docstring);
        genuinely complex couplings return (|J|, arg J).
        """
        j = complex(self.coupling)
        if j.imag == 0.0:
            return j.real, 0.0
        return abs(j), cmath.phase(j)


@dataclass(frozen=True)
class ComplexAngle:
    """Mixing angle alpha = alpha_r + i*alpha_i with a branch-sheet counter."""

    alpha_r: float
    alpha_i: float
    branch_index: int = 0

    @property
    def value(self) -> complex:
        return complex(self.alpha_r, self.alpha_i)


@dataclass(frozen=True)
class Eigensystem:
    """Eigenvalues and biorthogonal eigenvectors in the paper's parameterized form.

    right_plus/right_minus are |R+->, |R-> = R_z(phi) C_y(alpha) |z+/->;
    left_plus/left_minus are the covectors <L+/-| = <z+/-| C_y(-alpha) R_z(-phi).
    The pairing <L_n|R_m> is a plain (non-conjugating) dot product and equals
    delta_nm by construction.  xi is the eigenvalue of the traceless shift H',
    with lambda_pm = E +/- xi and the square-root branch tied to alpha.
    """

    lambda_plus: complex
    lambda_minus: complex
    right_plus: np.ndarray
    right_minus: np.ndarray
    left_plus: np.ndarray
    left_minus: np.ndarray
    xi: complex
    alpha: ComplexAngle = field(repr=False)
    phi: float = 0.0

    def normalized_right(self, sign: int) -> np.ndarray:
        v = self.right_plus if sign > 0 else self.right_minus
        return v / np.linalg.norm(v)


def build_hamiltonian(params: SystemParams) -> np.ndarray:
    """H = [[2E, J*], [J, 0]] in the {|z+>, |z->} basis."""
    e = params.energy
    j = complex(params.coupling)
    return np.array([[2.0 * e, np.conj(j)], [j, 0.0]], dtype=complex)


def _principal_angle(amp: float, energy: complex) -> tuple[float, float]:
    """Principal value of arctan(amp/E) via the log form.

    alpha = (1/2i) Log((E + i*amp)/(E - i*amp)); for amp >= 0 and kappa >= 0
    this lands in alpha_r in (-pi/2, pi/2] with alpha_i >= 0.
    """
    num = energy + 1j * amp
    den = energy - 1j * amp
    if abs(num * den) < EP_DISC_TOL**2:
        raise AtExceptionalPoint(
            f"|J|^2 + E^2 = {num * den:.3e} vanishes; mixing angle undefined"
        )
    zeta = num / den
    return cmath.phase(zeta) / 2.0, -0.5 * math.log(abs(zeta))


def mixing_angle(params: SystemParams, previous: ComplexAngle | None = None) -> ComplexAngle:
    """Complex mixing angle with tan(alpha) = |J|/E.

    Without ``previous`` the principal value is returned.  With ``previous``
    (from a nearby parameter point) the branch alpha_r -> alpha_r + m*pi is
    selected by analytic continuation, minimizing |alpha - alpha_previous|.
    """
    amp, _ = params.amp_phi()
    a_r, a_i = _principal_angle(amp, params.energy)
    if previous is None:
        return ComplexAngle(a_r, a_i, 0)
    frac = (previous.alpha_r - a_r) / math.pi
    m = round(frac)
    if abs(abs(frac - m) - 0.5) < 1e-9:
        raise AmbiguousBranch(
            f"branch candidates equidistant from previous angle at alpha_r={a_r:.6f}"
        )
    return ComplexAngle(a_r + m * math.pi, a_i, m)


def rotation_z(phi: float) -> np.ndarray:
    """R_z(phi) = exp(-i phi sigma_z / 2)."""
    return np.array(
        [[cmath.exp(-0.5j * phi), 0.0], [0.0, cmath.exp(0.5j * phi)]], dtype=complex
    )


def complex_rotation_y(alpha: complex) -> np.ndarray:
    """C_y(alpha) = exp(-i alpha sigma_y / 2) for complex alpha."""
    c = cmath.cos(alpha / 2.0)
    s = cmath.sin(alpha / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def branch_root(amp: float, energy: complex, alpha: ComplexAngle) -> complex:
    """sqrt(|J|^2 + E^2) with the branch tied to alpha.

    Uses xi = |J|/sin(alpha) when sin dominates, falling back to E/cos(alpha),
    so eigenvalue labels track alpha's sheet across branch cuts.
    """
    sin_a = cmath.sin(alpha.value)
    cos_a = cmath.cos(alpha.value)
    if abs(sin_a) >= abs(cos_a):
        return amp / sin_a
    return energy / cos_a


def eigensystem(params: SystemParams, alpha: ComplexAngle | None = None) -> Eigensystem:
    """Eigenvalues lambda_pm = E +/- xi and the parameterized eigenvector pairs."""
    amp, phi = params.amp_phi()
    if alpha is None:
        alpha = mixing_angle(params)
    energy = params.energy
    xi = branch_root(amp, energy, alpha)
    rz = rotation_z(phi)
    cy = complex_rotation_y(alpha.value)
    right = rz @ cy
    left = complex_rotation_y(-alpha.value) @ rotation_z(-phi)
    return Eigensystem(
        lambda_plus=energy + xi,
        lambda_minus=energy - xi,
        right_plus=right[:, 0].copy(),
        right_minus=right[:, 1].copy(),
        left_plus=left[0, :].copy(),
        left_minus=left[1, :].copy(),
        xi=xi,
        alpha=alpha,
        phi=phi,
    )


@dataclass(frozen=True)
class BlochVector:
    x: float
    y: float
    z: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])


def bloch_coordinates(alpha: ComplexAngle, phi: float = 0.0) -> tuple[BlochVector, BlochVector]:
    """Bloch vectors of the normalized right eigenstates (plus, minus).

    General-phi map: with sech = sqrt(1 - tanh^2(alpha_i)),

        z_pm = +/- cos(alpha_r) sech
        x_pm = +/- cos(phi) sin(alpha_r) sech - sin(phi) tanh(alpha_i)
        y_pm =     cos(phi) tanh(alpha_i) +/- sin(phi) sin(alpha_r) sech
    """
    th = math.tanh(alpha.alpha_i)
    sech = math.sqrt(1.0 - th * th)
    ca, sa = math.cos(alpha.alpha_r), math.sin(alpha.alpha_r)
    cp, sp = math.cos(phi), math.sin(phi)
    out = []
    for sign in (+1.0, -1.0):
        z = sign * ca * sech
        x = sign * cp * sa * sech - sp * th
        y = cp * th + sign * sp * sa * sech
        out.append(BlochVector(x, y, z))
    return out[0], out[1]


def overlap_angle(alpha: ComplexAngle) -> float:
    """Angle between the normalized right eigenstates: theta = arccos|tanh(alpha_i)|."""
    return math.acos(abs(math.tanh(alpha.alpha_i)))


def overlap_probability(alpha: ComplexAngle) -> float:
    """Transition probability |<Lam-|Lam+>|^2 = tanh^2(alpha_i) between normalized eigenstates."""
    return math.tanh(alpha.alpha_i) ** 2


def chiral_operator(phi: float) -> np.ndarray:
    """Gamma = R_z(phi) sigma_y R_z(phi)^dagger."""
    rz = rotation_z(phi)
    return rz @ SIGMA_Y @ rz.conj().T


@dataclass(frozen=True)
class ChiralReport:
    """Residuals of the chiral-symmetry identities of the traceless shift H'."""

    anticommutation: float  # ||Gamma H' Gamma + H'||
    involution: float  # ||Gamma^2 - I||
    exchange_plus: float  # ||Gamma|R+> - i|R->||
    exchange_minus: float  # ||Gamma|R-> + i|R+>||
    energy_identity: float  # |E - xi cos(alpha)|
    coupling_identity: float  # ||J| - xi sin(alpha)|
    xi: complex


def chiral_checks(params: SystemParams) -> ChiralReport:
    """Verify Gamma H' Gamma = -H', Gamma^2 = I, eigenvector exchange, and
    E = xi cos(alpha), |J| = xi sin(alpha)."""
    h = build_hamiltonian(params)
    h_prime = h - 0.5 * np.trace(h) * IDENTITY
    amp, phi = params.amp_phi()
    gamma = chiral_operator(phi)
    es = eigensystem(params)
    xi = es.xi
    alpha = es.alpha.value
    return ChiralReport(
        anticommutation=float(np.linalg.norm(gamma @ h_prime @ gamma + h_prime)),
        involution=float(np.linalg.norm(gamma @ gamma - IDENTITY)),
        exchange_plus=float(np.linalg.norm(gamma @ es.right_plus - 1j * es.right_minus)),
        exchange_minus=float(np.linalg.norm(gamma @ es.right_minus + 1j * es.right_plus)),
        energy_identity=abs(params.energy - xi * cmath.cos(alpha)),
        coupling_identity=abs(amp - xi * cmath.sin(alpha)),
        xi=xi,
    )
