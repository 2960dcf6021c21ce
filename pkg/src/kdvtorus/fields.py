"""Fourier-side representation of real periodic fields on the 2*pi torus.

Conventions used throughout the package
---------------------------------------
* Physical domain: ``x in [-pi, pi)``, sampled at ``x_j = -pi + 2*pi*j/M``.
* Coefficients: ``u_k = (1/2*pi) * integral(u(x) * exp(-i*k*x) dx)``, i.e. the
  discrete analysis sum ``u_k = (1/M) * sum_j u(x_j) * exp(-i*k*x_j)``.
* Reality: real fields satisfy ``u_{-k} = conj(u_k)``.
* State fields (initial data, trajectory snapshots) are zero-mean: ``u_0 = 0``.
  The container itself tolerates a nonzero mean because convolution results
  legitimately carry one; the mean is projected out at the state boundaries.
* The canonical norm is the plain l2 norm of the coefficient sequence; the
  physical L2 norm differs by a factor sqrt(2*pi) (Parseval).

`FourierField` is an immutable value: every operation returns a new instance,
so fields are safe to share across threads.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CorruptFieldError, GridError

__all__ = [
    "TWO_PI",
    "Grid",
    "FourierField",
    "analyze",
    "synthesize",
    "half_spectrum",
    "field_from_half_spectrum",
    "l2_norm",
    "sobolev_norm",
    "physical_l2_norm",
    "convolve_exact",
    "write_field_csv",
    "read_field_csv",
    "field_to_json_records",
    "field_from_json_records",
    "random_real_field",
]

TWO_PI = 2.0 * math.pi

#: Relative tolerance for the reality invariant (double precision, M <= 2**12).
REALITY_TOL = 1e-12


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform sample grid ``x_j = -pi + 2*pi*j/m`` on the torus.

    Parameters
    ----------
    m : int
        Number of sample points; must be a power of two, at least 4.

    Attributes
    ----------
    points : numpy.ndarray
        The m sample locations in radians, increasing from -pi.
    """

    m: int
    points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not isinstance(self.m, (int, np.integer)) or not _is_power_of_two(int(self.m)):
            raise GridError(f"grid size must be a power of two, got {self.m!r}")
        if self.m < 4:
            raise GridError(f"grid size must be at least 4, got {self.m}")
        pts = -np.pi + TWO_PI * np.arange(int(self.m)) / int(self.m)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def max_cutoff(self) -> int:
        """Largest mode cutoff representable on this grid (m/2 - 1)."""
        return int(self.m) // 2 - 1


@dataclass(frozen=True, eq=False)
class FourierField:
    """Complex mode amplitudes ``u_k`` for ``k = -cutoff .. cutoff``.

    The amplitudes are stored in a read-only complex array ordered by
    increasing k; ``coeffs[k + cutoff]`` is the mode-k amplitude. Amplitudes
    for ``|k| > cutoff`` are implicitly zero.
    """

    coeffs: np.ndarray

    def __post_init__(self) -> None:
        arr = np.array(self.coeffs, dtype=np.complex128, copy=True)
        if arr.ndim != 1 or arr.size % 2 != 1:
            raise ValueError(
                "coefficient array must be one-dimensional with odd length "
                f"(modes -K..K), got shape {arr.shape}"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "coeffs", arr)

    # -- constructors -------------------------------------------------------

    @staticmethod
    def zeros(cutoff: int) -> "FourierField":
        """The zero field with the given cutoff."""
        if cutoff < 1:
            raise ValueError(f"cutoff must be positive, got {cutoff}")
        return FourierField(np.zeros(2 * cutoff + 1, dtype=np.complex128))

    @staticmethod
    def from_modes(modes: dict, cutoff: int | None = None) -> "FourierField":
        """Build a field from a ``{k: amplitude}`` mapping.

        The cutoff defaults to the largest |k| present (at least 1).
        """
        if cutoff is None:
            cutoff = max((abs(int(k)) for k in modes), default=1)
            cutoff = max(cutoff, 1)
        out = np.zeros(2 * cutoff + 1, dtype=np.complex128)
        for k, val in modes.items():
            k = int(k)
            if abs(k) > cutoff:
                raise ValueError(f"mode {k} outside cutoff {cutoff}")
            out[k + cutoff] = val
        return FourierField(out)

    # -- basic accessors ----------------------------------------------------

    @property
    def cutoff(self) -> int:
        """Largest represented |k|."""
        return (self.coeffs.size - 1) // 2

    def mode(self, k: int) -> complex:
        """Amplitude u_k (zero for |k| beyond the cutoff)."""
        if abs(k) > self.cutoff:
            return 0.0 + 0.0j
        return complex(self.coeffs[k + self.cutoff])

    def wavenumbers(self) -> np.ndarray:
        """Integer wavenumbers -K..K aligned with ``coeffs``."""
        return np.arange(-self.cutoff, self.cutoff + 1)

    def support(self) -> list[int]:
        """Wavenumbers with nonzero amplitude, in increasing order."""
        ks = self.wavenumbers()
        return [int(k) for k in ks[np.abs(self.coeffs) != 0.0]]

    def as_dict(self) -> dict[int, complex]:
        """Nonzero modes as a plain ``{k: amplitude}`` dict."""
        return {k: self.mode(k) for k in self.support()}

    # -- invariants ---------------------------------------------------------

    def reality_defect(self) -> float:
        """Max |u_{-k} - conj(u_k)| over the stored range (0 for real fields)."""
        return float(np.max(np.abs(self.coeffs[::-1] - np.conj(self.coeffs))))

    def require_real(self, tol: float = REALITY_TOL) -> None:
        """Raise :class:`CorruptFieldError` if the reality invariant fails.

        The tolerance is relative to the largest amplitude (with a floor of
        1, so exact zero fields pass trivially).
        """
        scale = max(1.0, float(np.max(np.abs(self.coeffs))))
        defect = self.reality_defect()
        if defect > tol * scale:
            raise CorruptFieldError(
                f"reality invariant violated: defect {defect:.3e} exceeds "
                f"{tol:.1e} * scale {scale:.3e}"
            )

    def mean_mode(self) -> complex:
        """The k = 0 amplitude."""
        return complex(self.coeffs[self.cutoff])

    def zero_mean(self) -> "FourierField":
        """Copy with the k = 0 mode projected out."""
        out = np.array(self.coeffs, copy=True)
        out[self.cutoff] = 0.0
        return FourierField(out)

    # -- structural operations ----------------------------------------------

    def with_mode(self, k: int, value: complex) -> "FourierField":
        """Copy with mode k replaced (k must lie within the cutoff)."""
        if abs(k) > self.cutoff:
            raise ValueError(f"mode {k} outside cutoff {self.cutoff}")
        out = np.array(self.coeffs, copy=True)
        out[k + self.cutoff] = value
        return FourierField(out)

    def with_cutoff(self, cutoff: int) -> "FourierField":
        """Copy truncated or zero-extended to the given cutoff."""
        if cutoff < 1:
            raise ValueError(f"cutoff must be positive, got {cutoff}")
        out = np.zeros(2 * cutoff + 1, dtype=np.complex128)
        keep = min(cutoff, self.cutoff)
        out[cutoff - keep : cutoff + keep + 1] = self.coeffs[
            self.cutoff - keep : self.cutoff + keep + 1
        ]
        return FourierField(out)

    def allclose(self, other: "FourierField", tol: float = 1e-12) -> bool:
        """Amplitude-wise comparison after aligning cutoffs."""
        big = max(self.cutoff, other.cutoff)
        a = self.with_cutoff(big).coeffs
        b = other.with_cutoff(big).coeffs
        return bool(np.max(np.abs(a - b)) <= tol)

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "FourierField") -> "FourierField":
        big = max(self.cutoff, other.cutoff)
        return FourierField(
            self.with_cutoff(big).coeffs + other.with_cutoff(big).coeffs
        )

    def __sub__(self, other: "FourierField") -> "FourierField":
        big = max(self.cutoff, other.cutoff)
        return FourierField(
            self.with_cutoff(big).coeffs - other.with_cutoff(big).coeffs
        )

    def __mul__(self, scalar) -> "FourierField":
        return FourierField(self.coeffs * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "FourierField":
        return FourierField(-self.coeffs)

    # -- norms (delegating to module functions) ------------------------------

    def l2_norm(self) -> float:
        return l2_norm(self)

    def sobolev_norm(self, s: float) -> float:
        return sobolev_norm(self, s)


# ---------------------------------------------------------------------------
# transforms
# ---------------------------------------------------------------------------


def analyze(samples) -> FourierField:
    """Discrete Fourier analysis of real samples on the torus grid.

    Parameters
    ----------
    samples : sequence of float
        Real values at ``x_j = -pi + 2*pi*j/M``; the length M must be a
        power of two (at least 4).

    Returns
    -------
    FourierField
        Field with cutoff ``M/2 - 1`` and ``u_k = (1/M) sum_j s_j e^{-i k x_j}``,
        zero-mean projected.

    Raises
    ------
    GridError
        If the sample count is not a power of two.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1:
        raise GridError(f"samples must be one-dimensional, got shape {arr.shape}")
    m = arr.size
    if not _is_power_of_two(m) or m < 4:
        raise GridError(f"sample count must be a power of two >= 4, got {m}")
    cutoff = m // 2 - 1
    # rfft uses the origin-at-0 convention; the grid starts at -pi, which
    # contributes the alternating sign e^{i k pi} = (-1)^k per mode.
    spec = np.fft.rfft(arr) / m
    ks = np.arange(cutoff + 1)
    pos = np.where(ks % 2 == 0, 1.0, -1.0) * spec[: cutoff + 1]
    out = np.zeros(2 * cutoff + 1, dtype=np.complex128)
    out[cutoff:] = pos
    out[:cutoff] = np.conj(pos[1:][::-1])
    out[cutoff] = 0.0  # zero-mean projection
    return FourierField(out)


def synthesize(fld: FourierField, m: int) -> np.ndarray:
    """Evaluate a field at the m torus sample points.

    Parameters
    ----------
    fld : FourierField
        Coefficients to synthesize; reality is enforced.
    m : int
        Number of sample points; must satisfy ``m >= 2*cutoff + 2``.

    Returns
    -------
    numpy.ndarray
        Real samples ``u(x_j) = sum_k u_k e^{i k x_j}``.

    Raises
    ------
    GridError
        If m is too small for the field's cutoff.
    CorruptFieldError
        If the reality invariant is violated beyond tolerance.
    """
    return np.fft.irfft(half_spectrum(fld, m), n=m)


def half_spectrum(fld: FourierField, m: int) -> np.ndarray:
    """Raw rfft-layout spectrum (length m//2 + 1) of the field's samples.

    Entry j equals ``numpy.fft.rfft(synthesize(fld, m))[j]`` exactly: the
    alternating sign undoes the grid's -pi offset and the factor m matches
    rfft's unnormalized forward convention. Used by the integrator's fast
    path; the reality invariant is enforced and the +/-k pair symmetrized
    (discarding the checked imaginary residue).
    """
    cutoff = fld.cutoff
    if m < 2 * cutoff + 2:
        raise GridError(
            f"grid size {m} too small for cutoff {cutoff} (need >= {2 * cutoff + 2})"
        )
    fld.require_real()
    half = np.zeros(m // 2 + 1, dtype=np.complex128)
    pos = 0.5 * (fld.coeffs[cutoff:] + np.conj(fld.coeffs[cutoff::-1]))
    ks = np.arange(cutoff + 1)
    half[: cutoff + 1] = np.where(ks % 2 == 0, 1.0, -1.0) * pos * m
    return half


def field_from_half_spectrum(half: np.ndarray, m: int) -> FourierField:
    """Inverse of :func:`half_spectrum`: rebuild the symmetric-range field.

    The result has cutoff m//2 - 1 (the half-spectrum's last bin is the
    unrepresentable Nyquist mode and must be zero) and is zero-mean
    projected, matching :func:`analyze` of the corresponding samples.
    """
    if half.ndim != 1 or half.size != m // 2 + 1:
        raise GridError(
            f"half spectrum must have length m//2 + 1 = {m // 2 + 1}, got {half.size}"
        )
    cutoff = m // 2 - 1
    ks = np.arange(cutoff + 1)
    pos = np.where(ks % 2 == 0, 1.0, -1.0) * half[: cutoff + 1] / m
    out = np.zeros(2 * cutoff + 1, dtype=np.complex128)
    out[cutoff:] = pos
    out[:cutoff] = np.conj(pos[1:][::-1])
    out[cutoff] = 0.0
    return FourierField(out)


# ---------------------------------------------------------------------------
# norms
# ---------------------------------------------------------------------------


def l2_norm(fld: FourierField) -> float:
    """Canonical norm: sqrt(sum_k |u_k|^2) over the coefficient sequence."""
    return float(np.linalg.norm(fld.coeffs))


def sobolev_norm(fld: FourierField, s: float) -> float:
    """Homogeneous Sobolev norm ``(sum_{k != 0} |k|^{2s} |u_k|^2)^{1/2}``.

    The k = 0 term is excluded for every s, so negative orders are
    well-defined on zero-mean fields; equals :func:`l2_norm` at s = 0 for
    such fields.
    """
    ks = fld.wavenumbers().astype(float)
    mask = ks != 0.0
    weights = np.abs(ks[mask]) ** (2.0 * s)
    return float(math.sqrt(np.sum(weights * np.abs(fld.coeffs[mask]) ** 2)))


def physical_l2_norm(fld: FourierField) -> float:
    """L2 norm of the physical-space field: sqrt(2*pi) times :func:`l2_norm`."""
    return math.sqrt(TWO_PI) * l2_norm(fld)


# ---------------------------------------------------------------------------
# exact convolution oracle
# ---------------------------------------------------------------------------


def convolve_exact(f: FourierField, g: FourierField) -> FourierField:
    """Exact coefficient convolution ``(f*g)_k = sum_{k1+k2=k} f_{k1} g_{k2}``.

    Computed by a direct double loop over the full index ranges with output
    cutoff ``K_f + K_g``, so no truncation occurs. This is the slow, auditable
    oracle against which the pseudospectral product is tested; it never
    dealiases. Note the output generally carries a nonzero mean (e.g. the
    self-convolution of a cosine pair).
    """
    kf, kg = f.cutoff, g.cutoff
    out_cut = kf + kg
    out = np.zeros(2 * out_cut + 1, dtype=np.complex128)
    for k1 in range(-kf, kf + 1):
        a = f.coeffs[k1 + kf]
        for k2 in range(-kg, kg + 1):
            out[k1 + k2 + out_cut] += a * g.coeffs[k2 + kg]
    return FourierField(out)


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def write_field_csv(fld: FourierField, path) -> None:
    """Write the field as CSV rows ``k,re,im`` (one row per stored mode)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["k", "re", "im"])
        for k in range(-fld.cutoff, fld.cutoff + 1):
            val = fld.coeffs[k + fld.cutoff]
            writer.writerow([k, repr(float(val.real)), repr(float(val.imag))])


def read_field_csv(path) -> FourierField:
    """Read a field written by :func:`write_field_csv`."""
    modes: dict[int, complex] = {}
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["k", "re", "im"]:
            raise ValueError(f"unexpected field CSV header: {header!r}")
        for row in reader:
            k = int(row[0])
            modes[k] = float(row[1]) + 1j * float(row[2])
    if not modes:
        raise ValueError("field CSV contains no rows")
    cutoff = max(abs(k) for k in modes)
    return FourierField.from_modes(modes, cutoff=max(cutoff, 1))


def field_to_json_records(fld: FourierField) -> list[dict]:
    """Field as a JSON-ready list of ``{"k": ..., "re": ..., "im": ...}``."""
    return [
        {
            "k": k,
            "re": float(fld.coeffs[k + fld.cutoff].real),
            "im": float(fld.coeffs[k + fld.cutoff].imag),
        }
        for k in range(-fld.cutoff, fld.cutoff + 1)
    ]


def field_from_json_records(records) -> FourierField:
    """Inverse of :func:`field_to_json_records`."""
    modes = {int(r["k"]): float(r["re"]) + 1j * float(r["im"]) for r in records}
    if not modes:
        raise ValueError("empty record list")
    cutoff = max(abs(k) for k in modes)
    return FourierField.from_modes(modes, cutoff=max(cutoff, 1))


def field_to_json(fld: FourierField) -> str:
    """Compact JSON string of the record list (stable key order)."""
    return json.dumps(field_to_json_records(fld), separators=(",", ":"))


# ---------------------------------------------------------------------------
# seeded random fields (property tests and ratio censuses)
# ---------------------------------------------------------------------------


def random_real_field(seed, support: int, cutoff: int | None = None) -> FourierField:
    """Deterministic random real zero-mean field.

    Modes ``1..support`` get independent standard complex Gaussian
    amplitudes (fixed draw order), with conjugate negative modes. ``seed``
    may be an integer or an existing ``numpy.random.Generator``.
    """
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if cutoff is None:
        cutoff = support
    if support < 1 or support > cutoff:
        raise ValueError(f"support must lie in 1..cutoff, got {support}")
    out = np.zeros(2 * cutoff + 1, dtype=np.complex128)
    for k in range(1, support + 1):
        z = complex(rng.standard_normal(), rng.standard_normal())
        out[cutoff + k] = z
        out[cutoff - k] = np.conj(z)
    return FourierField(out)
